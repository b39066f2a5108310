//! Small linear codes used as constraint-node labels.
//!
//! Every [`SubcodeSpec`] carries its full codeword list, so local membership
//! tests, local convex hulls and local erasure solves are table lookups.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf2::{BitMatrix, CodeParams, Gf2Error};
use crate::scalar::Rational;

/// Largest subcode dimension that is fully enumerated.
pub const MAX_SUBCODE_DIMENSION: usize = 16;
/// Subcode codewords are stored as `u64` masks.
pub const MAX_SUBCODE_LENGTH: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubcodeError {
    #[error("unknown subcode {0:?} (try spc<d>, rep<d>, hamming74, exthamming84)")]
    UnknownSubcode(String),
    #[error("subcode dimension {k} exceeds the enumeration guard {max}")]
    DimensionTooLarge { k: usize, max: usize },
    #[error("subcode length {0} outside the supported range 2..=64")]
    UnsupportedLength(usize),
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
}

/// A `[d, rd, εd]` code with its codewords enumerated.
#[derive(Clone, PartialEq, Eq)]
pub struct SubcodeSpec {
    name: String,
    parity: BitMatrix,
    params: CodeParams,
    /// Codewords as bit masks, bit `t` = coordinate `t`; sorted, zero first.
    masks: Vec<u64>,
}

impl fmt::Debug for SubcodeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "SubcodeSpec({} [{},{},{:?}])",
            self.name, self.params.n, self.params.k, self.params.dmin
        )
    }
}

impl SubcodeSpec {
    /// Builds a subcode from a parity-check matrix, enumerating all codewords.
    pub fn from_parity(name: impl Into<String>, h: BitMatrix) -> Result<Self, SubcodeError> {
        let d = h.cols();
        if !(1..=MAX_SUBCODE_LENGTH).contains(&d) {
            return Err(SubcodeError::UnsupportedLength(d));
        }
        let k = h.dimension();
        if k > MAX_SUBCODE_DIMENSION {
            return Err(SubcodeError::DimensionTooLarge {
                k,
                max: MAX_SUBCODE_DIMENSION,
            });
        }
        let params = h.code_params()?;
        let mut masks: Vec<u64> = h
            .codewords()?
            .iter()
            .map(|w| {
                w.iter()
                    .enumerate()
                    .fold(0u64, |m, (i, &b)| if b { m | 1 << i } else { m })
            })
            .collect();
        masks.sort_unstable();
        Ok(Self {
            name: name.into(),
            parity: h,
            params,
            masks,
        })
    }

    /// Built-in catalog lookup. Accepts `spc<d>`/`SPC[d]`, `rep<d>`/`Repetition[d]`,
    /// `hamming74`/`Hamming[7,4]` and `exthamming84`/`ExtHamming[8,4]`.
    pub fn builtin(name: &str) -> Result<Self, SubcodeError> {
        let key: String = name
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        let unknown = || SubcodeError::UnknownSubcode(name.to_string());
        let length = |digits: &str| -> Result<usize, SubcodeError> {
            let d: usize = digits.parse().map_err(|_| unknown())?;
            if !(2..=MAX_SUBCODE_LENGTH).contains(&d) {
                return Err(SubcodeError::UnsupportedLength(d));
            }
            Ok(d)
        };
        if key == "hamming74" {
            let h = BitMatrix::from_strs(&["0001111", "0110011", "1010101"])?;
            return Self::from_parity("Hamming[7,4]", h);
        }
        if key == "exthamming84" {
            let h = BitMatrix::from_strs(&["00011110", "01100110", "10101010", "11111111"])?;
            return Self::from_parity("ExtHamming[8,4]", h);
        }
        if let Some(d) = key.strip_prefix("spc") {
            let d = length(d)?;
            let h = BitMatrix::from_rows(&[vec![true; d]])?;
            if d > MAX_SUBCODE_DIMENSION + 1 {
                return Err(SubcodeError::DimensionTooLarge {
                    k: d - 1,
                    max: MAX_SUBCODE_DIMENSION,
                });
            }
            return Self::from_parity(format!("SPC[{d}]"), h);
        }
        let rep = key
            .strip_prefix("repetition")
            .or_else(|| key.strip_prefix("rep"));
        if let Some(d) = rep {
            let d = length(d)?;
            let rows: Vec<Vec<bool>> = (0..d - 1)
                .map(|i| (0..d).map(|j| j == i || j == i + 1).collect())
                .collect();
            return Self::from_parity(format!("Repetition[{d}]"), BitMatrix::from_rows(&rows)?);
        }
        Err(unknown())
    }

    /// Names accepted by [`Self::builtin`], with representative lengths.
    pub fn catalog() -> Vec<CatalogEntry> {
        let mut out = Vec::new();
        for name in ["spc3", "spc4", "spc6", "spc7", "rep3", "rep4", "rep5", "hamming74", "exthamming84"] {
            let s = Self::builtin(name).expect("catalog entries are valid");
            out.push(CatalogEntry {
                key: name.to_string(),
                name: s.name.clone(),
                n: s.length(),
                k: s.dimension(),
                dmin: s.dmin(),
                epsilon: crate::scalar::rational_string(&s.epsilon()),
            });
        }
        out
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn parity(&self) -> &BitMatrix {
        &self.parity
    }

    pub fn params(&self) -> &CodeParams {
        &self.params
    }

    /// Block length `d`.
    pub fn length(&self) -> usize {
        self.params.n
    }

    pub fn dimension(&self) -> usize {
        self.params.k
    }

    /// Minimum distance; `0` for the zero code.
    pub fn dmin(&self) -> usize {
        self.params.dmin.unwrap_or(0)
    }

    /// Relative distance `ε = dmin / d` (zero for the zero code).
    pub fn epsilon(&self) -> Rational {
        self.params
            .epsilon
            .clone()
            .unwrap_or_else(|| crate::scalar::rat(0))
    }

    /// Rate `r = k / d`.
    pub fn rate(&self) -> Rational {
        self.params.rate()
    }

    pub fn has_idle_components(&self) -> bool {
        self.params.has_idle_components()
    }

    /// Codeword masks, zero first.
    pub fn masks(&self) -> &[u64] {
        &self.masks
    }

    pub fn codewords(&self) -> Vec<Vec<bool>> {
        let d = self.length();
        self.masks
            .iter()
            .map(|&m| (0..d).map(|t| m >> t & 1 == 1).collect())
            .collect()
    }

    pub fn contains_mask(&self, mask: u64) -> bool {
        self.masks.binary_search(&mask).is_ok()
    }

    pub fn contains(&self, word: &[bool]) -> bool {
        assert_eq!(word.len(), self.length(), "local word length");
        let mask = word
            .iter()
            .enumerate()
            .fold(0u64, |m, (i, &b)| if b { m | 1 << i } else { m });
        self.contains_mask(mask)
    }

    /// Whether `support` (a coordinate mask) is a union of supports of
    /// codewords lying inside it.
    pub fn is_union_of_codeword_supports(&self, support: u64) -> bool {
        let covered = self
            .masks
            .iter()
            .filter(|&&c| c & !support == 0)
            .fold(0u64, |acc, &c| acc | c);
        covered == support
    }

    /// Whether this is the single-parity-check code of its length.
    pub fn is_single_parity(&self) -> bool {
        let d = self.length();
        self.dimension() + 1 == d && self.dmin() == 2 && d >= 2
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub key: String,
    pub name: String,
    pub n: usize,
    pub k: usize,
    pub dmin: usize,
    pub epsilon: String,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::frac;

    #[test]
    fn builtin_examples() {
        let spc = SubcodeSpec::builtin("SPC[3]").unwrap();
        assert_eq!((spc.length(), spc.dimension(), spc.dmin()), (3, 2, 2));
        assert_eq!(spc.masks().len(), 4);
        let ham = SubcodeSpec::builtin("Hamming[7,4]").unwrap();
        assert_eq!(ham.masks().len(), 16);
        assert_eq!(ham.dmin(), 3);
        assert_eq!(ham.dmin(), ham.parity().min_distance_exhaustive().unwrap().unwrap());
        let rep = SubcodeSpec::builtin("rep5").unwrap();
        assert_eq!((rep.length(), rep.dimension(), rep.dmin()), (5, 1, 5));
        assert_eq!(rep.masks().len(), 2);
    }

    #[test]
    fn epsilons_exact() {
        for d in 2..=9 {
            assert_eq!(SubcodeSpec::builtin(&format!("spc{d}")).unwrap().epsilon(), frac(2, d as i64));
            assert_eq!(SubcodeSpec::builtin(&format!("rep{d}")).unwrap().epsilon(), frac(1, 1));
        }
        assert_eq!(SubcodeSpec::builtin("hamming74").unwrap().epsilon(), frac(3, 7));
        assert_eq!(SubcodeSpec::builtin("exthamming84").unwrap().epsilon(), frac(1, 2));
    }

    #[test]
    fn builtins_have_no_idle_components() {
        for e in SubcodeSpec::catalog() {
            let s = SubcodeSpec::builtin(&e.key).unwrap();
            assert!(!s.has_idle_components(), "{}", e.key);
            assert_eq!(s.epsilon() * crate::scalar::rat(s.length() as i64), crate::scalar::rat(s.dmin() as i64));
        }
    }

    #[test]
    fn unknown_name() {
        assert!(matches!(SubcodeSpec::builtin("golay"), Err(SubcodeError::UnknownSubcode(_))));
        assert!(matches!(SubcodeSpec::builtin("spc1"), Err(SubcodeError::UnsupportedLength(1))));
    }

    #[test]
    fn from_parity_examples() {
        let id = SubcodeSpec::from_parity("id", BitMatrix::identity(3).unwrap()).unwrap();
        assert_eq!(id.masks(), &[0]);
        assert!(id.has_idle_components());
        let spc = SubcodeSpec::from_parity("row", BitMatrix::from_strs(&["1111"]).unwrap()).unwrap();
        assert_eq!(spc.masks(), SubcodeSpec::builtin("spc4").unwrap().masks());
        assert!(spc.is_single_parity());
        let big = BitMatrix::zeros(1, 20).unwrap();
        assert!(matches!(
            SubcodeSpec::from_parity("big", big),
            Err(SubcodeError::DimensionTooLarge { k: 20, .. })
        ));
    }

    #[test]
    fn union_of_supports() {
        let ham = SubcodeSpec::builtin("hamming74").unwrap();
        assert!(!ham.is_union_of_codeword_supports(0b11));
        let c = ham.masks()[1];
        assert!(ham.is_union_of_codeword_supports(c));
        assert!(ham.is_union_of_codeword_supports(0));
    }
}
