//! Dense GF(2) linear algebra.
//!
//! [`BitMatrix`] stores rows as packed 64-bit words. Everything needed to turn
//! a parity-check matrix into exact code parameters lives here: rank,
//! nullspace basis, exhaustive codeword enumeration and minimum distance.

mod io;

use std::ops::Range;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{frac, Rational};

pub use io::{parse_alist, parse_dense, write_alist, write_dense};

/// Largest code dimension accepted by the exhaustive enumerators.
pub const MAX_ENUM_DIMENSION: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Gf2Error {
    #[error("matrix must have at least one row and one column (got {rows}x{cols})")]
    EmptyMatrix { rows: usize, cols: usize },
    #[error("code dimension {k} exceeds the enumeration guard {max}")]
    DimensionTooLarge { k: usize, max: usize },
    #[error("row lengths differ (expected {expected}, found {found})")]
    RaggedRows { expected: usize, found: usize },
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

const WORD: usize = 64;

fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

/// Packed binary vector helpers used by the enumerators.
pub(crate) fn pack(bits: &[bool]) -> Vec<u64> {
    let mut w = vec![0u64; words_for(bits.len())];
    for (i, &b) in bits.iter().enumerate() {
        if b {
            w[i / WORD] |= 1 << (i % WORD);
        }
    }
    w
}

pub(crate) fn unpack(words: &[u64], len: usize) -> Vec<bool> {
    (0..len).map(|i| words[i / WORD] >> (i % WORD) & 1 == 1).collect()
}

fn weight(words: &[u64]) -> usize {
    words.iter().map(|w| w.count_ones() as usize).sum()
}

fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

/// Dense binary matrix, row-major, packed 64 bits per word.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    bits: Vec<u64>,
}

impl std::fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let line: String = (0..self.cols)
                .map(|c| if self.get(r, c) { '1' } else { '0' })
                .collect();
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self, Gf2Error> {
        if rows == 0 || cols == 0 {
            return Err(Gf2Error::EmptyMatrix { rows, cols });
        }
        let stride = words_for(cols);
        Ok(Self {
            rows,
            cols,
            stride,
            bits: vec![0; rows * stride],
        })
    }

    pub fn identity(n: usize) -> Result<Self, Gf2Error> {
        let mut m = Self::zeros(n, n)?;
        for i in 0..n {
            m.set(i, i, true);
        }
        Ok(m)
    }

    pub fn from_rows(rows: &[Vec<bool>]) -> Result<Self, Gf2Error> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols)?;
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Gf2Error::RaggedRows {
                    expected: cols,
                    found: row.len(),
                });
            }
            for (c, &b) in row.iter().enumerate() {
                m.set(r, c, b);
            }
        }
        Ok(m)
    }

    /// Builds a matrix from strings of `0`/`1` characters.
    pub fn from_strs(rows: &[&str]) -> Result<Self, Gf2Error> {
        let rows: Vec<Vec<bool>> = rows
            .iter()
            .map(|s| s.chars().filter(|c| !c.is_whitespace()).map(|c| c == '1').collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        self.bits[r * self.stride + c / WORD] >> (c % WORD) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        let w = &mut self.bits[r * self.stride + c / WORD];
        if value {
            *w |= 1 << (c % WORD);
        } else {
            *w &= !(1 << (c % WORD));
        }
    }

    fn row_words(&self, r: usize) -> &[u64] {
        &self.bits[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row(&self, r: usize) -> Vec<bool> {
        unpack(self.row_words(r), self.cols)
    }

    pub fn row_weight(&self, r: usize) -> usize {
        weight(self.row_words(r))
    }

    pub fn col_weight(&self, c: usize) -> usize {
        (0..self.rows).filter(|&r| self.get(r, c)).count()
    }

    /// Column indices of the ones in row `r`.
    pub fn row_support(&self, r: usize) -> Vec<usize> {
        (0..self.cols).filter(|&c| self.get(r, c)).collect()
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows).expect("nonempty");
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    t.set(c, r, true);
                }
            }
        }
        t
    }

    /// `self · x` over GF(2).
    pub fn mul_vec(&self, x: &[bool]) -> Vec<bool> {
        assert_eq!(x.len(), self.cols, "vector length must equal column count");
        let xw = pack(x);
        (0..self.rows)
            .map(|r| {
                self.row_words(r)
                    .iter()
                    .zip(&xw)
                    .map(|(a, b)| (a & b).count_ones())
                    .sum::<u32>()
                    % 2
                    == 1
            })
            .collect()
    }

    pub fn is_in_nullspace(&self, x: &[bool]) -> bool {
        self.mul_vec(x).iter().all(|&b| !b)
    }

    /// Adds row `src` into row `dst`.
    pub fn add_row(&mut self, dst: usize, src: usize) {
        if dst == src {
            self.bits[dst * self.stride..(dst + 1) * self.stride].fill(0);
            return;
        }
        for w in 0..self.stride {
            let s = self.bits[src * self.stride + w];
            self.bits[dst * self.stride + w] ^= s;
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.stride {
            self.bits.swap(a * self.stride + w, b * self.stride + w);
        }
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (BitMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| m.get(r, col)) else {
                continue;
            };
            m.swap_rows(row, p);
            for r in 0..m.rows {
                if r != row && m.get(r, col) {
                    m.add_row(r, row);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    /// Rank over GF(2).
    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : self·x = 0}`, one vector per free column.
    pub fn nullspace_basis(&self) -> Vec<Vec<bool>> {
        self.nullspace_packed()
            .iter()
            .map(|w| unpack(w, self.cols))
            .collect()
    }

    pub(crate) fn nullspace_packed(&self) -> Vec<Vec<u64>> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0u64; words_for(self.cols)];
            v[free / WORD] |= 1 << (free % WORD);
            for (i, &p) in pivots.iter().enumerate() {
                if r.get(i, free) {
                    v[p / WORD] |= 1 << (p % WORD);
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Code dimension `cols − rank`.
    pub fn dimension(&self) -> usize {
        self.cols - self.rank()
    }

    fn enumerator(&self) -> Result<CodewordEnumerator, Gf2Error> {
        let basis = self.nullspace_packed();
        if basis.len() > MAX_ENUM_DIMENSION {
            return Err(Gf2Error::DimensionTooLarge {
                k: basis.len(),
                max: MAX_ENUM_DIMENSION,
            });
        }
        Ok(CodewordEnumerator {
            len: self.cols,
            basis,
        })
    }

    /// Minimum Hamming weight over all nonzero codewords; `None` when the
    /// code is `{0}`.
    pub fn min_distance_exhaustive(&self) -> Result<Option<usize>, Gf2Error> {
        let e = self.enumerator()?;
        let total = 1u64 << e.basis.len();
        Ok(e.min_weight_in(1..total).map(|(w, _)| w))
    }

    /// Minimum weight restricted to the codeword indices in `range`
    /// (index `i` is the Gray-code combination `i ^ (i >> 1)` of the basis).
    /// Splitting `1..2^k` into ranges and taking the minimum of the results
    /// gives the same answer as [`Self::min_distance_exhaustive`].
    pub fn min_distance_in_range(&self, range: Range<u64>) -> Result<Option<usize>, Gf2Error> {
        let e = self.enumerator()?;
        let total = 1u64 << e.basis.len();
        let range = range.start.max(1)..range.end.min(total);
        Ok(e.min_weight_in(range).map(|(w, _)| w))
    }

    /// All codewords, in Gray-code order starting from zero.
    pub fn codewords(&self) -> Result<Vec<Vec<bool>>, Gf2Error> {
        let e = self.enumerator()?;
        let mut out = Vec::with_capacity(1 << e.basis.len());
        e.for_each(|w| out.push(unpack(w, e.len)));
        Ok(out)
    }

    /// A minimum-weight nonzero codeword.
    pub fn min_weight_codeword(&self) -> Result<Option<Vec<bool>>, Gf2Error> {
        let e = self.enumerator()?;
        let total = 1u64 << e.basis.len();
        Ok(e.min_weight_in(1..total).map(|(_, w)| unpack(&w, e.len)))
    }

    /// Exact code parameters.
    pub fn code_params(&self) -> Result<CodeParams, Gf2Error> {
        let basis = self.nullspace_packed();
        let k = basis.len();
        let dmin = self.min_distance_exhaustive()?;
        let mut used = vec![0u64; words_for(self.cols)];
        for b in &basis {
            for (u, w) in used.iter_mut().zip(b) {
                *u |= w;
            }
        }
        let idle_components = (0..self.cols)
            .filter(|&c| used[c / WORD] >> (c % WORD) & 1 == 0)
            .collect();
        Ok(CodeParams {
            n: self.cols,
            k,
            dmin,
            epsilon: dmin.map(|d| frac(d as i64, self.cols as i64)),
            idle_components,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }
}

struct CodewordEnumerator {
    len: usize,
    basis: Vec<Vec<u64>>,
}

impl CodewordEnumerator {
    fn combination(&self, mask: u64) -> Vec<u64> {
        let mut w = vec![0u64; words_for(self.len)];
        for (i, b) in self.basis.iter().enumerate() {
            if mask >> i & 1 == 1 {
                xor_into(&mut w, b);
            }
        }
        w
    }

    fn for_each(&self, mut f: impl FnMut(&[u64])) {
        let total = 1u64 << self.basis.len();
        let mut w = vec![0u64; words_for(self.len)];
        f(&w);
        for i in 1..total {
            xor_into(&mut w, &self.basis[i.trailing_zeros() as usize]);
            f(&w);
        }
    }

    fn min_weight_in(&self, range: Range<u64>) -> Option<(usize, Vec<u64>)> {
        if range.is_empty() {
            return None;
        }
        let mut w = self.combination(range.start ^ (range.start >> 1));
        let mut best: Option<(usize, Vec<u64>)> = None;
        let mut consider = |w: &[u64]| {
            let wt = weight(w);
            if wt > 0 && best.as_ref().is_none_or(|(b, _)| wt < *b) {
                best = Some((wt, w.to_vec()));
            }
        };
        consider(&w);
        for i in range.start + 1..range.end {
            xor_into(&mut w, &self.basis[i.trailing_zeros() as usize]);
            consider(&w);
        }
        best
    }
}

/// Exact parameters of a binary linear code.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeParams {
    pub n: usize,
    pub k: usize,
    /// `None` for the zero code.
    pub dmin: Option<usize>,
    /// Relative distance `dmin / n`.
    #[serde(with = "crate::scalar::rational_str::option")]
    pub epsilon: Option<Rational>,
    /// Coordinates that are zero in every codeword.
    pub idle_components: Vec<usize>,
}

impl CodeParams {
    pub fn has_idle_components(&self) -> bool {
        !self.idle_components.is_empty()
    }

    /// Rate `k / n` as an exact rational.
    pub fn rate(&self) -> Rational {
        frac(self.k as i64, self.n as i64)
    }
}
