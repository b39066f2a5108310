//! Closed-form lower bounds on minimum distance, minimum stopping-set size
//! and minimum pseudocodeword weight for the four expander constructions, and
//! a harness that checks each applicable bound against exact values.
//!
//! Every bound carries the hypotheses it was derived under. A bound whose
//! hypotheses fail is still reported, but without a value.

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expansion::{expansion_by_size, ExpansionError, EXPANSION_MAX_CAP, EXPANSION_SUBSET_BUDGET};
use crate::gf2::{BitMatrix, Gf2Error};
use crate::polytope::{min_awgn_pseudoweight, min_bsc_pseudoweight, min_stopping_set, PolytopeError};
use crate::scalar::{fixed, frac, rational_string, snap_rational, Rational, Scalar};
use crate::spectral::{hht_spectrum, spectrum, SpectralError};
use crate::tanner::{Origin, Provenance, TannerError, TannerGraph};

/// Largest denominator tried when snapping a measured eigenvalue to a
/// rational.
pub const MU_SNAP_DENOMINATOR: i64 = 1000;
/// Distance within which an eigenvalue is snapped.
pub const MU_SNAP_TOLERANCE: f64 = 1e-9;
/// Relative tolerance for comparisons against floating-point bounds.
pub const FLOAT_SLACK: f64 = 1e-9;
/// Relative tolerance when comparing against the AWGN oracle.
pub const AWGN_SLACK: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum BoundsError {
    #[error("inconsistent parameters: {0}")]
    InconsistentParameters(String),
    #[error("parity-check matrix is not regular: {0}")]
    NotRegular(String),
    #[error("Tanner graph is not connected")]
    NotConnected,
    #[error("largest eigenvalue {mu1} of HHᵀ differs from jm = {expected}")]
    SpectralMismatch { mu1: f64, expected: f64 },
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Expansion(#[from] ExpansionError),
    #[error(transparent)]
    Tanner(#[from] TannerError),
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BoundId {
    #[serde(rename = "A.dmin")]
    ADmin,
    #[serde(rename = "A.smin")]
    ASmin,
    #[serde(rename = "A.wbsc")]
    AWbsc,
    #[serde(rename = "B.dmin")]
    BDmin,
    #[serde(rename = "B.smin")]
    BSmin,
    #[serde(rename = "B.wbsc")]
    BWbsc,
    #[serde(rename = "C.dmin")]
    CDmin,
    #[serde(rename = "C.dmin_improved")]
    CDminImproved,
    #[serde(rename = "C.smin")]
    CSmin,
    #[serde(rename = "C.wbsc")]
    CWbsc,
    #[serde(rename = "D.dmin")]
    DDmin,
    #[serde(rename = "D.smin")]
    DSmin,
    #[serde(rename = "D.wbsc")]
    DWbsc,
    #[serde(rename = "D.wbsc_swapped")]
    DWbscSwapped,
    #[serde(rename = "D.conjecture")]
    DConjecture,
    #[serde(rename = "T5.awgn")]
    T5Awgn,
}

impl BoundId {
    pub const ALL: [BoundId; 16] = [
        BoundId::ADmin,
        BoundId::ASmin,
        BoundId::AWbsc,
        BoundId::BDmin,
        BoundId::BSmin,
        BoundId::BWbsc,
        BoundId::CDmin,
        BoundId::CDminImproved,
        BoundId::CSmin,
        BoundId::CWbsc,
        BoundId::DDmin,
        BoundId::DSmin,
        BoundId::DWbsc,
        BoundId::DWbscSwapped,
        BoundId::DConjecture,
        BoundId::T5Awgn,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BoundId::ADmin => "A.dmin",
            BoundId::ASmin => "A.smin",
            BoundId::AWbsc => "A.wbsc",
            BoundId::BDmin => "B.dmin",
            BoundId::BSmin => "B.smin",
            BoundId::BWbsc => "B.wbsc",
            BoundId::CDmin => "C.dmin",
            BoundId::CDminImproved => "C.dmin_improved",
            BoundId::CSmin => "C.smin",
            BoundId::CWbsc => "C.wbsc",
            BoundId::DDmin => "D.dmin",
            BoundId::DSmin => "D.smin",
            BoundId::DWbsc => "D.wbsc",
            BoundId::DWbscSwapped => "D.wbsc_swapped",
            BoundId::DConjecture => "D.conjecture",
            BoundId::T5Awgn => "T5.awgn",
        }
    }

    pub fn quantity(self) -> Quantity {
        use BoundId::*;
        match self {
            ADmin | BDmin | CDmin | CDminImproved | DDmin => Quantity::MinDistance,
            ASmin | BSmin | CSmin | DSmin => Quantity::MinStoppingSet,
            AWbsc | BWbsc | CWbsc | DWbsc | DWbscSwapped | DConjecture => Quantity::MinBscWeight,
            T5Awgn => Quantity::MinAwgnWeight,
        }
    }
}

impl std::fmt::Display for BoundId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The exact quantity a bound is about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    MinDistance,
    MinStoppingSet,
    MinBscWeight,
    MinAwgnWeight,
}

/// One evaluated condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub condition: String,
    pub holds: bool,
    pub measured: String,
}

fn check(condition: &str, holds: bool, measured: String) -> Check {
    Check {
        condition: condition.to_string(),
        holds,
        measured,
    }
}

/// One evaluated bound.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport<T> {
    pub id: BoundId,
    pub hypotheses: Vec<Check>,
    /// Present exactly when every hypothesis holds.
    pub value: Option<T>,
    pub applicable: bool,
    pub conjectural: bool,
    /// The exact quantity exceeds the value strictly.
    pub strict: bool,
    /// Whether the value is positive; informational only.
    pub meaningful: Option<Check>,
    pub notes: Vec<String>,
}

impl<T: Scalar> BoundReport<T> {
    fn evaluate(id: BoundId, strict: bool, hypotheses: Vec<Check>, value: impl FnOnce() -> T) -> Self {
        let applicable = hypotheses.iter().all(|h| h.holds);
        let mut notes = Vec::new();
        if let Some(h) = hypotheses.iter().find(|h| !h.holds) {
            notes.push(format!("inapplicable: {} fails", h.condition));
        }
        BoundReport {
            id,
            hypotheses,
            value: applicable.then(value),
            applicable,
            conjectural: id == BoundId::DConjecture,
            strict,
            meaningful: None,
            notes,
        }
    }

    fn with_meaningful(mut self, c: Check) -> Self {
        self.meaningful = Some(c);
        self
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    /// First failing hypothesis.
    pub fn failing(&self) -> Option<&Check> {
        self.hypotheses.iter().find(|h| !h.holds)
    }

    /// Whether `exact` satisfies the bound (`None` when inapplicable).
    /// Exact scalars compare exactly; floats allow a relative slack of
    /// [`FLOAT_SLACK`], under which strictness cannot be certified.
    pub fn admits(&self, exact: &T) -> Option<bool> {
        let v = self.value.as_ref()?;
        Some(if T::EXACT {
            if self.strict {
                exact > v
            } else {
                exact >= v
            }
        } else {
            let (e, b) = (exact.to_f64_lossy(), v.to_f64_lossy());
            e >= b - FLOAT_SLACK * b.abs().max(1.0)
        })
    }

    pub fn doc(&self) -> BoundDoc {
        BoundDoc {
            id: self.id,
            quantity: self.id.quantity(),
            hypotheses: self.hypotheses.clone(),
            exact: if T::EXACT {
                self.value.as_ref().map(|v| v.to_string())
            } else {
                None
            },
            value: self.value.as_ref().map(|v| fixed(v.to_f64_lossy())),
            applicable: self.applicable,
            conjectural: self.conjectural,
            strict: self.strict,
            meaningful: self.meaningful.clone(),
            notes: self.notes.clone(),
        }
    }
}

/// Serializable form of a [`BoundReport`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundDoc {
    pub id: BoundId,
    pub quantity: Quantity,
    pub hypotheses: Vec<Check>,
    /// Exact rational value, when evaluated exactly.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    pub value: Option<f64>,
    pub applicable: bool,
    pub conjectural: bool,
    pub strict: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub meaningful: Option<Check>,
    pub notes: Vec<String>,
}

fn r<T: Scalar>(num: i64, den: i64) -> T {
    T::ratio(num, den)
}

fn count<T: Scalar>(n: usize) -> T {
    T::from_count(n)
}

/// Case A (simple parity checks): `d_min`, `s_min` and `w_BSC` bounds for an
/// `(αn, δc)` expander with variable degree `c`.
pub fn case_a_bounds<T: Scalar>(alpha: &T, n: usize, delta: &T, c: usize) -> [BoundReport<T>; 3] {
    let an = alpha.clone() * count::<T>(n);
    let lemma = || vec![check("δ > 1/2", *delta > r(1, 2), format!("δ = {delta}"))];
    let threshold = r::<T>(2, 3) + T::one() / count::<T>(3 * c.max(1));
    let dc = delta.clone() * count::<T>(c);
    let theorem = vec![
        check(
            "δ > 2/3 + 1/(3c)",
            c > 0 && *delta > threshold,
            format!("δ = {delta}, c = {c}"),
        ),
        check("δc is an integer", dc.is_integral(), format!("δc = {dc}")),
    ];
    let one = T::one();
    let two = count::<T>(2);
    let three = count::<T>(3);
    [
        BoundReport::evaluate(BoundId::ADmin, false, lemma(), || an.clone()),
        BoundReport::evaluate(BoundId::ASmin, false, lemma(), || an.clone()),
        BoundReport::evaluate(BoundId::AWbsc, true, theorem, || {
            two.clone() * (an.clone() - one.clone()) * (three * delta.clone() - two.clone())
                / (two.clone() * delta.clone() - one.clone())
                - one.clone()
        }),
    ]
}

/// Case B (subcode constraints of relative distance `ε` and length `d`).
pub fn case_b_bounds<T: Scalar>(
    alpha: &T,
    n: usize,
    delta: &T,
    c: usize,
    d: usize,
    eps: &T,
) -> [BoundReport<T>; 3] {
    let an = alpha.clone() * count::<T>(n);
    let ed = eps.clone() * count::<T>(d);
    let one = T::one();
    let two = count::<T>(2);
    let lemma = || {
        let holds = ed.is_pos() && *delta > one.clone() / ed.clone();
        vec![check("δ > 1/(εd)", holds, format!("δ = {delta}, εd = {ed}"))]
    };
    let ed1 = ed.clone() + one.clone();
    let threshold = two.clone() / ed1.clone() + one.clone() / (count::<T>(c.max(1)) * ed1.clone());
    let dc = delta.clone() * count::<T>(c);
    let theorem = vec![
        check(
            "δ > 2/(εd+1) + 1/(c(εd+1))",
            c > 0 && *delta > threshold,
            format!("δ = {delta}, εd = {ed}, c = {c}"),
        ),
        check("δc is an integer", dc.is_integral(), format!("δc = {dc}")),
    ];
    [
        BoundReport::evaluate(BoundId::BDmin, false, lemma(), || an.clone()),
        BoundReport::evaluate(BoundId::BSmin, false, lemma(), || an.clone()),
        BoundReport::evaluate(BoundId::BWbsc, true, theorem, || {
            two.clone() * (an.clone() - one.clone()) * (ed1.clone() * delta.clone() - two.clone())
                / (ed.clone() * delta.clone() - one.clone())
                - one.clone()
        }),
    ]
}

/// Case C (edges of an `(n, d, μ)` graph as variables, vertices carrying a
/// `[d, rd, εd]` subcode); block length `N = nd/2`.
pub fn case_c_bounds<T: Scalar>(n: usize, d: usize, mu: &T, eps: &T) -> [BoundReport<T>; 4] {
    let big_n = r::<T>((n * d) as i64, 2);
    let one = T::one();
    let two = count::<T>(2);
    let md = mu.clone() / count::<T>(d.max(1));
    let denominator = || check("μ < d", d > 0 && md < one, format!("μ = {mu}, d = {d}"));
    let measured = format!("ε = {eps}, μ/d = {md}");
    let positive = check("ε > μ/d", *eps > md, measured.clone());
    let base = one.clone() - md.clone();
    let linear = || {
        big_n.clone() * eps.clone() * (eps.clone() - md.clone()) / base.clone()
    };
    let half_positive = check("ε/2 > μ/d", eps.clone() / two.clone() > md, measured.clone());
    [
        BoundReport::evaluate(
            BoundId::CDmin,
            false,
            vec![denominator(), check("ε ≥ μ/d", *eps >= md, measured.clone())],
            || {
                let t = (eps.clone() - md.clone()) / base.clone();
                big_n.clone() * t.clone() * t
            },
        )
        .with_meaningful(positive.clone()),
        BoundReport::evaluate(BoundId::CDminImproved, false, vec![denominator()], linear)
            .with_meaningful(positive.clone()),
        BoundReport::evaluate(BoundId::CSmin, false, vec![denominator()], linear).with_meaningful(positive),
        BoundReport::evaluate(BoundId::CWbsc, false, vec![denominator()], || {
            big_n.clone() * eps.clone() * (eps.clone() / two.clone() - md.clone()) / base.clone()
        })
        .with_meaningful(half_positive),
    ]
}

/// Case D (edges of a `(c, d)`-regular bipartite graph with `m` left and `n`
/// right vertices, left vertices carrying a `[c, r₁c, ε₁c]` subcode and right
/// vertices a `[d, r₂d, ε₂d]` subcode). `μ` is the nontrivial eigenvalue.
pub fn case_d_bounds<T: Scalar>(
    c: usize,
    d: usize,
    m: usize,
    n: usize,
    mu: &T,
    eps1: &T,
    eps2: &T,
) -> Result<[BoundReport<T>; 5], BoundsError> {
    if c == 0 || d == 0 || m * c != n * d {
        return Err(BoundsError::InconsistentParameters(format!(
            "mc = {} and nd = {} must agree and be positive",
            m * c,
            n * d
        )));
    }
    let big_n = count::<T>(m * c);
    let (ct, dt) = (count::<T>(c), count::<T>(d));
    let two = count::<T>(2);
    let e1c = eps1.clone() * ct.clone();
    let e2d = eps2.clone() * dt.clone();
    let measured = format!("ε₁c = {e1c}, ε₂d = {e2d}, μ = {mu}");
    let min_side = if e1c < e2d { e1c.clone() } else { e2d.clone() };
    let half_mu = mu.clone() / two.clone();
    let two_mu = two.clone() * mu.clone();
    let mixed = || {
        big_n.clone()
            * (eps1.clone() * eps2.clone()
                - mu.clone() * eps1.clone() / (two.clone() * dt.clone())
                - mu.clone() * eps2.clone() / (two.clone() * ct.clone()))
    };
    let note = "μ is the largest eigenvalue after removing the ±λmax pair";
    let dmin = BoundReport::evaluate(
        BoundId::DDmin,
        false,
        vec![check("min(ε₁c, ε₂d) > μ/2", min_side > half_mu, measured.clone())],
        mixed,
    )
    .with_note(note);
    let smin = BoundReport::evaluate(BoundId::DSmin, false, Vec::new(), mixed)
        .with_meaningful(check("min(ε₁c, ε₂d) > μ", min_side > *mu, measured.clone()))
        .with_note(note);
    let wbsc = BoundReport::evaluate(
        BoundId::DWbsc,
        false,
        vec![check("ε₂d ≥ ε₁c", e2d >= e1c, measured.clone())],
        || big_n.clone() * ct.clone() / dt.clone() * eps1.clone() * (eps1.clone() / two.clone() - mu.clone() / ct.clone()),
    )
    .with_meaningful(check("ε₁c > 2μ", e1c > two_mu, measured.clone()))
    .with_note(note);
    let swapped = BoundReport::evaluate(
        BoundId::DWbscSwapped,
        false,
        vec![
            check("ε₁c ≥ ε₂d", e1c >= e2d, measured.clone()),
            check("ε₂d ≥ 2μ", e2d >= two_mu, measured.clone()),
        ],
        || big_n.clone() * dt.clone() / ct.clone() * eps2.clone() * (eps2.clone() / two.clone() - mu.clone() / dt.clone()),
    )
    .with_note(note);
    let conjecture = BoundReport::evaluate(
        BoundId::DConjecture,
        false,
        vec![
            check("ε₂d ≥ ε₁c", e2d >= e1c, measured.clone()),
            check("ε₁c > 2μ", e1c > two_mu, measured),
        ],
        || {
            big_n.clone()
                * (eps1.clone() * eps2.clone() / two.clone()
                    - mu.clone() * eps1.clone() / (two.clone() * dt.clone())
                    - mu.clone() * eps2.clone() / (two.clone() * ct.clone()))
        },
    )
    .with_note(note);
    Ok([dmin, smin, wbsc, swapped, conjecture])
}

/// Parity-oriented AWGN bound `n(4j − μ₂m)/((μ₁ − μ₂)m)` for a connected
/// `(j, m)`-regular parity-check matrix, with `μ₁ = jm` and `μ₂` the two
/// largest eigenvalues of `HHᵀ`.
pub fn tanner_awgn_bound(h: &BitMatrix) -> Result<BoundReport<f64>, BoundsError> {
    let (rows, n) = (h.rows(), h.cols());
    if rows == 0 || n == 0 {
        return Err(BoundsError::NotRegular("empty parity-check matrix".into()));
    }
    let j = h.col_weight(0);
    if (0..n).any(|c| h.col_weight(c) != j) {
        return Err(BoundsError::NotRegular("column weights differ".into()));
    }
    let m = h.row_weight(0);
    if (0..rows).any(|r| h.row_weight(r) != m) {
        return Err(BoundsError::NotRegular("row weights differ".into()));
    }
    if j == 0 {
        return Err(BoundsError::NotRegular("zero column weight".into()));
    }
    if !TannerGraph::from_parity_matrix(h)?.is_connected() {
        return Err(BoundsError::NotConnected);
    }
    let spec = hht_spectrum(h)?;
    let jm = (j * m) as f64;
    if (spec.mu1 - jm).abs() > 1e-9 * jm {
        return Err(BoundsError::SpectralMismatch { mu1: spec.mu1, expected: jm });
    }
    let mu2 = spec.mu2.unwrap_or(0.0);
    let (jf, mf) = (j as f64, m as f64);
    let gap = spec.mu1 - mu2;
    let report = BoundReport::evaluate(
        BoundId::T5Awgn,
        false,
        vec![
            check("(j, m)-regular and connected", true, format!("j = {j}, m = {m}")),
            check("μ₁ > μ₂", gap > 1e-9 * jm, format!("μ₁ = {}, μ₂ = {}", fixed(spec.mu1), fixed(mu2))),
        ],
        || n as f64 * (4.0 * jf - mu2 * mf) / (gap * mf),
    )
    .with_meaningful(check("4j > μ₂m", 4.0 * jf > mu2 * mf, format!("μ₂m = {}", fixed(mu2 * mf))));
    Ok(report)
}

/// Exact value of a quantity, as computed by an oracle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleDoc {
    pub quantity: Quantity,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    pub value: Option<f64>,
    /// Certified lower end of the value (AWGN search).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower: Option<f64>,
    /// The quantity is infinite (no nonzero codeword or pseudocodeword).
    pub infinite: bool,
    /// Whether the value is certified (the AWGN search may stop early).
    pub certified: bool,
    /// Support of the extremal codeword, stopping set or pseudocodeword.
    pub witness_support: Vec<usize>,
    /// Extremal pseudocodeword entries.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witness: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unavailable: Option<String>,
}

#[derive(Debug, Clone)]
enum OracleValue {
    Count(usize),
    Real { lower: f64, upper: f64, certified: bool },
    Infinite,
    Unavailable(String),
}

#[derive(Debug, Clone)]
struct Oracle {
    value: OracleValue,
    doc: OracleDoc,
}

fn oracle(quantity: Quantity, value: OracleValue, witness_support: Vec<usize>, witness: Vec<String>) -> Oracle {
    let (exact, v, lower, infinite, certified, unavailable) = match &value {
        OracleValue::Count(k) => (Some(k.to_string()), Some(*k as f64), None, false, true, None),
        OracleValue::Real { lower, upper, certified } => {
            (None, Some(fixed(*upper)), Some(fixed(*lower)), false, *certified, None)
        }
        OracleValue::Infinite => (None, None, None, true, true, None),
        OracleValue::Unavailable(why) => (None, None, None, false, false, Some(why.clone())),
    };
    Oracle {
        value,
        doc: OracleDoc {
            quantity,
            exact,
            value: v,
            lower,
            infinite,
            certified,
            witness_support,
            witness,
            unavailable,
        },
    }
}

fn guarded(e: impl std::fmt::Display) -> OracleValue {
    OracleValue::Unavailable(e.to_string())
}

fn support<T: Scalar>(p: &[T]) -> Vec<usize> {
    (0..p.len()).filter(|&i| !p[i].near_zero()).collect()
}

fn compute_oracle(g: &TannerGraph, q: Quantity) -> Oracle {
    match q {
        Quantity::MinDistance => match g.to_parity_matrix().min_weight_codeword() {
            Ok(Some(w)) => {
                let s: Vec<usize> = (0..w.len()).filter(|&i| w[i]).collect();
                oracle(q, OracleValue::Count(s.len()), s, Vec::new())
            }
            Ok(None) => oracle(q, OracleValue::Infinite, Vec::new(), Vec::new()),
            Err(e) => oracle(q, guarded(e), Vec::new(), Vec::new()),
        },
        Quantity::MinStoppingSet => match min_stopping_set(g) {
            Ok(Some(s)) => oracle(q, OracleValue::Count(s.support.len()), s.support, Vec::new()),
            Ok(None) => oracle(q, OracleValue::Infinite, Vec::new(), Vec::new()),
            Err(e) => oracle(q, guarded(e), Vec::new(), Vec::new()),
        },
        Quantity::MinBscWeight => match min_bsc_pseudoweight(g) {
            Ok(Some(b)) => {
                let p = &b.witness.p;
                oracle(
                    q,
                    OracleValue::Count(b.weight.weight),
                    support(p),
                    p.iter().map(rational_string).collect(),
                )
            }
            Ok(None) => oracle(q, OracleValue::Infinite, Vec::new(), Vec::new()),
            Err(e) => oracle(q, guarded(e), Vec::new(), Vec::new()),
        },
        Quantity::MinAwgnWeight => match min_awgn_pseudoweight(g) {
            Ok(Some(a)) => {
                let p = &a.witness.p;
                oracle(
                    q,
                    OracleValue::Real {
                        lower: a.lower,
                        upper: a.weight,
                        certified: a.certified,
                    },
                    support(p),
                    p.iter().map(|x| format!("{:.10}", fixed(*x))).collect(),
                )
            }
            Ok(None) => oracle(q, OracleValue::Infinite, Vec::new(), Vec::new()),
            Err(e) => oracle(q, guarded(e), Vec::new(), Vec::new()),
        },
    }
}

/// Exact value of `q` on `g`; guard violations are reported in
/// `unavailable` rather than as errors.
pub fn oracle_doc(g: &TannerGraph, q: Quantity) -> OracleDoc {
    compute_oracle(g, q).doc
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Pass,
    Fail,
    Inapplicable,
    /// The oracle exceeded its guard.
    Skipped,
    /// Conjectural bound, compared but never failing.
    Informational,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationRow {
    pub bound: BoundDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleDoc>,
    /// Whether the exact value satisfied the bound.
    pub holds: Option<bool>,
    pub status: RowStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationTable {
    pub provenance: Provenance,
    pub variables: usize,
    /// Measured inputs (expansion, eigenvalues, subcode distances).
    pub measured: Vec<String>,
    pub rows: Vec<VerificationRow>,
    pub failures: usize,
    pub skipped: usize,
}

impl VerificationTable {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn row(&self, id: BoundId) -> Option<&VerificationRow> {
        self.rows.iter().find(|r| r.bound.id == id)
    }
}

struct Oracles<'a> {
    g: &'a TannerGraph,
    cache: Vec<(Quantity, Oracle)>,
}

impl Oracles<'_> {
    fn get(&mut self, q: Quantity) -> Oracle {
        if let Some((_, o)) = self.cache.iter().find(|(k, _)| *k == q) {
            return o.clone();
        }
        let o = compute_oracle(self.g, q);
        self.cache.push((q, o.clone()));
        o
    }
}

fn compare<T: Scalar>(report: &BoundReport<T>, oracles: &mut Oracles<'_>) -> VerificationRow {
    let bound = report.doc();
    if !report.applicable {
        return VerificationRow {
            bound,
            oracle: None,
            holds: None,
            status: RowStatus::Inapplicable,
        };
    }
    let o = oracles.get(report.id.quantity());
    let holds = match &o.value {
        OracleValue::Count(k) => report.admits(&count::<T>(*k)),
        OracleValue::Real { lower, .. } => report.value.as_ref().map(|v| {
            let b = v.to_f64_lossy();
            *lower >= b - AWGN_SLACK * b.abs().max(1.0)
        }),
        OracleValue::Infinite => Some(true),
        OracleValue::Unavailable(_) => None,
    };
    let status = match (holds, report.conjectural) {
        (None, _) => RowStatus::Skipped,
        (Some(_), true) => RowStatus::Informational,
        (Some(true), false) => RowStatus::Pass,
        (Some(false), false) => RowStatus::Fail,
    };
    VerificationRow {
        bound,
        oracle: Some(o.doc),
        holds,
        status,
    }
}

/// Largest subset size whose full scan fits the expansion budget.
fn affordable_cap(n: usize) -> usize {
    let mut total = 0u128;
    let mut binom = 1u128;
    for k in 1..n.min(EXPANSION_MAX_CAP + 1) {
        binom = binom * (n - k + 1) as u128 / k as u128;
        total += binom;
        if total > EXPANSION_SUBSET_BUDGET {
            return k - 1;
        }
    }
    n.saturating_sub(1).min(EXPANSION_MAX_CAP)
}

/// Evaluates the Case A/B bounds for every `αn = k` the expansion scan
/// covers and keeps, per bound, the applicable one with the largest value.
fn expander_bounds(
    g: &TannerGraph,
    c: usize,
    d: usize,
    eps: Option<&Rational>,
    measured: &mut Vec<String>,
) -> Result<Vec<BoundReport<Rational>>, BoundsError> {
    let n = g.var_count();
    let cap = affordable_cap(n);
    let per_size = expansion_by_size(g, cap)?;
    measured.push(format!("expansion scanned subsets of size ≤ {cap}"));
    let mut best: Vec<BoundReport<Rational>> = Vec::new();
    let mut delta = None::<Rational>;
    for k in 2..=cap + 1 {
        let s = &per_size[k - 2];
        let ratio = frac(s.neighbors as i64, (c * s.size) as i64);
        delta = Some(match delta {
            Some(d0) if d0 <= ratio => d0,
            _ => ratio,
        });
        let dk = delta.clone().expect("set above");
        let floored = (dk.clone() * frac(c as i64, 1)).floor() / frac(c as i64, 1);
        measured.push(format!("αn = {k}: δ = {}, ⌊δc⌋/c = {}", rational_string(&dk), rational_string(&floored)));
        let alpha = frac(k as i64, n as i64);
        let reports: [BoundReport<Rational>; 3] = match eps {
            None => {
                let [a, b, _] = case_a_bounds(&alpha, n, &dk, c);
                let [_, _, w] = case_a_bounds(&alpha, n, &floored, c);
                [a, b, w]
            }
            Some(e) => {
                let [a, b, _] = case_b_bounds(&alpha, n, &dk, c, d, e);
                let [_, _, w] = case_b_bounds(&alpha, n, &floored, c, d, e);
                [a, b, w]
            }
        };
        for rep in reports {
            let rep = rep.with_note(format!("αn = {k}"));
            match best.iter_mut().find(|b| b.id == rep.id) {
                None => best.push(rep),
                Some(slot) => {
                    let better = match (&slot.value, &rep.value) {
                        (None, Some(_)) => true,
                        (Some(a), Some(b)) => b > a,
                        _ => false,
                    };
                    if better {
                        *slot = rep;
                    }
                }
            }
        }
    }
    Ok(best)
}

fn snapped(mu: f64, measured: &mut Vec<String>) -> Option<Rational> {
    let s = snap_rational(mu, MU_SNAP_DENOMINATOR, MU_SNAP_TOLERANCE);
    match &s {
        Some(r) => measured.push(format!("μ = {} (snapped from {})", rational_string(r), fixed(mu))),
        None => measured.push(format!("μ = {} (irrational, float evaluation)", fixed(mu))),
    }
    s
}

enum AnyReport {
    Exact(BoundReport<Rational>),
    Float(BoundReport<f64>),
}

impl AnyReport {
    fn doc(&self) -> BoundDoc {
        match self {
            AnyReport::Exact(r) => r.doc(),
            AnyReport::Float(r) => r.doc(),
        }
    }

    fn compare(&self, oracles: &mut Oracles<'_>) -> VerificationRow {
        match self {
            AnyReport::Exact(r) => compare(r, oracles),
            AnyReport::Float(r) => compare(r, oracles),
        }
    }
}

/// Every bound that applies to `g`, with the measured inputs.
///
/// Cases A and B measure the expansion of the variable side; Cases C and D
/// measure the eigenvalue of the base graph; simple graphs also get the
/// parity-oriented AWGN bound.
fn collect_bounds(g: &TannerGraph, measured: &mut Vec<String>) -> Result<Vec<AnyReport>, BoundsError> {
    let mut out = Vec::new();
    match (g.provenance(), g.params(), g.origin()) {
        (Provenance::CaseA, Some(p), _) => {
            out.extend(expander_bounds(g, p.c, p.d, None, measured)?.into_iter().map(AnyReport::Exact));
        }
        (Provenance::CaseB, Some(p), _) => {
            let eps = p.subcodes.first().map(|s| s.epsilon.clone()).unwrap_or_else(Rational::zero);
            measured.push(format!("ε = {}", rational_string(&eps)));
            out.extend(expander_bounds(g, p.c, p.d, Some(&eps), measured)?.into_iter().map(AnyReport::Exact));
        }
        (Provenance::CaseC, Some(p), Some(Origin::Graph(base))) => {
            let eps = p.subcodes.first().map(|s| s.epsilon.clone()).unwrap_or_else(Rational::zero);
            measured.push(format!("ε = {}", rational_string(&eps)));
            let mu = spectrum(&base.adjacency_matrix())?.mu2.unwrap_or(0.0);
            match snapped(mu, measured) {
                Some(mu) => out.extend(case_c_bounds(base.vertices, p.d, &mu, &eps).into_iter().map(AnyReport::Exact)),
                None => {
                    let e = eps.to_f64_lossy();
                    out.extend(case_c_bounds(base.vertices, p.d, &mu, &e).into_iter().map(AnyReport::Float));
                }
            }
        }
        (Provenance::CaseD, Some(p), Some(Origin::Bipartite(base))) => {
            let eps = |i: usize| p.subcodes.get(i).map(|s| s.epsilon.clone()).unwrap_or_else(Rational::zero);
            let (e1, e2) = (eps(0), eps(1));
            measured.push(format!("ε₁ = {}, ε₂ = {}", rational_string(&e1), rational_string(&e2)));
            let mu = spectrum(&base.adjacency_matrix())?.nontrivial_mu_bipartite();
            match snapped(mu, measured) {
                Some(mu) => out.extend(case_d_bounds(p.c, p.d, p.m, p.n, &mu, &e1, &e2)?.into_iter().map(AnyReport::Exact)),
                None => {
                    let (f1, f2) = (e1.to_f64_lossy(), e2.to_f64_lossy());
                    out.extend(case_d_bounds(p.c, p.d, p.m, p.n, &mu, &f1, &f2)?.into_iter().map(AnyReport::Float));
                }
            }
        }
        _ => measured.push("no construction parameters; only the parity-oriented bound is considered".into()),
    }
    if g.is_simple() {
        match tanner_awgn_bound(&g.to_parity_matrix()) {
            Ok(rep) => out.push(AnyReport::Float(rep)),
            Err(e @ (BoundsError::NotRegular(_) | BoundsError::NotConnected)) => {
                out.push(AnyReport::Float(BoundReport::<f64>::evaluate(
                    BoundId::T5Awgn,
                    false,
                    vec![check("(j, m)-regular and connected", false, e.to_string())],
                    || 0.0,
                )));
            }
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Bounds evaluated on a graph, without oracles.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundSet {
    pub provenance: Provenance,
    pub variables: usize,
    pub measured: Vec<String>,
    pub bounds: Vec<BoundDoc>,
}

impl BoundSet {
    pub fn get(&self, id: BoundId) -> Option<&BoundDoc> {
        self.bounds.iter().find(|b| b.id == id)
    }
}

/// Every bound that applies to `g`, from measured expansion or eigenvalues.
pub fn bounds_for_graph(g: &TannerGraph) -> Result<BoundSet, BoundsError> {
    let mut measured = Vec::new();
    let bounds = collect_bounds(g, &mut measured)?.iter().map(AnyReport::doc).collect();
    Ok(BoundSet {
        provenance: g.provenance(),
        variables: g.var_count(),
        measured,
        bounds,
    })
}

/// Every bound that applies to `g`, checked against exact oracles. Oracles
/// that exceed their guards leave the row skipped rather than failed.
pub fn verify_bounds(g: &TannerGraph) -> Result<VerificationTable, BoundsError> {
    let mut measured = Vec::new();
    let mut oracles = Oracles { g, cache: Vec::new() };
    let rows: Vec<VerificationRow> = collect_bounds(g, &mut measured)?
        .iter()
        .map(|r| r.compare(&mut oracles))
        .collect();
    let failures = rows.iter().filter(|r| r.status == RowStatus::Fail).count();
    let skipped = rows.iter().filter(|r| r.status == RowStatus::Skipped).count();
    Ok(VerificationTable {
        provenance: g.provenance(),
        variables: g.var_count(),
        measured,
        rows,
        failures,
        skipped,
    })
}
