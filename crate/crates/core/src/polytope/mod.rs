//! Pseudocodewords: validation against the fundamental polytope, channel
//! weights, and exact minimum searches (stopping sets, BSC and AWGN
//! pseudoweights, lift realizability).

mod awgn;
mod bsc;
mod cone;
mod realize;
mod stopping;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lpsolve::{lp_solve, LinearProgram, Relation};
use crate::scalar::{rational_string, Rational, Scalar};
use crate::tanner::{ConstraintKind, TannerGraph};

pub use awgn::{max_awgn_pseudoweight, min_awgn_pseudoweight, AwgnMinimum, AWGN_MAX_N, AWGN_NODE_BUDGET};
pub use bsc::{min_bsc_pseudoweight, BscMinimum, BSC_MAX_N};
pub use cone::cone_program;
pub use realize::{lift_realizability_check, Realization, REALIZE_MAX_DEGREE, REALIZE_MAX_N};
pub use stopping::{
    is_generalized_stopping_set, is_simple_stopping_set, meets_simplified_criterion, min_stopping_set,
    StoppingKind, StoppingSet, GENERALIZED_MAX_N, SIMPLE_MAX_N,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolytopeError {
    #[error("expected a vector of length {expected}, got {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("graph has non-parity constraints")]
    NotSimple,
    #[error("constraint {constraint} carries no subcode")]
    SubcodeMissing { constraint: usize },
    #[error("vector is zero")]
    ZeroVector,
    #[error("vector has a negative entry")]
    NegativeEntry,
    #[error("search over {n} variables exceeds the guard {max}")]
    SearchSpaceTooLarge { n: usize, max: usize },
    #[error("solver failure: {0}")]
    SolverFailure(String),
    #[error("lift degree {degree} exceeds the limit {max}")]
    DegreeTooLarge { degree: usize, max: usize },
    #[error("vector is not in the fundamental polytope")]
    NotInPolytope,
}

/// Which inequality system a vector was checked against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certificate {
    SimplePolytope,
    GeneralizedNecessary,
    ExactLocalPolytope,
}

/// Strength of generalized validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    /// Box bounds and the three counting inequalities.
    Necessary,
    /// Local convex-hull membership at every constraint.
    Exact,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Pseudocodeword<T> {
    pub p: Vec<T>,
    pub certificate: Option<Certificate>,
}

/// JSON rendering: exact strings plus floats.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PseudocodewordDoc {
    pub exact: Option<Vec<String>>,
    pub approx: Vec<f64>,
    pub certificate: Option<Certificate>,
}

impl Pseudocodeword<Rational> {
    pub fn doc(&self) -> PseudocodewordDoc {
        PseudocodewordDoc {
            exact: Some(self.p.iter().map(rational_string).collect()),
            approx: self.p.iter().map(|x| crate::scalar::fixed(x.to_f64_lossy())).collect(),
            certificate: self.certificate,
        }
    }
}

impl Pseudocodeword<f64> {
    pub fn doc(&self) -> PseudocodewordDoc {
        PseudocodewordDoc {
            exact: None,
            approx: self.p.iter().map(|&x| crate::scalar::fixed(x)).collect(),
            certificate: self.certificate,
        }
    }
}

fn check_len<T>(g: &TannerGraph, p: &[T]) -> Result<(), PolytopeError> {
    if p.len() != g.var_count() {
        return Err(PolytopeError::LengthMismatch {
            expected: g.var_count(),
            found: p.len(),
        });
    }
    Ok(())
}

fn in_box<T: Scalar>(p: &[T], upper: bool) -> bool {
    p.iter()
        .all(|x| !x.is_neg() && (!upper || !x.gt_tol(&T::one())))
}

/// Local values `p` on the sockets of constraint `j`.
fn local<T: Scalar>(g: &TannerGraph, j: usize, p: &[T]) -> Vec<T> {
    g.constraint(j).vars.iter().map(|&v| p[v].clone()).collect()
}

/// `(w−1)·p_t ≤ Σ_{s≠t} p_s` at every socket.
fn weighted_parity_ok<T: Scalar>(local: &[T], w: usize) -> bool {
    let total = crate::scalar::sum(local);
    let w1 = T::from_count(w.saturating_sub(1));
    local
        .iter()
        .all(|x| (total.clone() - x.clone()).ge_tol(&(w1.clone() * x.clone())))
}

/// `factor` times the sum of the `k` largest entries is at most the rest.
fn top_k_ok<T: Scalar>(local: &[T], k: usize, factor: usize) -> bool {
    if k == 0 {
        return true;
    }
    let mut sorted = local.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).expect("comparable"));
    let top = crate::scalar::sum(&sorted[..k.min(sorted.len())]);
    let rest = crate::scalar::sum(&sorted[k.min(sorted.len())..]);
    rest.ge_tol(&(T::from_count(factor) * top))
}

/// Box bounds `0 ≤ p ≤ 1` and `p_t ≤ Σ_{s≠t} p_s` at every check. Requires a
/// graph whose constraints are all parity checks.
pub fn validate_simple<T: Scalar>(g: &TannerGraph, p: &[T]) -> Result<bool, PolytopeError> {
    check_len(g, p)?;
    if !g.is_simple() {
        return Err(PolytopeError::NotSimple);
    }
    Ok(in_box(p, true) && (0..g.constraint_count()).all(|j| weighted_parity_ok(&local(g, j, p), 2)))
}

/// Cone version of [`validate_simple`]: no upper bound.
pub fn validate_simple_cone<T: Scalar>(g: &TannerGraph, p: &[T]) -> Result<bool, PolytopeError> {
    check_len(g, p)?;
    if !g.is_simple() {
        return Err(PolytopeError::NotSimple);
    }
    Ok(in_box(p, false) && (0..g.constraint_count()).all(|j| weighted_parity_ok(&local(g, j, p), 2)))
}

/// Whether `local` lies in the convex hull (or, with `cone`, the conic hull)
/// of the constraint's local codewords.
pub fn local_hull_member<T: Scalar>(kind: &ConstraintKind, local: &[T], cone: bool) -> bool {
    let words: Vec<u64> = kind
        .local_codewords(local.len())
        .into_iter()
        .filter(|&c| c != 0)
        .collect();
    if local.iter().all(|x| x.near_zero()) {
        return true;
    }
    if local.iter().any(|x| x.is_neg()) {
        return false;
    }
    let mut lp = LinearProgram::<T>::nonnegative(words.len());
    for (t, x) in local.iter().enumerate() {
        let row: Vec<T> = words
            .iter()
            .map(|&c| if c >> t & 1 == 1 { T::one() } else { T::zero() })
            .collect();
        lp.add_row(row, Relation::Eq, x.clone());
    }
    if !cone {
        lp.add_row(vec![T::one(); words.len()], Relation::Le, T::one());
    }
    lp_solve(&lp).is_optimal()
}

/// Generalized validation. `Necessary` checks box bounds plus, at every
/// constraint with local minimum distance `w`: `(w−1)p_t ≤ Σ others`, the
/// `⌊w/2⌋` largest entries sum to at most the rest, and three times the
/// `⌊w/4⌋` largest sum to at most the rest. `Exact` checks local hull
/// membership.
pub fn validate_generalized<T: Scalar>(g: &TannerGraph, p: &[T], level: Level) -> Result<bool, PolytopeError> {
    check_len(g, p)?;
    for (j, c) in g.constraints().iter().enumerate() {
        if c.kind.subcode().is_none() {
            return Err(PolytopeError::SubcodeMissing { constraint: j });
        }
    }
    Ok(generalized_ok(g, p, level, false))
}

fn generalized_ok<T: Scalar>(g: &TannerGraph, p: &[T], level: Level, cone: bool) -> bool {
    if !in_box(p, !cone) {
        return false;
    }
    g.constraints().iter().enumerate().all(|(j, c)| {
        let loc = local(g, j, p);
        match level {
            Level::Necessary => {
                let w = c.kind.subcode().map_or(2, |s| s.dmin());
                weighted_parity_ok(&loc, w) && top_k_ok(&loc, w / 2, 1) && top_k_ok(&loc, w / 4, 3)
            }
            Level::Exact => local_hull_member(&c.kind, &loc, cone),
        }
    })
}

/// Validates `p` against the strongest applicable system and attaches the
/// certificate; parity constraints in mixed graphs are treated as
/// single-parity subcodes.
pub fn certify<T: Scalar>(g: &TannerGraph, p: Vec<T>) -> Result<Pseudocodeword<T>, PolytopeError> {
    check_len(g, &p)?;
    let (ok, cert) = if g.is_simple() {
        (validate_simple(g, &p)?, Certificate::SimplePolytope)
    } else {
        (generalized_ok(g, &p, Level::Exact, false), Certificate::ExactLocalPolytope)
    };
    if !ok {
        return Err(PolytopeError::NotInPolytope);
    }
    Ok(Pseudocodeword {
        p,
        certificate: Some(cert),
    })
}

/// Whether `q` lies in the fundamental cone (no upper bound).
pub fn in_fundamental_cone<T: Scalar>(g: &TannerGraph, q: &[T]) -> Result<bool, PolytopeError> {
    check_len(g, q)?;
    if g.is_simple() {
        validate_simple_cone(g, q)
    } else {
        Ok(generalized_ok(g, q, Level::Exact, true))
    }
}

/// BSC pseudoweight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BscWeight {
    /// Smallest `e` with the `e` largest entries summing to at least the rest.
    pub e: usize,
    /// `2e` on equality, `2e − 1` otherwise.
    pub weight: usize,
    pub tie: bool,
}

fn nonnegative_total<T: Scalar>(p: &[T]) -> Result<T, PolytopeError> {
    if p.iter().any(|x| x.is_neg()) {
        return Err(PolytopeError::NegativeEntry);
    }
    let total = crate::scalar::sum(p);
    if !total.is_pos() {
        return Err(PolytopeError::ZeroVector);
    }
    Ok(total)
}

pub fn bsc_weight<T: Scalar>(p: &[T]) -> Result<BscWeight, PolytopeError> {
    let total = nonnegative_total(p)?;
    let mut q: Vec<T> = p.iter().map(|x| x.clone() / total.clone()).collect();
    q.sort_by(|a, b| b.partial_cmp(a).expect("comparable"));
    let two = T::from_count(2);
    let mut prefix = T::zero();
    for (i, x) in q.iter().enumerate() {
        prefix = prefix + x.clone();
        let diff = two.clone() * prefix.clone() - T::one();
        if diff.near_zero() || diff.is_positive() {
            let e = i + 1;
            let tie = diff.near_zero();
            return Ok(BscWeight {
                e,
                weight: if tie { 2 * e } else { 2 * e - 1 },
                tie,
            });
        }
    }
    unreachable!("the full prefix sums to one")
}

/// `(Σq)² / Σq²`.
pub fn awgn_weight<T: Scalar>(q: &[T]) -> Result<T, PolytopeError> {
    let total = nonnegative_total(q)?;
    let sq = q.iter().fold(T::zero(), |acc, x| acc + x.clone() * x.clone());
    Ok(total.clone() * total / sq)
}
