//! Exact minimum BSC pseudoweight over the fundamental cone.
//!
//! For each candidate top set `E` of size `e` the program
//! `max Σ_E q − Σ_Ē q` s.t. `Σq = 1`, `q_E ≥ t ≥ q_Ē`, `q` in the cone
//! decides whether some pseudocodeword has `E` among its `e` largest entries
//! with the top sum reaching the rest. Levels `e = 1, 2, …` are scanned until
//! a nonnegative gap appears: a positive gap gives weight `2e − 1`, a best
//! gap of exactly zero gives `2e`.

use num_traits::{One, Signed, Zero};

use super::{bsc_weight, certify, cone::cone_program, BscWeight, PolytopeError, Pseudocodeword};
use crate::lpsolve::{lp_solve, LinearProgram, LpOutcome, Relation};
use crate::scalar::{Rational, Scalar};
use crate::tanner::TannerGraph;

/// Variable guard.
pub const BSC_MAX_N: usize = 14;

#[derive(Debug, Clone, PartialEq)]
pub struct BscMinimum {
    pub weight: BscWeight,
    pub witness: Pseudocodeword<Rational>,
    pub top_set: Vec<usize>,
    pub programs_solved: usize,
}

/// Float gap below which a top set is discarded without an exact solve.
const SCREEN_SLACK: f64 = 1e-6;

fn normalized_cone<T: Scalar>(g: &TannerGraph) -> LinearProgram<T> {
    let n = g.var_count();
    let mut lp = cone_program::<T>(g, 1);
    lp.add_sparse_row(&(0..n).map(|i| (i, T::one())).collect::<Vec<_>>(), Relation::Eq, T::one());
    lp
}

/// `max Σ_E q − Σ_Ē q` with `q_E ≥ t ≥ q_Ē`; `t` is the extra column `n`.
fn level_program<T: Scalar>(base: &LinearProgram<T>, n: usize, set: &[usize]) -> LinearProgram<T> {
    let mut lp = base.clone();
    let mut in_e = vec![false; n];
    set.iter().for_each(|&i| in_e[i] = true);
    let mut obj = vec![T::zero(); lp.num_vars()];
    for i in 0..n {
        let rel = if in_e[i] { Relation::Ge } else { Relation::Le };
        lp.add_sparse_row(&[(i, T::one()), (n, -T::one())], rel, T::zero());
        obj[i] = if in_e[i] { T::one() } else { -T::one() };
    }
    lp.set_objective(obj);
    lp
}

/// Lexicographic `k`-subsets of `0..n`.
pub(crate) fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) {
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return;
    }
    loop {
        if !f(&idx) {
            return;
        }
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] < n - k + i {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Minimum BSC pseudoweight with an optimal witness; `None` when the cone is
/// trivial.
pub fn min_bsc_pseudoweight(g: &TannerGraph) -> Result<Option<BscMinimum>, PolytopeError> {
    let n = g.var_count();
    if n > BSC_MAX_N {
        return Err(PolytopeError::SearchSpaceTooLarge { n, max: BSC_MAX_N });
    }
    let base = normalized_cone::<Rational>(g);
    if !lp_solve(&base).is_optimal() {
        return Ok(None);
    }
    let screen_base = normalized_cone::<f64>(g);
    let mut solved = 1;
    for e in 1..=n {
        let mut zero_gap: Option<(Vec<usize>, Vec<Rational>)> = None;
        let mut positive: Option<(Vec<usize>, Vec<Rational>)> = None;
        let mut failure = None;
        for_each_subset(n, e, |set| {
            match lp_solve(&level_program(&screen_base, n, set)) {
                LpOutcome::Optimal { value, .. } if value >= -SCREEN_SLACK => {}
                LpOutcome::Unbounded => {}
                _ => return true,
            }
            solved += 1;
            match lp_solve(&level_program(&base, n, set)) {
                LpOutcome::Optimal { value, point } => {
                    if value.is_positive() {
                        positive = Some((set.to_vec(), point[..n].to_vec()));
                        return false;
                    }
                    if value.is_zero() && zero_gap.is_none() {
                        zero_gap = Some((set.to_vec(), point[..n].to_vec()));
                    }
                }
                LpOutcome::Infeasible => {}
                LpOutcome::Unbounded => {
                    failure = Some("bounded program reported unbounded");
                    return false;
                }
            }
            true
        });
        if let Some(msg) = failure {
            return Err(PolytopeError::SolverFailure(msg.into()));
        }
        let (found, tie) = match (positive, zero_gap) {
            (Some(p), _) => (p, false),
            (None, Some(z)) => (z, true),
            (None, None) => continue,
        };
        let (top_set, q) = found;
        let weight = bsc_weight(&q)?;
        let expected = BscWeight {
            e,
            weight: if tie { 2 * e } else { 2 * e - 1 },
            tie,
        };
        if weight != expected {
            return Err(PolytopeError::SolverFailure(format!(
                "witness weight {weight:?} disagrees with level result {expected:?}"
            )));
        }
        debug_assert!(q.iter().fold(Rational::zero(), |a, x| a + x).is_one());
        let witness = certify(g, q).map_err(|e| PolytopeError::SolverFailure(e.to_string()))?;
        return Ok(Some(BscMinimum {
            weight,
            witness,
            top_set,
            programs_solved: solved,
        }));
    }
    Err(PolytopeError::SolverFailure("no level reached a nonnegative gap".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::frac;
    use crate::tanner::{ConstraintKind, Provenance};

    #[test]
    fn subsets_enumerated() {
        let mut all = Vec::new();
        for_each_subset(4, 2, |s| {
            all.push(s.to_vec());
            true
        });
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], vec![0, 1]);
        assert_eq!(all[5], vec![2, 3]);
        let mut count = 0;
        for_each_subset(5, 0, |_| {
            count += 1;
            true
        });
        assert_eq!(count, 1);
    }

    #[test]
    fn spc3_weight_two() {
        let g = TannerGraph::new(
            3,
            vec![ConstraintKind::SimpleParity],
            &[(0, 0), (1, 0), (2, 0)],
            Provenance::Imported,
        )
        .unwrap();
        let m = min_bsc_pseudoweight(&g).unwrap().unwrap();
        assert_eq!(m.weight.weight, 2);
        assert!(m.weight.tie);
        assert_eq!(bsc_weight(&m.witness.p).unwrap().weight, 2);
        assert_eq!(m.witness.p[0], frac(1, 2));
    }

    #[test]
    fn triangle_weight_three() {
        let m = min_bsc_pseudoweight(&super::super::tests::triangle()).unwrap().unwrap();
        assert_eq!(m.weight.weight, 3);
        assert_eq!(m.witness.p, vec![frac(1, 3); 3]);
    }
}
