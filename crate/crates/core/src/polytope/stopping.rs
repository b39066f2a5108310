//! Minimum stopping sets, simple and generalized.

use std::collections::HashSet;

use serde::Serialize;

use super::{certify, cone::cone_program, PolytopeError, Pseudocodeword};
use crate::lpsolve::{lp_solve, LpOutcome, Relation};
use crate::scalar::{rat, Rational};
use crate::tanner::{ConstraintKind, TannerGraph};

/// Variable guard for simple graphs.
pub const SIMPLE_MAX_N: usize = 22;
/// Variable guard for generalized graphs (one LP per candidate support).
pub const GENERALIZED_MAX_N: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StoppingKind {
    Simple,
    Generalized,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StoppingSet {
    pub support: Vec<usize>,
    pub kind: StoppingKind,
    /// Normalized cone point with exactly this support.
    pub witness: Pseudocodeword<Rational>,
    /// Whether every constraint meeting the set meets it at least `dmin`
    /// times (the counting criterion for subcodes without idle components).
    pub simplified_criterion: bool,
}

fn socket_mask(g: &TannerGraph, j: usize, set: u64) -> u64 {
    g.constraint(j).local_mask_of(|v| set >> v & 1 == 1)
}

/// Every constraint meets `set` zero times or at least twice.
pub fn is_simple_stopping_set(g: &TannerGraph, set: u64) -> bool {
    (0..g.constraint_count()).all(|j| socket_mask(g, j, set).count_ones() != 1)
}

/// Counting criterion: every constraint meeting `set` meets it at least
/// `dmin` times.
pub fn meets_simplified_criterion(g: &TannerGraph, set: u64) -> bool {
    g.constraints().iter().enumerate().all(|(j, c)| {
        let hits = socket_mask(g, j, set).count_ones() as usize;
        let w = c.kind.subcode().map_or(2, |s| s.dmin());
        hits == 0 || hits >= w
    })
}

/// Local necessary condition: the restriction is a union of supports of local
/// codewords contained in it.
fn locally_closed(kind: &ConstraintKind, local: u64) -> bool {
    match kind {
        ConstraintKind::SimpleParity => local.count_ones() != 1,
        ConstraintKind::Subcode(s) if s.is_single_parity() => local.count_ones() != 1,
        ConstraintKind::Subcode(s) => s.is_union_of_codeword_supports(local),
    }
}

/// Cone point with support exactly `set`, normalized to sum one, if any.
pub fn is_generalized_stopping_set(g: &TannerGraph, set: u64) -> Option<Vec<Rational>> {
    if set == 0 {
        return None;
    }
    let n = g.var_count();
    if !(0..g.constraint_count()).all(|j| locally_closed(&g.constraint(j).kind, socket_mask(g, j, set))) {
        return None;
    }
    let mut lp = cone_program::<Rational>(g, 0);
    for i in 0..n {
        let rel = if set >> i & 1 == 1 { Relation::Ge } else { Relation::Eq };
        let rhs = if rel == Relation::Ge { rat(1) } else { rat(0) };
        lp.add_sparse_row(&[(i, rat(1))], rel, rhs);
    }
    match lp_solve(&lp) {
        LpOutcome::Optimal { point, .. } => {
            let q = &point[..n];
            let total = q.iter().fold(rat(0), |a, x| a + x);
            Some(q.iter().map(|x| x / &total).collect())
        }
        _ => None,
    }
}

fn to_indices(set: u64, n: usize) -> Vec<usize> {
    (0..n).filter(|&i| set >> i & 1 == 1).collect()
}

struct Search<'a> {
    g: &'a TannerGraph,
    generalized: bool,
    best: Option<(u64, Option<Vec<Rational>>)>,
    best_size: u32,
    visited: HashSet<u64>,
}

impl Search<'_> {
    fn violated(&self, set: u64) -> Option<usize> {
        (0..self.g.constraint_count())
            .filter(|&j| !locally_closed(&self.g.constraint(j).kind, socket_mask(self.g, j, set)))
            .min_by_key(|&j| self.g.constraint(j).degree())
    }

    fn dfs(&mut self, set: u64, min_var: usize) {
        if set.count_ones() >= self.best_size || !self.visited.insert(set) {
            return;
        }
        let n = self.g.var_count();
        let candidates: Vec<usize> = match self.violated(set) {
            Some(j) => self
                .g
                .constraint(j)
                .vars
                .iter()
                .copied()
                .filter(|&u| u > min_var && set >> u & 1 == 0)
                .collect(),
            None if !self.generalized => {
                self.best_size = set.count_ones();
                self.best = Some((set, None));
                return;
            }
            None => {
                if let Some(q) = is_generalized_stopping_set(self.g, set) {
                    self.best_size = set.count_ones();
                    self.best = Some((set, Some(q)));
                    return;
                }
                (min_var + 1..n).filter(|&u| set >> u & 1 == 0).collect()
            }
        };
        for u in candidates {
            self.dfs(set | 1 << u, min_var);
        }
    }
}

/// Smallest nonempty stopping set. Simple graphs use the degree-counting
/// definition; graphs with genuine subcodes use supports of cone points.
/// `None` when no nonempty stopping set exists.
pub fn min_stopping_set(g: &TannerGraph) -> Result<Option<StoppingSet>, PolytopeError> {
    let n = g.var_count();
    let generalized = !g.is_simple();
    let max = if generalized { GENERALIZED_MAX_N } else { SIMPLE_MAX_N };
    if n > max {
        return Err(PolytopeError::SearchSpaceTooLarge { n, max });
    }
    let mut search = Search {
        g,
        generalized,
        best: None,
        best_size: n as u32 + 1,
        visited: HashSet::new(),
    };
    for v in 0..n {
        search.dfs(1 << v, v);
    }
    let Some((set, q)) = search.best else {
        return Ok(None);
    };
    let support = to_indices(set, n);
    let q = q.unwrap_or_else(|| {
        let share = Rational::new(1.into(), (support.len() as i64).into());
        (0..n)
            .map(|i| if set >> i & 1 == 1 { share.clone() } else { rat(0) })
            .collect()
    });
    let witness = certify(g, q).map_err(|e| PolytopeError::SolverFailure(e.to_string()))?;
    Ok(Some(StoppingSet {
        support,
        kind: if generalized {
            StoppingKind::Generalized
        } else {
            StoppingKind::Simple
        },
        witness,
        simplified_criterion: meets_simplified_criterion(g, set),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subcodes::SubcodeSpec;
    use crate::tanner::{build_case_c, BaseGraph, Provenance};
    use std::sync::Arc;

    fn brute_simple(g: &TannerGraph) -> Option<u32> {
        (1u64..1 << g.var_count())
            .filter(|&s| is_simple_stopping_set(g, s))
            .map(u64::count_ones)
            .min()
    }

    fn brute_generalized(g: &TannerGraph) -> Option<u32> {
        (1u64..1 << g.var_count())
            .filter(|&s| is_generalized_stopping_set(g, s).is_some())
            .map(u64::count_ones)
            .min()
    }

    #[test]
    fn examples() {
        let spc = TannerGraph::new(
            4,
            vec![ConstraintKind::SimpleParity],
            &[(0, 0), (1, 0), (2, 0), (3, 0)],
            Provenance::Imported,
        )
        .unwrap();
        assert_eq!(min_stopping_set(&spc).unwrap().unwrap().support.len(), 2);
        let tri = super::super::tests::triangle();
        assert_eq!(min_stopping_set(&tri).unwrap().unwrap().support, vec![0, 1, 2]);
        let k4 = build_case_c(&BaseGraph::complete(4), Arc::new(SubcodeSpec::builtin("spc3").unwrap())).unwrap();
        let s = min_stopping_set(&k4).unwrap().unwrap();
        assert_eq!(s.support.len(), 3);
        assert_eq!(Some(3), brute_simple(&k4));
    }

    #[test]
    fn generalized_matches_brute_force() {
        for name in ["rep3", "spc3"] {
            let g = build_case_c(&BaseGraph::complete(4), Arc::new(SubcodeSpec::builtin(name).unwrap())).unwrap();
            let s = min_stopping_set(&g).unwrap().unwrap();
            assert_eq!(Some(s.support.len() as u32), brute_generalized(&g), "{name}");
        }
        let ham = Arc::new(SubcodeSpec::builtin("hamming74").unwrap());
        let g = crate::tanner::build_case_b(2, 7, 7, ham, 1).unwrap();
        let s = min_stopping_set(&g).unwrap().unwrap();
        assert_eq!(s.kind, StoppingKind::Generalized);
        assert_eq!(Some(s.support.len() as u32), brute_generalized(&g));
    }

    #[test]
    fn degree_one_checks_have_no_stopping_set() {
        let g = TannerGraph::new(2, vec![ConstraintKind::SimpleParity; 2], &[(0, 0), (1, 1)], Provenance::Imported)
            .unwrap();
        assert!(min_stopping_set(&g).unwrap().is_none());
    }
}
