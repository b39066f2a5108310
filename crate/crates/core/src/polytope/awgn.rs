//! AWGN pseudoweight extremes over the normalized fundamental cone.
//!
//! On `{q in the cone, Σq = 1}` the weight is `1 / Σq²`. The smallest weight
//! therefore maximizes the convex function `Σq²`, which is attained at a
//! vertex; it is found by spatial branch-and-bound with secant
//! over-estimators `q_i² ≤ (l_i + u_i) q_i − l_i u_i` on boxes `[l, u]`, and
//! incumbents improved by linearized ascent. The largest weight minimizes
//! `Σq²` and is a convex quadratic program.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{cone::cone_program, PolytopeError, Pseudocodeword};
use crate::lpsolve::{lp_solve, qp_min_norm, LinearProgram, LpOutcome, QpProblem, Relation};
use crate::tanner::TannerGraph;

/// Variable guard.
pub const AWGN_MAX_N: usize = 64;
/// Branch-and-bound node budget.
pub const AWGN_NODE_BUDGET: usize = 50_000;
/// Relative optimality tolerance.
pub const AWGN_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct AwgnMinimum {
    /// Weight of the witness (an upper bound on the minimum).
    pub weight: f64,
    /// Certified lower bound on the minimum.
    pub lower: f64,
    pub witness: Pseudocodeword<f64>,
    pub nodes: usize,
    /// Whether the interval closed to the tolerance within the node budget.
    pub certified: bool,
}

fn sum_sq(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

fn normalized_program(g: &TannerGraph) -> LinearProgram<f64> {
    let n = g.var_count();
    let mut lp = cone_program::<f64>(g, 0);
    lp.add_sparse_row(&(0..n).map(|i| (i, 1.0)).collect::<Vec<_>>(), Relation::Eq, 1.0);
    lp
}

fn solve(lp: &LinearProgram<f64>) -> Result<Option<(f64, Vec<f64>)>, PolytopeError> {
    match lp_solve(lp) {
        LpOutcome::Optimal { value, point } => Ok(Some((value, point))),
        LpOutcome::Infeasible => Ok(None),
        LpOutcome::Unbounded => Err(PolytopeError::SolverFailure("normalized cone is unbounded".into())),
    }
}

struct Node {
    bound: f64,
    lower: Vec<f64>,
    upper: Vec<f64>,
    point: Vec<f64>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.bound.total_cmp(&other.bound) == Ordering::Equal
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        self.bound.total_cmp(&other.bound)
    }
}

struct Solver<'a> {
    base: &'a LinearProgram<f64>,
    n: usize,
    initial_upper: Vec<f64>,
    best: f64,
    best_point: Vec<f64>,
}

impl Solver<'_> {
    /// Linearized ascent from `x` over the whole normalized cone.
    fn improve(&mut self, mut x: Vec<f64>) -> Result<(), PolytopeError> {
        let mut value = sum_sq(&x[..self.n]);
        for _ in 0..100 {
            let mut lp = self.base.clone();
            let mut obj = vec![0.0; lp.num_vars()];
            obj[..self.n].iter_mut().zip(&x).for_each(|(o, v)| *o = 2.0 * v);
            lp.set_objective(obj);
            let Some((_, y)) = solve(&lp)? else { break };
            let next = sum_sq(&y[..self.n]);
            if next <= value * (1.0 + 1e-12) {
                break;
            }
            value = next;
            x = y[..self.n].to_vec();
        }
        if value > self.best {
            self.best = value;
            self.best_point = x[..self.n].to_vec();
        }
        Ok(())
    }

    /// Secant relaxation on the box; `None` when the box is infeasible.
    fn relax(&self, lower: Vec<f64>, upper: Vec<f64>) -> Result<Option<Node>, PolytopeError> {
        let mut lp = self.base.clone();
        let mut obj = vec![0.0; lp.num_vars()];
        let mut constant = 0.0;
        for i in 0..self.n {
            obj[i] = lower[i] + upper[i];
            constant -= lower[i] * upper[i];
            if lower[i] > 0.0 {
                lp.add_sparse_row(&[(i, 1.0)], Relation::Ge, lower[i]);
            }
            if upper[i] < self.initial_upper[i] {
                lp.add_sparse_row(&[(i, 1.0)], Relation::Le, upper[i]);
            }
        }
        lp.set_objective(obj);
        Ok(solve(&lp)?.map(|(value, point)| Node {
            bound: value + constant,
            lower,
            upper,
            point: point[..self.n].to_vec(),
        }))
    }
}

/// Minimum AWGN pseudoweight with a witness attaining `weight`; `None` when
/// the cone is trivial.
pub fn min_awgn_pseudoweight(g: &TannerGraph) -> Result<Option<AwgnMinimum>, PolytopeError> {
    let n = g.var_count();
    if n > AWGN_MAX_N {
        return Err(PolytopeError::SearchSpaceTooLarge { n, max: AWGN_MAX_N });
    }
    let base = normalized_program(g);
    let mut initial_upper = vec![0.0; n];
    for (i, u) in initial_upper.iter_mut().enumerate() {
        let mut lp = base.clone();
        let mut obj = vec![0.0; lp.num_vars()];
        obj[i] = 1.0;
        lp.set_objective(obj);
        match solve(&lp)? {
            Some((value, _)) => *u = value.clamp(0.0, 1.0),
            None => return Ok(None),
        }
    }
    let mut solver = Solver {
        base: &base,
        n,
        initial_upper: initial_upper.clone(),
        best: 0.0,
        best_point: Vec::new(),
    };
    let mut heap = BinaryHeap::new();
    let root = solver
        .relax(vec![0.0; n], initial_upper)?
        .ok_or_else(|| PolytopeError::SolverFailure("root relaxation infeasible".into()))?;
    solver.improve(root.point.clone())?;
    heap.push(root);
    let mut nodes = 1;
    let (certified, upper_bound) = loop {
        let Some(node) = heap.pop() else {
            break (true, solver.best);
        };
        if node.bound <= solver.best * (1.0 + AWGN_TOLERANCE) {
            break (true, node.bound);
        }
        if nodes >= AWGN_NODE_BUDGET {
            break (false, node.bound);
        }
        let value = sum_sq(&node.point);
        if value > solver.best {
            solver.improve(node.point.clone())?;
        }
        let (branch, spread) = (0..n)
            .map(|i| (i, (node.upper[i] - node.point[i]) * (node.point[i] - node.lower[i])))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("at least one variable");
        if spread <= 1e-15 {
            continue;
        }
        let (lo, hi) = (node.lower[branch], node.upper[branch]);
        let mut split = node.point[branch];
        if split - lo < 1e-3 * (hi - lo) || hi - split < 1e-3 * (hi - lo) {
            split = 0.5 * (lo + hi);
        }
        let mut left_upper = node.upper.clone();
        left_upper[branch] = split;
        let mut right_lower = node.lower.clone();
        right_lower[branch] = split;
        for (l, u) in [(node.lower.clone(), left_upper), (right_lower, node.upper.clone())] {
            nodes += 1;
            if let Some(child) = solver.relax(l, u)? {
                if child.bound > solver.best * (1.0 + AWGN_TOLERANCE) {
                    heap.push(child);
                } else if sum_sq(&child.point) > solver.best {
                    solver.improve(child.point)?;
                }
            }
        }
    };
    let best = solver.best;
    let mut witness = solver.best_point;
    witness.iter_mut().for_each(|x| {
        if x.abs() < 1e-15 {
            *x = 0.0;
        }
    });
    Ok(Some(AwgnMinimum {
        weight: 1.0 / best,
        lower: 1.0 / upper_bound.max(best),
        witness: Pseudocodeword {
            p: witness,
            certificate: None,
        },
        nodes,
        certified,
    }))
}

/// Largest AWGN pseudoweight, from the minimum-norm point of the normalized
/// cone.
pub fn max_awgn_pseudoweight(g: &TannerGraph, tol: f64) -> Result<Option<(f64, Vec<f64>)>, PolytopeError> {
    let n = g.var_count();
    if n > AWGN_MAX_N {
        return Err(PolytopeError::SearchSpaceTooLarge { n, max: AWGN_MAX_N });
    }
    let qp = QpProblem::with_norm_vars(normalized_program(g), n);
    match qp_min_norm(&qp, tol) {
        Ok(sol) => Ok(Some((1.0 / sol.value, sol.point[..n].to_vec()))),
        Err(crate::lpsolve::QpError::InfeasibleRegion) => Ok(None),
        Err(e) => Err(PolytopeError::SolverFailure(e.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tanner::{ConstraintKind, Provenance};

    fn repetition_cycle(n: usize) -> TannerGraph {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| [(i, i), ((i + 1) % n, i)]).collect();
        TannerGraph::new(n, vec![ConstraintKind::SimpleParity; n], &pairs, Provenance::Imported).unwrap()
    }

    #[test]
    fn spc3_minimum_is_two() {
        let g = TannerGraph::new(
            3,
            vec![ConstraintKind::SimpleParity],
            &[(0, 0), (1, 0), (2, 0)],
            Provenance::Imported,
        )
        .unwrap();
        let m = min_awgn_pseudoweight(&g).unwrap().unwrap();
        assert!(m.certified);
        assert!((m.weight - 2.0).abs() < 1e-9);
        assert!(m.lower <= m.weight && m.weight - m.lower < 1e-7);
        let (max, _) = max_awgn_pseudoweight(&g, 1e-10).unwrap().unwrap();
        assert!((max - 3.0).abs() < 1e-6);
    }

    #[test]
    fn repetition_cycles() {
        for n in 3..8 {
            let m = min_awgn_pseudoweight(&repetition_cycle(n)).unwrap().unwrap();
            assert!((m.weight - n as f64).abs() < 1e-6, "n={n}: {}", m.weight);
        }
    }

    #[test]
    fn trivial_cone() {
        let g = TannerGraph::new(1, vec![ConstraintKind::SimpleParity], &[(0, 0)], Provenance::Imported).unwrap();
        assert!(min_awgn_pseudoweight(&g).unwrap().is_none());
    }
}
