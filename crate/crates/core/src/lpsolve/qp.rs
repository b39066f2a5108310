//! Minimum squared norm over a polytope.
//!
//! Frank–Wolfe family method in the form of Wolfe's minimum-norm-point
//! algorithm: each major step calls the linear oracle (an `f64` simplex) for
//! the vertex minimizing `⟨x, v⟩`, then corrective minor steps move to the
//! affine minimum-norm point of the active vertex set, dropping (away-stepping
//! from) vertices whose weight would turn negative. The iteration stops when
//! the Frank–Wolfe duality gap `2(⟨x,x⟩ − ⟨x,v⟩)` falls below `tol·(1 + value)`.

use thiserror::Error;

use super::{lp_solve, LinearProgram, LpOutcome};

const MAX_MAJOR: usize = 10_000;
const MAX_MINOR: usize = 10_000;
const WEIGHT_EPS: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QpError {
    #[error("the feasible region is empty")]
    InfeasibleRegion,
    #[error("the feasible region is unbounded in the norm variables")]
    UnboundedRegion,
    #[error("no convergence after {iterations} iterations (gap {gap:e})")]
    NoConvergence { iterations: usize, gap: f64 },
}

/// `minimize Σ_{i < norm_vars} x_i²` subject to the constraints of `lp`
/// (its objective is ignored). Remaining variables are auxiliary.
#[derive(Debug, Clone)]
pub struct QpProblem {
    pub constraints: LinearProgram<f64>,
    pub norm_vars: usize,
}

impl QpProblem {
    /// Squared norm over all variables.
    pub fn new(constraints: LinearProgram<f64>) -> Self {
        let norm_vars = constraints.num_vars();
        Self {
            constraints,
            norm_vars,
        }
    }

    pub fn with_norm_vars(constraints: LinearProgram<f64>, norm_vars: usize) -> Self {
        assert!(norm_vars <= constraints.num_vars());
        Self {
            constraints,
            norm_vars,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QpSolution {
    /// Optimal squared norm.
    pub value: f64,
    /// Full point (norm variables first, then auxiliaries).
    pub point: Vec<f64>,
    /// Final duality gap.
    pub gap: f64,
    pub iterations: usize,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solves the symmetric system `m·x = rhs` by Gaussian elimination with
/// partial pivoting. Returns `None` when singular.
fn solve_dense(mut m: Vec<Vec<f64>>, mut rhs: Vec<f64>) -> Option<Vec<f64>> {
    let n = rhs.len();
    let scale = m
        .iter()
        .flatten()
        .fold(0.0f64, |a, &b| a.max(b.abs()))
        .max(1.0);
    for col in 0..n {
        let p = (col..n).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[p][col].abs() <= 1e-14 * scale {
            return None;
        }
        m.swap(col, p);
        rhs.swap(col, p);
        for r in col + 1..n {
            let f = m[r][col] / m[col][col];
            if f != 0.0 {
                for c in col..n {
                    m[r][c] -= f * m[col][c];
                }
                rhs[r] -= f * rhs[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| m[r][c] * x[c]).sum();
        x[r] = (rhs[r] - s) / m[r][r];
    }
    Some(x)
}

/// Affine minimum-norm combination of `atoms`: weights summing to one.
fn affine_min_norm(atoms: &[Vec<f64>]) -> Option<Vec<f64>> {
    let k = atoms.len();
    let mut m = vec![vec![0.0; k + 1]; k + 1];
    for i in 0..k {
        for j in 0..k {
            m[i][j] = dot(&atoms[i], &atoms[j]);
        }
        m[i][k] = 1.0;
        m[k][i] = 1.0;
    }
    let mut rhs = vec![0.0; k + 1];
    rhs[k] = 1.0;
    solve_dense(m, rhs).map(|mut x| {
        x.truncate(k);
        x
    })
}

struct Atom {
    norm_part: Vec<f64>,
    full: Vec<f64>,
}

fn combine(atoms: &[Atom], weights: &[f64], full: bool) -> Vec<f64> {
    let len = if full {
        atoms[0].full.len()
    } else {
        atoms[0].norm_part.len()
    };
    let mut x = vec![0.0; len];
    for (a, &w) in atoms.iter().zip(weights) {
        let src = if full { &a.full } else { &a.norm_part };
        for (xi, si) in x.iter_mut().zip(src) {
            *xi += w * si;
        }
    }
    x
}

fn oracle(qp: &QpProblem, direction: &[f64]) -> Result<Atom, QpError> {
    let mut lp = qp.constraints.clone();
    let mut obj = vec![0.0; lp.num_vars()];
    for (o, d) in obj.iter_mut().zip(direction) {
        *o = -d;
    }
    lp.set_objective(obj);
    match lp_solve(&lp) {
        LpOutcome::Optimal { point, .. } => Ok(Atom {
            norm_part: point[..qp.norm_vars].to_vec(),
            full: point,
        }),
        LpOutcome::Infeasible => Err(QpError::InfeasibleRegion),
        LpOutcome::Unbounded => Err(QpError::UnboundedRegion),
    }
}

/// Minimizes the squared norm of the first `norm_vars` variables over the
/// polytope, to relative duality gap `tol`.
pub fn qp_min_norm(qp: &QpProblem, tol: f64) -> Result<QpSolution, QpError> {
    let k = qp.norm_vars;
    let first = oracle(qp, &vec![0.0; k])?;
    let mut atoms = vec![first];
    let mut weights = vec![1.0];
    let mut x = atoms[0].norm_part.clone();
    let mut gap = f64::INFINITY;

    for major in 0..MAX_MAJOR {
        let v = oracle(qp, &x)?;
        let xx = dot(&x, &x);
        gap = 2.0 * (xx - dot(&x, &v.norm_part));
        if gap <= tol * (1.0 + xx) {
            let point = combine(&atoms, &weights, true);
            return Ok(QpSolution {
                value: xx,
                point,
                gap: gap.max(0.0),
                iterations: major,
            });
        }
        if atoms
            .iter()
            .any(|a| a.norm_part.iter().zip(&v.norm_part).all(|(p, q)| (p - q).abs() <= 1e-15))
        {
            // oracle returned an active vertex: no further progress possible
            let point = combine(&atoms, &weights, true);
            return Ok(QpSolution {
                value: xx,
                point,
                gap: gap.max(0.0),
                iterations: major,
            });
        }
        atoms.push(v);
        weights.push(0.0);

        for _ in 0..MAX_MINOR {
            let norms: Vec<Vec<f64>> = atoms.iter().map(|a| a.norm_part.clone()).collect();
            let Some(alpha) = affine_min_norm(&norms) else {
                // affinely dependent atoms: drop the lightest one and retry
                let (drop, _) = weights
                    .iter()
                    .enumerate()
                    .min_by(|a, b| a.1.total_cmp(b.1))
                    .expect("nonempty active set");
                atoms.remove(drop);
                weights.remove(drop);
                let s: f64 = weights.iter().sum();
                weights.iter_mut().for_each(|w| *w /= s);
                continue;
            };
            if alpha.iter().all(|&a| a > WEIGHT_EPS) {
                weights = alpha;
                break;
            }
            // away step: move towards alpha until a weight hits zero
            let theta = weights
                .iter()
                .zip(&alpha)
                .filter(|(_, &a)| a <= WEIGHT_EPS)
                .map(|(&w, &a)| if w - a > 0.0 { w / (w - a) } else { 0.0 })
                .fold(1.0f64, f64::min);
            for (w, a) in weights.iter_mut().zip(&alpha) {
                *w = (1.0 - theta) * *w + theta * a;
            }
            let mut i = 0;
            while i < atoms.len() {
                if weights[i] <= WEIGHT_EPS {
                    atoms.remove(i);
                    weights.remove(i);
                } else {
                    i += 1;
                }
            }
            let s: f64 = weights.iter().sum();
            weights.iter_mut().for_each(|w| *w /= s);
        }
        x = combine(&atoms, &weights, false);
    }
    Err(QpError::NoConvergence {
        iterations: MAX_MAJOR,
        gap,
    })
}
