//! Linear programming and min-norm quadratic programming.
//!
//! [`lp_solve`] is a two-phase dense tableau simplex with Bland's rule. It is
//! generic over [`Scalar`]: with [`Rational`](crate::Rational) it is exact and
//! terminates on every input; with `f64` it is the fast linear oracle used
//! inside [`qp_min_norm`].

mod qp;
mod simplex;

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

pub use qp::{qp_min_norm, QpError, QpProblem, QpSolution};
pub use simplex::lp_solve;

/// Row sense.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpRow<T> {
    pub coeffs: Vec<T>,
    pub relation: Relation,
    pub rhs: T,
}

/// `maximize objective·x` subject to the rows. Variables are free unless
/// marked nonnegative.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram<T> {
    num_vars: usize,
    nonneg: Vec<bool>,
    rows: Vec<LpRow<T>>,
    objective: Vec<T>,
}

impl<T: Scalar> LinearProgram<T> {
    /// A program over `num_vars` free variables with zero objective.
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            nonneg: vec![false; num_vars],
            rows: Vec::new(),
            objective: vec![T::zero(); num_vars],
        }
    }

    /// A program whose variables are all nonnegative.
    pub fn nonnegative(num_vars: usize) -> Self {
        let mut lp = Self::new(num_vars);
        lp.nonneg.fill(true);
        lp
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn rows(&self) -> &[LpRow<T>] {
        &self.rows
    }

    pub fn objective(&self) -> &[T] {
        &self.objective
    }

    pub fn is_nonneg(&self, var: usize) -> bool {
        self.nonneg[var]
    }

    pub fn set_nonneg(&mut self, var: usize, nonneg: bool) {
        self.nonneg[var] = nonneg;
    }

    pub fn set_objective(&mut self, objective: Vec<T>) {
        assert_eq!(objective.len(), self.num_vars, "objective width");
        self.objective = objective;
    }

    /// Appends a dense row.
    pub fn add_row(&mut self, coeffs: Vec<T>, relation: Relation, rhs: T) {
        assert_eq!(coeffs.len(), self.num_vars, "row width");
        self.rows.push(LpRow {
            coeffs,
            relation,
            rhs,
        });
    }

    /// Appends a row given as `(variable, coefficient)` pairs; repeated
    /// variables accumulate.
    pub fn add_sparse_row(&mut self, terms: &[(usize, T)], relation: Relation, rhs: T) {
        let mut coeffs = vec![T::zero(); self.num_vars];
        for (v, c) in terms {
            coeffs[*v] = coeffs[*v].clone() + c.clone();
        }
        self.add_row(coeffs, relation, rhs);
    }

    /// Whether `x` satisfies every row and sign restriction, with `slack`
    /// allowed violation per row.
    pub fn is_feasible(&self, x: &[T], slack: &T) -> bool {
        if x.len() != self.num_vars {
            return false;
        }
        let neg_slack = -slack.clone();
        if x
            .iter()
            .zip(&self.nonneg)
            .any(|(v, &nn)| nn && *v < neg_slack)
        {
            return false;
        }
        self.rows.iter().all(|row| {
            let lhs = row
                .coeffs
                .iter()
                .zip(x)
                .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone());
            let diff = lhs - row.rhs.clone();
            match row.relation {
                Relation::Le => diff <= *slack,
                Relation::Ge => diff >= neg_slack,
                Relation::Eq => diff.abs() <= *slack,
            }
        })
    }

    pub fn objective_value(&self, x: &[T]) -> T {
        self.objective
            .iter()
            .zip(x)
            .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }
}

/// Result of [`lp_solve`].
#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome<T> {
    Optimal { value: T, point: Vec<T> },
    Infeasible,
    Unbounded,
}

impl<T> LpOutcome<T> {
    pub fn is_optimal(&self) -> bool {
        matches!(self, LpOutcome::Optimal { .. })
    }
}
