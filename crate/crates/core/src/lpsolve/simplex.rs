use log::trace;

use super::{LinearProgram, LpOutcome, Relation};
use crate::scalar::Scalar;

/// Pivot budget for inexact scalars, where tolerance-based comparisons could
/// in principle defeat Bland's anti-cycling guarantee.
const INEXACT_PIVOT_LIMIT: usize = 200_000;

struct Tableau<T> {
    /// `m` rows of `cols + 1` entries; the last entry is the right-hand side.
    rows: Vec<Vec<T>>,
    basis: Vec<usize>,
    cols: usize,
    /// Columns allowed to enter the basis.
    enterable: Vec<bool>,
    pivots: usize,
}

impl<T: Scalar> Tableau<T> {
    fn rhs(&self, r: usize) -> &T {
        &self.rows[r][self.cols]
    }

    fn pivot(&mut self, r: usize, c: usize, obj: &mut [T]) {
        self.pivots += 1;
        if !T::EXACT {
            assert!(self.pivots < INEXACT_PIVOT_LIMIT, "simplex pivot budget exhausted");
        }
        let p = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v = v.clone() / p.clone();
            }
        }
        let nz: Vec<usize> = (0..=self.cols).filter(|&k| !self.rows[r][k].is_zero()).collect();
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for &k in &nz {
                row[k] = row[k].clone() - f.clone() * pivot_row[k].clone();
            }
            row[c] = T::zero();
        }
        if !obj[c].is_zero() {
            let f = obj[c].clone();
            for &k in &nz {
                obj[k] = obj[k].clone() - f.clone() * pivot_row[k].clone();
            }
            obj[c] = T::zero();
        }
        self.basis[r] = c;
    }

    /// Reduced costs and objective value for the cost vector `cost`:
    /// `obj[j] = cost_j − c_B·column_j`, `obj[cols] = −c_B·rhs`.
    fn reduced_costs(&self, cost: &[T]) -> Vec<T> {
        let mut obj: Vec<T> = cost.to_vec();
        obj.push(T::zero());
        for (r, &b) in self.basis.iter().enumerate() {
            let cb = cost[b].clone();
            if cb.is_zero() {
                continue;
            }
            for (k, o) in obj.iter_mut().enumerate() {
                let a = &self.rows[r][k];
                if !a.is_zero() {
                    *o = o.clone() - cb.clone() * a.clone();
                }
            }
        }
        obj
    }

    /// Runs simplex iterations maximizing the objective encoded in `obj`.
    /// Returns `false` when unbounded.
    fn optimize(&mut self, obj: &mut [T]) -> bool {
        loop {
            // Bland: lowest-index improving column
            let Some(enter) = (0..self.cols).find(|&j| self.enterable[j] && obj[j].is_pos()) else {
                return true;
            };
            let mut leave: Option<(usize, T)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][enter];
                if !a.is_pos() {
                    continue;
                }
                let ratio = self.rhs(r).clone() / a.clone();
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => {
                        let d = ratio.clone() - best.clone();
                        if d.near_zero() {
                            self.basis[r] < self.basis[*lr]
                        } else {
                            d.is_negative()
                        }
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            let Some((r, _)) = leave else {
                return false;
            };
            trace!("pivot row {r} col {enter} (basis var {})", self.basis[r]);
            self.pivot(r, enter, obj);
        }
    }
}

/// Solves `maximize c·x` over the program's constraints.
pub fn lp_solve<T: Scalar>(lp: &LinearProgram<T>) -> LpOutcome<T> {
    let n = lp.num_vars();
    // structural columns: one per variable plus a negative part for free ones
    let mut var_cols: Vec<(usize, Option<usize>)> = Vec::with_capacity(n);
    let mut ncols = 0;
    for j in 0..n {
        if lp.is_nonneg(j) {
            var_cols.push((ncols, None));
            ncols += 1;
        } else {
            var_cols.push((ncols, Some(ncols + 1)));
            ncols += 2;
        }
    }
    let n_struct = ncols;
    let n_slack = lp.rows().iter().filter(|r| r.relation != Relation::Eq).count();
    let slack_start = n_struct;

    // rows over structural + slack columns, artificials appended after
    let m = lp.rows().len();
    let mut body: Vec<Vec<T>> = Vec::with_capacity(m);
    let mut rhs: Vec<T> = Vec::with_capacity(m);
    let mut slack_of_row: Vec<Option<usize>> = Vec::with_capacity(m);
    let mut next_slack = slack_start;
    for row in lp.rows() {
        let mut v = vec![T::zero(); n_struct + n_slack];
        for (j, a) in row.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let (p, neg) = var_cols[j];
            v[p] = a.clone();
            if let Some(q) = neg {
                v[q] = -a.clone();
            }
        }
        let slack = match row.relation {
            Relation::Le => {
                v[next_slack] = T::one();
                next_slack += 1;
                Some(next_slack - 1)
            }
            Relation::Ge => {
                v[next_slack] = -T::one();
                next_slack += 1;
                Some(next_slack - 1)
            }
            Relation::Eq => None,
        };
        let mut b = row.rhs.clone();
        if b.is_negative() {
            for x in v.iter_mut() {
                *x = -x.clone();
            }
            b = -b;
        }
        body.push(v);
        rhs.push(b);
        slack_of_row.push(slack);
    }

    let mut basis = Vec::with_capacity(m);
    let mut art_rows = Vec::new();
    for r in 0..m {
        match slack_of_row[r] {
            Some(s) if body[r][s].is_pos() => basis.push(s),
            _ => {
                basis.push(usize::MAX);
                art_rows.push(r);
            }
        }
    }
    let n_art = art_rows.len();
    let total = n_struct + n_slack + n_art;
    let art_start = n_struct + n_slack;
    let mut rows: Vec<Vec<T>> = Vec::with_capacity(m);
    for (r, mut v) in body.into_iter().enumerate() {
        v.resize(total, T::zero());
        v.push(rhs[r].clone());
        rows.push(v);
    }
    for (a, &r) in art_rows.iter().enumerate() {
        rows[r][art_start + a] = T::one();
        basis[r] = art_start + a;
    }
    let mut tab = Tableau {
        rows,
        basis,
        cols: total,
        enterable: vec![true; total],
        pivots: 0,
    };

    // phase I: maximize −Σ artificials
    if n_art > 0 {
        let mut cost = vec![T::zero(); total];
        for c in cost.iter_mut().skip(art_start) {
            *c = -T::one();
        }
        let mut obj = tab.reduced_costs(&cost);
        tab.optimize(&mut obj);
        // obj[total] holds −(phase-one objective); feasible iff it is zero
        if obj[total].is_pos() || obj[total].is_neg() {
            return LpOutcome::Infeasible;
        }
        // drive artificials out of the basis, dropping redundant rows
        let mut r = 0;
        while r < tab.rows.len() {
            if tab.basis[r] >= art_start {
                let replacement = (0..art_start).find(|&j| !tab.rows[r][j].near_zero());
                match replacement {
                    Some(j) => {
                        let mut dummy = vec![T::zero(); total + 1];
                        tab.pivot(r, j, &mut dummy);
                    }
                    None => {
                        tab.rows.remove(r);
                        tab.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
        for e in tab.enterable.iter_mut().skip(art_start) {
            *e = false;
        }
    }

    // phase II
    let mut cost = vec![T::zero(); total];
    for (j, c) in lp.objective().iter().enumerate() {
        let (p, neg) = var_cols[j];
        cost[p] = c.clone();
        if let Some(q) = neg {
            cost[q] = -c.clone();
        }
    }
    let mut obj = tab.reduced_costs(&cost);
    if !tab.optimize(&mut obj) {
        return LpOutcome::Unbounded;
    }

    let mut col_value = vec![T::zero(); total];
    for (r, &b) in tab.basis.iter().enumerate() {
        col_value[b] = tab.rhs(r).clone();
    }
    let point: Vec<T> = var_cols
        .iter()
        .map(|&(p, neg)| match neg {
            Some(q) => col_value[p].clone() - col_value[q].clone(),
            None => col_value[p].clone(),
        })
        .collect();
    let value = lp.objective_value(&point);
    LpOutcome::Optimal { value, point }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, rat, Rational};

    fn lp1(coef: i64) -> LinearProgram<Rational> {
        let mut lp = LinearProgram::new(1);
        lp.set_objective(vec![rat(coef)]);
        lp
    }

    #[test]
    fn bounded_max() {
        let mut lp = lp1(1);
        lp.add_row(vec![rat(1)], Relation::Le, rat(1));
        lp.add_row(vec![rat(1)], Relation::Ge, rat(0));
        assert_eq!(
            lp_solve(&lp),
            LpOutcome::Optimal {
                value: rat(1),
                point: vec![rat(1)]
            }
        );
    }

    #[test]
    fn infeasible() {
        let mut lp = lp1(1);
        lp.add_row(vec![rat(1)], Relation::Ge, rat(1));
        lp.add_row(vec![rat(1)], Relation::Le, rat(0));
        assert_eq!(lp_solve(&lp), LpOutcome::Infeasible);
    }

    #[test]
    fn unbounded() {
        let mut lp = lp1(1);
        lp.add_row(vec![rat(1)], Relation::Ge, rat(0));
        assert_eq!(lp_solve(&lp), LpOutcome::Unbounded);
    }

    #[test]
    fn two_dimensional_vertex() {
        // max 3x + 2y s.t. x + y <= 4, x + 3y <= 6, x <= 3, x,y >= 0
        let mut lp: LinearProgram<Rational> = LinearProgram::nonnegative(2);
        lp.set_objective(vec![rat(3), rat(2)]);
        lp.add_row(vec![rat(1), rat(1)], Relation::Le, rat(4));
        lp.add_row(vec![rat(1), rat(3)], Relation::Le, rat(6));
        lp.add_row(vec![rat(1), rat(0)], Relation::Le, rat(3));
        let LpOutcome::Optimal { value, point } = lp_solve(&lp) else {
            panic!("expected optimum")
        };
        assert_eq!(value, rat(11));
        assert_eq!(point, vec![rat(3), rat(1)]);
    }

    #[test]
    fn equality_and_redundant_rows() {
        // x + y = 1 stated twice; max x − y with x,y >= 0
        let mut lp: LinearProgram<Rational> = LinearProgram::nonnegative(2);
        lp.set_objective(vec![rat(1), rat(-1)]);
        lp.add_row(vec![rat(1), rat(1)], Relation::Eq, rat(1));
        lp.add_row(vec![rat(2), rat(2)], Relation::Eq, rat(2));
        let LpOutcome::Optimal { value, .. } = lp_solve(&lp) else {
            panic!()
        };
        assert_eq!(value, rat(1));
    }

    #[test]
    fn free_variables_and_negative_rhs() {
        // max -x s.t. x >= -5/2 (free x)
        let mut lp = lp1(-1);
        lp.add_row(vec![rat(1)], Relation::Ge, frac(-5, 2));
        let LpOutcome::Optimal { value, point } = lp_solve(&lp) else {
            panic!()
        };
        assert_eq!(value, frac(5, 2));
        assert_eq!(point, vec![frac(-5, 2)]);
    }

    #[test]
    fn float_instantiation() {
        let mut lp: LinearProgram<f64> = LinearProgram::nonnegative(2);
        lp.set_objective(vec![3.0, 2.0]);
        lp.add_row(vec![1.0, 1.0], Relation::Le, 4.0);
        lp.add_row(vec![1.0, 3.0], Relation::Le, 6.0);
        lp.add_row(vec![1.0, 0.0], Relation::Le, 3.0);
        let LpOutcome::Optimal { value, .. } = lp_solve(&lp) else {
            panic!()
        };
        assert!((value - 11.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_cycling_example() {
        // Beale's example cycles under the textbook largest-coefficient rule
        let mut lp: LinearProgram<Rational> = LinearProgram::nonnegative(4);
        lp.set_objective(vec![frac(3, 4), rat(-150), frac(1, 50), rat(-6)]);
        lp.add_row(vec![frac(1, 4), rat(-60), frac(-1, 25), rat(9)], Relation::Le, rat(0));
        lp.add_row(vec![frac(1, 2), rat(-90), frac(-1, 50), rat(3)], Relation::Le, rat(0));
        lp.add_row(vec![rat(0), rat(0), rat(1), rat(0)], Relation::Le, rat(1));
        let LpOutcome::Optimal { value, .. } = lp_solve(&lp) else {
            panic!()
        };
        assert_eq!(value, frac(1, 20));
    }
}
