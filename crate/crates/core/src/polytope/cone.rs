//! Linear description of the fundamental cone.

use crate::lpsolve::{LinearProgram, Relation};
use crate::scalar::Scalar;
use crate::tanner::TannerGraph;

/// Nonnegative program whose feasible `q` (variables `0..n`) is the
/// fundamental cone of `g`. Variables `n..n+extra` are left free of rows for
/// the caller; multipliers follow them.
///
/// Parity constraints use `q_t ≤ Σ_{s≠t} q_s`. Other subcodes use
/// `q_t = Σ_{c ∋ t} λ_c` over nonzero local codewords `c`.
pub fn cone_program<T: Scalar>(g: &TannerGraph, extra: usize) -> LinearProgram<T> {
    let n = g.var_count();
    let multipliers: usize = g
        .constraints()
        .iter()
        .filter(|c| !c.kind.is_parity())
        .map(|c| c.kind.local_codewords(c.degree()).len() - 1)
        .sum();
    let mut lp = LinearProgram::nonnegative(n + extra + multipliers);
    let mut next = n + extra;
    for c in g.constraints() {
        if c.kind.is_parity() {
            for (t, &v) in c.vars.iter().enumerate() {
                let mut terms = vec![(v, T::one())];
                terms.extend(
                    c.vars
                        .iter()
                        .enumerate()
                        .filter(|&(s, _)| s != t)
                        .map(|(_, &u)| (u, -T::one())),
                );
                lp.add_sparse_row(&terms, Relation::Le, T::zero());
            }
        } else {
            let words: Vec<u64> = c
                .kind
                .local_codewords(c.degree())
                .into_iter()
                .filter(|&w| w != 0)
                .collect();
            for (t, &v) in c.vars.iter().enumerate() {
                let mut terms = vec![(v, T::one())];
                terms.extend(
                    words
                        .iter()
                        .enumerate()
                        .filter(|&(_, &w)| w >> t & 1 == 1)
                        .map(|(k, _)| (next + k, -T::one())),
                );
                lp.add_sparse_row(&terms, Relation::Eq, T::zero());
            }
            next += words.len();
        }
    }
    lp
}
