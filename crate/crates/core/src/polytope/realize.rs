//! Search for a finite cover and cover codeword reducing to a given vector.
//!
//! In a degree-`ℓ` cover the cloud of variable `i` carries `k_i = ℓ·p_i`
//! ones, placed on copies `0..k_i`. The cover exists iff at every constraint
//! the count vector `(k_t)` over its sockets is a sum of `ℓ` local codewords
//! (one per constraint copy); the edge permutations are then read off by
//! matching the ones of each socket to the ones of the variable cloud.

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::PolytopeError;
use crate::scalar::Rational;
use crate::tanner::{build_lift, LiftSpec, TannerGraph};

/// Variable guard.
pub const REALIZE_MAX_N: usize = 10;
/// Largest cover degree searched.
pub const REALIZE_MAX_DEGREE: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Realization {
    Found { spec: LiftSpec, cover_word: Vec<bool> },
    /// Inconclusive: no cover up to `max_degree` realizes the vector.
    NotFound { max_degree: usize },
}

/// Multiset of `slots` words (non-decreasing indices) summing to `counts`.
fn decompose(words: &[u64], counts: &mut [usize], slots: usize, start: usize, chosen: &mut Vec<u64>) -> bool {
    if slots == 0 {
        return counts.iter().all(Zero::is_zero);
    }
    let remaining: usize = counts.iter().sum();
    let max_weight = words.iter().map(|w| w.count_ones() as usize).max().unwrap_or(0);
    if remaining > slots * max_weight {
        return false;
    }
    for (idx, &w) in words.iter().enumerate().skip(start) {
        if (0..counts.len()).any(|t| w >> t & 1 == 1 && counts[t] == 0) {
            continue;
        }
        for (t, c) in counts.iter_mut().enumerate() {
            if w >> t & 1 == 1 {
                *c -= 1;
            }
        }
        chosen.push(w);
        if decompose(words, counts, slots - 1, idx, chosen) {
            return true;
        }
        chosen.pop();
        for (t, c) in counts.iter_mut().enumerate() {
            if w >> t & 1 == 1 {
                *c += 1;
            }
        }
    }
    false
}

fn realize_at(g: &TannerGraph, counts: &[usize], l: usize) -> Option<(LiftSpec, Vec<bool>)> {
    let mut edge_at = vec![Vec::new(); g.constraint_count()];
    for (k, e) in g.edges().iter().enumerate() {
        let slots = &mut edge_at[e.check];
        if slots.len() <= e.check_socket {
            slots.resize(e.check_socket + 1, 0);
        }
        slots[e.check_socket] = k;
    }
    let mut perms = vec![Vec::new(); g.edges().len()];
    for (j, c) in g.constraints().iter().enumerate() {
        let words = c.kind.local_codewords(c.degree());
        let mut local: Vec<usize> = c.vars.iter().map(|&v| counts[v]).collect();
        let mut chosen = Vec::with_capacity(l);
        if !decompose(&words, &mut local, l, 0, &mut chosen) {
            return None;
        }
        for (t, &v) in c.vars.iter().enumerate() {
            let ones: Vec<usize> = (0..l).filter(|&b| chosen[b] >> t & 1 == 1).collect();
            let zeros: Vec<usize> = (0..l).filter(|&b| chosen[b] >> t & 1 == 0).collect();
            debug_assert_eq!(ones.len(), counts[v]);
            perms[edge_at[j][t]] = ones.into_iter().chain(zeros).collect();
        }
    }
    let word = (0..g.var_count())
        .flat_map(|i| (0..l).map(move |a| (i, a)))
        .map(|(i, a)| a < counts[i])
        .collect();
    Some((LiftSpec { degree: l, perms }, word))
}

/// Looks for a cover of degree at most `max_degree` with a codeword whose
/// cloud averages equal `p`.
pub fn lift_realizability_check(
    g: &TannerGraph,
    p: &[Rational],
    max_degree: usize,
) -> Result<Realization, PolytopeError> {
    let n = g.var_count();
    if p.len() != n {
        return Err(PolytopeError::LengthMismatch { expected: n, found: p.len() });
    }
    if n > REALIZE_MAX_N {
        return Err(PolytopeError::SearchSpaceTooLarge { n, max: REALIZE_MAX_N });
    }
    if max_degree > REALIZE_MAX_DEGREE {
        return Err(PolytopeError::DegreeTooLarge {
            degree: max_degree,
            max: REALIZE_MAX_DEGREE,
        });
    }
    let zero = Rational::zero();
    let one = Rational::from_integer(1.into());
    if p.iter().any(|x| *x < zero || *x > one) {
        return Ok(Realization::NotFound { max_degree });
    }
    let denom = p
        .iter()
        .fold(num_bigint::BigInt::from(1), |acc, x| acc.lcm(x.denom()))
        .to_usize()
        .unwrap_or(usize::MAX);
    if denom > max_degree {
        return Err(PolytopeError::DegreeTooLarge {
            degree: denom,
            max: max_degree,
        });
    }
    for l in (denom..=max_degree).step_by(denom) {
        let counts: Vec<usize> = p
            .iter()
            .map(|x| (x * Rational::from_integer(l.into())).to_integer().to_usize().expect("small count"))
            .collect();
        if let Some((spec, cover_word)) = realize_at(g, &counts, l) {
            let cover = build_lift(g, &spec).map_err(|e| PolytopeError::SolverFailure(e.to_string()))?;
            if !cover.is_codeword(&cover_word).unwrap_or(false) {
                return Err(PolytopeError::SolverFailure("constructed cover word is not a codeword".into()));
            }
            return Ok(Realization::Found { spec, cover_word });
        }
    }
    Ok(Realization::NotFound { max_degree })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, rat};
    use crate::tanner::{reduce_cover_codeword, ConstraintKind, Provenance};

    fn found(r: Realization) -> (LiftSpec, Vec<bool>) {
        match r {
            Realization::Found { spec, cover_word } => (spec, cover_word),
            other => panic!("expected a realization, got {other:?}"),
        }
    }

    #[test]
    fn codeword_is_trivial_cover() {
        let g = super::super::tests::triangle();
        let (spec, word) = found(lift_realizability_check(&g, &vec![rat(1); 3], 1).unwrap());
        assert_eq!(spec, LiftSpec::identity(&g, 1));
        assert_eq!(word, vec![true; 3]);
    }

    #[test]
    fn spc2_half() {
        let g = TannerGraph::new(2, vec![ConstraintKind::SimpleParity], &[(0, 0), (1, 0)], Provenance::Imported).unwrap();
        let p = vec![frac(1, 2); 2];
        let (spec, word) = found(lift_realizability_check(&g, &p, 2).unwrap());
        assert_eq!(spec.degree, 2);
        assert_eq!(reduce_cover_codeword(&g, &spec, &word).unwrap().p, p);
    }

    #[test]
    fn triangle_third() {
        let g = super::super::tests::triangle();
        let p = vec![frac(1, 3); 3];
        let (spec, word) = found(lift_realizability_check(&g, &p, 3).unwrap());
        assert_eq!(reduce_cover_codeword(&g, &spec, &word).unwrap().p, p);
    }

    #[test]
    fn not_realizable_and_guards() {
        let g = TannerGraph::new(
            3,
            vec![ConstraintKind::SimpleParity],
            &[(0, 0), (1, 0), (2, 0)],
            Provenance::Imported,
        )
        .unwrap();
        assert_eq!(
            lift_realizability_check(&g, &[rat(1), rat(0), rat(0)], 4).unwrap(),
            Realization::NotFound { max_degree: 4 }
        );
        assert!(matches!(
            lift_realizability_check(&g, &vec![frac(1, 5); 3], 4),
            Err(PolytopeError::DegreeTooLarge { degree: 5, .. })
        ));
    }
}
