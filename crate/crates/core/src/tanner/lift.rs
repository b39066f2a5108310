//! Finite graph covers and reduction of cover codewords.

use num_bigint::BigInt;

use super::{Edge, Provenance, TannerError, TannerGraph};
use crate::polytope::{certify, Pseudocodeword};
use crate::scalar::Rational;

/// A degree-`degree` cover: `perms[e][a]` is the constraint copy joined to
/// copy `a` of the variable along base edge `e`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LiftSpec {
    pub degree: usize,
    pub perms: Vec<Vec<usize>>,
}

/// All permutations of `0..n` in lexicographic order.
pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for x in 0..used.len() {
            if !used[x] {
                used[x] = true;
                prefix.push(x);
                rec(prefix, used, out);
                prefix.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

impl LiftSpec {
    /// The trivial cover of degree `degree`.
    pub fn identity(g: &TannerGraph, degree: usize) -> Self {
        Self {
            degree,
            perms: vec![(0..degree).collect(); g.edges().len()],
        }
    }

    pub fn validate(&self, g: &TannerGraph) -> Result<(), TannerError> {
        if self.degree == 0 {
            return Err(TannerError::InvalidPermutation { edge: 0, degree: 0 });
        }
        if self.perms.len() != g.edges().len() {
            return Err(TannerError::SpecIncomplete {
                expected: g.edges().len(),
                found: self.perms.len(),
            });
        }
        for (edge, p) in self.perms.iter().enumerate() {
            let mut seen = vec![false; self.degree];
            let ok = p.len() == self.degree
                && p.iter().all(|&x| x < self.degree && !std::mem::replace(&mut seen[x], true));
            if !ok {
                return Err(TannerError::InvalidPermutation {
                    edge,
                    degree: self.degree,
                });
            }
        }
        Ok(())
    }

    /// One representative of every isomorphism class of degree-`degree`
    /// covers: edges of a spanning forest carry the identity, the remaining
    /// edges range over all permutations.
    pub fn up_to_isomorphism(g: &TannerGraph, degree: usize) -> Vec<Self> {
        let n = g.var_count();
        let mut parent: Vec<usize> = (0..n + g.constraint_count()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        let mut free = Vec::new();
        for (k, e) in g.edges().iter().enumerate() {
            let (a, b) = (find(&mut parent, e.var), find(&mut parent, n + e.check));
            if a == b {
                free.push(k);
            } else {
                parent[a] = b;
            }
        }
        let perms = permutations(degree);
        let identity: Vec<usize> = (0..degree).collect();
        let mut out = Vec::new();
        let mut idx = vec![0usize; free.len()];
        loop {
            let mut spec = vec![identity.clone(); g.edges().len()];
            for (slot, &k) in free.iter().enumerate() {
                spec[k] = perms[idx[slot]].clone();
            }
            out.push(Self { degree, perms: spec });
            let mut pos = 0;
            loop {
                if pos == idx.len() {
                    return out;
                }
                idx[pos] += 1;
                if idx[pos] < perms.len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
    }
}

/// Builds the cover: variable copy `(i, a)` is node `i·ℓ + a`, constraint copy
/// `(j, b)` is node `j·ℓ + b`; sockets are inherited from the base edge.
pub fn build_lift(g: &TannerGraph, spec: &LiftSpec) -> Result<TannerGraph, TannerError> {
    spec.validate(g)?;
    let l = spec.degree;
    let mut edges = Vec::with_capacity(l * g.edges().len());
    for (e, perm) in g.edges().iter().zip(&spec.perms) {
        for (a, &b) in perm.iter().enumerate() {
            edges.push(Edge {
                var: e.var * l + a,
                check: e.check * l + b,
                var_socket: e.var_socket,
                check_socket: e.check_socket,
            });
        }
    }
    let kinds = g
        .constraints()
        .iter()
        .flat_map(|c| std::iter::repeat_n(c.kind.clone(), l))
        .collect();
    TannerGraph::from_edges(g.var_count() * l, kinds, edges, Provenance::Lift)
}

/// Averages a cover codeword over each variable cloud.
pub fn reduce_cover_codeword(
    g: &TannerGraph,
    spec: &LiftSpec,
    cover_word: &[bool],
) -> Result<Pseudocodeword<Rational>, TannerError> {
    let cover = build_lift(g, spec)?;
    if !cover.is_codeword(cover_word)? {
        return Err(TannerError::NotACodewordInCover);
    }
    let l = spec.degree;
    let p = (0..g.var_count())
        .map(|i| {
            let ones = cover_word[i * l..(i + 1) * l].iter().filter(|&&b| b).count();
            Rational::new(BigInt::from(ones), BigInt::from(l))
        })
        .collect();
    Ok(certify(g, p).expect("reduced cover codewords lie in the fundamental polytope"))
}
