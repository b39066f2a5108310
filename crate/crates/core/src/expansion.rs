//! Vertex expansion of the variable side of a Tanner graph, and the
//! Alon–Chung and Janwa–Lal edge-count lemmas with exhaustive checkers.
//!
//! A graph is an `(αn, δc)` expander when every variable subset `U` with
//! `|U| < αn` has at least `δc|U|` constraint neighbours. The profile computes
//! the best such `δ` exactly by scanning every qualifying subset.

use std::thread;

use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::scalar::{frac, rational_str, Rational, Scalar};
use crate::spectral::{spectrum, SpectralError};
use crate::tanner::{BaseGraph, BipartiteGraph, TannerGraph};

/// Largest admissible `⌈αn⌉ − 1`.
pub const EXPANSION_MAX_CAP: usize = 22;
/// Largest number of subsets a single profile may scan.
pub const EXPANSION_SUBSET_BUDGET: u128 = 1 << 28;
/// Vertex guard for [`verify_alon_chung`].
pub const ALON_CHUNG_MAX_N: usize = 22;
/// Vertex guard (both sides) for [`verify_janwa_lal`].
pub const JANWA_LAL_MAX_VERTICES: usize = 24;

#[derive(Debug, Error)]
pub enum ExpansionError {
    #[error("subset space too large: {0}")]
    SubsetSpaceTooLarge(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("graph is not regular: {0}")]
    NotRegular(String),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// Fewest neighbours over all variable subsets of one size.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SizeMinimum {
    pub size: usize,
    pub neighbors: usize,
    /// Lexicographically first subset attaining the minimum.
    pub witness: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpansionProfile {
    #[serde(with = "rational_str")]
    pub alpha: Rational,
    #[serde(with = "rational_str")]
    pub alpha_n: Rational,
    /// Common variable degree.
    pub c: usize,
    #[serde(with = "rational_str")]
    pub delta: Rational,
    pub witness: Vec<usize>,
    pub witness_neighbors: usize,
    /// Largest subset size scanned, `⌈αn⌉ − 1`.
    pub cap: usize,
    /// No nonempty subset qualifies; `delta` is then 1 by convention.
    pub vacuous: bool,
    pub per_size: Vec<SizeMinimum>,
}

impl ExpansionProfile {
    /// Expansion ratio over subsets of size below `k`, or `None` when no
    /// such subset was scanned.
    pub fn delta_below(&self, k: usize) -> Option<Rational> {
        self.per_size
            .iter()
            .filter(|s| s.size < k)
            .map(|s| ratio(s.neighbors, self.c, s.size))
            .min()
    }
}

fn ratio(neighbors: usize, c: usize, size: usize) -> Rational {
    frac(neighbors as i64, (c * size) as i64)
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn common_var_degree(g: &TannerGraph) -> Result<usize, ExpansionError> {
    let n = g.var_count();
    if n == 0 {
        return Err(ExpansionError::Domain("graph has no variables".into()));
    }
    let c = g.var_degree(0);
    if (0..n).any(|i| g.var_degree(i) != c) {
        return Err(ExpansionError::NotRegular("variable degrees differ".into()));
    }
    if c == 0 {
        return Err(ExpansionError::Domain("variables have no constraints".into()));
    }
    Ok(c)
}

struct Scan<'a> {
    nbrs: &'a [Vec<u64>],
    cap: usize,
    unions: Vec<Vec<u64>>,
    chosen: Vec<usize>,
    best: Vec<Option<(usize, Vec<usize>)>>,
}

impl Scan<'_> {
    fn visit(&mut self, depth: usize, start: usize) {
        let count: usize = self.unions[depth].iter().map(|w| w.count_ones() as usize).sum();
        let slot = &mut self.best[depth];
        if slot.as_ref().is_none_or(|(b, _)| count < *b) {
            *slot = Some((count, self.chosen.clone()));
        }
        if depth + 1 >= self.cap + 1 {
            return;
        }
        for j in start..self.nbrs.len() {
            let (head, tail) = self.unions.split_at_mut(depth + 1);
            tail[0]
                .iter_mut()
                .zip(head[depth].iter().zip(&self.nbrs[j]))
                .for_each(|(dst, (a, b))| *dst = a | b);
            self.chosen.push(j);
            self.visit(depth + 1, j + 1);
            self.chosen.pop();
        }
    }
}

/// Number of nonempty subsets of size at most `cap` among `n` elements.
pub fn subset_count(n: usize, cap: usize) -> u128 {
    (1..=cap.min(n)).map(|k| binomial(n, k)).sum()
}

/// Fewest neighbours for every subset size `1..=max_size`.
///
/// The scan is split by the smallest element of the subset and the parts are
/// merged by (neighbour count, witness); the result does not depend on the
/// split.
pub fn expansion_by_size(g: &TannerGraph, max_size: usize) -> Result<Vec<SizeMinimum>, ExpansionError> {
    let n = g.var_count();
    let max_size = max_size.min(n);
    if max_size > EXPANSION_MAX_CAP {
        return Err(ExpansionError::SubsetSpaceTooLarge(format!(
            "subset size cap {max_size} exceeds {EXPANSION_MAX_CAP}"
        )));
    }
    let total = subset_count(n, max_size);
    if total > EXPANSION_SUBSET_BUDGET {
        return Err(ExpansionError::SubsetSpaceTooLarge(format!(
            "{total} subsets exceed the budget of {EXPANSION_SUBSET_BUDGET}"
        )));
    }
    if max_size == 0 {
        return Ok(Vec::new());
    }
    let words = g.constraint_count().div_ceil(64).max(1);
    let nbrs: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            let mut bits = vec![0u64; words];
            for &j in g.var_checks(i) {
                bits[j / 64] |= 1 << (j % 64);
            }
            bits
        })
        .collect();
    let workers = thread::available_parallelism().map_or(1, |p| p.get()).min(n).max(1);
    let parts: Vec<Vec<Option<(usize, Vec<usize>)>>> = thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let nbrs = &nbrs;
                scope.spawn(move || {
                    let mut scan = Scan {
                        nbrs,
                        cap: max_size,
                        unions: vec![vec![0u64; words]; max_size + 1],
                        chosen: Vec::with_capacity(max_size),
                        best: vec![None; max_size + 1],
                    };
                    for first in (w..n).step_by(workers) {
                        scan.unions[1].copy_from_slice(&nbrs[first]);
                        scan.chosen.push(first);
                        scan.visit(1, first + 1);
                        scan.chosen.pop();
                    }
                    scan.best
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("scan worker")).collect()
    });
    Ok((1..=max_size)
        .map(|size| {
            let (neighbors, witness) = parts
                .iter()
                .filter_map(|p| p[size].clone())
                .min()
                .expect("every size up to n has a subset");
            SizeMinimum { size, neighbors, witness }
        })
        .collect())
}

/// Exact expansion ratio over all variable subsets smaller than `αn`.
pub fn vertex_expansion_profile(g: &TannerGraph, alpha: &Rational) -> Result<ExpansionProfile, ExpansionError> {
    if *alpha < Rational::zero() || *alpha > Rational::one() {
        return Err(ExpansionError::Domain(format!("alpha = {alpha} is outside [0, 1]")));
    }
    let c = common_var_degree(g)?;
    let n = g.var_count();
    let alpha_n = alpha * frac(n as i64, 1);
    let cap = alpha_n.ceil().to_integer().to_i64().map_or(0, |v| (v - 1).max(0) as usize).min(n);
    if cap > EXPANSION_MAX_CAP {
        return Err(ExpansionError::SubsetSpaceTooLarge(format!(
            "⌈αn⌉ − 1 = {cap} exceeds {EXPANSION_MAX_CAP}"
        )));
    }
    let per_size = expansion_by_size(g, cap)?;
    let best = per_size.iter().min_by(|a, b| {
        ratio(a.neighbors, c, a.size)
            .cmp(&ratio(b.neighbors, c, b.size))
            .then(a.size.cmp(&b.size))
    });
    let (delta, witness, witness_neighbors, vacuous) = match best {
        Some(s) => (ratio(s.neighbors, c, s.size), s.witness.clone(), s.neighbors, false),
        None => (Rational::one(), Vec::new(), 0, true),
    };
    Ok(ExpansionProfile {
        alpha: alpha.clone(),
        alpha_n,
        c,
        delta,
        witness,
        witness_neighbors,
        cap,
        vacuous,
        per_size,
    })
}

fn in_unit_interval<T: Scalar>(x: &T) -> bool {
    *x >= T::zero() && *x <= T::one()
}

/// `(nd/2)(γ² + (μ/d)(γ − γ²))`: the most edges a `γn`-vertex subset of a
/// `d`-regular graph with second eigenvalue `μ` can induce.
pub fn alon_chung_bound<T: Scalar>(gamma: &T, n: usize, d: usize, mu: &T) -> Result<T, ExpansionError> {
    if !in_unit_interval(gamma) {
        return Err(ExpansionError::Domain(format!("gamma = {gamma} is outside [0, 1]")));
    }
    if d == 0 {
        return Err(ExpansionError::Domain("degree must be positive".into()));
    }
    if *mu < T::zero() {
        return Err(ExpansionError::Domain(format!("mu = {mu} is negative")));
    }
    let g2 = gamma.clone() * gamma.clone();
    let inner = g2.clone() + mu.clone() / T::from_count(d) * (gamma.clone() - g2);
    Ok(T::ratio((n * d) as i64, 2) * inner)
}

/// `(d/m)|S||T| + (μ/2)(|S| + |T|)`: the most edges between `S` (left, `m`
/// vertices of degree `c`) and `T` (right, of degree `d`).
pub fn janwa_lal_bound<T: Scalar>(
    size_s: usize,
    size_t: usize,
    c: usize,
    d: usize,
    m: usize,
    mu: &T,
) -> Result<T, ExpansionError> {
    if c == 0 || d == 0 || m == 0 {
        return Err(ExpansionError::Domain("degrees and side sizes must be positive".into()));
    }
    if (m * c) % d != 0 {
        return Err(ExpansionError::Domain(format!("m·c = {} is not divisible by d = {d}", m * c)));
    }
    let n = m * c / d;
    if size_s > m || size_t > n {
        return Err(ExpansionError::Domain(format!(
            "|S| = {size_s}, |T| = {size_t} exceed the sides {m}, {n}"
        )));
    }
    if *mu < T::zero() {
        return Err(ExpansionError::Domain(format!("mu = {mu} is negative")));
    }
    Ok(T::ratio(d as i64, m as i64) * T::from_count(size_s * size_t)
        + mu.clone() / T::from_count(2) * T::from_count(size_s + size_t))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeLemma {
    AlonChung,
    JanwaLal,
}

/// Most edges over all subsets of the given sizes, against the bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EdgeCountRow {
    pub size_s: usize,
    /// Right-side size (Janwa–Lal only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub size_t: Option<usize>,
    pub max_edges: usize,
    pub bound: f64,
    pub slack: f64,
    pub witness_s: Vec<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witness_t: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaReport {
    pub lemma: EdgeLemma,
    pub mu: f64,
    pub subsets_checked: u64,
    /// Smallest `bound − edges` over all subsets.
    pub min_slack: f64,
    /// Largest per-size slack among the rows.
    pub max_slack: f64,
    pub rows: Vec<EdgeCountRow>,
    pub violations: Vec<EdgeCountRow>,
}

impl LemmaReport {
    fn from_rows(lemma: EdgeLemma, mu: f64, subsets_checked: u64, rows: Vec<EdgeCountRow>, tol: f64) -> Self {
        let min_slack = rows.iter().map(|r| r.slack).fold(f64::INFINITY, f64::min);
        let max_slack = rows.iter().map(|r| r.slack).fold(f64::NEG_INFINITY, f64::max);
        let violations = rows.iter().filter(|r| r.slack < -tol).cloned().collect();
        LemmaReport {
            lemma,
            mu,
            subsets_checked,
            min_slack,
            max_slack,
            rows,
            violations,
        }
    }

    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

fn mask_indices(mask: u64) -> Vec<usize> {
    (0..64).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Checks the Alon–Chung bound on every vertex subset of a regular graph.
pub fn verify_alon_chung(base: &BaseGraph) -> Result<LemmaReport, ExpansionError> {
    let n = base.vertices;
    if n > ALON_CHUNG_MAX_N {
        return Err(ExpansionError::SubsetSpaceTooLarge(format!(
            "{n} vertices exceed {ALON_CHUNG_MAX_N}"
        )));
    }
    let d = base
        .regular_degree()
        .ok_or_else(|| ExpansionError::NotRegular("vertex degrees differ".into()))?;
    let mu = if n == 0 {
        0.0
    } else {
        spectrum(&base.adjacency_matrix())?.mu2.unwrap_or(0.0)
    };
    let adj: Vec<u64> = base
        .adjacency_lists()
        .iter()
        .map(|l| l.iter().fold(0u64, |m, &v| m | 1 << v))
        .collect();
    let mut best: Vec<Option<(usize, u64)>> = vec![None; n + 1];
    best[0] = Some((0, 0));
    let mut mask = 0u64;
    let mut edges = 0usize;
    let total = 1u64 << n;
    for i in 1..total {
        let v = i.trailing_zeros() as usize;
        let bit = 1u64 << v;
        if mask & bit == 0 {
            edges += (adj[v] & mask).count_ones() as usize;
            mask |= bit;
        } else {
            mask &= !bit;
            edges -= (adj[v] & mask).count_ones() as usize;
        }
        let slot = &mut best[mask.count_ones() as usize];
        if slot.is_none_or(|(b, _)| edges > b) {
            *slot = Some((edges, mask));
        }
    }
    let rows = (0..=n)
        .map(|size| {
            let gamma = size as f64 / n.max(1) as f64;
            let bound = alon_chung_bound(&gamma, n, d.max(1), &mu)?;
            let (max_edges, witness) = best[size].expect("every size occurs");
            Ok(EdgeCountRow {
                size_s: size,
                size_t: None,
                max_edges,
                bound,
                slack: bound - max_edges as f64,
                witness_s: mask_indices(witness),
                witness_t: Vec::new(),
            })
        })
        .collect::<Result<Vec<_>, ExpansionError>>()?;
    let tol = 1e-9 * ((n * d) as f64).max(1.0);
    Ok(LemmaReport::from_rows(EdgeLemma::AlonChung, mu, total, rows, tol))
}

/// Checks the Janwa–Lal bound on every pair of left/right subsets of a
/// biregular bipartite graph, with `μ` its nontrivial eigenvalue.
pub fn verify_janwa_lal(base: &BipartiteGraph) -> Result<LemmaReport, ExpansionError> {
    if base.left + base.right > JANWA_LAL_MAX_VERTICES {
        return Err(ExpansionError::SubsetSpaceTooLarge(format!(
            "{} vertices exceed {JANWA_LAL_MAX_VERTICES}",
            base.left + base.right
        )));
    }
    let (c, d) = base
        .biregular_degrees()
        .ok_or_else(|| ExpansionError::NotRegular("bipartite graph is not biregular".into()))?;
    let mu = spectrum(&base.adjacency_matrix())?.nontrivial_mu_bipartite();
    let swapped = base.left > base.right;
    let work = if swapped { base.transposed() } else { base.clone() };
    let (m, n) = (work.left, work.right);
    let mut left_nbrs = vec![Vec::new(); m];
    for &(l, r) in &work.edges {
        left_nbrs[l].push(r);
    }
    // best[s][t] = (edges, S mask, T)
    let mut best: Vec<Vec<Option<(usize, u64, Vec<usize>)>>> = vec![vec![None; n + 1]; m + 1];
    let mut counts = vec![0usize; n];
    let mut mask = 0u64;
    let total = 1u64 << m;
    let mut order: Vec<usize> = (0..n).collect();
    let mut visit = |mask: u64, counts: &[usize], best: &mut Vec<Vec<Option<(usize, u64, Vec<usize>)>>>| {
        let s = mask.count_ones() as usize;
        order.sort_by(|&a, &b| counts[b].cmp(&counts[a]).then(a.cmp(&b)));
        let mut prefix = 0;
        for t in 0..=n {
            if t > 0 {
                prefix += counts[order[t - 1]];
            }
            let slot = &mut best[s][t];
            if slot.as_ref().is_none_or(|(b, _, _)| prefix > *b) {
                let mut tset = order[..t].to_vec();
                tset.sort_unstable();
                *slot = Some((prefix, mask, tset));
            }
        }
    };
    visit(0, &counts, &mut best);
    for i in 1..total {
        let v = i.trailing_zeros() as usize;
        let bit = 1u64 << v;
        if mask & bit == 0 {
            mask |= bit;
            left_nbrs[v].iter().for_each(|&r| counts[r] += 1);
        } else {
            mask &= !bit;
            left_nbrs[v].iter().for_each(|&r| counts[r] -= 1);
        }
        visit(mask, &counts, &mut best);
    }
    let (bc, bd, bm) = (c, d, base.left);
    let mut rows = Vec::with_capacity((m + 1) * (n + 1));
    for (s, per_t) in best.iter().enumerate() {
        for (t, entry) in per_t.iter().enumerate() {
            let (edges, smask, tset) = entry.as_ref().expect("every size pair occurs");
            let (size_s, size_t, ws, wt) = if swapped {
                (t, s, tset.clone(), mask_indices(*smask))
            } else {
                (s, t, mask_indices(*smask), tset.clone())
            };
            let bound = janwa_lal_bound(size_s, size_t, bc, bd, bm, &mu)?;
            rows.push(EdgeCountRow {
                size_s,
                size_t: Some(size_t),
                max_edges: *edges,
                bound,
                slack: bound - *edges as f64,
                witness_s: ws,
                witness_t: wt,
            });
        }
    }
    rows.sort_by_key(|r| (r.size_s, r.size_t));
    let tol = 1e-9 * (base.edges.len() as f64).max(1.0);
    Ok(LemmaReport::from_rows(EdgeLemma::JanwaLal, mu, total, rows, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use crate::tanner::{build_case_a, from_bipartite, ConstraintKind};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn brute_delta(g: &TannerGraph, cap: usize) -> Option<Rational> {
        let n = g.var_count();
        let c = g.var_degree(0);
        (1u64..1 << n)
            .filter(|m| (m.count_ones() as usize) <= cap)
            .map(|m| {
                let mut checks: Vec<usize> = (0..n)
                    .filter(|i| m >> i & 1 == 1)
                    .flat_map(|i| g.var_checks(i).to_vec())
                    .collect();
                checks.sort_unstable();
                checks.dedup();
                frac(checks.len() as i64, (c * m.count_ones() as usize) as i64)
            })
            .min()
    }

    #[test]
    fn complete_bipartite_k22() {
        let g = from_bipartite(&BipartiteGraph::complete(2, 2), ConstraintKind::SimpleParity).unwrap();
        let p = vertex_expansion_profile(&g, &frac(1, 1)).unwrap();
        assert_eq!(p.cap, 1);
        assert_eq!(p.delta, rat(1));
        assert!(!p.vacuous);
    }

    #[test]
    fn vacuous_profile() {
        let g = build_case_a(3, 6, 12, 3).unwrap();
        let p = vertex_expansion_profile(&g, &frac(1, 12)).unwrap();
        assert!(p.vacuous);
        assert_eq!(p.delta, rat(1));
        assert!(p.witness.is_empty());
    }

    #[test]
    fn random_36_matches_bitmask_enumerator() {
        for seed in 0..4 {
            let g = build_case_a(3, 6, 12, seed).unwrap();
            let p = vertex_expansion_profile(&g, &frac(1, 3)).unwrap();
            assert_eq!(p.cap, 3);
            assert_eq!(Some(p.delta.clone()), brute_delta(&g, 3));
            let mut checks: Vec<usize> = p.witness.iter().flat_map(|&i| g.var_checks(i).to_vec()).collect();
            checks.sort_unstable();
            checks.dedup();
            assert_eq!(checks.len(), p.witness_neighbors);
        }
    }

    #[test]
    fn guards_and_domain() {
        let g = build_case_a(3, 6, 30, 1).unwrap();
        assert!(matches!(
            vertex_expansion_profile(&g, &rat(1)),
            Err(ExpansionError::SubsetSpaceTooLarge(_))
        ));
        assert!(matches!(vertex_expansion_profile(&g, &frac(3, 2)), Err(ExpansionError::Domain(_))));
    }

    #[test]
    fn alon_chung_examples() {
        assert_eq!(alon_chung_bound(&frac(1, 2), 4, 3, &rat(1)).unwrap(), rat(2));
        assert_eq!(alon_chung_bound(&rat(1), 7, 4, &frac(3, 2)).unwrap(), rat(14));
        assert_eq!(alon_chung_bound(&rat(0), 7, 4, &rat(2)).unwrap(), rat(0));
        assert!(alon_chung_bound(&frac(3, 2), 7, 4, &rat(2)).is_err());
    }

    #[test]
    fn verify_alon_chung_small() {
        let r = verify_alon_chung(&BaseGraph::complete(4)).unwrap();
        assert!(r.holds());
        assert_eq!(r.rows[2].max_edges, 1);
        assert_eq!(r.rows[0].max_edges, 0);
        let r = verify_alon_chung(&BaseGraph::cycle(6)).unwrap();
        assert!((r.mu - 2.0).abs() < 1e-9);
        assert_eq!(r.rows[3].max_edges, 2);
        assert!(r.holds());
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let g = BaseGraph::random_regular(3, 12, &mut rng).unwrap();
        assert!(verify_alon_chung(&g).unwrap().holds());
    }

    #[test]
    fn janwa_lal_examples() {
        assert_eq!(janwa_lal_bound(0, 3, 3, 3, 3, &rat(0)).unwrap(), rat(0));
        assert_eq!(janwa_lal_bound(1, 1, 3, 3, 3, &rat(0)).unwrap(), rat(1));
        let full: Rational = janwa_lal_bound(4, 6, 3, 2, 4, &rat(1)).unwrap();
        assert_eq!(full, rat(2 * 6 + 5));
        assert!(janwa_lal_bound(5, 1, 3, 2, 4, &rat(1)).is_err());
    }

    #[test]
    fn verify_janwa_lal_small() {
        let r = verify_janwa_lal(&BipartiteGraph::complete(3, 3)).unwrap();
        assert!(r.mu.abs() < 1e-9);
        assert!(r.holds());
        let row = r.rows.iter().find(|x| x.size_s == 1 && x.size_t == Some(1)).unwrap();
        assert_eq!(row.max_edges, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let g = BipartiteGraph::random_biregular(2, 4, 8, &mut rng).unwrap();
        let r = verify_janwa_lal(&g).unwrap();
        assert!(r.holds());
        let r2 = verify_janwa_lal(&g.transposed()).unwrap();
        assert!(r2.holds());
        assert_eq!(r.rows.len(), r2.rows.len());
    }
}
