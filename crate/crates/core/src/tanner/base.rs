//! Underlying graphs for the four constructions: simple undirected graphs
//! (edge-vertex codes) and bipartite graphs (vertex-check codes).

use std::collections::{BTreeSet, VecDeque};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::TannerError;
use crate::spectral::SymMatrix;

/// Resampling budget for configuration-model generators.
pub const RESAMPLE_BUDGET: usize = 10_000;

/// Simple undirected graph with an ordered edge list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseGraph {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

/// Bipartite graph with `left` and `right` vertex classes, each edge `(l, r)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipartiteGraph {
    pub left: usize,
    pub right: usize,
    pub edges: Vec<(usize, usize)>,
}

fn connected(vertices: usize, adjacency: &[Vec<usize>]) -> bool {
    if vertices == 0 {
        return true;
    }
    let mut seen = vec![false; vertices];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    while let Some(v) = queue.pop_front() {
        for &w in &adjacency[v] {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

impl BaseGraph {
    /// Validates indices, loops and parallel edges.
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self, TannerError> {
        let mut seen = BTreeSet::new();
        for &(u, v) in &edges {
            if u >= vertices || v >= vertices {
                return Err(TannerError::IndexOutOfRange);
            }
            if u == v {
                return Err(TannerError::NotSimple(format!("loop at vertex {u}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(TannerError::NotSimple(format!("parallel edge {u}-{v}")));
            }
        }
        Ok(Self { vertices, edges })
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        Self { vertices: n, edges }
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        Self {
            vertices: n,
            edges: (0..n).map(|i| (i, (i + 1) % n)).collect(),
        }
    }

    pub fn path(n: usize) -> Self {
        Self {
            vertices: n,
            edges: (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect(),
        }
    }

    pub fn petersen() -> Self {
        let mut edges: Vec<(usize, usize)> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
        edges.extend((0..5).map(|i| (i, i + 5)));
        edges.extend((0..5).map(|i| (5 + i, 5 + (i + 2) % 5)));
        Self { vertices: 10, edges }
    }

    /// The `k`-dimensional hypercube.
    pub fn hypercube(k: u32) -> Self {
        let n = 1usize << k;
        let mut edges = Vec::new();
        for v in 0..n {
            for b in 0..k {
                let w = v ^ (1 << b);
                if v < w {
                    edges.push((v, w));
                }
            }
        }
        Self { vertices: n, edges }
    }

    /// Uniform-ish random simple connected `d`-regular graph: pairing model,
    /// resampled from scratch until simple and connected.
    pub fn random_regular<R: Rng>(d: usize, n: usize, rng: &mut R) -> Result<Self, TannerError> {
        if d == 0 || d >= n || (n * d) % 2 == 1 {
            return Err(TannerError::InfeasibleDegrees { c: d, d, n });
        }
        let stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
        for _ in 0..RESAMPLE_BUDGET {
            let mut s = stubs.clone();
            s.shuffle(rng);
            let mut set = BTreeSet::new();
            let mut ok = true;
            for pair in s.chunks(2) {
                let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
                if u == v || !set.insert((u, v)) {
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }
            let g = Self {
                vertices: n,
                edges: set.into_iter().collect(),
            };
            if g.is_connected() {
                return Ok(g);
            }
        }
        Err(TannerError::SimplificationFailed {
            attempts: RESAMPLE_BUDGET,
        })
    }

    pub fn adjacency_lists(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertices];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    /// Common degree when regular.
    pub fn regular_degree(&self) -> Option<usize> {
        let deg = self.degrees();
        let d = *deg.first()?;
        deg.iter().all(|&x| x == d).then_some(d)
    }

    pub fn is_connected(&self) -> bool {
        connected(self.vertices, &self.adjacency_lists())
    }

    pub fn is_bipartite(&self) -> bool {
        let adj = self.adjacency_lists();
        let mut color = vec![None; self.vertices];
        for s in 0..self.vertices {
            if color[s].is_some() {
                continue;
            }
            color[s] = Some(false);
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                let cv = color[v].expect("colored");
                for &w in &adj[v] {
                    match color[w] {
                        None => {
                            color[w] = Some(!cv);
                            queue.push_back(w);
                        }
                        Some(cw) if cw == cv => return false,
                        _ => {}
                    }
                }
            }
        }
        true
    }

    pub fn adjacency_matrix(&self) -> SymMatrix<f64> {
        let mut a = SymMatrix::zeros(self.vertices);
        for &(u, v) in &self.edges {
            a.set(u, v, 1.0);
        }
        a
    }

    /// Number of edges with both ends in the vertex set `mask`.
    pub fn induced_edges(&self, mask: u64) -> usize {
        self.edges
            .iter()
            .filter(|&&(u, v)| mask >> u & 1 == 1 && mask >> v & 1 == 1)
            .count()
    }

    /// Parses a whitespace edge list: optional first line with the vertex
    /// count, then `u v` pairs (0-based). `#` starts a comment.
    pub fn parse_edge_list(text: &str) -> Result<Self, TannerError> {
        let mut declared = None;
        let mut edges = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let nums: Vec<usize> = line
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| TannerError::Parse(format!("line {}: bad integer {t:?}", i + 1))))
                .collect::<Result<_, _>>()?;
            match nums[..] {
                [n] if edges.is_empty() && declared.is_none() => declared = Some(n),
                [u, v] => edges.push((u, v)),
                _ => return Err(TannerError::Parse(format!("line {}: expected `u v`", i + 1))),
            }
        }
        let inferred = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
        Self::new(declared.unwrap_or(inferred), edges)
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{}\n", self.vertices);
        for (u, v) in &self.edges {
            out += &format!("{u} {v}\n");
        }
        out
    }
}

impl BipartiteGraph {
    pub fn new(left: usize, right: usize, edges: Vec<(usize, usize)>) -> Result<Self, TannerError> {
        let mut seen = BTreeSet::new();
        for &(l, r) in &edges {
            if l >= left || r >= right {
                return Err(TannerError::IndexOutOfRange);
            }
            if !seen.insert((l, r)) {
                return Err(TannerError::ParallelEdge { var: l, check: r });
            }
        }
        Ok(Self { left, right, edges })
    }

    pub fn complete(left: usize, right: usize) -> Self {
        let edges = (0..left)
            .flat_map(|l| (0..right).map(move |r| (l, r)))
            .collect();
        Self { left, right, edges }
    }

    /// Random simple `(c, d)`-regular bipartite graph with `left` degree-`c`
    /// vertices: configuration model with full resampling on parallel edges.
    pub fn random_biregular<R: Rng>(
        c: usize,
        d: usize,
        left: usize,
        rng: &mut R,
    ) -> Result<Self, TannerError> {
        if c == 0 || d == 0 || left == 0 || (c * left) % d != 0 {
            return Err(TannerError::InfeasibleDegrees { c, d, n: left });
        }
        let right = c * left / d;
        if c > right {
            return Err(TannerError::InfeasibleDegrees { c, d, n: left });
        }
        let mut right_stubs: Vec<usize> = (0..right).flat_map(|r| std::iter::repeat_n(r, d)).collect();
        for _ in 0..RESAMPLE_BUDGET {
            right_stubs.shuffle(rng);
            let mut ok = true;
            let mut edges = Vec::with_capacity(c * left);
            for l in 0..left {
                let mut nb: Vec<usize> = right_stubs[l * c..(l + 1) * c].to_vec();
                nb.sort_unstable();
                if nb.windows(2).any(|w| w[0] == w[1]) {
                    ok = false;
                    break;
                }
                edges.extend(nb.into_iter().map(|r| (l, r)));
            }
            if ok {
                return Ok(Self { left, right, edges });
            }
        }
        Err(TannerError::SimplificationFailed {
            attempts: RESAMPLE_BUDGET,
        })
    }

    pub fn left_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.left];
        for &(l, _) in &self.edges {
            deg[l] += 1;
        }
        deg
    }

    pub fn right_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.right];
        for &(_, r) in &self.edges {
            deg[r] += 1;
        }
        deg
    }

    /// `(c, d)` when both sides are regular.
    pub fn biregular_degrees(&self) -> Option<(usize, usize)> {
        let l = self.left_degrees();
        let r = self.right_degrees();
        let c = *l.first()?;
        let d = *r.first()?;
        (l.iter().all(|&x| x == c) && r.iter().all(|&x| x == d)).then_some((c, d))
    }

    pub fn is_connected(&self) -> bool {
        let mut adj = vec![Vec::new(); self.left + self.right];
        for &(l, r) in &self.edges {
            adj[l].push(self.left + r);
            adj[self.left + r].push(l);
        }
        connected(self.left + self.right, &adj)
    }

    /// Adjacency matrix of the whole graph, left vertices first.
    pub fn adjacency_matrix(&self) -> SymMatrix<f64> {
        let mut a = SymMatrix::zeros(self.left + self.right);
        for &(l, r) in &self.edges {
            a.set(l, self.left + r, 1.0);
        }
        a
    }

    /// Swaps the roles of the two sides.
    pub fn transposed(&self) -> Self {
        Self {
            left: self.right,
            right: self.left,
            edges: self.edges.iter().map(|&(l, r)| (r, l)).collect(),
        }
    }

    /// Parses `left right` on the first line, then `l r` pairs.
    pub fn parse_edge_list(text: &str) -> Result<Self, TannerError> {
        let mut header = None;
        let mut edges = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let nums: Vec<usize> = line
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| TannerError::Parse(format!("line {}: bad integer {t:?}", i + 1))))
                .collect::<Result<_, _>>()?;
            let [a, b] = nums[..] else {
                return Err(TannerError::Parse(format!("line {}: expected two integers", i + 1)));
            };
            if header.is_none() {
                header = Some((a, b));
            } else {
                edges.push((a, b));
            }
        }
        let (left, right) = header.ok_or_else(|| TannerError::Parse("missing `left right` header".into()))?;
        Self::new(left, right, edges)
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.left, self.right);
        for (l, r) in &self.edges {
            out += &format!("{l} {r}\n");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn named_graphs() {
        assert_eq!(BaseGraph::complete(4).edges.len(), 6);
        assert_eq!(BaseGraph::complete(8).regular_degree(), Some(7));
        assert_eq!(BaseGraph::petersen().regular_degree(), Some(3));
        assert!(BaseGraph::cycle(6).is_bipartite());
        assert!(!BaseGraph::cycle(5).is_bipartite());
        assert_eq!(BaseGraph::path(4).regular_degree(), None);
        assert_eq!(BaseGraph::hypercube(3).regular_degree(), Some(3));
    }

    #[test]
    fn random_regular_is_simple_connected() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (d, n) in [(3, 8), (4, 7), (3, 10)] {
            let g = BaseGraph::random_regular(d, n, &mut rng).unwrap();
            assert_eq!(g.regular_degree(), Some(d));
            assert!(g.is_connected());
            BaseGraph::new(g.vertices, g.edges.clone()).unwrap();
        }
        assert!(BaseGraph::random_regular(3, 7, &mut rng).is_err());
    }

    #[test]
    fn random_biregular_shapes() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let g = BipartiteGraph::random_biregular(3, 6, 12, &mut rng).unwrap();
        assert_eq!((g.left, g.right), (12, 6));
        assert_eq!(g.biregular_degrees(), Some((3, 6)));
        assert!(matches!(
            BipartiteGraph::random_biregular(3, 5, 7, &mut rng),
            Err(TannerError::InfeasibleDegrees { .. })
        ));
    }

    #[test]
    fn edge_list_parsing() {
        let g = BaseGraph::parse_edge_list("# k3\n3\n0 1\n1 2\n0 2\n").unwrap();
        assert_eq!(g, BaseGraph::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap());
        assert_eq!(BaseGraph::parse_edge_list(&g.to_edge_list()).unwrap(), g);
        assert!(BaseGraph::parse_edge_list("0 1\n1 0\n").is_err());
        let b = BipartiteGraph::complete(2, 3);
        assert_eq!(BipartiteGraph::parse_edge_list(&b.to_edge_list()).unwrap(), b);
    }
}
