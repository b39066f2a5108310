//! Tanner graphs, the four expander constructions, and finite covers.
//!
//! A [`TannerGraph`] stores an ordered edge list with explicit socket indices
//! on both sides. The socket of an edge at a constraint node is the coordinate
//! of the constraint's subcode that the variable occupies, so edge order is
//! semantically meaningful and is preserved by serialization.

mod base;
mod construct;
mod json;
mod lift;

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf2::{BitMatrix, Gf2Error};
use crate::scalar::Rational;
use crate::subcodes::{SubcodeError, SubcodeSpec};

pub use base::{BaseGraph, BipartiteGraph, RESAMPLE_BUDGET};
pub use construct::{build_case_a, build_case_b, build_case_c, build_case_d, from_bipartite};
pub use json::TANNER_FORMAT;
pub use lift::{build_lift, reduce_cover_codeword, LiftSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TannerError {
    #[error("no ({c},{d})-regular bipartite graph with {n} left vertices")]
    InfeasibleDegrees { c: usize, d: usize, n: usize },
    #[error("no simple graph after {attempts} resampling attempts")]
    SimplificationFailed { attempts: usize },
    #[error("constraint {constraint} has degree {found} but its subcode has length {expected}")]
    SubcodeLengthMismatch {
        constraint: usize,
        expected: usize,
        found: usize,
    },
    #[error("graph is not regular: {0}")]
    NotRegular(String),
    #[error("graph is not connected")]
    NotConnected,
    #[error("graph is not simple: {0}")]
    NotSimple(String),
    #[error("parallel edge between variable {var} and constraint {check}")]
    ParallelEdge { var: usize, check: usize },
    #[error("node index out of range")]
    IndexOutOfRange,
    #[error("invalid sockets: {0}")]
    InvalidSockets(String),
    #[error("graph has no variables or no constraints")]
    EmptyGraph,
    #[error("lift has {found} permutations for {expected} edges")]
    SpecIncomplete { expected: usize, found: usize },
    #[error("lift permutation on edge {edge} is not a permutation of 0..{degree}")]
    InvalidPermutation { edge: usize, degree: usize },
    #[error("word is not a codeword of the cover")]
    NotACodewordInCover,
    #[error("expected a vector of length {expected}, got {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
    #[error(transparent)]
    Subcode(#[from] SubcodeError),
}

/// Label of a constraint node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConstraintKind {
    SimpleParity,
    Subcode(Arc<SubcodeSpec>),
}

impl ConstraintKind {
    pub fn subcode(&self) -> Option<&SubcodeSpec> {
        match self {
            ConstraintKind::SimpleParity => None,
            ConstraintKind::Subcode(s) => Some(s),
        }
    }

    /// Whether the constraint is a single parity check on all its sockets.
    pub fn is_parity(&self) -> bool {
        self.subcode().is_none_or(SubcodeSpec::is_single_parity)
    }

    pub fn label(&self) -> String {
        match self {
            ConstraintKind::SimpleParity => "parity".to_string(),
            ConstraintKind::Subcode(s) => s.name().to_string(),
        }
    }

    /// Whether the local word `mask` (bit `t` = socket `t`) satisfies the
    /// constraint.
    pub fn accepts(&self, mask: u64) -> bool {
        match self {
            ConstraintKind::SimpleParity => mask.count_ones() % 2 == 0,
            ConstraintKind::Subcode(s) => s.contains_mask(mask),
        }
    }

    /// Local codewords of a degree-`degree` constraint, as socket masks.
    pub fn local_codewords(&self, degree: usize) -> Vec<u64> {
        match self {
            ConstraintKind::SimpleParity => (0..1u64 << degree)
                .filter(|m| m.count_ones() % 2 == 0)
                .collect(),
            ConstraintKind::Subcode(s) => s.masks().to_vec(),
        }
    }
}

/// Where a graph came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    CaseA,
    CaseB,
    CaseC,
    CaseD,
    Imported,
    Lift,
}

impl std::fmt::Display for Provenance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Provenance::CaseA => "A",
            Provenance::CaseB => "B",
            Provenance::CaseC => "C",
            Provenance::CaseD => "D",
            Provenance::Imported => "imported",
            Provenance::Lift => "lift",
        };
        f.write_str(s)
    }
}

/// One edge with its socket index at both endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub var: usize,
    pub check: usize,
    pub var_socket: usize,
    pub check_socket: usize,
}

/// A constraint node: label plus incident variables in socket order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub kind: ConstraintKind,
    pub vars: Vec<usize>,
}

impl Constraint {
    pub fn degree(&self) -> usize {
        self.vars.len()
    }

    /// Restriction of a global word to this constraint's sockets.
    pub fn local_mask(&self, word: &[bool]) -> u64 {
        self.vars
            .iter()
            .enumerate()
            .fold(0, |m, (t, &v)| if word[v] { m | 1 << t } else { m })
    }

    /// Same, for a set of variables given as a predicate.
    pub fn local_mask_of(&self, member: impl Fn(usize) -> bool) -> u64 {
        self.vars
            .iter()
            .enumerate()
            .fold(0, |m, (t, &v)| if member(v) { m | 1 << t } else { m })
    }
}

/// Underlying graph of a construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Origin {
    /// Simple graph whose edges are the variables.
    Graph(BaseGraph),
    /// Bipartite graph: Tanner graph itself (A, B) or edge-vertex base (D).
    Bipartite(BipartiteGraph),
}

/// Role and parameters of one subcode used by a construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubcodeRef {
    pub role: String,
    pub name: String,
    #[serde(with = "crate::scalar::rational_str")]
    pub epsilon: Rational,
    #[serde(with = "crate::scalar::rational_str")]
    pub rate: Rational,
}

impl SubcodeRef {
    fn new(role: &str, s: &SubcodeSpec) -> Self {
        Self {
            role: role.to_string(),
            name: s.name().to_string(),
            epsilon: s.epsilon(),
            rate: s.rate(),
        }
    }
}

/// Construction parameters and the designed rate lower bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpanderCodeParams {
    pub case: Provenance,
    /// Left degree (variables in A/B, left constraints in D; 2 in C).
    pub c: usize,
    /// Right degree.
    pub d: usize,
    /// Variables (A, B), base vertices (C) or right base vertices (D).
    pub n: usize,
    /// Constraints (A, B), base vertices (C) or left base vertices (D).
    pub m: usize,
    /// Code block length.
    pub block_length: usize,
    /// Designed rate lower bound; may be negative.
    #[serde(with = "crate::scalar::rational_str")]
    pub rate_lower_bound: Rational,
    pub subcodes: Vec<SubcodeRef>,
}

/// Bipartite variable/constraint graph with labelled constraints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TannerGraph {
    var_count: usize,
    constraints: Vec<Constraint>,
    edges: Vec<Edge>,
    /// Per variable: incident constraints in socket order.
    var_checks: Vec<Vec<usize>>,
    provenance: Provenance,
    params: Option<ExpanderCodeParams>,
    origin: Option<Origin>,
}

impl TannerGraph {
    /// Builds a graph from `(var, check)` pairs; sockets follow list order.
    pub fn new(
        var_count: usize,
        kinds: Vec<ConstraintKind>,
        pairs: &[(usize, usize)],
        provenance: Provenance,
    ) -> Result<Self, TannerError> {
        let mut var_deg = vec![0; var_count];
        let mut check_deg = vec![0; kinds.len()];
        let mut edges = Vec::with_capacity(pairs.len());
        for &(var, check) in pairs {
            if var >= var_count || check >= kinds.len() {
                return Err(TannerError::IndexOutOfRange);
            }
            edges.push(Edge {
                var,
                check,
                var_socket: var_deg[var],
                check_socket: check_deg[check],
            });
            var_deg[var] += 1;
            check_deg[check] += 1;
        }
        Self::from_edges(var_count, kinds, edges, provenance)
    }

    /// Builds a graph from socketed edges, validating every invariant.
    pub fn from_edges(
        var_count: usize,
        kinds: Vec<ConstraintKind>,
        edges: Vec<Edge>,
        provenance: Provenance,
    ) -> Result<Self, TannerError> {
        if var_count == 0 || kinds.is_empty() {
            return Err(TannerError::EmptyGraph);
        }
        let mut seen = BTreeSet::new();
        let mut var_slots: Vec<Vec<Option<usize>>> = vec![Vec::new(); var_count];
        let mut check_slots: Vec<Vec<Option<usize>>> = vec![Vec::new(); kinds.len()];
        for e in &edges {
            if e.var >= var_count || e.check >= kinds.len() {
                return Err(TannerError::IndexOutOfRange);
            }
            if !seen.insert((e.var, e.check)) {
                return Err(TannerError::ParallelEdge {
                    var: e.var,
                    check: e.check,
                });
            }
            for (slots, socket, what) in [
                (&mut var_slots[e.var], e.var_socket, e.check),
                (&mut check_slots[e.check], e.check_socket, e.var),
            ] {
                if slots.len() <= socket {
                    slots.resize(socket + 1, None);
                }
                if slots[socket].replace(what).is_some() {
                    return Err(TannerError::InvalidSockets(format!(
                        "socket {socket} used twice (edge {}-{})",
                        e.var, e.check
                    )));
                }
            }
        }
        let collect = |slots: Vec<Vec<Option<usize>>>, side: &str| -> Result<Vec<Vec<usize>>, TannerError> {
            slots
                .into_iter()
                .enumerate()
                .map(|(node, s)| {
                    s.into_iter().collect::<Option<Vec<_>>>().ok_or_else(|| {
                        TannerError::InvalidSockets(format!("{side} {node} has a socket gap"))
                    })
                })
                .collect()
        };
        let var_checks = collect(var_slots, "variable")?;
        let check_vars = collect(check_slots, "constraint")?;
        let constraints: Vec<Constraint> = kinds
            .into_iter()
            .zip(check_vars)
            .map(|(kind, vars)| Constraint { kind, vars })
            .collect();
        for (j, c) in constraints.iter().enumerate() {
            if c.degree() > 64 {
                return Err(TannerError::NotRegular(format!("constraint {j} has degree above 64")));
            }
            if let Some(s) = c.kind.subcode() {
                if s.length() != c.degree() {
                    return Err(TannerError::SubcodeLengthMismatch {
                        constraint: j,
                        expected: s.length(),
                        found: c.degree(),
                    });
                }
            }
        }
        Ok(Self {
            var_count,
            constraints,
            edges,
            var_checks,
            provenance,
            params: None,
            origin: None,
        })
    }

    /// Simple-parity graph of a parity-check matrix: row `r` is constraint
    /// `r`, its sockets in column order.
    pub fn from_parity_matrix(h: &BitMatrix) -> Result<Self, TannerError> {
        let mut pairs = Vec::new();
        for r in 0..h.rows() {
            pairs.extend(h.row_support(r).into_iter().map(|c| (c, r)));
        }
        Self::new(
            h.cols(),
            vec![ConstraintKind::SimpleParity; h.rows()],
            &pairs,
            Provenance::Imported,
        )
    }

    pub(crate) fn with_metadata(mut self, params: Option<ExpanderCodeParams>, origin: Option<Origin>) -> Self {
        self.params = params;
        self.origin = origin;
        self
    }

    pub fn var_count(&self) -> usize {
        self.var_count
    }

    pub fn constraint_count(&self) -> usize {
        self.constraints.len()
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn constraint(&self, j: usize) -> &Constraint {
        &self.constraints[j]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Constraints incident to variable `i`, in socket order.
    pub fn var_checks(&self, i: usize) -> &[usize] {
        &self.var_checks[i]
    }

    pub fn var_degree(&self, i: usize) -> usize {
        self.var_checks[i].len()
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn params(&self) -> Option<&ExpanderCodeParams> {
        self.params.as_ref()
    }

    pub fn origin(&self) -> Option<&Origin> {
        self.origin.as_ref()
    }

    /// Whether every constraint is a single parity check on its sockets.
    pub fn is_simple(&self) -> bool {
        self.constraints.iter().all(|c| c.kind.is_parity())
    }

    /// `(c, d)` when variable degrees all equal `c` and constraint degrees all
    /// equal `d`.
    pub fn biregular_degrees(&self) -> Option<(usize, usize)> {
        let c = self.var_degree(0);
        let d = self.constraints[0].degree();
        (self.var_checks.iter().all(|v| v.len() == c) && self.constraints.iter().all(|k| k.degree() == d))
            .then_some((c, d))
    }

    pub fn is_connected(&self) -> bool {
        let n = self.var_count;
        let mut seen = vec![false; n + self.constraints.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(node) = stack.pop() {
            let next: Vec<usize> = if node < n {
                self.var_checks[node].iter().map(|&j| n + j).collect()
            } else {
                self.constraints[node - n].vars.clone()
            };
            for w in next {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    fn check_len(&self, len: usize) -> Result<(), TannerError> {
        if len != self.var_count {
            return Err(TannerError::LengthMismatch {
                expected: self.var_count,
                found: len,
            });
        }
        Ok(())
    }

    /// Whether `word` satisfies every constraint.
    pub fn is_codeword(&self, word: &[bool]) -> Result<bool, TannerError> {
        self.check_len(word.len())?;
        Ok(self
            .constraints
            .iter()
            .all(|c| c.kind.accepts(c.local_mask(word))))
    }

    /// Parity-check matrix of the code. Subcode constraints contribute their
    /// parity rows, mapped through the socket order.
    pub fn to_parity_matrix(&self) -> BitMatrix {
        let mut rows: Vec<Vec<bool>> = Vec::new();
        for c in &self.constraints {
            match &c.kind {
                ConstraintKind::SimpleParity => {
                    let mut row = vec![false; self.var_count];
                    c.vars.iter().for_each(|&v| row[v] = true);
                    rows.push(row);
                }
                ConstraintKind::Subcode(s) => {
                    let h = s.parity();
                    for r in 0..h.rows() {
                        let mut row = vec![false; self.var_count];
                        for t in h.row_support(r) {
                            row[c.vars[t]] = true;
                        }
                        rows.push(row);
                    }
                }
            }
        }
        BitMatrix::from_rows(&rows).expect("graph has variables and constraints")
    }

    /// Per variable, the bit mask of its incident constraints (≤ 128
    /// constraints).
    pub fn var_neighbor_masks(&self) -> Option<Vec<u128>> {
        if self.constraints.len() > 128 {
            return None;
        }
        Some(
            self.var_checks
                .iter()
                .map(|cs| cs.iter().fold(0u128, |m, &j| m | 1 << j))
                .collect(),
        )
    }

    /// Serializes to the versioned JSON graph format.
    pub fn to_json(&self) -> String {
        json::to_json(self)
    }

    pub fn from_json(text: &str) -> Result<Self, TannerError> {
        json::from_json(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn triangle() -> TannerGraph {
        // three variables, three degree-2 checks in a cycle
        TannerGraph::new(
            3,
            vec![ConstraintKind::SimpleParity; 3],
            &[(0, 0), (1, 0), (1, 1), (2, 1), (2, 2), (0, 2)],
            Provenance::Imported,
        )
        .unwrap()
    }

    #[test]
    fn triangle_code() {
        let g = triangle();
        assert!(g.is_codeword(&[true, true, true]).unwrap());
        assert!(!g.is_codeword(&[true, false, false]).unwrap());
        assert_eq!(g.to_parity_matrix().dimension(), 1);
        assert_eq!(g.biregular_degrees(), Some((2, 2)));
        assert!(g.is_connected());
    }

    #[test]
    fn rejects_parallel_edges_and_gaps() {
        let k = vec![ConstraintKind::SimpleParity];
        assert!(matches!(
            TannerGraph::new(2, k.clone(), &[(0, 0), (0, 0)], Provenance::Imported),
            Err(TannerError::ParallelEdge { .. })
        ));
        let gap = vec![Edge {
            var: 0,
            check: 0,
            var_socket: 1,
            check_socket: 0,
        }];
        assert!(matches!(
            TannerGraph::from_edges(1, k, gap, Provenance::Imported),
            Err(TannerError::InvalidSockets(_))
        ));
    }

    #[test]
    fn parity_matrix_round_trip() {
        let h = BitMatrix::from_strs(&["1101000", "0110100", "0011010"]).unwrap();
        let g = TannerGraph::from_parity_matrix(&h).unwrap();
        assert_eq!(g.to_parity_matrix(), h);
    }

    #[test]
    fn subcode_length_checked() {
        let ham = Arc::new(SubcodeSpec::builtin("hamming74").unwrap());
        let pairs: Vec<(usize, usize)> = (0..6).map(|v| (v, 0)).collect();
        assert!(matches!(
            TannerGraph::new(6, vec![ConstraintKind::Subcode(ham)], &pairs, Provenance::Imported),
            Err(TannerError::SubcodeLengthMismatch { expected: 7, found: 6, .. })
        ));
    }
}
