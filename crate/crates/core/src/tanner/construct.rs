//! The four code constructions.

use std::sync::Arc;

use num_traits::One;

use super::{
    BaseGraph, BipartiteGraph, ConstraintKind, ExpanderCodeParams, Origin, Provenance, SubcodeRef,
    TannerError, TannerGraph,
};
use crate::scalar::{frac, Rational};
use crate::seeds::substream;
use crate::subcodes::SubcodeSpec;

fn length_check(constraint: usize, s: &SubcodeSpec, degree: usize) -> Result<(), TannerError> {
    if s.length() != degree {
        return Err(TannerError::SubcodeLengthMismatch {
            constraint,
            expected: s.length(),
            found: degree,
        });
    }
    Ok(())
}

/// Vertex-check code on an existing bipartite graph: left vertices are
/// variables, right vertices carry `kind`.
pub fn from_bipartite(bip: &BipartiteGraph, kind: ConstraintKind) -> Result<TannerGraph, TannerError> {
    let (c, d) = bip
        .biregular_degrees()
        .ok_or_else(|| TannerError::NotRegular("bipartite graph is not biregular".into()))?;
    if let Some(s) = kind.subcode() {
        length_check(0, s, d)?;
    }
    let (provenance, rate, subcodes) = match kind.subcode() {
        Some(s) => (
            Provenance::CaseB,
            Rational::one() - frac(c as i64, 1) * (Rational::one() - s.rate()),
            vec![SubcodeRef::new("constraint", s)],
        ),
        None => (Provenance::CaseA, Rational::one() - frac(c as i64, d as i64), Vec::new()),
    };
    let g = TannerGraph::new(bip.left, vec![kind; bip.right], &bip.edges, provenance)?;
    let params = ExpanderCodeParams {
        case: provenance,
        c,
        d,
        n: bip.left,
        m: bip.right,
        block_length: bip.left,
        rate_lower_bound: rate,
        subcodes,
    };
    Ok(g.with_metadata(Some(params), Some(Origin::Bipartite(bip.clone()))))
}

/// Random simple `(c, d)`-regular Tanner graph with `n` variables and simple
/// parity checks.
pub fn build_case_a(c: usize, d: usize, n: usize, seed: u64) -> Result<TannerGraph, TannerError> {
    if c < 2 {
        return Err(TannerError::InfeasibleDegrees { c, d, n });
    }
    let mut rng = substream(seed, "construction");
    let bip = BipartiteGraph::random_biregular(c, d, n, &mut rng)?;
    from_bipartite(&bip, ConstraintKind::SimpleParity)
}

/// As [`build_case_a`], with every constraint labelled by `subcode`.
pub fn build_case_b(
    c: usize,
    d: usize,
    n: usize,
    subcode: Arc<SubcodeSpec>,
    seed: u64,
) -> Result<TannerGraph, TannerError> {
    length_check(0, &subcode, d)?;
    if c < 2 {
        return Err(TannerError::InfeasibleDegrees { c, d, n });
    }
    let mut rng = substream(seed, "construction");
    let bip = BipartiteGraph::random_biregular(c, d, n, &mut rng)?;
    from_bipartite(&bip, ConstraintKind::Subcode(subcode))
}

/// Edge-vertex code on a simple connected `d`-regular graph.
pub fn build_case_c(base: &BaseGraph, subcode: Arc<SubcodeSpec>) -> Result<TannerGraph, TannerError> {
    let base = BaseGraph::new(base.vertices, base.edges.clone())?;
    let d = base
        .regular_degree()
        .ok_or_else(|| TannerError::NotRegular("base graph degrees differ".into()))?;
    if !base.is_connected() {
        return Err(TannerError::NotConnected);
    }
    length_check(0, &subcode, d)?;
    let pairs: Vec<(usize, usize)> = base
        .edges
        .iter()
        .enumerate()
        .flat_map(|(k, &(u, v))| [(k, u), (k, v)])
        .collect();
    let params = ExpanderCodeParams {
        case: Provenance::CaseC,
        c: 2,
        d,
        n: base.vertices,
        m: base.vertices,
        block_length: base.edges.len(),
        rate_lower_bound: frac(2, 1) * subcode.rate() - Rational::one(),
        subcodes: vec![SubcodeRef::new("vertex", &subcode)],
    };
    let g = TannerGraph::new(
        base.edges.len(),
        vec![ConstraintKind::Subcode(subcode); base.vertices],
        &pairs,
        Provenance::CaseC,
    )?;
    Ok(g.with_metadata(Some(params), Some(Origin::Graph(base))))
}

/// Edge-vertex code on a `(c, d)`-regular bipartite graph: left vertices
/// (constraints `0..m`) carry `sub1`, right vertices (constraints `m..m+n`)
/// carry `sub2`.
pub fn build_case_d(
    base: &BipartiteGraph,
    sub1: Arc<SubcodeSpec>,
    sub2: Arc<SubcodeSpec>,
) -> Result<TannerGraph, TannerError> {
    let base = BipartiteGraph::new(base.left, base.right, base.edges.clone())?;
    let (c, d) = base
        .biregular_degrees()
        .ok_or_else(|| TannerError::NotRegular("base graph is not biregular".into()))?;
    length_check(0, &sub1, c)?;
    length_check(base.left, &sub2, d)?;
    let m = base.left;
    let pairs: Vec<(usize, usize)> = base
        .edges
        .iter()
        .enumerate()
        .flat_map(|(k, &(l, r))| [(k, l), (k, m + r)])
        .collect();
    let mut kinds = vec![ConstraintKind::Subcode(sub1.clone()); m];
    kinds.extend(std::iter::repeat_n(ConstraintKind::Subcode(sub2.clone()), base.right));
    let params = ExpanderCodeParams {
        case: Provenance::CaseD,
        c,
        d,
        n: base.right,
        m,
        block_length: base.edges.len(),
        rate_lower_bound: sub1.rate() + sub2.rate() - Rational::one(),
        subcodes: vec![SubcodeRef::new("left", &sub1), SubcodeRef::new("right", &sub2)],
    };
    let g = TannerGraph::new(base.edges.len(), kinds, &pairs, Provenance::CaseD)?;
    Ok(g.with_metadata(Some(params), Some(Origin::Bipartite(base))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::write_alist;

    fn sub(name: &str) -> Arc<SubcodeSpec> {
        Arc::new(SubcodeSpec::builtin(name).unwrap())
    }

    #[test]
    fn case_a_shapes() {
        let g = build_case_a(2, 4, 4, 1).unwrap();
        assert_eq!((g.constraint_count(), g.edges().len()), (2, 8));
        let g = build_case_a(3, 4, 8, 5).unwrap();
        assert_eq!(g.constraint_count(), 6);
        let h = g.to_parity_matrix();
        assert!((0..8).all(|c| h.col_weight(c) == 3));
        assert!((0..6).all(|r| h.row_weight(r) == 4));
        assert!(matches!(build_case_a(3, 5, 7, 0), Err(TannerError::InfeasibleDegrees { .. })));
    }

    #[test]
    fn case_a_deterministic_per_seed() {
        let a = write_alist(&build_case_a(3, 6, 12, 7).unwrap().to_parity_matrix());
        let b = write_alist(&build_case_a(3, 6, 12, 7).unwrap().to_parity_matrix());
        assert_eq!(a, b);
    }

    #[test]
    fn case_b_shapes() {
        let g = build_case_b(3, 7, 14, sub("hamming74"), 2).unwrap();
        assert_eq!(g.constraint_count(), 6);
        assert!(g.constraints().iter().all(|c| c.kind.label() == "Hamming[7,4]"));
        assert_eq!(g.to_parity_matrix().rows(), 18);
        assert!(matches!(
            build_case_b(3, 6, 14, sub("hamming74"), 2),
            Err(TannerError::SubcodeLengthMismatch { .. })
        ));
        let a = build_case_a(2, 4, 4, 9).unwrap();
        let b = build_case_b(2, 4, 4, sub("spc4"), 9).unwrap();
        assert_eq!(a.to_parity_matrix(), b.to_parity_matrix());
        assert!(b.is_simple());
    }

    #[test]
    fn case_c_shapes() {
        let g = build_case_c(&BaseGraph::complete(4), sub("spc3")).unwrap();
        assert_eq!((g.var_count(), g.constraint_count()), (6, 4));
        let h = g.to_parity_matrix();
        assert_eq!((h.rows(), h.cols()), (4, 6));
        let g = build_case_c(&BaseGraph::complete(8), sub("hamming74")).unwrap();
        assert_eq!(g.var_count(), 28);
        assert!(g.constraints().iter().all(|c| c.degree() == 7));
        assert!(matches!(
            build_case_c(&BaseGraph::path(4), sub("spc2")),
            Err(TannerError::NotRegular(_))
        ));
    }

    #[test]
    fn case_d_shapes() {
        let g = build_case_d(&BipartiteGraph::complete(3, 3), sub("spc3"), sub("spc3")).unwrap();
        assert_eq!((g.var_count(), g.constraint_count()), (9, 6));
        let g = build_case_d(&BipartiteGraph::complete(4, 4), sub("spc4"), sub("rep4")).unwrap();
        assert_ne!(g.constraint(0).kind, g.constraint(4).kind);
        assert!(matches!(
            build_case_d(&BipartiteGraph::complete(4, 4), sub("spc3"), sub("rep4")),
            Err(TannerError::SubcodeLengthMismatch { .. })
        ));
    }

    #[test]
    fn designed_rates_hold() {
        let g = build_case_c(&BaseGraph::complete(8), sub("hamming74")).unwrap();
        let p = g.params().unwrap();
        let k = g.to_parity_matrix().dimension();
        assert!(frac(k as i64, p.block_length as i64) >= p.rate_lower_bound);
        let g = build_case_d(&BipartiteGraph::complete(4, 4), sub("spc4"), sub("spc4")).unwrap();
        let p = g.params().unwrap();
        let k = g.to_parity_matrix().dimension();
        assert_eq!(p.rate_lower_bound, frac(1, 2));
        assert!(frac(k as i64, p.block_length as i64) >= p.rate_lower_bound);
    }
}
