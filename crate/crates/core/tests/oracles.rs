//! Cross-checks of computed quantities against independent brute-force or
//! closed-form computations.

use std::sync::Arc;

use expander_codes::bounds::{case_c_bounds, tanner_awgn_bound, verify_bounds, BoundId};
use expander_codes::expansion::{expansion_by_size, verify_alon_chung};
use expander_codes::polytope::{min_awgn_pseudoweight, min_stopping_set};
use expander_codes::scalar::{frac, rat};
use expander_codes::spectral::spectrum;
use expander_codes::tanner::{build_case_a, build_case_c, BaseGraph};
use expander_codes::{BitMatrix, SubcodeSpec, TannerGraph};

fn circulant(n: usize) -> BitMatrix {
    let rows: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| j == i || j == (i + 1) % n).collect()).collect();
    BitMatrix::from_rows(&rows).unwrap()
}

fn brute_neighbors(g: &TannerGraph, mask: u64) -> usize {
    let mut seen = vec![false; g.constraint_count()];
    for v in 0..g.var_count() {
        if mask >> v & 1 == 1 {
            for &j in g.var_checks(v) {
                seen[j] = true;
            }
        }
    }
    seen.into_iter().filter(|&b| b).count()
}

#[test]
fn expansion_matches_naive_enumeration() {
    for seed in 0..4 {
        let g = build_case_a(3, 6, 12, seed).unwrap();
        let fast = expansion_by_size(&g, 6).unwrap();
        for s in &fast {
            let naive = (1u64..1 << 12)
                .filter(|m| m.count_ones() as usize == s.size)
                .map(|m| brute_neighbors(&g, m))
                .min()
                .unwrap();
            assert_eq!(naive, s.neighbors, "seed {seed}, size {}", s.size);
        }
    }
}

#[test]
fn stopping_sets_match_naive_enumeration() {
    for seed in 0..4 {
        let g = build_case_a(2, 4, 8, seed).unwrap();
        let h = g.to_parity_matrix();
        let naive = (1u64..1 << 8)
            .filter(|&m| {
                (0..h.rows()).all(|r| {
                    let hits = (0..8).filter(|&c| m >> c & 1 == 1 && h.get(r, c)).count();
                    hits != 1
                })
            })
            .map(|m| m.count_ones() as usize)
            .min();
        let found = min_stopping_set(&g).unwrap().map(|s| s.support.len());
        assert_eq!(found, naive);
    }
}

#[test]
fn minimum_distance_matches_word_enumeration() {
    let g = build_case_c(&BaseGraph::complete(4), Arc::new(SubcodeSpec::builtin("spc3").unwrap())).unwrap();
    let h = g.to_parity_matrix();
    let n = h.cols();
    let naive = (1u64..1 << n)
        .filter(|&m| h.is_in_nullspace(&(0..n).map(|i| m >> i & 1 == 1).collect::<Vec<_>>()))
        .map(|m| m.count_ones() as usize)
        .min();
    assert_eq!(h.min_distance_exhaustive().unwrap(), naive);
    assert_eq!(naive, Some(3));
}

#[test]
fn complete_graph_constants() {
    // Eigenvalues of K_n are n-1 and -1, so μ = 1.
    let s = spectrum(&BaseGraph::complete(8).adjacency_matrix()).unwrap();
    assert!((s.mu2.unwrap() - 1.0).abs() < 1e-10);
    let [_, _, smin, wbsc] = case_c_bounds(8, 7, &rat(1), &frac(3, 7));
    // N ε (ε - μ/d) / (1 - μ/d) = 28 · 3/7 · 2/7 · 7/6
    let expected_smin = frac(28 * 3 * 2 * 7, 7 * 7 * 6);
    assert_eq!(smin.value, Some(expected_smin));
    assert_eq!(smin.value, Some(rat(4)));
    // N ε (ε/2 - μ/d) / (1 - μ/d) = 28 · 3/7 · 1/14 · 7/6
    assert_eq!(wbsc.value, Some(frac(28 * 3 * 7, 7 * 14 * 6)));
    assert_eq!(wbsc.value, Some(rat(1)));
}

#[test]
fn circulant_tightness() {
    for n in 3..=9 {
        let h = circulant(n);
        let bound = tanner_awgn_bound(&h).unwrap();
        // HHᵀ is the circulant 2I + S + Sᵀ, whose eigenvalues are 2 + 2cos(2πk/n).
        let mu2 = 2.0 + 2.0 * (2.0 * std::f64::consts::PI / n as f64).cos();
        let closed = n as f64 * (8.0 - 2.0 * mu2) / ((4.0 - mu2) * 2.0);
        let value = bound.value.unwrap();
        assert!((value - closed).abs() < 1e-8 && (value - n as f64).abs() < 1e-8, "n={n}: {value}");
        let g = TannerGraph::from_parity_matrix(&h).unwrap();
        let w = min_awgn_pseudoweight(&g).unwrap().unwrap();
        assert!((w.weight - n as f64).abs() < 1e-6);
    }
}

#[test]
fn alon_chung_on_petersen() {
    let r = verify_alon_chung(&BaseGraph::petersen()).unwrap();
    assert!(r.holds());
    assert!((r.mu - 2.0).abs() < 1e-9);
}

#[test]
fn verify_small_instances() {
    let g = build_case_c(&BaseGraph::complete(4), Arc::new(SubcodeSpec::builtin("spc3").unwrap())).unwrap();
    let t = verify_bounds(&g).unwrap();
    assert!(t.passed());
    assert!(t.row(BoundId::CSmin).is_some());
}
