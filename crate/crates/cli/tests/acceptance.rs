//! Acceptance suite. Runs every criterion, prints one line per criterion and
//! exits nonzero if any fails.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use expander_codes::bec::{failure_equivalence_sampled, failure_equivalence_scan};
use expander_codes::bounds::{bounds_for_graph, case_a_bounds, tanner_awgn_bound, verify_bounds, BoundId, RowStatus};
use expander_codes::expansion::{verify_alon_chung, verify_janwa_lal};
use expander_codes::lpsolve::{lp_solve, qp_min_norm, LinearProgram, LpOutcome, QpProblem, Relation};
use expander_codes::polytope::{
    in_fundamental_cone, min_awgn_pseudoweight, min_bsc_pseudoweight, validate_generalized, validate_simple, Level,
};
use expander_codes::scalar::{frac, rat, Rational};
use expander_codes::seeds::substream;
use expander_codes::tanner::{
    build_case_a, build_case_b, build_case_c, build_case_d, build_lift, reduce_cover_codeword, BaseGraph,
    BipartiteGraph, ConstraintKind, LiftSpec, Provenance,
};
use expander_codes::{BitMatrix, SubcodeSpec, TannerGraph};
use expander_codes_cli::{run, Case, Command, RunConfig};
use num_traits::Zero;
use rand::Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Result<Outcome, String> {
    Ok(Outcome {
        pass,
        detail: detail.into(),
    })
}

fn sub(name: &str) -> Arc<SubcodeSpec> {
    Arc::new(SubcodeSpec::builtin(name).expect("catalog subcode"))
}

fn circulant(n: usize) -> BitMatrix {
    let rows: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| j == i || j == (i + 1) % n).collect()).collect();
    BitMatrix::from_rows(&rows).expect("nonempty")
}

fn bound_instances() -> Vec<TannerGraph> {
    let mut out = Vec::new();
    for seed in 0..12 {
        for (c, d, n) in [(2, 4, 8), (3, 6, 12), (2, 3, 9), (3, 4, 8), (2, 4, 12), (3, 6, 14)] {
            out.push(build_case_a(c, d, n, seed).expect("feasible Case A"));
        }
    }
    for seed in 0..8 {
        for (c, d, n, s) in [
            (2, 7, 7, "hamming74"),
            (2, 7, 14, "hamming74"),
            (3, 7, 14, "hamming74"),
            (2, 4, 8, "rep4"),
            (3, 4, 12, "rep4"),
        ] {
            out.push(build_case_b(c, d, n, sub(s), seed).expect("feasible Case B"));
        }
    }
    for seed in 0..10u64 {
        let mut rng = substream(seed, "construction");
        for (d, n, s) in [(3, 4, "spc3"), (3, 6, "rep3"), (3, 8, "spc3"), (4, 6, "spc4"), (4, 7, "rep4")] {
            let base = BaseGraph::random_regular(d, n, &mut rng).expect("feasible base");
            out.push(build_case_c(&base, sub(s)).expect("Case C"));
        }
    }
    out.push(build_case_c(&BaseGraph::complete(8), sub("hamming74")).expect("Case C"));
    out.push(build_case_c(&BaseGraph::petersen(), sub("spc3")).expect("Case C"));
    for seed in 0..10u64 {
        let mut rng = substream(seed, "construction");
        for (c, d, m, s1, s2) in [
            (3, 3, 3, "spc3", "rep3"),
            (2, 3, 3, "spc2", "spc3"),
            (3, 3, 4, "rep3", "spc3"),
            (2, 4, 4, "rep2", "spc4"),
            (3, 4, 4, "spc3", "rep4"),
        ] {
            let base = BipartiteGraph::random_biregular(c, d, m, &mut rng).expect("feasible base");
            out.push(build_case_d(&base, sub(s1), sub(s2)).expect("Case D"));
        }
    }
    out
}

fn criterion_1() -> Result<Outcome, String> {
    let graphs = bound_instances();
    let (mut rows, mut passes, mut skipped, mut failures) = (0, 0, 0, Vec::new());
    let mut cases = [0usize; 4];
    for (i, g) in graphs.iter().enumerate() {
        match g.provenance() {
            Provenance::CaseA => cases[0] += 1,
            Provenance::CaseB => cases[1] += 1,
            Provenance::CaseC => cases[2] += 1,
            Provenance::CaseD => cases[3] += 1,
            _ => {}
        }
        let t = verify_bounds(g).map_err(|e| format!("instance {i}: {e}"))?;
        for r in &t.rows {
            rows += 1;
            match r.status {
                RowStatus::Pass => passes += 1,
                RowStatus::Skipped => skipped += 1,
                RowStatus::Fail => failures.push(format!("instance {i} {}", r.bound.id)),
                _ => {}
            }
        }
    }
    let enough = graphs.len() >= 200 && cases.iter().all(|&k| k > 0);
    outcome(
        enough && failures.is_empty() && passes > 0,
        format!(
            "{} instances (A {}, B {}, C {}, D {}), {rows} rows, {passes} checked, {skipped} beyond oracle guards, violations {:?}",
            graphs.len(),
            cases[0],
            cases[1],
            cases[2],
            cases[3],
            failures
        ),
    )
}

fn criterion_2() -> Result<Outcome, String> {
    let mut worst_bound = 0.0f64;
    let mut worst_awgn = 0.0f64;
    for n in 3..=12 {
        let h = circulant(n);
        let b = tanner_awgn_bound(&h).map_err(|e| e.to_string())?;
        let v = b.value.ok_or("T5 inapplicable on a circulant")?;
        worst_bound = worst_bound.max((v - n as f64).abs());
        let g = TannerGraph::from_parity_matrix(&h).map_err(|e| e.to_string())?;
        let w = min_awgn_pseudoweight(&g).map_err(|e| e.to_string())?.ok_or("trivial cone")?;
        worst_awgn = worst_awgn.max((w.weight - n as f64).abs());
    }
    outcome(
        worst_bound < 1e-8 && worst_awgn < 1e-6,
        format!("n = 3..12: max |T5 − n| = {worst_bound:.2e}, max |w_AWGN − n| = {worst_awgn:.2e}"),
    )
}

fn criterion_3() -> Result<Outcome, String> {
    let g = build_case_c(&BaseGraph::complete(8), sub("hamming74")).map_err(|e| e.to_string())?;
    let set = bounds_for_graph(&g).map_err(|e| e.to_string())?;
    let exact = |id| set.get(id).and_then(|b| b.exact.clone()).unwrap_or_default();
    let (smin, wbsc) = (exact(BoundId::CSmin), exact(BoundId::CWbsc));
    // αn = 10 with n = 20; c = 8 keeps δ = 3/4 strictly above 2/3 + 1/(3c).
    let [_, _, w] = case_a_bounds(&frac(1, 2), 20, &frac(3, 4), 8);
    let case_a = w.value.clone();
    outcome(
        smin == "4" && wbsc == "1" && case_a == Some(rat(8)),
        format!(
            "K8 + Hamming[7,4]: s_min bound {smin}, w_BSC bound {wbsc}; Case A δ = 3/4, αn = 10: w bound {}",
            case_a.map_or("inapplicable".into(), |v| v.to_string())
        ),
    )
}

fn criterion_4() -> Result<Outcome, String> {
    let mut graphs = 0;
    let mut subsets = 0u64;
    let mut violations = 0;
    let mut rng = substream(4, "construction");
    let regular = [(3, 10), (3, 12), (4, 9), (3, 14), (4, 12), (3, 16), (5, 12), (3, 18), (4, 16), (3, 20)];
    for k in 0..25 {
        let (d, n) = regular[k % regular.len()];
        let g = BaseGraph::random_regular(d, n, &mut rng).map_err(|e| e.to_string())?;
        let r = verify_alon_chung(&g).map_err(|e| e.to_string())?;
        graphs += 1;
        subsets += r.subsets_checked;
        violations += r.violations.len();
    }
    let biregular = [(2, 3, 6), (3, 3, 6), (2, 4, 8), (3, 4, 8), (3, 6, 12), (2, 3, 12), (3, 3, 11), (4, 4, 11)];
    for k in 0..25 {
        let (c, d, m) = biregular[k % biregular.len()];
        let g = BipartiteGraph::random_biregular(c, d, m, &mut rng).map_err(|e| e.to_string())?;
        if g.left + g.right > 22 {
            return Err(format!("bipartite instance with {} vertices", g.left + g.right));
        }
        let r = verify_janwa_lal(&g).map_err(|e| e.to_string())?;
        graphs += 1;
        subsets += r.subsets_checked;
        violations += r.violations.len();
    }
    outcome(
        graphs == 50 && violations == 0,
        format!("{graphs} graphs, {subsets} subsets, {violations} violations"),
    )
}

fn criterion_5() -> Result<Outcome, String> {
    let shapes = [(2, 4, 8), (3, 6, 12), (2, 3, 9), (3, 4, 12), (2, 4, 12), (2, 4, 16), (3, 6, 16), (2, 3, 15), (3, 4, 16), (2, 3, 6)];
    let (mut exhaustive, mut sampled, mut patterns, mut counterexamples) = (0, 0, 0u64, 0u64);
    for k in 0..30u64 {
        let (c, d, n) = shapes[k as usize % shapes.len()];
        let g = build_case_a(c, d, n, k).map_err(|e| e.to_string())?;
        let r = if n <= 12 {
            exhaustive += 1;
            failure_equivalence_scan(&g)
        } else {
            sampled += 1;
            failure_equivalence_sampled(&g, 10_000, k)
        }
        .map_err(|e| e.to_string())?;
        patterns += r.patterns;
        counterexamples += r.counterexamples;
    }
    outcome(
        counterexamples == 0,
        format!("{exhaustive} exhaustive + {sampled} sampled graphs, {patterns} patterns, {counterexamples} counterexamples"),
    )
}

fn tiny_graphs() -> Vec<TannerGraph> {
    let parity = |n: usize, checks: &[&[usize]]| {
        let pairs: Vec<(usize, usize)> = checks
            .iter()
            .enumerate()
            .flat_map(|(j, vs)| vs.iter().map(move |&v| (v, j)))
            .collect();
        TannerGraph::new(n, vec![ConstraintKind::SimpleParity; checks.len()], &pairs, Provenance::Imported)
            .expect("valid graph")
    };
    vec![
        parity(3, &[&[0, 1, 2]]),
        parity(3, &[&[0, 1], &[1, 2], &[2, 0]]),
        parity(4, &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]]),
        parity(5, &[&[0, 1, 2], &[2, 3, 4]]),
        parity(6, &[&[0, 1, 2, 3], &[2, 3, 4, 5], &[0, 1, 4, 5]]),
        parity(4, &[&[0, 1, 2], &[1, 2, 3], &[0, 3]]),
        build_case_a(2, 4, 4, 1).expect("Case A"),
        build_case_c(&BaseGraph::complete(4), sub("spc3")).expect("Case C"),
        build_case_c(&BaseGraph::complete(4), sub("rep3")).expect("Case C"),
        build_case_d(&BipartiteGraph::complete(2, 2), sub("rep2"), sub("spc2")).expect("Case D"),
    ]
}

fn in_polytope(g: &TannerGraph, p: &[Rational]) -> Result<bool, String> {
    if g.is_simple() {
        validate_simple(g, p)
    } else {
        validate_generalized(g, p, Level::Exact)
    }
    .map_err(|e| e.to_string())
}

fn criterion_6() -> Result<Outcome, String> {
    let (mut covers, mut reduced, mut invalid, mut witnesses, mut bad_witnesses) = (0, 0, 0, 0, 0);
    for g in tiny_graphs() {
        for degree in 1..=3 {
            for spec in LiftSpec::up_to_isomorphism(&g, degree) {
                covers += 1;
                let cover = build_lift(&g, &spec).map_err(|e| e.to_string())?;
                let words = cover.to_parity_matrix().codewords().map_err(|e| e.to_string())?;
                for w in words {
                    let p = reduce_cover_codeword(&g, &spec, &w).map_err(|e| e.to_string())?;
                    reduced += 1;
                    if !in_polytope(&g, &p.p)? {
                        invalid += 1;
                    }
                }
            }
        }
        let dmin = g.to_parity_matrix().min_distance_exhaustive().map_err(|e| e.to_string())?;
        let dmin = dmin.map_or(f64::INFINITY, |d| d as f64);
        if let Some(b) = min_bsc_pseudoweight(&g).map_err(|e| e.to_string())? {
            witnesses += 1;
            let ok = in_polytope(&g, &b.witness.p)? && b.weight.weight as f64 <= dmin;
            bad_witnesses += usize::from(!ok);
        }
        if let Some(a) = min_awgn_pseudoweight(&g).map_err(|e| e.to_string())? {
            witnesses += 1;
            let ok = in_fundamental_cone(&g, &a.witness.p).map_err(|e| e.to_string())? && a.weight <= dmin + 1e-6;
            bad_witnesses += usize::from(!ok);
        }
    }
    outcome(
        invalid == 0 && bad_witnesses == 0 && reduced > 0,
        format!("{covers} covers, {reduced} reduced codewords ({invalid} invalid), {witnesses} witnesses ({bad_witnesses} invalid)"),
    )
}

/// Solves the square system `a x = b` exactly; `None` when singular.
fn solve_square(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone() / a[col][col].clone();
                for k in col..n {
                    let v = f.clone() * a[col][k].clone();
                    a[r][k] -= v;
                }
                let v = f * b[col].clone();
                b[r] -= v;
            }
        }
    }
    Some((0..n).map(|i| b[i].clone() / a[i][i].clone()).collect())
}

/// Best objective over all basic feasible points of `{A x ≤ b}`.
fn vertex_enumeration(rows: &[(Vec<Rational>, Rational)], objective: &[Rational]) -> Option<Rational> {
    let n = objective.len();
    let m = rows.len();
    let mut best: Option<Rational> = None;
    let mut pick: Vec<usize> = (0..n).collect();
    loop {
        let a: Vec<Vec<Rational>> = pick.iter().map(|&r| rows[r].0.clone()).collect();
        let b: Vec<Rational> = pick.iter().map(|&r| rows[r].1.clone()).collect();
        if let Some(x) = solve_square(a, b) {
            let feasible = rows.iter().all(|(coef, rhs)| {
                coef.iter().zip(&x).fold(Rational::zero(), |acc, (c, v)| acc + c * v) <= *rhs
            });
            if feasible {
                let v = objective.iter().zip(&x).fold(Rational::zero(), |acc, (c, v)| acc + c * v);
                if best.as_ref().is_none_or(|b| v > *b) {
                    best = Some(v);
                }
            }
        }
        let mut i = n;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            if pick[i] < m - n + i {
                break;
            }
        }
        pick[i] += 1;
        for j in i + 1..n {
            pick[j] = pick[j - 1] + 1;
        }
    }
}

fn criterion_7() -> Result<Outcome, String> {
    let mut rng = substream(7, "simulation");
    let (mut agree, mut infeasible, mut mismatches) = (0, 0, Vec::new());
    for trial in 0..500 {
        let n = rng.gen_range(1..=6);
        let extra = rng.gen_range(1..=5);
        let mut lp = LinearProgram::<Rational>::new(n);
        let mut rows: Vec<(Vec<Rational>, Rational)> = Vec::new();
        for i in 0..n {
            let unit = |s: i64| (0..n).map(|k| if k == i { rat(s) } else { Rational::zero() }).collect::<Vec<_>>();
            rows.push((unit(1), rat(rng.gen_range(1..=6))));
            rows.push((unit(-1), rat(rng.gen_range(0..=3))));
        }
        for _ in 0..extra {
            let coef: Vec<Rational> = (0..n).map(|_| rat(rng.gen_range(-4..=4))).collect();
            let rhs = rat(rng.gen_range(-3..=8));
            rows.push((coef, rhs));
        }
        for (coef, rhs) in &rows {
            if rng.gen_bool(0.15) {
                let neg: Vec<Rational> = coef.iter().map(|c| -c.clone()).collect();
                lp.add_row(neg, Relation::Ge, -rhs.clone());
            } else {
                lp.add_row(coef.clone(), Relation::Le, rhs.clone());
            }
        }
        let objective: Vec<Rational> = (0..n).map(|_| frac(rng.gen_range(-5..=5), rng.gen_range(1..=3))).collect();
        lp.set_objective(objective.clone());
        let expected = vertex_enumeration(&rows, &objective);
        match (lp_solve(&lp), expected) {
            (LpOutcome::Optimal { value, point }, Some(v)) if value == v && lp.is_feasible(&point, &Rational::zero()) => {
                agree += 1
            }
            (LpOutcome::Infeasible, None) => {
                agree += 1;
                infeasible += 1;
            }
            (got, want) => mismatches.push(format!("trial {trial}: solver {got:?}, enumeration {want:?}")),
        }
    }
    let mut worst_qp = 0.0f64;
    for n in 2..=10 {
        let mut lp = LinearProgram::<f64>::nonnegative(n);
        lp.add_row(vec![1.0; n], Relation::Eq, 1.0);
        let sol = qp_min_norm(&QpProblem::new(lp), 1e-12).map_err(|e| e.to_string())?;
        worst_qp = worst_qp.max((sol.value - 1.0 / n as f64).abs());
    }
    mismatches.truncate(3);
    outcome(
        agree == 500 && worst_qp < 1e-8,
        format!(
            "{agree}/500 LPs agree ({infeasible} infeasible), simplex QP max |value − 1/n| = {worst_qp:.2e}{}",
            if mismatches.is_empty() { String::new() } else { format!(", first mismatches {mismatches:?}") }
        ),
    )
}

fn criterion_8() -> Result<Outcome, String> {
    let mut configs = Vec::new();
    for command in [Command::Analyze, Command::Verify] {
        let mut a = RunConfig::new(command);
        a.case = Some(Case::A);
        (a.c, a.d, a.n, a.seed) = (Some(3), Some(6), Some(12), 7);
        configs.push(a);
        let mut c = RunConfig::new(command);
        c.case = Some(Case::C);
        c.base = Some("k4".into());
        c.subcode = Some("spc3".into());
        configs.push(c);
        let mut d = RunConfig::new(command);
        d.case = Some(Case::D);
        d.base = Some("random".into());
        (d.c, d.d, d.m, d.seed) = (Some(3), Some(3), Some(4), 11);
        d.subcode = Some("spc3".into());
        configs.push(d);
    }
    let mut identical = 0;
    for cfg in &configs {
        let first = run(cfg).map_err(|e| e.to_string())?.text;
        let second = run(cfg).map_err(|e| e.to_string())?.text;
        let reparsed = RunConfig::from_json(&cfg.to_json()).map_err(|e| e.to_string())?;
        let third = run(&reparsed).map_err(|e| e.to_string())?.text;
        identical += usize::from(first == second && second == third);
    }
    let exe = env!("CARGO_BIN_EXE_expander-codes");
    let args = ["analyze", "--case", "b", "--c", "2", "--d", "7", "--n", "14", "--subcode", "hamming74", "--seed", "3"];
    let a = std::process::Command::new(exe).args(args).output().map_err(|e| e.to_string())?;
    let b = std::process::Command::new(exe).args(args).output().map_err(|e| e.to_string())?;
    let binary = a.status.success() && a.stdout == b.stdout && !a.stdout.is_empty();
    outcome(
        identical == configs.len() && binary,
        format!("{identical}/{} library runs byte-identical, binary runs identical: {binary}", configs.len()),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Result<Outcome, String>); 8] = [
        ("bound soundness", criterion_1),
        ("parity-oriented AWGN tightness", criterion_2),
        ("regression constants", criterion_3),
        ("edge-count lemmas", criterion_4),
        ("stopping sets and erasure decoding", criterion_5),
        ("polytope consistency", criterion_6),
        ("solver cross-check", criterion_7),
        ("determinism", criterion_8),
    ];
    let results: Vec<(usize, &str, Result<Outcome, String>, f64)> = std::thread::scope(|s| {
        let handles: Vec<_> = criteria
            .iter()
            .enumerate()
            .map(|(i, &(name, f))| {
                s.spawn(move || {
                    let start = Instant::now();
                    let r = f();
                    (i + 1, name, r, start.elapsed().as_secs_f64())
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("criterion panicked")).collect()
    });
    let mut all = true;
    for (i, name, r, secs) in results {
        let (pass, detail) = match r {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        all &= pass;
        println!(
            "acceptance criterion {i} ({name}): {} [{secs:.1}s] {detail}",
            if pass { "PASS" } else { "FAIL" }
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
