//! Batch front end: construction, analysis, bounds, verification and
//! erasure simulation, each producing one reproducible document.

pub mod config;
pub mod graph;

use std::fmt::Write as _;
use std::path::PathBuf;

use expander_codes::bec::{monte_carlo_fer_logged, trial_log_csv, BecError, FerEstimate};
use expander_codes::bounds::{bounds_for_graph, oracle_doc, verify_bounds, BoundsError, OracleDoc, Quantity, RowStatus};
use expander_codes::expansion::{subset_count, vertex_expansion_profile, ExpansionError, EXPANSION_SUBSET_BUDGET};
use expander_codes::gf2::write_alist;
use expander_codes::polytope::{PolytopeError, BSC_MAX_N};
use expander_codes::scalar::{fixed, frac, parse_rational};
use expander_codes::spectral::{hht_spectrum, spectrum, SpectralError, SpectrumReport};
use expander_codes::subcodes::SubcodeError;
use expander_codes::tanner::{Origin, TannerError};
use expander_codes::{Gf2Error, SubcodeSpec, TannerGraph};
use serde::Serialize;
use thiserror::Error;

pub use config::{Case, Command, Format, RunConfig};

pub const TOOL: &str = "expander-codes";
/// Default variable cap for pseudoweight searches in `analyze`.
pub const DEFAULT_PSEUDOWEIGHT_N: usize = BSC_MAX_N;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("guard exceeded: {0}")]
    Guard(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 4,
            CliError::Guard(_) => 5,
        }
    }
}

impl From<Gf2Error> for CliError {
    fn from(e: Gf2Error) -> Self {
        match e {
            Gf2Error::DimensionTooLarge { .. } => CliError::Guard(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<TannerError> for CliError {
    fn from(e: TannerError) -> Self {
        match e {
            TannerError::Gf2(g) => g.into(),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<SubcodeError> for CliError {
    fn from(e: SubcodeError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<SpectralError> for CliError {
    fn from(e: SpectralError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<ExpansionError> for CliError {
    fn from(e: ExpansionError) -> Self {
        match e {
            ExpansionError::SubsetSpaceTooLarge(_) => CliError::Guard(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<PolytopeError> for CliError {
    fn from(e: PolytopeError) -> Self {
        match e {
            PolytopeError::SearchSpaceTooLarge { .. } | PolytopeError::DegreeTooLarge { .. } => {
                CliError::Guard(e.to_string())
            }
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<BecError> for CliError {
    fn from(e: BecError) -> Self {
        match e {
            BecError::SearchSpaceTooLarge { .. } => CliError::Guard(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<BoundsError> for CliError {
    fn from(e: BoundsError) -> Self {
        match e {
            BoundsError::Expansion(x) => x.into(),
            BoundsError::Tanner(x) => x.into(),
            BoundsError::Gf2(x) => x.into(),
            BoundsError::Polytope(x) => x.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

/// How a successful run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// No bound's hypotheses hold.
    InapplicableOnly,
    VerificationFailed,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::InapplicableOnly => 2,
            Status::VerificationFailed => 3,
        }
    }
}

/// Output of one command: the main document plus any side files.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub text: String,
    pub status: Status,
    pub files: Vec<(PathBuf, String)>,
}

impl Report {
    fn ok(text: String) -> Self {
        Self {
            text,
            status: Status::Ok,
            files: Vec::new(),
        }
    }
}

#[derive(Serialize)]
struct Document<'a, R: Serialize> {
    tool: &'static str,
    version: &'static str,
    config: &'a RunConfig,
    result: R,
}

fn document<R: Serialize>(cfg: &RunConfig, result: R) -> String {
    let doc = Document {
        tool: TOOL,
        version: env!("CARGO_PKG_VERSION"),
        config: cfg,
        result,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("documents serialize");
    s.push('\n');
    s
}

fn csv_header(cfg: &RunConfig) -> String {
    let config = serde_json::to_string(cfg).expect("config serializes");
    format!("# {TOOL} {} config={config}\n", env!("CARGO_PKG_VERSION"))
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Dispatches on `cfg.command`.
pub fn run(cfg: &RunConfig) -> Result<Report, CliError> {
    match cfg.command {
        Command::Construct => cmd_construct(cfg),
        Command::Analyze => cmd_analyze(cfg),
        Command::Bounds => cmd_bounds(cfg),
        Command::Verify => cmd_verify(cfg),
        Command::Simulate => cmd_simulate(cfg),
        Command::Subcodes => cmd_subcodes(cfg),
    }
}

/// Writes the report to `cfg.out` (or returns it for stdout) and its side
/// files.
pub fn emit(cfg: &RunConfig, report: &Report) -> Result<Option<String>, CliError> {
    let write = |path: &PathBuf, text: &str| {
        std::fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
    };
    for (path, text) in &report.files {
        write(path, text)?;
    }
    match &cfg.out {
        Some(path) => write(path, &report.text).map(|_| None),
        None => Ok(Some(report.text.clone())),
    }
}

fn guard_n(cfg: &RunConfig, g: &TannerGraph) -> Result<(), CliError> {
    match cfg.guard_n {
        Some(max) if g.var_count() > max => Err(CliError::Guard(format!(
            "{} variables exceed --guard-n {max}",
            g.var_count()
        ))),
        _ => Ok(()),
    }
}

#[derive(Serialize)]
struct GraphSummary {
    provenance: expander_codes::tanner::Provenance,
    variables: usize,
    constraints: usize,
    edges: usize,
    simple: bool,
    connected: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    params: Option<expander_codes::tanner::ExpanderCodeParams>,
}

fn summary(g: &TannerGraph) -> GraphSummary {
    GraphSummary {
        provenance: g.provenance(),
        variables: g.var_count(),
        constraints: g.constraint_count(),
        edges: g.edges().len(),
        simple: g.is_simple(),
        connected: g.is_connected(),
        params: g.params().cloned(),
    }
}

/// Builds or imports a graph and renders it as Tanner JSON and alist.
pub fn cmd_construct(cfg: &RunConfig) -> Result<Report, CliError> {
    if cfg.format == Format::Csv {
        return Err(CliError::Input("construct writes JSON and alist only".into()));
    }
    let g = graph::resolve(cfg)?;
    let graph_json: serde_json::Value = serde_json::from_str(&g.to_json()).expect("graph JSON is valid");
    let alist = write_alist(&g.to_parity_matrix());
    #[derive(Serialize)]
    struct Construct {
        summary: GraphSummary,
        graph: serde_json::Value,
        alist: String,
    }
    let mut report = Report::ok(document(
        cfg,
        Construct {
            summary: summary(&g),
            graph: graph_json,
            alist: alist.clone(),
        },
    ));
    if let Some(out) = &cfg.out {
        report.files.push((out.with_extension("alist"), alist));
        report.files.push((out.with_extension("graph.json"), g.to_json()));
    }
    Ok(report)
}

#[derive(Serialize)]
struct SpectrumDoc {
    eigenvalues: Vec<f64>,
    mu1: f64,
    mu2: Option<f64>,
    /// Largest eigenvalue modulus after removing `±μ₁` (bipartite base).
    #[serde(skip_serializing_if = "Option::is_none")]
    nontrivial: Option<f64>,
}

fn spectrum_doc(s: &SpectrumReport<f64>, bipartite: bool) -> SpectrumDoc {
    SpectrumDoc {
        eigenvalues: s.eigenvalues.iter().map(|&x| fixed(x)).collect(),
        mu1: fixed(s.mu1),
        mu2: s.mu2.map(fixed),
        nontrivial: bipartite.then(|| fixed(s.nontrivial_mu_bipartite())),
    }
}

#[derive(Serialize)]
#[serde(untagged)]
enum Maybe<T> {
    Value(T),
    Unavailable { unavailable: String },
}

fn maybe<T>(r: Result<T, CliError>) -> Result<Maybe<T>, CliError> {
    match r {
        Ok(v) => Ok(Maybe::Value(v)),
        Err(CliError::Guard(why)) => Ok(Maybe::Unavailable { unavailable: why }),
        Err(e) => Err(e),
    }
}

fn expansion_alpha(cfg: &RunConfig, n: usize) -> Result<expander_codes::Rational, CliError> {
    let budget = cfg.guard_subsets.map_or(EXPANSION_SUBSET_BUDGET, u128::from);
    if let Some(text) = &cfg.alpha {
        let alpha = parse_rational(text).ok_or_else(|| CliError::Input(format!("--alpha {text} is not a rational")))?;
        let cap = (alpha.clone() * frac(n as i64, 1)).ceil().to_integer();
        let cap: usize = cap.to_string().parse::<usize>().unwrap_or(usize::MAX).saturating_sub(1);
        let total = subset_count(n, cap);
        if total > budget {
            return Err(CliError::Guard(format!("{total} subsets exceed --guard-subsets {budget}")));
        }
        return Ok(alpha);
    }
    let mut cap = 0;
    while cap + 1 <= n / 2 && subset_count(n, cap + 1) <= budget {
        cap += 1;
    }
    Ok(frac((cap + 1) as i64, n as i64))
}

/// Spectrum, expansion profile, code parameters and exact oracles.
pub fn cmd_analyze(cfg: &RunConfig) -> Result<Report, CliError> {
    let g = graph::resolve(cfg)?;
    let n = g.var_count();
    let h = g.to_parity_matrix();
    let parity = spectrum_doc(&hht_spectrum(&h)?, false);
    let base = match g.origin() {
        Some(Origin::Graph(b)) => Some(spectrum_doc(&spectrum(&b.adjacency_matrix())?, false)),
        Some(Origin::Bipartite(b)) => Some(spectrum_doc(&spectrum(&b.adjacency_matrix())?, true)),
        None => None,
    };
    let expansion = match expansion_alpha(cfg, n) {
        Ok(alpha) => maybe(vertex_expansion_profile(&g, &alpha).map_err(CliError::from))?,
        Err(CliError::Guard(why)) if cfg.alpha.is_some() => return Err(CliError::Guard(why)),
        Err(e) => return Err(e),
    };
    let code = maybe(h.code_params().map_err(CliError::from))?;
    let cap = cfg.guard_n.unwrap_or(DEFAULT_PSEUDOWEIGHT_N);
    let oracles: Vec<OracleDoc> = [
        Quantity::MinDistance,
        Quantity::MinStoppingSet,
        Quantity::MinBscWeight,
        Quantity::MinAwgnWeight,
    ]
    .into_iter()
    .map(|q| {
        let exhaustive = matches!(q, Quantity::MinDistance | Quantity::MinStoppingSet);
        if !exhaustive && n > cap || exhaustive && cfg.guard_n.is_some_and(|m| n > m) {
            OracleDoc {
                quantity: q,
                exact: None,
                value: None,
                lower: None,
                infinite: false,
                certified: false,
                witness_support: Vec::new(),
                witness: Vec::new(),
                unavailable: Some(format!("{n} variables exceed the oracle cap {cap}")),
            }
        } else {
            oracle_doc(&g, q)
        }
    })
    .collect();
    #[derive(Serialize)]
    struct Analysis {
        summary: GraphSummary,
        parity_spectrum: SpectrumDoc,
        #[serde(skip_serializing_if = "Option::is_none")]
        base_spectrum: Option<SpectrumDoc>,
        expansion: Maybe<expander_codes::expansion::ExpansionProfile>,
        code: Maybe<expander_codes::CodeParams>,
        oracles: Vec<OracleDoc>,
    }
    let analysis = Analysis {
        summary: summary(&g),
        parity_spectrum: parity,
        base_spectrum: base,
        expansion,
        code,
        oracles,
    };
    if cfg.format == Format::Csv {
        let mut out = csv_header(cfg);
        out.push_str("quantity,exact,value,certified,unavailable\n");
        for o in &analysis.oracles {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                serde_json::to_value(o.quantity).expect("serializes").as_str().unwrap_or_default(),
                o.exact.as_deref().unwrap_or(""),
                o.value.map(|v| format!("{v:.10}")).unwrap_or_default(),
                o.certified,
                csv_field(o.unavailable.as_deref().unwrap_or(""))
            );
        }
        return Ok(Report::ok(out));
    }
    Ok(Report::ok(document(cfg, analysis)))
}

/// Every bound that applies to the graph, from measured parameters.
pub fn cmd_bounds(cfg: &RunConfig) -> Result<Report, CliError> {
    let g = graph::resolve(cfg)?;
    guard_n(cfg, &g)?;
    let set = bounds_for_graph(&g)?;
    let status = if set.bounds.iter().any(|b| b.applicable) {
        Status::Ok
    } else {
        Status::InapplicableOnly
    };
    let text = if cfg.format == Format::Csv {
        let mut out = csv_header(cfg);
        out.push_str("bound,quantity,applicable,strict,conjectural,exact,value,failing\n");
        for b in &set.bounds {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                b.id,
                serde_json::to_value(b.quantity).expect("serializes").as_str().unwrap_or_default(),
                b.applicable,
                b.strict,
                b.conjectural,
                b.exact.as_deref().unwrap_or(""),
                b.value.map(|v| format!("{v:.10}")).unwrap_or_default(),
                csv_field(&b.hypotheses.iter().find(|h| !h.holds).map(|h| h.condition.clone()).unwrap_or_default()),
            );
        }
        out
    } else {
        document(cfg, &set)
    };
    Ok(Report { text, status, files: Vec::new() })
}

/// Applicable bounds checked against exact oracles.
pub fn cmd_verify(cfg: &RunConfig) -> Result<Report, CliError> {
    let g = graph::resolve(cfg)?;
    guard_n(cfg, &g)?;
    let table = verify_bounds(&g)?;
    let status = if !table.passed() {
        Status::VerificationFailed
    } else if table.rows.iter().all(|r| r.status == RowStatus::Inapplicable) {
        Status::InapplicableOnly
    } else {
        Status::Ok
    };
    let text = if cfg.format == Format::Csv {
        let mut out = csv_header(cfg);
        out.push_str("bound,status,bound_value,exact,oracle_value\n");
        for r in &table.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                r.bound.id,
                serde_json::to_value(r.status).expect("serializes").as_str().unwrap_or_default(),
                r.bound.value.map(|v| format!("{v:.10}")).unwrap_or_default(),
                r.oracle.as_ref().and_then(|o| o.exact.clone()).unwrap_or_default(),
                r.oracle.as_ref().and_then(|o| o.value).map(|v| format!("{v:.10}")).unwrap_or_default(),
            );
        }
        out
    } else {
        document(cfg, &table)
    };
    Ok(Report { text, status, files: Vec::new() })
}

fn rounded(e: FerEstimate) -> FerEstimate {
    FerEstimate {
        erasure_prob: fixed(e.erasure_prob),
        fer: fixed(e.fer),
        ci_low: fixed(e.ci_low),
        ci_high: fixed(e.ci_high),
        ..e
    }
}

/// Erasure-decoder frame error rate over a sweep of erasure probabilities.
pub fn cmd_simulate(cfg: &RunConfig) -> Result<Report, CliError> {
    if cfg.trials == 0 {
        return Err(CliError::Input("--trials must be positive".into()));
    }
    let g = graph::resolve(cfg)?;
    let mut rows = Vec::new();
    let mut log = String::new();
    for p in cfg.sweep() {
        let (estimate, trials) = monte_carlo_fer_logged(&g, p, cfg.trials, cfg.seed)?;
        if cfg.trial_log.is_some() {
            let csv = trial_log_csv(&trials);
            let body = csv.split_once('\n').map_or("", |(_, rest)| rest);
            if log.is_empty() {
                log.push_str("erasure_prob,");
                log.push_str(csv.lines().next().unwrap_or_default());
                log.push('\n');
            }
            for line in body.lines() {
                let _ = writeln!(log, "{:.10},{line}", fixed(p));
            }
        }
        rows.push(rounded(estimate));
    }
    let text = if cfg.format == Format::Csv {
        let mut out = csv_header(cfg);
        out.push_str("erasure_prob,fer,ci_low,ci_high,trials,failures\n");
        for r in &rows {
            let _ = writeln!(
                out,
                "{:.10},{:.10},{:.10},{:.10},{},{}",
                r.erasure_prob, r.fer, r.ci_low, r.ci_high, r.trials, r.failures
            );
        }
        out
    } else {
        #[derive(Serialize)]
        struct Sweep {
            summary: GraphSummary,
            rows: Vec<FerEstimate>,
        }
        document(
            cfg,
            Sweep {
                summary: summary(&g),
                rows,
            },
        )
    };
    let mut report = Report::ok(text);
    if let Some(path) = &cfg.trial_log {
        report.files.push((path.clone(), log));
    }
    Ok(report)
}

/// The built-in subcode catalog.
pub fn cmd_subcodes(cfg: &RunConfig) -> Result<Report, CliError> {
    let catalog = SubcodeSpec::catalog();
    if cfg.format == Format::Csv {
        let mut out = csv_header(cfg);
        out.push_str("key,name,n,k,dmin,epsilon\n");
        for e in &catalog {
            let _ = writeln!(out, "{},{},{},{},{},{}", e.key, csv_field(&e.name), e.n, e.k, e.dmin, e.epsilon);
        }
        return Ok(Report::ok(out));
    }
    Ok(Report::ok(document(cfg, catalog)))
}
