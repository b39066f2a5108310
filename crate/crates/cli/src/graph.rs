//! Turning a [`RunConfig`] into a Tanner graph.

use std::path::Path;
use std::sync::Arc;

use expander_codes::gf2::{parse_alist, parse_dense};
use expander_codes::seeds::substream;
use expander_codes::tanner::{build_case_a, build_case_b, build_case_c, build_case_d, BaseGraph, BipartiteGraph};
use expander_codes::{SubcodeSpec, TannerGraph};

use crate::config::{Case, RunConfig};
use crate::CliError;

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn require(value: Option<usize>, flag: &str) -> Result<usize, CliError> {
    value.ok_or_else(|| CliError::Input(format!("--{flag} is required")))
}

fn subcode(name: Option<&str>, flag: &str) -> Result<Arc<SubcodeSpec>, CliError> {
    let name = name.ok_or_else(|| CliError::Input(format!("--{flag} is required")))?;
    Ok(Arc::new(SubcodeSpec::builtin(name)?))
}

fn parse_suffix(name: &str, prefix: &str) -> Option<usize> {
    name.strip_prefix(prefix)?.parse().ok()
}

/// Simple base graph for Case C.
pub fn base_graph(cfg: &RunConfig) -> Result<BaseGraph, CliError> {
    let name = cfg.base.as_deref().ok_or_else(|| CliError::Input("--base is required".into()))?;
    let key = name.to_ascii_lowercase();
    if key == "petersen" {
        return Ok(BaseGraph::petersen());
    }
    if key == "random" {
        let (d, n) = (require(cfg.d, "d")?, require(cfg.n, "n")?);
        return Ok(BaseGraph::random_regular(d, n, &mut substream(cfg.seed, "construction"))?);
    }
    if let Some(k) = parse_suffix(&key, "hypercube") {
        return Ok(BaseGraph::hypercube(k as u32));
    }
    if let Some(n) = parse_suffix(&key, "cycle") {
        return Ok(BaseGraph::cycle(n));
    }
    if let Some(n) = parse_suffix(&key, "k") {
        return Ok(BaseGraph::complete(n));
    }
    Ok(BaseGraph::parse_edge_list(&read(Path::new(name))?)?)
}

/// Bipartite base graph for Case D.
pub fn bipartite_base(cfg: &RunConfig) -> Result<BipartiteGraph, CliError> {
    let name = cfg.base.as_deref().ok_or_else(|| CliError::Input("--base is required".into()))?;
    let key = name.to_ascii_lowercase();
    if key == "random" {
        let (c, d, m) = (require(cfg.c, "c")?, require(cfg.d, "d")?, require(cfg.m, "m")?);
        return Ok(BipartiteGraph::random_biregular(c, d, m, &mut substream(cfg.seed, "construction"))?);
    }
    if let Some(rest) = key.strip_prefix('k') {
        if let Some((l, r)) = rest.split_once(['x', ',']) {
            if let (Ok(l), Ok(r)) = (l.parse(), r.parse()) {
                return Ok(BipartiteGraph::complete(l, r));
            }
        }
    }
    Ok(BipartiteGraph::parse_edge_list(&read(Path::new(name))?)?)
}

fn import(path: &Path) -> Result<TannerGraph, CliError> {
    let text = read(path)?;
    if text.trim_start().starts_with('{') {
        return Ok(TannerGraph::from_json(&text)?);
    }
    let h = match parse_alist(&text) {
        Ok(h) => h,
        Err(alist) => parse_dense(&text).map_err(|dense| {
            CliError::Input(format!("{}: neither alist ({alist}) nor dense ({dense})", path.display()))
        })?,
    };
    Ok(TannerGraph::from_parity_matrix(&h)?)
}

/// The graph a run operates on: an imported file, or a construction.
pub fn resolve(cfg: &RunConfig) -> Result<TannerGraph, CliError> {
    if let Some(path) = &cfg.input {
        return import(path);
    }
    let case = cfg
        .case
        .ok_or_else(|| CliError::Input("either --input or --case is required".into()))?;
    let g = match case {
        Case::A => build_case_a(require(cfg.c, "c")?, require(cfg.d, "d")?, require(cfg.n, "n")?, cfg.seed)?,
        Case::B => build_case_b(
            require(cfg.c, "c")?,
            require(cfg.d, "d")?,
            require(cfg.n, "n")?,
            subcode(cfg.subcode.as_deref(), "subcode")?,
            cfg.seed,
        )?,
        Case::C => build_case_c(&base_graph(cfg)?, subcode(cfg.subcode.as_deref(), "subcode")?)?,
        Case::D => {
            let s1 = subcode(cfg.subcode.as_deref(), "subcode")?;
            let s2 = match &cfg.subcode2 {
                Some(name) => subcode(Some(name), "subcode2")?,
                None => s1.clone(),
            };
            build_case_d(&bipartite_base(cfg)?, s1, s2)?
        }
    };
    Ok(g)
}
