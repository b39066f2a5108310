//! Versioned JSON graph format.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{ConstraintKind, Edge, ExpanderCodeParams, Origin, Provenance, TannerError, TannerGraph};
use crate::gf2::{parse_dense, write_dense};
use crate::subcodes::SubcodeSpec;

pub const TANNER_FORMAT: &str = "tanner-graph/v1";

#[derive(Serialize, Deserialize)]
#[serde(tag = "label", rename_all = "snake_case", deny_unknown_fields)]
enum ConstraintDoc {
    Parity,
    Subcode { subcode: String },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDoc {
    format: String,
    provenance: Provenance,
    variables: usize,
    constraints: Vec<ConstraintDoc>,
    /// Parity-check rows of each subcode, keyed by name.
    subcodes: BTreeMap<String, Vec<String>>,
    /// `[var, check, var_socket, check_socket]`.
    edges: Vec<[usize; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    params: Option<ExpanderCodeParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    origin: Option<Origin>,
}

pub(super) fn to_json(g: &TannerGraph) -> String {
    let mut subcodes: BTreeMap<String, Vec<String>> = BTreeMap::new();
    let mut keys: Vec<(Arc<SubcodeSpec>, String)> = Vec::new();
    let mut constraints = Vec::with_capacity(g.constraint_count());
    for c in g.constraints() {
        let doc = match &c.kind {
            ConstraintKind::SimpleParity => ConstraintDoc::Parity,
            ConstraintKind::Subcode(s) => {
                let key = match keys.iter().find(|(k, _)| k == s) {
                    Some((_, key)) => key.clone(),
                    None => {
                        let mut key = s.name().to_string();
                        let mut i = 2;
                        while subcodes.contains_key(&key) {
                            key = format!("{}#{i}", s.name());
                            i += 1;
                        }
                        let rows = write_dense(s.parity()).lines().map(str::to_string).collect();
                        subcodes.insert(key.clone(), rows);
                        keys.push((s.clone(), key.clone()));
                        key
                    }
                };
                ConstraintDoc::Subcode { subcode: key }
            }
        };
        constraints.push(doc);
    }
    let doc = GraphDoc {
        format: TANNER_FORMAT.to_string(),
        provenance: g.provenance(),
        variables: g.var_count(),
        constraints,
        subcodes,
        edges: g
            .edges()
            .iter()
            .map(|e| [e.var, e.check, e.var_socket, e.check_socket])
            .collect(),
        params: g.params().cloned(),
        origin: g.origin().cloned(),
    };
    serde_json::to_string_pretty(&doc).expect("graph documents serialize")
}

pub(super) fn from_json(text: &str) -> Result<TannerGraph, TannerError> {
    let doc: GraphDoc = serde_json::from_str(text).map_err(|e| TannerError::Parse(e.to_string()))?;
    if doc.format != TANNER_FORMAT {
        return Err(TannerError::Parse(format!("unsupported format {:?}", doc.format)));
    }
    let mut specs: BTreeMap<String, Arc<SubcodeSpec>> = BTreeMap::new();
    for (name, rows) in &doc.subcodes {
        let h = parse_dense(&rows.join("\n"))?;
        let label = name.split('#').next().unwrap_or(name);
        specs.insert(name.clone(), Arc::new(SubcodeSpec::from_parity(label, h)?));
    }
    let kinds = doc
        .constraints
        .iter()
        .map(|c| match c {
            ConstraintDoc::Parity => Ok(ConstraintKind::SimpleParity),
            ConstraintDoc::Subcode { subcode } => specs
                .get(subcode)
                .cloned()
                .map(ConstraintKind::Subcode)
                .ok_or_else(|| TannerError::Parse(format!("undefined subcode {subcode:?}"))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let edges = doc
        .edges
        .iter()
        .map(|&[var, check, var_socket, check_socket]| Edge {
            var,
            check,
            var_socket,
            check_socket,
        })
        .collect();
    let g = TannerGraph::from_edges(doc.variables, kinds, edges, doc.provenance)?;
    Ok(g.with_metadata(doc.params, doc.origin))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tanner::{build_case_b, build_case_c, build_case_d, BaseGraph, BipartiteGraph};

    #[test]
    fn round_trips() {
        let spc = Arc::new(SubcodeSpec::builtin("spc3").unwrap());
        let ham = Arc::new(SubcodeSpec::builtin("hamming74").unwrap());
        let rep = Arc::new(SubcodeSpec::builtin("rep4").unwrap());
        let spc4 = Arc::new(SubcodeSpec::builtin("spc4").unwrap());
        for g in [
            build_case_c(&BaseGraph::complete(4), spc).unwrap(),
            build_case_b(3, 7, 14, ham, 4).unwrap(),
            build_case_d(&BipartiteGraph::complete(4, 4), spc4, rep).unwrap(),
        ] {
            let text = g.to_json();
            let back = TannerGraph::from_json(&text).unwrap();
            assert_eq!(back.to_parity_matrix(), g.to_parity_matrix());
            assert_eq!(back.edges(), g.edges());
            assert_eq!(back.params(), g.params());
            assert_eq!(back.to_json(), text);
        }
    }

    #[test]
    fn rejects_unknown_fields_and_formats() {
        let g = TannerGraph::from_parity_matrix(&crate::gf2::BitMatrix::from_strs(&["11"]).unwrap()).unwrap();
        let text = g.to_json();
        assert!(TannerGraph::from_json(&text.replace("tanner-graph/v1", "x")).is_err());
        assert!(TannerGraph::from_json(&text.replacen('{', "{\"extra\": 1,", 1)).is_err());
    }
}
