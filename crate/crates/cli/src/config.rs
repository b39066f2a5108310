use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Construct,
    Analyze,
    Bounds,
    Verify,
    Simulate,
    Subcodes,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Case {
    A,
    B,
    C,
    D,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

fn default_trials() -> u64 {
    1000
}

/// Everything a run depends on. Echoed verbatim into every output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default)]
    pub case: Option<Case>,
    #[serde(default)]
    pub c: Option<usize>,
    #[serde(default)]
    pub d: Option<usize>,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub m: Option<usize>,
    #[serde(default)]
    pub subcode: Option<String>,
    /// Right-vertex subcode for Case D; defaults to `subcode`.
    #[serde(default)]
    pub subcode2: Option<String>,
    /// Named base graph (`k8`, `cycle5`, `petersen`, `hypercube3`, `k3x3`,
    /// `random`) or an edge-list path.
    #[serde(default)]
    pub base: Option<String>,
    /// Tanner graph JSON, alist or dense matrix.
    #[serde(default)]
    pub input: Option<PathBuf>,
    /// Rational expansion parameter, e.g. `1/4`.
    #[serde(default)]
    pub alpha: Option<String>,
    #[serde(default)]
    pub seed: u64,
    /// Largest number of subsets an expansion scan may visit.
    #[serde(default)]
    pub guard_subsets: Option<u64>,
    /// Largest variable count for exhaustive oracles.
    #[serde(default)]
    pub guard_n: Option<usize>,
    #[serde(default = "default_trials")]
    pub trials: u64,
    /// Erasure probabilities for `simulate`; empty means 0.1, 0.2, ..., 0.9.
    #[serde(default)]
    pub probs: Vec<f64>,
    #[serde(default)]
    pub format: Format,
    #[serde(default)]
    pub out: Option<PathBuf>,
    /// Per-trial CSV log for `simulate`.
    #[serde(default)]
    pub trial_log: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            case: None,
            c: None,
            d: None,
            n: None,
            m: None,
            subcode: None,
            subcode2: None,
            base: None,
            input: None,
            alpha: None,
            seed: 0,
            guard_subsets: None,
            guard_n: None,
            trials: default_trials(),
            probs: Vec::new(),
            format: Format::Json,
            out: None,
            trial_log: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn sweep(&self) -> Vec<f64> {
        if self.probs.is_empty() {
            (1..=9).map(|k| k as f64 / 10.0).collect()
        } else {
            self.probs.clone()
        }
    }
}
