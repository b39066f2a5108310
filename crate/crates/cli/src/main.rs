use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use expander_codes_cli::{emit, run, Case, CliError, Command, Format, RunConfig};

#[derive(Parser)]
#[command(name = "expander-codes", version, about = "Expander-based LDPC codes: construction, bounds and exact oracles")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build or import a Tanner graph and write it as JSON and alist.
    Construct(Flags),
    /// Spectrum, expansion profile, code parameters and exact oracles.
    Analyze(Flags),
    /// Bounds whose hypotheses are measured on the graph.
    Bounds(Flags),
    /// Bounds checked against exact oracles.
    Verify(Flags),
    /// Erasure-decoder frame error rate sweep.
    Simulate(Flags),
    /// List built-in subcodes.
    Subcodes(Flags),
}

#[derive(Args, Default)]
struct Flags {
    /// JSON run configuration; flags given on the command line override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    case: Option<Case>,
    #[arg(long)]
    c: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    subcode: Option<String>,
    #[arg(long)]
    subcode2: Option<String>,
    #[arg(long)]
    base: Option<String>,
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    guard_subsets: Option<u64>,
    #[arg(long)]
    guard_n: Option<usize>,
    #[arg(long)]
    trials: Option<u64>,
    /// Comma-separated erasure probabilities.
    #[arg(long, value_delimiter = ',')]
    probs: Option<Vec<f64>>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    trial_log: Option<PathBuf>,
}

fn merge(command: Command, f: Flags) -> Result<RunConfig, CliError> {
    let mut cfg = match &f.config {
        Some(path) => {
            let mut c = RunConfig::load(path)?;
            c.command = command;
            c
        }
        None => RunConfig::new(command),
    };
    macro_rules! overlay {
        ($($field:ident),*) => {$(
            if let Some(v) = f.$field { cfg.$field = Some(v); }
        )*};
    }
    overlay!(case, c, d, n, m, subcode, subcode2, base, input, alpha, guard_subsets, guard_n, out, trial_log);
    if let Some(v) = f.seed {
        cfg.seed = v;
    }
    if let Some(v) = f.trials {
        cfg.trials = v;
    }
    if let Some(v) = f.probs {
        cfg.probs = v;
    }
    if let Some(v) = f.format {
        cfg.format = v;
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    let (command, flags) = match cli.command {
        Cmd::Construct(f) => (Command::Construct, f),
        Cmd::Analyze(f) => (Command::Analyze, f),
        Cmd::Bounds(f) => (Command::Bounds, f),
        Cmd::Verify(f) => (Command::Verify, f),
        Cmd::Simulate(f) => (Command::Simulate, f),
        Cmd::Subcodes(f) => (Command::Subcodes, f),
    };
    let result = merge(command, flags).and_then(|cfg| {
        log::debug!("config: {}", cfg.to_json());
        let report = run(&cfg)?;
        log::info!("{command:?} finished with {:?}", report.status);
        if let Some(text) = emit(&cfg, &report)? {
            print!("{text}");
        }
        Ok(report.status)
    });
    match result {
        Ok(status) => ExitCode::from(status.exit_code() as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
