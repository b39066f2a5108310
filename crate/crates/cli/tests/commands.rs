use std::process::{Command, Output};

use expander_codes_cli::{run, Case, Command as Cmd, RunConfig, Status};
use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_expander-codes"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn case_c(command: Cmd, base: &str, subcode: &str) -> RunConfig {
    let mut cfg = RunConfig::new(command);
    cfg.case = Some(Case::C);
    cfg.base = Some(base.into());
    cfg.subcode = Some(subcode.into());
    cfg
}

#[test]
fn construct_is_deterministic() {
    let args = ["construct", "--case", "a", "--c", "3", "--d", "6", "--n", "12", "--seed", "9"];
    let (a, b) = (bin(&args), bin(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let doc = json(&a);
    assert_eq!(doc["tool"], "expander-codes");
    assert_eq!(doc["config"]["seed"], 9);
}

#[test]
fn construct_writes_side_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("k4");
    let out_s = out.to_str().unwrap();
    let o = bin(&["construct", "--case", "c", "--base", "k4", "--subcode", "spc3", "--out", out_s]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(dir.path().join("k4.alist").exists());
    assert!(dir.path().join("k4.graph.json").exists());

    let alist = dir.path().join("k4.alist");
    let o = bin(&["verify", "--input", alist.to_str().unwrap()]);
    assert!(matches!(o.status.code(), Some(0) | Some(2)));
}

#[test]
fn mismatched_subcode_is_an_input_error() {
    let o = bin(&["construct", "--case", "c", "--base", "k4", "--subcode", "spc4"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
}

#[test]
fn missing_flags_are_input_errors() {
    assert_eq!(bin(&["bounds", "--case", "a", "--c", "3"]).status.code(), Some(4));
    assert_eq!(bin(&["bounds"]).status.code(), Some(4));
}

#[test]
fn guard_exceeded_exits_five() {
    let o = bin(&["verify", "--case", "c", "--base", "k8", "--subcode", "hamming74", "--guard-n", "10"]);
    assert_eq!(o.status.code(), Some(5));
}

#[test]
fn k8_hamming_bounds() {
    let report = run(&case_c(Cmd::Bounds, "k8", "hamming74")).unwrap();
    assert_eq!(report.status, Status::Ok);
    let doc: Value = serde_json::from_str(&report.text).unwrap();
    let text = doc["result"].to_string();
    assert!(text.contains("C.smin"));
    assert!(text.contains("C.wbsc"));
}

#[test]
fn verify_small_case_c_passes() {
    let report = run(&case_c(Cmd::Verify, "k4", "spc3")).unwrap();
    assert_eq!(report.status, Status::Ok, "{}", report.text);
}

#[test]
fn simulate_default_sweep_csv() {
    let o = bin(&[
        "simulate", "--case", "a", "--c", "3", "--d", "6", "--n", "12", "--trials", "50", "--format", "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# expander-codes "));
    assert_eq!(lines[1], "erasure_prob,fer,ci_low,ci_high,trials,failures");
    assert_eq!(lines.len(), 2 + 9);
}

#[test]
fn config_file_round_trip_matches_flags() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    let cfg = case_c(Cmd::Bounds, "petersen", "spc3");
    std::fs::write(&path, cfg.to_json()).unwrap();
    let from_file = bin(&["bounds", "--config", path.to_str().unwrap()]);
    let from_flags = bin(&["bounds", "--case", "c", "--base", "petersen", "--subcode", "spc3"]);
    assert_eq!(from_file.status.code(), Some(0));
    assert_eq!(from_file.stdout, from_flags.stdout);
}

#[test]
fn unknown_config_key_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"command": "bounds", "case": "c", "bse": "k4"}"#).unwrap();
    let o = bin(&["bounds", "--config", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bse"));
}

#[test]
fn subcodes_lists_catalog() {
    let o = bin(&["subcodes", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("hamming74"));
}
