use std::process::{Command, Output};

use crosskerr::cli::{CliError, EXIT_CONFIG, EXIT_PRECONDITION, EXIT_TOLERANCE};
use serde_json::Value;

fn crosskerr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crosskerr"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_json(args: &[&str]) -> Value {
    let out = crosskerr(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn csv_column(table: &str, name: &str) -> Vec<f64> {
    let mut r = csv::Reader::from_reader(table.as_bytes());
    let col = r.headers().unwrap().iter().position(|h| h == name).unwrap();
    r.records().map(|row| row.unwrap()[col].parse().unwrap()).collect()
}

#[test]
fn gaussian_reciprocation_fidelity() {
    let v = run_json(&["run", "--protocol", "reciprocation", "--alpha", "2", "--beta", "2", "--delta-width", "3", "--mode", "gaussian"]);
    let f = v["report"]["summary"]["fidelity"].as_f64().unwrap();
    assert!((f - 0.8325).abs() < 1e-3);
    assert_eq!(v["config"]["mode"], "gaussian");
}

#[test]
fn trivial_qubit_transfer() {
    let v = run_json(&["run", "--protocol", "transfer_qubit_to_qubit", "--a", "1", "--b", "0"]);
    for b in v["report"]["branches"].as_array().unwrap() {
        assert_eq!(b["fidelity"].as_f64().unwrap(), 1.0);
    }
}

#[test]
fn entanglement_transfer_probabilities() {
    let v = run_json(&["run", "--protocol", "entanglement_transfer", "--gamma", "1"]);
    let mut p: Vec<f64> = v["report"]["branches"]
        .as_array()
        .unwrap()
        .iter()
        .map(|b| b["probability"].as_f64().unwrap())
        .collect();
    p.sort_by(f64::total_cmp);
    for (got, want) in p.iter().zip([0.245421, 0.245421, 0.254579, 0.254579]) {
        assert!((got - want).abs() < 1e-6);
    }
}

#[test]
fn config_file_with_flag_override_and_echo() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("scenario.json");
    std::fs::write(&cfg, r#"{"protocol": "reciprocation", "mode": "gaussian", "alpha": 3, "delta-width": 3}"#).unwrap();
    let out = dir.path().join("out.json");
    let status = crosskerr(&["run", "--config", cfg.to_str().unwrap(), "--alpha", "2", "--out", out.to_str().unwrap()]);
    assert!(status.status.success());
    assert!(status.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["config"]["alpha"][0].as_f64(), Some(2.0));
    assert_eq!(v["config"]["beta"][0].as_f64(), Some(2.0));
    assert_eq!(v["config"]["delta_width"].as_f64(), Some(3.0));
    // Defaults are echoed.
    assert_eq!(v["config"]["settings"]["detuning_ratio"].as_f64(), Some(100.0));
    assert_eq!(v["config"]["settings"]["dynamics"], "dispersive");
    let f = v["report"]["summary"]["fidelity"].as_f64().unwrap();
    assert!((f - 0.8325).abs() < 1e-3);
}

#[test]
fn identical_runs_are_bitwise_identical() {
    let dir = tempfile::tempdir().unwrap();
    let paths = [dir.path().join("a.json"), dir.path().join("b.json")];
    for p in &paths {
        let out = crosskerr(&["run", "--protocol", "entanglement_swap", "--alpha", "1.5", "--out", p.to_str().unwrap()]);
        assert!(out.status.success());
    }
    assert_eq!(std::fs::read(&paths[0]).unwrap(), std::fs::read(&paths[1]).unwrap());
}

#[test]
fn numbers_carry_at_most_twelve_significant_digits() {
    let out = crosskerr(&["run", "--protocol", "reciprocation", "--mode", "gaussian", "--alpha", "2", "--delta-width", "1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    for token in text.split(|ch: char| !(ch.is_ascii_digit() || ch == '.' || ch == 'e' || ch == '-')) {
        let mantissa = token.split('e').next().unwrap();
        let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
        let digits = digits.trim_start_matches('0');
        assert!(digits.len() <= 12, "{token}");
    }
}

fn sweep(args: &[&str]) -> String {
    let out = crosskerr(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn width_sweep_reproduces_figure_ordering() {
    let grid = "0:5:21";
    let base = ["sweep", "--protocol", "reciprocation", "--mode", "gaussian", "--axis", "delta-width", "--range", grid];
    let two = sweep(&[&base[..], &["--alpha", "2"]].concat());
    let three = sweep(&[&base[..], &["--alpha", "3"]].concat());
    let (f2, f3) = (csv_column(&two, "fidelity"), csv_column(&three, "fidelity"));
    assert_eq!(f2.len(), 21);
    let widths = csv_column(&two, "delta-width");
    assert_eq!(widths[0], 0.0);
    assert_eq!(widths[20], 5.0);
    for w in f2.windows(2) {
        assert!(w[1] <= w[0] + 1e-12);
    }
    assert!(f2[0] > f2[12] && f2[12] > f2[20]);
    for k in 1..21 {
        assert!(f3[k] > f2[k], "Δ = {}", widths[k]);
    }
}

#[test]
fn sweep_to_file_and_empty_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    let status = crosskerr(&[
        "sweep", "--protocol", "entanglement_transfer", "--axis", "gamma", "--values", "0.5,1,3", "--out", out.to_str().unwrap(),
    ]);
    assert!(status.status.success());
    let table = std::fs::read_to_string(&out).unwrap();
    assert_eq!(csv_column(&table, "gamma"), vec![0.5, 1.0, 3.0]);

    let empty = crosskerr(&["sweep", "--protocol", "entanglement_transfer", "--axis", "gamma", "--range", "0:1:0"]);
    assert!(empty.status.success());
    assert_eq!(String::from_utf8(empty.stdout).unwrap().lines().count(), 1);
}

#[test]
fn validate_and_list() {
    let v = run_json(&["validate", "--protocol", "multipair_transfer", "--n-pairs", "2", "--alpha", "6"]);
    assert_eq!(v["n_pairs"].as_u64(), Some(2));
    let out = crosskerr(&["list"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 7);
    assert!(text.contains("entanglement_swap"));
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| crosskerr(args).status.code().unwrap();
    assert_eq!(code(&["run", "--protocol", "nonsense"]), EXIT_CONFIG);
    assert_eq!(code(&["run"]), EXIT_CONFIG);
    assert_eq!(code(&["run", "--protocol", "reciprocation", "--bogus-flag"]), EXIT_CONFIG);
    assert_eq!(code(&["run", "--config", "/nonexistent/scenario.json"]), EXIT_CONFIG);
    assert_eq!(code(&["run", "--protocol", "entanglement_transfer", "--mode", "gaussian"]), EXIT_CONFIG);
    assert_eq!(code(&["sweep", "--protocol", "reciprocation", "--axis", "colour", "--values", "1"]), EXIT_CONFIG);
    assert_eq!(code(&["run", "--protocol", "transfer_qubit_to_qubit", "--a", "1", "--b", "1"]), EXIT_PRECONDITION);
    assert_eq!(code(&["run", "--protocol", "multipair_transfer", "--n-pairs", "4"]), EXIT_PRECONDITION);
    assert_eq!(code(&["validate", "--protocol", "reciprocation"]), 0);

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, r#"{"protocol": "reciprocation", "alhpa": 2}"#).unwrap();
    assert_eq!(code(&["run", "--config", cfg.to_str().unwrap()]), EXIT_CONFIG);
}

#[test]
fn tolerance_failures_map_to_exit_four() {
    let e = CliError::from(crosskerr::Error::Tolerance("moment and quadrature disagree".into()));
    assert_eq!(e.exit_code(), EXIT_TOLERANCE);
    let q = CliError::from(crosskerr::Error::Quadrature { estimate: 1e-3, tolerance: 1e-6 });
    assert_eq!(q.exit_code(), EXIT_TOLERANCE);
}
