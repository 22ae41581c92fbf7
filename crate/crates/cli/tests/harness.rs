//! Plumbing tests for the binary: exit codes, strict config parsing, and
//! artifact layout.

use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rigidity-lab"))
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

#[test]
fn passing_run_exits_zero_and_writes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("c.toml");
    write(&config, "suite = \"warped\"\n");
    let out = dir.path().join("out");
    let status = bin()
        .args(["warped", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    for rel in ["report.json", "meta.json", "tables", "plots"] {
        assert!(out.join(rel).exists(), "missing {rel}");
    }
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["all_pass"], serde_json::Value::Bool(true));
    assert_eq!(report["suite"], "warped");
    // every check carries a non-empty anchor
    for check in report["checks"].as_array().unwrap() {
        assert!(!check["anchor"].as_str().unwrap().is_empty());
        assert!(!check["inputs"].as_str().unwrap().is_empty());
    }
    // series-bearing checks got a CSV and an SVG
    assert!(out.join("tables/warped-closed-form-order.csv").exists());
    assert!(out.join("plots/warped-closed-form-order.svg").exists());
}

#[test]
fn unknown_config_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("c.toml");
    write(&config, "suite = \"warped\"\nfrobnicate = 3\n");
    let status = bin().args(["warped", "--config"]).arg(&config).status().unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn unknown_params_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("c.toml");
    write(&config, "suite = \"warped\"\n\n[params]\nbogus = 1\n");
    let status = bin().args(["warped", "--config"]).arg(&config).status().unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn missing_seed_for_monte_carlo_suite_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("c.toml");
    write(&config, "suite = \"tracenorm\"\n");
    let output = bin().args(["tracenorm", "--config"]).arg(&config).output().unwrap();
    assert_eq!(output.status.code(), Some(2));
    let err = String::from_utf8_lossy(&output.stderr);
    assert!(err.contains("seed is mandatory"), "stderr: {err}");
}

#[test]
fn seed_flag_satisfies_the_seed_requirement() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("c.toml");
    write(&config, "suite = \"smooth-polytope\"\n");
    let out = dir.path().join("out");
    let status = bin()
        .args(["smooth-polytope", "--config"])
        .arg(&config)
        .args(["--seed", "11", "--jobs", "2", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let meta: serde_json::Value =
        serde_json::from_slice(&std::fs::read(out.join("meta.json")).unwrap()).unwrap();
    assert_eq!(meta["seed"], 11);
}

#[test]
fn unknown_suite_and_suite_mismatch_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("c.toml");
    write(&config, "suite = \"warped\"\n");
    let status = bin().args(["no-such-suite", "--config"]).arg(&config).status().unwrap();
    assert_eq!(status.code(), Some(2));
    let status = bin().args(["clifford-check", "--config"]).arg(&config).status().unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn missing_required_flag_is_usage_error() {
    // clap reports absent --config as a usage error
    let status = bin().arg("warped").status().unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn tolerance_override_can_force_a_failure() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("c.toml");
    write(
        &config,
        "suite = \"warped\"\n\n[tolerances]\n\"warped-log-concavity\" = -1.0\n",
    );
    let out = dir.path().join("out");
    let status = bin()
        .args(["warped", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["all_pass"], serde_json::Value::Bool(false));
}

#[test]
fn reports_are_sorted_by_check_id() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("c.toml");
    write(&config, "suite = \"clifford-check\"\n");
    let out = dir.path().join("out");
    assert_eq!(
        bin()
            .args(["clifford-check", "--config"])
            .arg(&config)
            .arg("--out")
            .arg(&out)
            .status()
            .unwrap()
            .code(),
        Some(0)
    );
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(out.join("report.json")).unwrap()).unwrap();
    let ids: Vec<&str> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["id"].as_str().unwrap())
        .collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
}
