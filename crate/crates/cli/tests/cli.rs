//! End-to-end tests of the qcx binary: command surface, JSON shapes,
//! determinism, and exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn qcx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcx"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(output: &Output) -> serde_json::Value {
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    serde_json::from_slice(&output.stdout).expect("valid JSON report")
}

fn results(args: &[&str]) -> serde_json::Value {
    json(&qcx(args))["results"].clone()
}

fn write_temp(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("qcx-test-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn analyze_library_codes() {
    let bacon = results(&["analyze", "--library", "bacon-shor-9"]);
    assert_eq!(bacon["g"], 4);
    assert_eq!(bacon["verdict"], "strongly_contextual_in_partial_closure");
    assert_eq!(bacon["kl_witness"].as_array().unwrap().len(), 4);

    let six = results(&["analyze", "--library", "six-qubit-6113"]);
    assert_eq!(six["g"], 1);
    assert_eq!(six["verdict"], "noncontextual");

    let steane = results(&["analyze", "--library", "steane-7"]);
    assert_eq!((steane["k"].as_u64(), steane["s"].as_u64(), steane["g"].as_u64()),
               (Some(1), Some(6), Some(0)));
}

#[test]
fn analyze_code_file() {
    let path = write_temp(
        "repetition.json",
        r#"{"name": "repetition-3", "n": 3, "gauge_generators": ["+ZZI", "+IZZ"]}"#,
    );
    let out = results(&["analyze", "--code", path.to_str().unwrap()]);
    assert_eq!(out["n"], 3);
    assert_eq!(out["s"], 2);
    assert_eq!(out["g"], 0);
    assert_eq!(out["k"], 1);
}

#[test]
fn malformed_pauli_exits_one_with_diagnostic() {
    let path = write_temp(
        "bad.json",
        r#"{"name": "bad", "n": 3, "gauge_generators": ["+ZQZ"]}"#,
    );
    let output = qcx(&["analyze", "--code", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("ZQZ") || stderr.contains("letter"), "{stderr}");
}

#[test]
fn sign_inconsistency_is_surfaced() {
    let path = write_temp(
        "inconsistent.json",
        r#"{"name": "clash", "n": 1, "gauge_generators": ["+Z0", "-Z0"]}"#,
    );
    let output = qcx(&["analyze", "--code", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&output.stderr).contains("sign inconsistency"));
}

#[test]
fn closure_command_counts() {
    let twenty = results(&["closure", "-n", "2", "X0,X1,Z0,Z1"]);
    assert_eq!(twenty["size"], 20);
    assert_eq!(twenty["elements"].as_array().unwrap().len(), 20);

    let two = results(&["closure", "-n", "1", "X0"]);
    assert_eq!(two["size"], 2);

    let capped = qcx(&["closure", "-n", "2", "X0,X1,Z0,Z1", "--cap", "10"]);
    assert_eq!(capped.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&capped.stderr).contains("cap"));
}

#[test]
fn switch_command_matches_the_protocol_counts() {
    let out = results(&[
        "switch",
        "--library-a",
        "extended-steane-15",
        "--library-b",
        "rm-15",
    ]);
    assert_eq!(out["parent"]["g"], 3);
    assert_eq!(out["parent_gauge_rank"], 17);
    assert_eq!(out["parent_stabilizer_rank"], 11);
    assert_eq!(out["verdict"], "strongly_contextual_in_partial_closure");
    let cert = &out["bound_certificate"];
    assert_eq!(cert["dim_v"], 6);
    assert_eq!(cert["bound"], 3);
    assert_eq!(cert["bound_satisfied"], true);
}

#[test]
fn audit_command_on_rm15() {
    let out = results(&["audit-csst", "--library", "rm-15", "--c2-rows", "4"]);
    assert_eq!(out["triorthogonal"], true);
    assert_eq!(out["dim_gap"], 6);
    assert_eq!(out["weights_mod8_ok"], true);
}

#[test]
fn library_lists_at_least_five_codes() {
    let out = results(&["library", "--list"]);
    assert!(out["entries"].as_array().unwrap().len() >= 5);
}

#[test]
fn scenario_battery_and_checks() {
    let battery = results(&[
        "scenario",
        "--observables",
        "X0,X1,Z0,Z1",
        "-n",
        "2",
        "--battery",
        "--trials",
        "3",
        "--seed",
        "7",
    ]);
    assert_eq!(battery["checks"]["battery"]["agreement"], true);
    assert_eq!(battery["checks"]["battery"]["closure_size"], 20);

    let checks = results(&[
        "scenario",
        "--observables",
        "Z0,Z1",
        "-n",
        "2",
        "--checks",
        "kl,ks",
    ]);
    assert_eq!(checks["checks"]["kirby_love"], false);
    assert_eq!(checks["checks"]["ks_contextual"], false);
}

#[test]
fn scenario_model_file_checks() {
    let path = write_temp(
        "table.json",
        r#"{
            "n": 2,
            "observables": ["+XI", "+IX", "+ZI", "+IZ"],
            "contexts": [[0,1],[0,3],[1,2],[2,3]],
            "supports": [["00","11"],["00","11"],["10","01"],["00","11"]]
        }"#,
    );
    let out = results(&["scenario", "--model", path.to_str().unwrap(), "--checks", "strong,avn"]);
    assert_eq!(out["checks"]["strongly_contextual"], true);
    assert_eq!(out["checks"]["state_dependent_avn"], true);
}

#[test]
fn scenario_lp_cap_errors_out() {
    let output = qcx(&[
        "scenario",
        "--observables",
        "X0,X1,Z0,Z1",
        "-n",
        "2",
        "--closure",
        "--state-generators",
        "ZI,IZ",
        "--checks",
        "lp",
        "--lp-cap",
        "12",
    ]);
    assert_eq!(output.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&output.stderr).contains("LP cap"));
}

#[test]
fn graph_command_reports_contexts() {
    let out = results(&["graph", "--observables", "X0,X1,Z0,Z1", "-n", "2"]);
    assert_eq!(out["kirby_love"], true);
    assert_eq!(out["context_count"], 4);
    assert_eq!(out["universal_vertices"].as_array().unwrap().len(), 0);
}

#[test]
fn dot_export_writes_a_graph_file() {
    let dot_path = std::env::temp_dir().join(format!("qcx-test-{}.dot", std::process::id()));
    let output = qcx(&[
        "graph",
        "--library",
        "bacon-shor-9",
        "--dot",
        dot_path.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    let dot = std::fs::read_to_string(&dot_path).unwrap();
    assert!(dot.starts_with("graph compatibility {"));
    assert!(dot.contains("color=red"), "witness should be highlighted");
}

#[test]
fn output_is_byte_identical_across_runs() {
    for args in [
        vec!["analyze", "--library", "bacon-shor-9"],
        vec!["closure", "-n", "2", "X0,X1,Z0,Z1"],
        vec![
            "scenario",
            "--observables",
            "X0,X1,Z0,Z1",
            "-n",
            "2",
            "--battery",
            "--trials",
            "2",
            "--seed",
            "13",
        ],
        vec!["switch", "--library-a", "extended-steane-15", "--library-b", "rm-15"],
    ] {
        let first = qcx(&args);
        let second = qcx(&args);
        assert!(first.status.success());
        assert_eq!(first.stdout, second.stdout, "args: {args:?}");
    }
}

#[test]
fn config_file_supplies_defaults() {
    let config = write_temp("config.json", r#"{"seed": 99, "format": "json"}"#);
    let report = json(&qcx(&[
        "analyze",
        "--library",
        "steane-7",
        "--config",
        config.to_str().unwrap(),
    ]));
    assert_eq!(report["seed"], 99);
}

#[test]
fn text_format_renders_flat_lines() {
    let output = qcx(&["analyze", "--library", "steane-7", "--format", "text"]);
    assert!(output.status.success());
    let text = String::from_utf8_lossy(&output.stdout);
    assert!(text.contains("results.g: 0"));
    assert!(text.contains("results.verdict: noncontextual"));
}

#[test]
fn exit_code_zero_regardless_of_verdict() {
    assert!(qcx(&["analyze", "--library", "bacon-shor-9"]).status.success());
    assert!(qcx(&["analyze", "--library", "steane-7"]).status.success());
}
