//! Binary-level tests: exit codes, diagnostics, machine-output determinism,
//! and report round-trips.

use informative_markets_cli::commands::{self, DesignArgs, DesignKind};
use informative_markets_cli::report::RunReport;
use informative_markets_cli::scenario::parse_scenario;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn imkt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_imkt"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn check_on_the_stalling_market_exits_one_with_a_witness() {
    let path = fixture("example1_single.json");
    let out = imkt(&["check", path.to_str().unwrap(), "--events", "election"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("NOT INFORMATIVE"));
    assert!(text.contains("witness"));
}

#[test]
fn simulate_pair_market_exits_zero_with_two_rounds() {
    let path = fixture("example1_pair.json");
    let out = imkt(&[
        "simulate",
        path.to_str().unwrap(),
        "--true-state",
        "w1",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["trace"]["rounds"], 2);
    assert_eq!(report["trace"]["final_prediction"][0], "1");
    assert_eq!(report["trace"]["final_prediction"][1], "1");
    assert_eq!(report["aggregated"], true);
}

#[test]
fn design_single_emits_base_ten_payoffs() {
    let path = fixture("example1_pair.json");
    let out = imkt(&[
        "design",
        "single",
        path.to_str().unwrap(),
        "--base",
        "10",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["payoffs"]["w1"], "101");
    assert_eq!(report["payoffs"]["w2"], "1010");
    assert_eq!(report["payoffs"]["w3"], "110");
    assert_eq!(report["payoffs"]["w4"], "1001");
}

#[test]
fn undetermined_check_exits_two() {
    let path = fixture("example2.json");
    let out = imkt(&[
        "check",
        path.to_str().unwrap(),
        "--budget",
        "50",
        "--seed",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn witness_search_exit_codes_span_the_verdicts() {
    // Stalling market: witness found, exit 1.
    let single = fixture("example1_single.json");
    let out = imkt(&["witness-search", single.to_str().unwrap(), "--budget", "5"]);
    assert_eq!(out.status.code(), Some(1));
    // Unknown: exit 2.
    let pair = fixture("example2.json");
    let out = imkt(&["witness-search", pair.to_str().unwrap(), "--budget", "30"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_scenario_file_is_a_usage_error() {
    let out = imkt(&["check", "/nonexistent/path.json"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn bad_flag_values_are_usage_errors() {
    let path = fixture("example1_single.json");
    let out = imkt(&[
        "simulate",
        path.to_str().unwrap(),
        "--true-state",
        "missing",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("missing"));
}

#[test]
fn impossible_true_state_is_a_domain_error() {
    // Zero-prior state: the dynamics reject it.
    let doc = r#"{
        "states": ["a", "b"],
        "prior": {"a": "1", "b": "0"},
        "traders": [{"name": "t", "partition": [["a", "b"]]}],
        "securities": [{"name": "s", "payoffs": {"a": "1"}}]
    }"#;
    let dir = std::env::temp_dir().join("imkt_cli_test_zero_prior.json");
    std::fs::write(&dir, doc).unwrap();
    let out = imkt(&["simulate", dir.to_str().unwrap(), "--true-state", "b"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn json_mode_requires_a_seed_for_searching_commands() {
    let path = fixture("example1_single.json");
    let out = imkt(&["check", path.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(3));
    // Non-searching commands do not need one.
    let out = imkt(&["simulate", path.to_str().unwrap(), "--true-state", "w1", "--json"]);
    assert_eq!(out.status.code(), Some(1)); // stall verdict, not an error
}

#[test]
fn infeasible_design_exits_above_two() {
    let doc = r#"{
        "states": ["a", "b", "c"],
        "prior": {"a": "1/3", "b": "1/3", "c": "1/3"},
        "traders": [{"name": "t", "partition": [["a"], ["b"], ["c"]]}],
        "securities": [{"name": "flat", "payoffs": {"a": "1", "b": "1", "c": "1"}}],
        "events": [{"name": "first", "states": ["a"]}]
    }"#;
    let path = std::env::temp_dir().join("imkt_cli_test_infeasible.json");
    std::fs::write(&path, doc).unwrap();
    let out = imkt(&["design", "minimal", path.to_str().unwrap(), "--seed", "1"]);
    assert_eq!(out.status.code(), Some(4));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("INFEASIBLE"));
}

#[test]
fn identical_seeds_give_byte_identical_reports() {
    let cases: Vec<Vec<&str>> = vec![
        vec!["check", "--json", "--seed", "11", "--budget", "120"],
        vec!["witness-search", "--json", "--seed", "11", "--budget", "120"],
    ];
    for scenario in ["example1_single.json", "example2.json"] {
        let path = fixture(scenario);
        for case in &cases {
            let mut args = vec![case[0], path.to_str().unwrap()];
            args.extend(&case[1..]);
            let first = imkt(&args);
            let second = imkt(&args);
            assert_eq!(
                first.stdout, second.stdout,
                "{case:?} on {scenario} diverged"
            );
            assert_eq!(first.status.code(), second.status.code());
        }
    }
}

#[test]
fn reduce_setcover_scenario_feeds_back_into_design() {
    let input = fixture("setcover_small.json");
    let out = imkt(&["reduce-setcover", input.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let scenario_text = serde_json::to_string(&report["scenario"]).unwrap();
    let path = std::env::temp_dir().join("imkt_cli_test_reduced.json");
    std::fs::write(&path, scenario_text).unwrap();
    let out = imkt(&["design", "minimal", path.to_str().unwrap(), "--json", "--seed", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let minimal: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(minimal["selected"].as_array().unwrap().len(), 2);
}

#[test]
fn reports_round_trip_and_reverify() {
    let path = fixture("example1_single.json");
    let scenario = parse_scenario(&path).unwrap();
    let result = commands::check(&path, None, 20, 0).unwrap();
    let json = result.report.to_json();
    let reloaded: RunReport = serde_json::from_str(&json).unwrap();
    assert_eq!(reloaded, result.report);
    assert!(commands::reverify_report(&reloaded, &scenario).unwrap());

    let result = commands::simulate_run(&path, "w2", None).unwrap();
    let json = result.report.to_json();
    let reloaded: RunReport = serde_json::from_str(&json).unwrap();
    assert_eq!(reloaded, result.report);
    assert!(commands::reverify_report(&reloaded, &scenario).unwrap());

    // A counterexample-bearing distinguishability report also re-verifies.
    let flat = r#"{
        "states": ["a", "b"],
        "prior": {"a": "1/2", "b": "1/2"},
        "traders": [{"name": "t", "partition": [["a", "b"]]}],
        "securities": [{"name": "flat", "payoffs": {"a": "1", "b": "1"}}],
        "events": [{"name": "first", "states": ["a"]}]
    }"#;
    let flat_path = std::env::temp_dir().join("imkt_cli_test_flat.json");
    std::fs::write(&flat_path, flat).unwrap();
    let scenario = parse_scenario(&flat_path).unwrap();
    let result = commands::check(&flat_path, None, 10, 0).unwrap();
    let reloaded: RunReport = serde_json::from_str(&result.report.to_json()).unwrap();
    assert!(commands::reverify_report(&reloaded, &scenario).unwrap());
}

#[test]
fn design_args_reject_unknown_names() {
    let path = fixture("minimal_four.json");
    let err = commands::design_run(
        &path,
        DesignKind::Minimal,
        &DesignArgs {
            base: 10,
            events: Some(&["nope".to_string()]),
            candidates: None,
            budget: 5,
            seed: 0,
        },
    )
    .unwrap_err();
    assert_eq!(err.exit_code(), 3);
}
