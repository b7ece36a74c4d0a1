//! End-to-end tests against the compiled binary.

use std::process::{Command, Output};

fn asce(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_asce"))
        .args(args)
        .env_remove("ASCE_FORMAT")
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).to_string()
}

#[test]
fn validate_appendix_is_clean() {
    let out = asce(&["validate", "--data", "swog:appendix"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("ok"));
}

#[test]
fn validate_main_text_warns_once() {
    let out = asce(&["validate", "--data", "swog:main_text"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.matches("warning:").count(), 1);
    assert!(text.contains("311"));
}

#[test]
fn validate_missing_file_exits_2() {
    let out = asce(&["validate", "--data", "/nonexistent/panel.csv"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn validate_structural_violation_exits_1() {
    let dir = std::env::temp_dir().join("asce-cli-test-structural");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.csv");
    std::fs::write(&path, "#n0=5\n#n1=5\narm,time,y,s,count\n0,t1,2,1,3\n").unwrap();
    let out = asce(&["validate", "--data", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "load rejects forbidden cells at parse time");
}

#[test]
fn usage_errors_exit_2() {
    let out = asce(&["analyze", "--regime", "upside-down"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn analyze_no_assumptions_matches_published_three_month_row() {
    let out = asce(&["analyze", "--regime", "none", "--y", "0", "--data", "swog:main_text"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("| Estimate | 0.07 | 0.13 | 0.15 |"), "{text}");
    assert!(text.contains("(0.08, 0.23)"));
    assert!(text.contains("<0.0001"));
}

#[test]
fn analyze_mono_both_matches_published_three_month_row() {
    let out = asce(&["analyze", "--regime", "both", "--data", "swog:main_text"]);
    let text = stdout(&out);
    assert!(text.contains("0.22"));
    assert!(text.contains("(0.15, 0.29)"));
}

#[test]
fn analyze_mono_death_notes_falsification_outcome() {
    let out = asce(&["analyze", "--regime", "mono-death", "--data", "swog:main_text"]);
    assert!(stdout(&out).contains("fail to falsify"));
}

#[test]
fn analyze_json_and_markdown_carry_identical_numbers() {
    let md = stdout(&asce(&["analyze", "--regime", "both", "--data", "swog:main_text"]));
    let json_out = stdout(&asce(&[
        "analyze",
        "--regime",
        "both",
        "--data",
        "swog:main_text",
        "--format",
        "json",
    ]));
    let parsed: serde_json::Value = serde_json::from_str(&json_out).unwrap();
    let rows = parsed["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 7);
    let est = rows[2]["test"]["estimate"].as_f64().unwrap();
    assert!((est - 0.2215).abs() < 5e-4);
    // The markdown's rounded cell must round from the JSON's full value.
    assert!(md.contains(&format!("{est:.2}")));
}

#[test]
fn identical_config_and_seed_replay_byte_identically() {
    let args = ["simulate", "--checks", "50", "--gen-checks", "20", "--seed", "7", "--format", "json"];
    let a = stdout(&asce(&args));
    let b = stdout(&asce(&args));
    assert!(!a.is_empty());
    assert_eq!(a, b);
    let c = stdout(&asce(&[
        "simulate", "--checks", "50", "--gen-checks", "20", "--seed", "8", "--format", "json",
    ]));
    assert_ne!(a, c, "different seeds must differ somewhere in the numeric detail");
}

#[test]
fn simulate_passes_and_forced_violation_fails() {
    let ok = asce(&["simulate", "--checks", "100", "--gen-checks", "50", "--seed", "7"]);
    assert_eq!(ok.status.code(), Some(0));
    let violated = asce(&[
        "simulate",
        "--checks",
        "5",
        "--gen-checks",
        "5",
        "--seed",
        "7",
        "--force-violation",
    ]);
    assert_eq!(violated.status.code(), Some(1));
    let text = String::from_utf8_lossy(&violated.stdout).to_string();
    assert!(text.contains("types [5]"), "{text}");
}

#[test]
fn simulate_regime_restriction_runs() {
    let out = asce(&["simulate", "--checks", "100", "--gen-checks", "20", "--regime", "mono-death"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("MonoDeath"));
    assert!(!text.contains("MonoCensor"));
}

#[test]
fn sensitivity_sweep_flips_at_the_break_even() {
    let out = asce(&[
        "sensitivity",
        "--t",
        "6 months",
        "--kind",
        "dm",
        "--grid",
        "0,0.05,0.10,0.15",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((parsed["breakeven"].as_f64().unwrap() - 0.1183).abs() < 5e-4);
    let flags: Vec<bool> = parsed["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["established"].as_bool().unwrap())
        .collect();
    assert_eq!(flags, [true, true, true, false]);
}

#[test]
fn generalized_qol_reproduces_published_numbers() {
    let out = asce(&[
        "generalized",
        "--ya",
        "(70,inf)",
        "--yb",
        "(70,inf)",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let raw = parsed["lb_monotone"]["raw"].as_f64().unwrap();
    assert!((raw - 0.0489).abs() < 1e-3);
    let ci = parsed["monotone_ci95_continuity_on"].as_array().unwrap();
    assert!((ci[0].as_f64().unwrap() - (-0.02)).abs() < 0.01);
    assert!((ci[1].as_f64().unwrap() - 0.12).abs() < 0.01);
}

#[test]
fn generalized_sensitivity_flags_run() {
    let out = asce(&[
        "generalized",
        "--ya",
        "(-inf,70]",
        "--yb",
        "(-inf,70]",
        "--with-sensitivity",
        "--p-not-yb-alive-missing-control",
        "0.08",
        "--p-not-ya-alive-missing-treated",
        "0.03",
        "--r-value",
        "-0.01",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    // Observed piece: P(Q>70|X=0) - P(Q>70|X=1) = 89/336 - 73/338 = 0.0489,
    // plus 0.08 - 0.03 + 0.01 of hypothesized mass.
    let raw = parsed["sensitivity"]["two_timepoint"]["raw"].as_f64().unwrap();
    assert!((raw - (0.0489 + 0.08 - 0.03 + 0.01)).abs() < 1e-3, "raw {raw}");
}

#[test]
fn bayes_is_deterministic_and_sane() {
    let args = [
        "bayes", "--t", "3", "--regime", "none", "--draws", "5000", "--seed", "11", "--format",
        "json",
    ];
    let a = stdout(&asce(&args));
    let b = stdout(&asce(&args));
    assert_eq!(a, b);
    let parsed: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert!(parsed["prob_positive"].as_f64().unwrap() > 0.99);
}

#[test]
fn reproduce_paper_default_run_is_clean_with_documented_exceptions() {
    let out = asce(&["reproduce-paper", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(parsed["all_ok"], serde_json::json!(true));
    let kinds: Vec<&str> = parsed["exceptions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["kind"].as_str().unwrap())
        .collect();
    assert_eq!(
        kinds,
        ["Table4TwoMonthEstimate", "Table5SixMonthP", "EighteenMonthDataConflict"]
    );
}

#[test]
fn reproduce_paper_appendix_shifts_the_last_column() {
    let out = asce(&["reproduce-paper", "--variant", "appendix", "--format", "json"]);
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let t4_last = &parsed["tables"][0]["rows"][6];
    let est = t4_last["computed"]["estimate"].as_f64().unwrap();
    assert!((est - (-0.59)).abs() < 0.005, "appendix 18-month estimate {est}");
    assert_eq!(t4_last["published"]["estimate"].as_f64().unwrap(), -0.51);
}

#[test]
fn format_env_var_sets_the_default() {
    let out = Command::new(env!("CARGO_BIN_EXE_asce"))
        .args(["analyze", "--regime", "none"])
        .env("ASCE_FORMAT", "json")
        .output()
        .unwrap();
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(serde_json::from_str::<serde_json::Value>(&text).is_ok(), "not JSON: {text}");
}

#[test]
fn csv_round_trip_through_files() {
    // Serialize the embedded appendix panel, reload it from disk, and
    // confirm the analysis is unchanged.
    let dir = std::env::temp_dir().join("asce-cli-test-roundtrip");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("swog.csv");
    let panel = asce_core::panel::swog_dataset(asce_core::panel::SwogVariant::Appendix);
    std::fs::write(&path, panel.to_csv()).unwrap();
    let from_file = stdout(&asce(&[
        "analyze",
        "--regime",
        "none",
        "--data",
        path.to_str().unwrap(),
        "--format",
        "tsv",
    ]));
    let embedded = stdout(&asce(&[
        "analyze",
        "--regime",
        "none",
        "--data",
        "swog:appendix",
        "--format",
        "tsv",
    ]));
    assert_eq!(from_file, embedded);
}
