//! End-to-end tests for the `opart` binary: each test invokes the compiled
//! executable and checks the exit code and output contract.

use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::OnceLock;

const BIN: &str = env!("CARGO_BIN_EXE_opart");

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Output {
    run_with_env(args, &[])
}

fn run_with_env(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(BIN);
    cmd.args(args).env_remove("OPART_PRECISION_BITS");
    for (key, value) in envs {
        cmd.env(key, value);
    }
    let out = cmd.output().expect("binary runs");
    Output {
        code: out.status.code().expect("no signal"),
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
    }
}

/// Count table shared by the read-only tests, built once through the
/// binary itself so `compute` is exercised on the way.
fn table_path() -> &'static Path {
    static PATH: OnceLock<PathBuf> = OnceLock::new();
    PATH.get_or_init(|| {
        let dir = std::env::temp_dir().join("opart-cli-tests");
        std::fs::create_dir_all(&dir).expect("create temp dir");
        let path = dir.join("counts-400.csv");
        let out = run(&["compute", "--max-n", "400", "--out", path.to_str().unwrap()]);
        assert_eq!(out.code, 0, "table build failed: {}", out.stderr);
        path
    })
}

fn table_arg() -> &'static str {
    table_path().to_str().unwrap()
}

fn parse_json(out: &Output) -> Value {
    serde_json::from_str(&out.stdout)
        .unwrap_or_else(|err| panic!("stdout is not JSON ({err}): {}", out.stdout))
}

#[test]
fn help_exits_zero() {
    let out = run(&["--help"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("verify"));
    assert!(out.stdout.contains("Exit codes"));
}

#[test]
fn compute_writes_a_loadable_table() {
    let contents = std::fs::read_to_string(table_path()).expect("table file exists");
    let mut lines = contents.lines();
    assert_eq!(lines.next(), Some("n,overpartition"));
    assert_eq!(lines.next(), Some("0,1"));
    assert_eq!(lines.next(), Some("1,2"));
    assert_eq!(contents.lines().count(), 402);
}

#[test]
fn constants_single_order() {
    let out = run(&["constants", "--r", "2"]);
    assert_eq!(out.code, 0);
    let json = parse_json(&out);
    assert_eq!(json["r"], 2);
    assert_eq!(json["N"], 344);
    assert_eq!(json["N1"], 132);
    let c_lo: f64 = json["C"]["lo"].as_str().unwrap().parse().unwrap();
    assert!((c_lo - std::f64::consts::PI / 4.0).abs() < 1e-12);
}

#[test]
fn constants_order_range_is_an_array() {
    let out = run(&["constants", "--r", "2", "--r-max", "4"]);
    assert_eq!(out.code, 0);
    let json = parse_json(&out);
    let sets = json.as_array().expect("array of constant sets");
    assert_eq!(sets.len(), 3);
    assert_eq!(sets[1]["r"], 3);
    assert_eq!(sets[1]["N"], 1486);
}

#[test]
fn constants_rejects_first_order() {
    let out = run(&["constants", "--r", "1"]);
    assert_eq!(out.code, 64);
    assert!(out.stderr.contains("error"));
}

#[test]
fn constants_rejects_inverted_order_range() {
    let out = run(&["constants", "--r", "4", "--r-max", "2"]);
    assert_eq!(out.code, 64);
}

#[test]
fn zuckerman_containment_holds_against_table() {
    let out = run(&[
        "zuckerman",
        "--n",
        "100",
        "--terms",
        "3",
        "--table",
        table_arg(),
    ]);
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);
    let json = parse_json(&out);
    assert_eq!(json["containment"], "holds");
    assert_eq!(json["exact"], "53287424374");
    let lo: f64 = json["series"]["lo"].as_str().unwrap().parse().unwrap();
    let hi: f64 = json["series"]["hi"].as_str().unwrap().parse().unwrap();
    assert!(lo <= hi);
    assert!((lo - 53287424374.0).abs() < 1.0);
}

#[test]
fn zuckerman_without_table_reports_bound_only() {
    let out = run(&["zuckerman", "--n", "50", "--terms", "5"]);
    assert_eq!(out.code, 0);
    let json = parse_json(&out);
    assert!(json.get("containment").is_none());
    assert!(json.get("exact").is_none());
    assert!(json["truncation_bound"].is_string());
}

#[test]
fn verify_main1_holds_on_valid_range() {
    let out = run(&[
        "verify",
        "main1",
        "--table",
        table_arg(),
        "--from",
        "26",
        "--to",
        "60",
    ]);
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);
    let json = parse_json(&out);
    let reports = json.as_array().expect("array of reports");
    assert_eq!(reports.len(), 3);
    for report in reports {
        for key in [
            "claim_id",
            "r",
            "range",
            "holds",
            "fails",
            "undecided",
            "precision_base_bits",
            "wall_time_s",
        ] {
            assert!(report.get(key).is_some(), "missing key {key}");
        }
        assert_eq!(report["holds"], 35);
        assert_eq!(report["fails"].as_array().unwrap().len(), 0);
    }
    assert_eq!(reports[0]["claim_id"], "main1");
}

#[test]
fn verify_main1_fails_below_claim_threshold() {
    let out = run(&[
        "verify",
        "main1",
        "--table",
        table_arg(),
        "--from",
        "1",
        "--to",
        "25",
    ]);
    assert_eq!(out.code, 1);
    let json = parse_json(&out);
    let fails = json[0]["fails"].as_array().unwrap();
    assert!(!fails.is_empty());
}

#[test]
fn verify_exits_two_when_precision_is_capped_too_low() {
    let out = run(&[
        "verify",
        "main1",
        "--table",
        table_arg(),
        "--from",
        "300",
        "--to",
        "300",
        "--precision-bits",
        "12",
        "--max-precision-bits",
        "12",
    ]);
    assert_eq!(out.code, 2, "stderr: {}", out.stderr);
    let json = parse_json(&out);
    let undecided: Vec<u64> = json[0]["undecided"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_u64().unwrap())
        .collect();
    assert_eq!(undecided, vec![300]);
    assert_eq!(json[0]["fails"].as_array().unwrap().len(), 0);
}

#[test]
fn verify_main2_defaults_to_second_order() {
    let out = run(&[
        "verify",
        "main2",
        "--table",
        table_arg(),
        "--from",
        "344",
        "--to",
        "360",
    ]);
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);
    let json = parse_json(&out);
    let reports = json.as_array().unwrap();
    assert_eq!(reports.len(), 5);
    assert_eq!(reports[0]["claim_id"], "main2");
    assert_eq!(reports[0]["r"], 2);
}

#[test]
fn verify_main2_rejects_first_order() {
    let out = run(&[
        "verify",
        "main2",
        "--r",
        "1",
        "--table",
        table_arg(),
        "--from",
        "344",
        "--to",
        "350",
    ]);
    assert_eq!(out.code, 64);
    assert!(out.stderr.contains("at least 2"));
}

#[test]
fn verify_main1_rejects_explicit_order() {
    let out = run(&[
        "verify",
        "main1",
        "--r",
        "2",
        "--table",
        table_arg(),
        "--from",
        "26",
        "--to",
        "30",
    ]);
    assert_eq!(out.code, 64);
}

#[test]
fn verify_corollaries_hold_past_small_indices() {
    let out = run(&[
        "verify",
        "corollaries",
        "--table",
        table_arg(),
        "--from",
        "18",
        "--to",
        "60",
    ]);
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);
    let json = parse_json(&out);
    assert_eq!(json.as_array().unwrap().len(), 4);
}

#[test]
fn verify_corollaries_fail_at_small_indices_with_equalities() {
    let out = run(&[
        "verify",
        "corollaries",
        "--table",
        table_arg(),
        "--from",
        "1",
        "--to",
        "30",
    ]);
    assert_eq!(out.code, 1);
    let json = parse_json(&out);
    let log_concavity = json
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["claim_id"] == "log-concavity")
        .expect("log-concavity report");
    assert_eq!(log_concavity["exact_equalities"], serde_json::json!([1, 2]));
}

#[test]
fn verify_lemmas_hold_on_clamped_windows() {
    let out = run(&[
        "verify",
        "lemmas",
        "--r",
        "2",
        "--table",
        table_arg(),
        "--from",
        "80",
        "--to",
        "140",
    ]);
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);
    let json = parse_json(&out);
    let reports = json.as_array().unwrap();
    let remainder = reports
        .iter()
        .find(|r| r["claim_id"] == "remainder-ratio-bound")
        .expect("remainder-ratio-bound report");
    assert_eq!(remainder["range"], serde_json::json!([85, 140]));
    for report in reports {
        assert_eq!(
            report["fails"].as_array().unwrap().len(),
            0,
            "fails in {}",
            report["claim_id"]
        );
    }
}

#[test]
fn verify_csv_format_has_stable_header() {
    let out = run(&[
        "verify",
        "main1",
        "--table",
        table_arg(),
        "--from",
        "26",
        "--to",
        "30",
        "--format",
        "csv",
    ]);
    assert_eq!(out.code, 0);
    let mut lines = out.stdout.lines();
    assert_eq!(
        lines.next(),
        Some("claim_id,r,range_lo,range_hi,holds,fails,undecided,exact_equalities,precision_base_bits,wall_time_s")
    );
    assert!(lines.next().unwrap().starts_with("main1,1,26,30,5,,,,"));
}

#[test]
fn verify_text_format_is_one_summary_line_per_report() {
    let out = run(&[
        "verify",
        "main1",
        "--table",
        table_arg(),
        "--from",
        "26",
        "--to",
        "30",
        "--format",
        "text",
    ]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout.lines().count(), 3);
    assert!(out.stdout.contains("5 hold, 0 fail, 0 undecided"));
}

#[test]
fn probe_reports_points_inside_envelope() {
    let out = run(&[
        "probe",
        "--r",
        "1",
        "--points",
        "200,380",
        "--table",
        table_arg(),
    ]);
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);
    let json = parse_json(&out);
    let points = json["points"].as_array().unwrap();
    assert_eq!(points.len(), 2);
    for point in points {
        assert_eq!(point["inside"], "holds");
        let lo: f64 = point["ratio"][0].as_str().unwrap().parse().unwrap();
        assert!(lo > 0.9 && lo < 1.0);
    }
}

#[test]
fn missing_table_exits_io_with_hint() {
    let out = run(&[
        "verify",
        "main1",
        "--table",
        "/tmp/opart-no-such-table.csv",
        "--from",
        "26",
        "--to",
        "30",
    ]);
    assert_eq!(out.code, 74);
    assert!(
        out.stderr.contains("opart compute"),
        "stderr: {}",
        out.stderr
    );
}

#[test]
fn malformed_table_exits_data_error() {
    let dir = std::env::temp_dir().join("opart-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("broken.csv");
    std::fs::write(&path, "n,overpartition\n0,1\n1,7\n").unwrap();
    let out = run(&[
        "verify",
        "main1",
        "--table",
        path.to_str().unwrap(),
        "--from",
        "26",
        "--to",
        "30",
    ]);
    assert_eq!(out.code, 65);
    assert!(out.stderr.contains("parity"), "stderr: {}", out.stderr);
}

#[test]
fn reversed_range_is_a_usage_error() {
    let out = run(&[
        "verify",
        "main1",
        "--table",
        table_arg(),
        "--from",
        "10",
        "--to",
        "5",
    ]);
    assert_eq!(out.code, 64);
}

#[test]
fn range_beyond_table_suggests_rebuilding() {
    let out = run(&[
        "verify",
        "main1",
        "--table",
        table_arg(),
        "--from",
        "26",
        "--to",
        "5000",
    ]);
    assert_eq!(out.code, 64);
    assert!(out.stderr.contains("max-n"), "stderr: {}", out.stderr);
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    let out = run(&["frobnicate"]);
    assert_eq!(out.code, 64);
}

#[test]
fn precision_env_var_sets_base_bits() {
    let out = run_with_env(
        &[
            "verify",
            "main1",
            "--table",
            table_arg(),
            "--from",
            "26",
            "--to",
            "30",
        ],
        &[("OPART_PRECISION_BITS", "160")],
    );
    assert_eq!(out.code, 0);
    let json = parse_json(&out);
    assert_eq!(json[0]["precision_base_bits"], 160);
}

#[test]
fn precision_flag_beats_env_var() {
    let out = run_with_env(
        &[
            "verify",
            "main1",
            "--table",
            table_arg(),
            "--from",
            "26",
            "--to",
            "30",
            "--precision-bits",
            "144",
        ],
        &[("OPART_PRECISION_BITS", "160")],
    );
    assert_eq!(out.code, 0);
    let json = parse_json(&out);
    assert_eq!(json[0]["precision_base_bits"], 144);
}

#[test]
fn malformed_precision_env_var_is_a_usage_error() {
    let out = run_with_env(
        &[
            "verify",
            "main1",
            "--table",
            table_arg(),
            "--from",
            "26",
            "--to",
            "30",
        ],
        &[("OPART_PRECISION_BITS", "abc")],
    );
    assert_eq!(out.code, 64);
    assert!(out.stderr.contains("OPART_PRECISION_BITS"));
}
