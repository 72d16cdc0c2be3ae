//! End-to-end checks of the binary: exit codes, text anchors, JSON schemas.

use std::process::{Command, Output};

fn tstring(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tstring"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn strings_text_table() {
    let out = tstring(&["strings", "--m", "1", "--k", "0", "--l", "0", "--dmax", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("s = -1/24"));
    assert!(text.contains("t^2 + t^4"));
}

#[test]
fn strings_json_schema() {
    let out = tstring(&["strings", "--m", "2", "--k", "1", "--l", "1", "--dmax", "3", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(v["s"], "0/1");
    assert_eq!(v["normalized"]["k"], 1);
    let series = v["series"].as_array().expect("series list");
    assert_eq!(series.len(), 4);
    // records sorted by (q, z); q rendered "p/r"
    assert_eq!(series[0]["q"], "0/1");
    assert_eq!(series[0]["z"], "0/1");
    assert_eq!(series[0]["t_poly"][0][1], "1");
    let qs: Vec<String> = series.iter().map(|r| r["q"].as_str().unwrap().to_string()).collect();
    let mut sorted = qs.clone();
    sorted.sort_by_key(|s| {
        let (p, r) = s.split_once('/').unwrap();
        (p.parse::<i64>().unwrap(), r.parse::<i64>().unwrap())
    });
    assert_eq!(qs, sorted);
}

#[test]
fn theta_json_is_sorted_by_half_n() {
    let out = tstring(&["theta", "--m", "1", "--k", "0", "--l", "0", "--half-n-max", "50/12", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    let arr = v.as_array().expect("term list");
    assert!(!arr.is_empty());
    assert_eq!(arr[0]["halfN"], "1/12");
    assert_eq!(arr[0]["sign"], 1);
    let parse = |s: &str| {
        let (p, r) = s.split_once('/').unwrap();
        p.parse::<f64>().unwrap() / r.parse::<f64>().unwrap()
    };
    let hs: Vec<f64> = arr.iter().map(|t| parse(t["halfN"].as_str().unwrap())).collect();
    for w in hs.windows(2) {
        assert!(w[0] <= w[1]);
    }
}

#[test]
fn verify_formal_passes_and_reports() {
    let out = tstring(&["verify-formal", "--m", "1", "--k", "0", "--l", "0", "--dmax", "6"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("PASS"));

    let out = tstring(&["verify-formal", "--m", "2", "--k", "0", "--l", "2", "--dmax", "5", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(v["pass"], true);
    assert!(v["first_diff"].is_null());
}

#[test]
fn verify_integral_json_report() {
    let out = tstring(&[
        "verify-integral",
        "--m", "1", "--k", "0", "--l", "0",
        "--t", "0.6", "--tau", "0.75i",
        "--quad-points", "512",
        "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(v["pass"], true);
    assert!(v["abs_err"].as_f64().unwrap() <= 1e-6);
    assert_eq!(v["lhs"].as_array().unwrap().len(), 2);
    assert_eq!(v["rhs"].as_array().unwrap().len(), 2);
    assert_eq!(v["config"]["quad_points"], 512);
}

#[test]
fn verify_integral_tolerance_violation_exits_one() {
    let out = tstring(&[
        "verify-integral",
        "--m", "1", "--k", "0", "--l", "0",
        "--t", "0.6", "--tau", "0.75i",
        "--quad-points", "256",
        "--tol", "1e-20",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAIL"));
}

#[test]
fn invalid_instances_exit_two() {
    // parity violation
    let out = tstring(&["strings", "--m", "2", "--k", "1", "--l", "0"]);
    assert_eq!(out.status.code(), Some(2));
    // out of range
    let out = tstring(&["verify-formal", "--m", "2", "--k", "5", "--l", "1"]);
    assert_eq!(out.status.code(), Some(2));
    // bad tau
    let out = tstring(&["verify-integral", "--m", "1", "--k", "0", "--l", "0", "--tau", "nope"]);
    assert_eq!(out.status.code(), Some(2));
    // tau in the lower half plane
    let out = tstring(&["verify-integral", "--m", "1", "--k", "0", "--l", "0", "--tau", "-2i"]);
    assert_eq!(out.status.code(), Some(2));
    // t outside (0, 1)
    let out = tstring(&["verify-integral", "--m", "1", "--k", "0", "--l", "0", "--t", "1.0"]);
    assert_eq!(out.status.code(), Some(2));
    // unknown flag (clap reports usage errors with code 2)
    let out = tstring(&["strings", "--m", "1", "--k", "0", "--l", "0", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn limits_reports_decreasing_errors() {
    let out = tstring(&[
        "limits",
        "--m", "1", "--k", "0", "--l", "0",
        "--tau", "1i",
        "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    let errs: Vec<f64> = rows.iter().map(|r| r["abs_err"].as_f64().unwrap()).collect();
    assert!(errs[0] > errs[1] && errs[1] > errs[2]);
    assert!(errs[2] <= 1e-2);
}
