//! End-to-end tests against the built binary: exit codes, golden values,
//! determinism modulo timings, and the CSV plot format.

use std::process::{Command, Output};

fn dioph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dioph"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is valid JSON")
}

/// Reports compare equal once the (legitimately varying) timing block is gone.
fn strip_timings(mut v: serde_json::Value) -> serde_json::Value {
    v.as_object_mut().unwrap().remove("timings_ms");
    v
}

#[test]
fn psi_rational_golden() {
    let out = dioph(&["psi", "--theta", "rational:1/2,1/3", "-T", "3", "--variant", "plain"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["schema_version"], "1");
    assert_eq!(v["command"], "psi");
    let events = v["results"]["events"].as_array().unwrap();
    assert_eq!(events.len(), 2);
    assert_eq!(events[0]["t_start"], 1);
    assert_eq!(events[0]["value"]["midpoint"], "0.166666666666666666666666666667");
    assert_eq!(events[0]["witness"], serde_json::json!([-1, -1]));
    assert_eq!(events[1]["t_start"], 2);
    assert_eq!(events[1]["value"]["midpoint"], "0");
    assert_eq!(events[1]["witness"], serde_json::json!([-2, 0]));
    assert_eq!(v["results"]["ends_in_zero"], true);
}

#[test]
fn psi_plus_variant_golden() {
    let out = dioph(&["psi", "--theta", "rational:1/2,1/3", "-T", "2", "--variant", "plus"]);
    assert!(out.status.success());
    let v = json_of(&out);
    let events = v["results"]["events"].as_array().unwrap();
    assert_eq!(events.len(), 2);
    assert_eq!(events[0]["value"]["midpoint"], "0.166666666666666666666666666667");
    assert_eq!(events[0]["witness"], serde_json::json!([1, 1]));
    assert_eq!(events[1]["value"]["midpoint"], "0");
    assert_eq!(events[1]["witness"], serde_json::json!([2, 0]));
}

#[test]
fn determinism_modulo_timings() {
    let args = ["psi", "--theta", "random:7", "-T", "200", "--variant", "plus"];
    let a = strip_timings(json_of(&dioph(&args)));
    let b = strip_timings(json_of(&dioph(&args)));
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap(),
        "identical config must give identical reports"
    );
}

#[test]
fn csv_plot_format() {
    let out = dioph(&["psi", "--theta", "rational:1/2,1/3", "-T", "3", "--output", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t_start,value,log2_t_start,log2_inv_value,witness_1,witness_2");
    assert_eq!(lines.len(), 3, "header + 2 events");
    // terminal zero row: empty log2(1/value) field, not inf
    let last: Vec<&str> = lines[2].split(',').collect();
    assert_eq!(last[1], "0");
    assert_eq!(last[3], "");
    assert!(!text.contains('\r'));
}

#[test]
fn csv_star_witness_single_column() {
    let out = dioph(&["psi", "--theta", "quadratic:2,3", "-T", "20", "--variant", "star", "--output", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert!(!row[4].is_empty());
    assert_eq!(row[5], "", "star witness is a single x");
}

#[test]
fn bounds_golden_and_validation() {
    let out = dioph(&["bounds", "--omega", "2", "--omega-hat", "2"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["results"]["theorem2"], "2");
    assert_eq!(v["results"]["region"], "A1");

    let out = dioph(&["bounds", "--omega", "2", "--omega-hat", "2.5"]);
    assert_eq!(out.status.code(), Some(2), "inadmissible point is a validation failure");
}

#[test]
fn bounds_infinite_omega() {
    let out = dioph(&["bounds", "--omega", "inf", "--omega-hat", "2.618033988749895"]);
    assert!(out.status.success());
    let v = json_of(&out);
    let g: f64 = v["results"]["g_value"].as_str().unwrap().parse().unwrap();
    assert!((g - 1.618033988749895).abs() < 1e-9);
}

#[test]
fn maxmin_agreement_exit_zero() {
    let out = dioph(&["maxmin", "--omega", "4", "--omega-hat", "2"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["audits"][0]["pass"], true);
    let lp: f64 = v["results"]["lp_value"].as_str().unwrap().parse().unwrap();
    assert!((lp - 1.80424764).abs() < 1e-6);
}

#[test]
fn audit_counterexample_flags_mismatch_with_exit_4() {
    let out = dioph(&["audit-counterexample", "--tol", "1e-12"]);
    assert_eq!(out.status.code(), Some(4), "printed-value discrepancies use the audit exit code");
    let v = json_of(&out);
    let sigma: f64 = v["results"]["sigma"]["midpoint"].as_str().unwrap().parse().unwrap();
    assert!(sigma > 1.94696 && sigma < 1.94697);
    assert_eq!(v["results"]["region"], "A2");
    assert_eq!(v["results"]["admissible"], true);
    assert_eq!(v["results"]["identity_ok"], true);
    let audits = v["audits"].as_array().unwrap();
    let find = |n: &str| audits.iter().find(|a| a["name"] == n).unwrap();
    assert_eq!(find("sigma")["pass"], true);
    assert_eq!(find("omega_hat")["pass"], true);
    assert_eq!(find("omega")["pass"], false);
    assert_eq!(find("paper_ooa_value")["pass"], false);
}

#[test]
fn certificate_reports_zero_violation() {
    let out = dioph(&[
        "certificate", "--theta", "rational:1/2,1/3", "--exponent", "2",
        "--constant-log2", "0", "--m-max", "10",
    ]);
    assert!(out.status.success(), "holds=false is a result, not a failure");
    let v = json_of(&out);
    assert_eq!(v["results"]["holds"], false);
    let viols = v["results"]["violations"].as_array().unwrap();
    assert!(viols.iter().any(|x| x["m1"] == 2 && x["m2"] == 3 && x["value"]["midpoint"] == "0"));
}

#[test]
fn certificate_budget_exit_3() {
    let out = dioph(&[
        "certificate", "--theta", "rational:1/2,1/3", "--exponent", "2", "--m-max", "40000",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn exponents_rational_sentinel() {
    let out = dioph(&["exponents", "--theta", "rational:1/2,1/3", "-T", "50"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["results"]["omega"], "inf");
    assert_eq!(v["results"]["omega_plus"], "inf");
}

#[test]
fn bad_theta_spec_exit_2() {
    let out = dioph(&["psi", "--theta", "nonsense:1,2", "-T", "10"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn out_file_round_trip() {
    let dir = std::env::temp_dir().join("dioph-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let out = dioph(&[
        "forge", "--theta", "quadratic:2,3", "--precision-bits", "96",
        "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let body = std::fs::read_to_string(&path).unwrap();
    let v: serde_json::Value = serde_json::from_str(&body).unwrap();
    let t1: f64 = v["results"]["theta1"]["midpoint"].as_str().unwrap().parse().unwrap();
    assert!((t1 - 0.41421356237309503).abs() < 1e-12);
}
