use std::process::{Command, Output};

fn distcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_distcalc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn reduce_prints_exact_value() {
    let out = distcalc(&["reduce", "dD^4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "-3/32 w^-1");

    let out = distcalc(&["reduce", "ddD^2 D^2"]);
    assert_eq!(stdout(&out).trim(), "1/4 d0 w^-2 - 7/32 w^-1");
}

#[test]
fn reduce_with_numeric_omega() {
    let out = distcalc(&["--omega", "2", "reduce", "dD^2 + w^2 D^2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "1/4");
}

#[test]
fn reduce_trace_lists_rules() {
    let out = distcalc(&["reduce", "--trace", "ddD^2 D^2"]);
    let text = stdout(&out);
    for rule in ["field-equation", "dirac-squared", "base-integral"] {
        assert!(text.contains(&format!("[{rule}]")), "{text}");
    }
}

#[test]
fn rule_domain_error() {
    let out = distcalc(&["reduce", "delta^3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("no rule for delta^3"));
    assert!(stdout(&out).is_empty());
}

#[test]
fn parse_error_reports_position() {
    let out = distcalc(&["reduce", "dD^2 + x D"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("1:8: unknown symbol `x`"), "{}", stderr(&out));
}

#[test]
fn bare_measure_is_rejected() {
    let out = distcalc(&["reduce", "3/4 w"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(distcalc(&["diagrams", "--order", "3"]).status.code(), Some(2));
    assert_eq!(distcalc(&["--omega", "-1", "reduce", "D"]).status.code(), Some(2));
    assert_eq!(distcalc(&["verify", "--a", "x"]).status.code(), Some(2));
}

#[test]
fn identities_pass() {
    let out = distcalc(&["identities"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("PASS  dD^4 = -w^2 D(0)^3 + w^4 D^4"));
    assert!(text.contains("13 checks, 0 failed"));
}

#[test]
fn verify_orders() {
    for args in [
        &["verify", "--order", "1"][..],
        &["verify", "--order", "2"],
        &["verify", "--order", "2", "--a", "7/3"],
        &["verify", "--order", "2", "--veltman"],
        &["verify"],
    ] {
        let out = distcalc(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", stdout(&out));
        assert!(stdout(&out).contains(", 0 failed"));
    }
}

#[test]
fn json_check_records() {
    let out = distcalc(&["--json", "verify"]);
    assert_eq!(out.status.code(), Some(0));
    let records: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let records = records.as_array().unwrap();
    assert_eq!(records.len(), 21);
    for r in records {
        assert!(r["name"].is_string());
        assert!(r["expected"].is_string());
        assert!(r["actual"].is_string());
        assert_eq!(r["passed"], serde_json::Value::Bool(true));
    }
}

#[test]
fn json_identities_with_trace() {
    let out = distcalc(&["--json", "identities", "--trace"]);
    let records: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(records.as_array().unwrap().iter().all(|r| r["trace"].is_array()));
}

#[test]
fn diagrams_listing() {
    let out = distcalc(&["diagrams", "--order", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("first-order"));
    assert!(text.trim_end().ends_with("total: 0"));

    let out = distcalc(&["--json", "diagrams", "--order", "2"]);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["order"], 2);
    assert_eq!(report["total"], "0");
    let sums = report["class_sums"].as_array().unwrap();
    let melons = sums.iter().find(|s| s["class"] == "watermelons").unwrap();
    assert_eq!(melons["reduced"], "-1/2 g^2 d0 w^-2 + 1/12 g^2 w^-1");
    let diagrams = report["diagrams"].as_array().unwrap();
    assert!(diagrams
        .iter()
        .any(|d| d["diagram"] == "dD^4" && d["coefficient"] == "4" && d["prefactor"] == "-1/2 g^2"));
}

#[test]
fn output_is_deterministic() {
    let a = distcalc(&["diagrams", "--order", "2"]);
    let b = distcalc(&["diagrams", "--order", "2"]);
    assert_eq!(a.stdout, b.stdout);
}
