use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aloff-wallach"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn report_w11() {
    let out = run(&["report", "--p", "1", "--q", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["curvature"]["k_min_exact"], "2/37");
    let k_max = v["curvature"]["k_max"].as_f64().unwrap();
    assert!((k_max - 3.625).abs() < 1e-6);
    let inj = v["injectivity"]["lower"].as_f64().unwrap();
    assert!((inj / 4.6513e-5 - 1.0).abs() < 1e-4);
}

#[test]
fn report_w12_volume() {
    let out = run(&["report", "--p", "1", "--q", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let pi = std::f64::consts::PI;
    let exact = 3f64.sqrt() * pi.powi(4) / (4.0 * 2f64.sqrt() * 7f64.sqrt());
    assert!((v["volume"]["exact"].as_f64().unwrap() / exact - 1.0).abs() < 1e-11);
    assert_eq!(v["curvature"]["k_max_exact"], "215/56");
}

#[test]
fn report_degenerate() {
    let out = run(&["report", "--p", "1", "--q", "-1"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert!(v["curvature"].is_null());
    assert!(v["volume"]["exact"].as_f64().unwrap() > 0.0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("degenerate"));
}

#[test]
fn input_errors() {
    assert_eq!(run(&["report", "--p", "0", "--q", "0"]).status.code(), Some(2));
    assert_eq!(run(&["report", "--p", "x", "--q", "1"]).status.code(), Some(2));
    assert_eq!(run(&["family", "--n-max", "0"]).status.code(), Some(2));
}

#[test]
fn report_round_trip() {
    let out = run(&["report", "--p", "3", "--q", "5"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let parsed = aloff_wallach::report::BoundsReport::from_json(&text).unwrap();
    assert_eq!(format!("{}\n", parsed.to_json()), text);
}

#[test]
fn family_csv_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("family.csv");
    let out = run(&["family", "--n-max", "10", "--csv", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let mut rdr = csv::Reader::from_path(&path).unwrap();
    let headers = rdr.headers().unwrap().clone();
    let col = |name: &str| headers.iter().position(|h| h == name).unwrap();
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 10);
    let f = |r: &csv::StringRecord, name: &str| r[col(name)].parse::<f64>().unwrap();
    assert!((f(&rows[0], "lambda_bar_reference") - 1757.0 / 28762.0).abs() < 1e-12);
    let mut last = f64::INFINITY;
    for r in &rows {
        assert!(f(r, "lambda_hat") < 2.0 / 37.0 && 2.0 / 37.0 < f(r, "lambda_bar"));
        assert!(f(r, "big_c_n") < last && f(r, "big_c_n") > 3.625);
        last = f(r, "big_c_n");
    }
}

#[test]
fn family_stdout() {
    let out = run(&["family", "--n-max", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 4);
}

const QUICK: [&str; 6] = ["--budget", "2000", "--condition-samples", "2000", "--seed", "42"];

#[test]
fn verify_is_deterministic() {
    let a = run(&[&["verify"][..], &QUICK].concat());
    let b = run(&[&["verify"][..], &QUICK].concat());
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["checks"].as_array().unwrap().len(), 13);
}

#[test]
fn verify_tamper_isolated() {
    let out = run(&[&["verify", "--tamper", "a1:0.01"][..], &QUICK].concat());
    assert_eq!(out.status.code(), Some(3));
    let v = json(&out);
    let status = |name: &str| {
        v["checks"]
            .as_array()
            .unwrap()
            .iter()
            .find(|c| c["name"] == name)
            .unwrap()["passed"]
            .as_bool()
            .unwrap()
    };
    assert!(!status("k-max-gates"));
    assert!(!status("family-sharpness"));
    for name in [
        "volume-constant",
        "density-closed-form",
        "volume-sandwich",
        "w11-oracle",
        "lambda-hat-dual",
        "curvature-operator",
        "injectivity",
        "bi-invariant",
        "condition-ii",
    ] {
        assert!(status(name), "{name}");
    }
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("FAIL k-max-gates"));
}
