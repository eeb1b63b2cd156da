//! End-to-end runs of the command-line binary.

use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_loopcurrent")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn both_routes_agree_exactly() {
    let out = run(&["compute", "--L", "3", "--obs", "x", "--route", "both", "--seed", "11"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = json(&out);
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 6);
    for k in 1..=3u64 {
        let values: Vec<&Value> = rows.iter().filter(|r| r["k"] == k).map(|r| &r["value"]).collect();
        assert_eq!(values.len(), 2);
        assert_eq!(values[0], values[1], "k = {k}");
    }
}

#[test]
fn y_oracle_matches_closed_form() {
    let out = run(&["compute", "--L", "2", "--obs", "y", "--route", "both", "--seed", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = json(&out);
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["value"], rows[1]["value"]);
}

#[test]
fn explicit_parameters_are_used() {
    let out = run(&["compute", "--z", "2,1/3", "--zeta1", "3", "--zeta2", "5/7", "--w", "1/2", "--obs", "y"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = json(&out);
    let p = &rows[0]["params"];
    assert_eq!(p["zeta1"]["a"], "3");
    assert_eq!(p["zeta2"]["a"], "5/7");
    assert_eq!(p["z"][1]["a"], "1/3");
}

#[test]
fn complex_backend_close_to_exact() {
    let exact = json(&run(&["compute", "--L", "3", "--obs", "x", "--seed", "2"]));
    let float = json(&run(&["compute", "--L", "3", "--obs", "x", "--seed", "2", "--backend", "complex"]));
    let w = (-0.5f64, 3f64.sqrt() / 2.0);
    for (e, f) in exact.as_array().unwrap().iter().zip(float.as_array().unwrap()) {
        let parse = |s: &Value| {
            let s = s.as_str().unwrap();
            match s.split_once('/') {
                Some((n, d)) => n.parse::<f64>().unwrap() / d.parse::<f64>().unwrap(),
                None => s.parse::<f64>().unwrap(),
            }
        };
        let (a, b) = (parse(&e["value"]["a"]), parse(&e["value"]["b"]));
        let (re, im) = (a + b * w.0, b * w.1);
        let (fre, fim) = (f["value"]["re"].as_f64().unwrap(), f["value"]["im"].as_f64().unwrap());
        let scale = re.hypot(im).max(1.0);
        assert!((re - fre).hypot(im - fim) <= 1e-9 * scale, "{e} vs {f}");
    }
}

#[test]
fn csv_output_has_header_and_rows() {
    let out = run(&["compute", "--L", "2", "--obs", "x", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("kind,k,w,L,route,value_a,value_b"));
    assert_eq!(lines.count(), 2);
}

#[test]
fn verify_reports_and_exits_zero() {
    let out = run(&["verify", "--suite", "oracle,structural", "--L", "2", "--points", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let summary = json(&out);
    assert_eq!(summary["failed"], 0);
    assert!(summary["passed"].as_u64().unwrap() > 0);
}

#[test]
fn verify_fails_on_generic_q_weights() {
    let out = run(&["verify", "--suite", "appendixB-generic-q", "--points", "2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bad_input_exit_codes() {
    assert_eq!(run(&["compute", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["compute", "--L", "99"]).status.code(), Some(2));
    assert_eq!(run(&["compute", "--L", "2", "--z", "1/2"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--suite", "nonsense"]).status.code(), Some(2));
}
