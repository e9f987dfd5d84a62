use std::process::{Command, Output};

use extendlab::{parse_rational, Rational, RationalFunc};
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_extendlab"))
        .args(args)
        .env_remove("EXTENDLAB_EPS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn ratio_f64(text: &str) -> f64 {
    match text.split_once('/') {
        Some((n, d)) => n.parse::<f64>().unwrap() / d.parse::<f64>().unwrap(),
        None => text.parse().unwrap(),
    }
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = run(&full);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    serde_json::from_str(&stdout(&out)).expect("valid json")
}

#[test]
fn canon_merges_touching_pieces() {
    let out = run(&["set", "canon", "--A", "[0,1) U [1,2] U {5}"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("[0,2] U {5}"));
}

#[test]
fn json_reports_carry_schema() {
    let doc = json(&["set", "op", "union", "--A", "[0,1)", "--B", "[1,2]"]);
    assert_eq!(doc["schema"], "extendlab.report/1");
    assert_eq!(doc["command"], "set op");
    let doc = json(&["extend", "verify", "--A", "[0,1] U [2,3]", "--op", "phi-star", "--f", "[0,1]: x; [2,3]: 1 - x"]);
    assert_eq!(doc["schema"], "extendlab.report/1");
}

#[test]
fn decompose_shrinks_open_ends() {
    let out = run(&["set", "decompose", "--A", "(0,1)", "--n", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("[1/4,3/4]"), "{}", stdout(&out));
}

#[test]
fn sample_rows_equal_exact_evaluation() {
    let text = "[0,1): x^2; [1,2]: 2*x - 1";
    let f: RationalFunc = RationalFunc::parse(text).unwrap();
    let out = run(&["sample", "--f", text, "--samples", "9"]);
    assert_eq!(out.status.code(), Some(0));
    let body = stdout(&out);
    let mut lines = body.lines();
    assert_eq!(lines.next(), Some("x_rational,x_decimal,value_rational,value_decimal"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 9);
    for row in rows {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols.len(), 4);
        let x: Rational = parse_rational(cols[0]).unwrap();
        let v: Rational = parse_rational(cols[2]).unwrap();
        assert_eq!(f.eval(&x).unwrap(), v);
        let dec: f64 = cols[3].parse().unwrap();
        assert!((dec - ratio_f64(cols[2])).abs() < 1e-12);
    }
}

#[test]
fn parse_errors_exit_two_with_caret() {
    let out = run(&["set", "canon", "--A", "[0,1) U (2"]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("--A"), "{err}");
    assert!(err.lines().any(|l| l.trim() == "^"), "{err}");
}

#[test]
fn evaluation_outside_domain_is_input_error() {
    let out = run(&["func", "eval", "--f", "[0,1]: x", "--x", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn csv_is_rejected_outside_sample() {
    let out = run(&["--format", "csv", "set", "canon", "--A", "[0,1]"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn tolerance_comes_from_environment() {
    let bad = Command::new(env!("CARGO_BIN_EXE_extendlab"))
        .args(["func", "norm", "--f", "[0,2]: x^2 - 2", "--over", "[0,2]"])
        .env("EXTENDLAB_EPS", "0")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let enclosure_width = |eps: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_extendlab"))
            .args(["--format", "json", "func", "norm", "--f", "[-2,2]: x^3 - 2*x", "--over", "[-1,1]"])
            .env("EXTENDLAB_EPS", eps)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
        let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
        assert_eq!(doc["result"]["attained"], true);
        let ends = doc["result"]["enclosure"].as_array().unwrap().clone();
        ratio_f64(ends[1].as_str().unwrap()) - ratio_f64(ends[0].as_str().unwrap())
    };
    let coarse = enclosure_width("1/10");
    assert!(coarse <= 0.1 && coarse > 1e-6, "{coarse}");
    assert!(enclosure_width("1/1000000000") <= 1e-9);
}

#[test]
fn negative_arguments_are_accepted() {
    let out = run(&["func", "eval", "--f", "(-inf,0): -x; [0,inf): x", "--x", "-3/2"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("3/2"));
}

#[test]
fn verification_commands_pass() {
    for args in [
        vec!["retract", "check", "--A", "(0,1) U [2,3]", "--F", "[1/2,5/2]"],
        vec!["extend", "chain", "--A", "[0,1]", "--f", "[0,1]: x", "--U", "(1/2,2)"],
        vec!["extend", "baire", "--A", "[0,2]", "--f", "[0,1): 0; [1,2]: 1", "--n-max", "8"],
        vec!["extend", "verify", "--A", "[0,1]", "--op", "constant", "--f", "[0,1]: x", "--f", "[0,1]: 1 - x", "--x0", "1/2"],
        vec!["extend", "constant", "--f", "[0,1]: x", "--x0", "0", "--U", "(-1,1/2)"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", stderr(&out));
    }
}

#[test]
fn gallery_and_riemann() {
    let doc = json(&["classify", "gallery", "--name", "riemann"]);
    let text = doc.to_string();
    assert!(text.contains("first Borel class"), "{text}");
    let out = run(&["demo", "riemann", "--x", "6/4", "--x", "-3"]);
    assert_eq!(out.status.code(), Some(0));
    let body = stdout(&out);
    assert!(body.contains("1/2") && body.contains('1'), "{body}");
}
