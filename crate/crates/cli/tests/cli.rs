// SPDX-License-Identifier: Apache-2.0

use std::process::{Command, Output};

use serde_json::Value;

fn pellconic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pellconic")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8")
}

fn json(args: &[&str]) -> Value {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = pellconic(&all);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

#[test]
fn mul_triples_the_fundamental_point() {
    let out = pellconic(&["mul", "--disc", "5", "--point", "3,1", "--k", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("(18,8)"));
}

#[test]
fn negative_multiple_and_modulus() {
    let v = json(&["mul", "--disc", "5", "--point", "3,1", "--k", "-1"]);
    assert_eq!(v["results"]["point"], "(3,-1)");
    let v = json(&["mul", "--disc", "5", "--point", "3,1", "--k", "3", "--mod", "11"]);
    assert_eq!(v["results"]["point"], "(7,8)");
}

#[test]
fn add_rational_points() {
    let v = json(&["add", "--disc", "-4", "--point", "6/5,4/5", "--point", "2,0"]);
    assert_eq!(v["results"]["point"], "(6/5,4/5)");
}

#[test]
fn off_curve_point_is_an_error() {
    let out = pellconic(&["mul", "--disc", "5", "--point", "3,2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn mersenne_eleven_is_composite() {
    let out = pellconic(&["primality", "mersenne", "--p", "11"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("Composite"));
}

#[test]
fn pell_primality_certificate() {
    let v = json(&["primality", "pell", "--n", "9239"]);
    assert_eq!(v["results"]["verdict"], "Prime");
}

#[test]
fn bsd_identity_for_five() {
    let v = json(&["bsd", "--disc", "5"]);
    assert!(v["results"]["residual"].as_f64().unwrap() < 1e-6);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
}

#[test]
fn bad_flag_exits_two() {
    let out = pellconic(&["mul", "--disc", "5", "--nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_discriminant_exits_two() {
    let out = pellconic(&["descent", "--disc", "7"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn json_is_deterministic_for_a_seed() {
    let args = ["--json", "--seed", "7", "primality", "lucas", "--n", "1000003"];
    let a = pellconic(&args);
    let b = pellconic(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn descent_of_forty() {
    let v = json(&["descent", "--disc", "40"]);
    assert_eq!(v["results"]["selmer"], serde_json::json!([1, 10]));
    assert_eq!(v["results"]["sha2_order"], 1);
}

#[test]
fn class_group_of_minus_84() {
    let v = json(&["classgroup", "--disc", "-84"]);
    assert_eq!(v["results"]["invariants"], serde_json::json!([2, 2]));
}

#[test]
fn sweep_is_ordered() {
    let v = json(&["bsd", "sweep", "--max", "200"]);
    let deltas: Vec<i64> = v["results"].as_array().unwrap().iter().map(|r| r["delta"].as_i64().unwrap()).collect();
    assert!(deltas.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(deltas[..4], [5, 8, 12, 13]);
}

#[test]
fn sweep_csv_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let out = pellconic(&["bsd", "sweep", "--max", "100", "--csv", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("delta,h,h_plus,u,w,R,R_C,sha2,cl_sq,tamagawa,lhs,rhs,residual"));
    assert!(lines.next().unwrap().starts_with("5,1,1,0,2,"));
}
