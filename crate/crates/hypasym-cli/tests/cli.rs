use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn hypasym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypasym")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn json(o: &Output) -> Value {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("json")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hypasym-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn csv_column(text: &str, name: &str) -> Vec<f64> {
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = header.iter().position(|h| *h == name).unwrap_or_else(|| panic!("no column {name}"));
    lines.map(|l| l.split(',').nth(idx).unwrap().parse().unwrap()).collect()
}

#[test]
fn eval_log_case() {
    let v = json(&hypasym(&["eval", "--a", "1", "--b", "1", "--c", "2", "--z", "0.5"]));
    // -ln(1-z)/z at z = 1/2
    let expected = 2.0 * std::f64::consts::LN_2;
    assert!((v["value"]["re"].as_f64().unwrap() - expected).abs() < 1e-14);
    assert_eq!(v["value"]["im"].as_f64().unwrap(), 0.0);
    assert!(v["abs_error_estimate"].as_f64().unwrap() < 1e-12);
    assert!(v["terms_used"].as_u64().unwrap() > 0);
    assert!(v["method"].is_string());
}

#[test]
fn eval_binomial_case() {
    let v = json(&hypasym(&["eval", "--a", "2", "--b", "5", "--c", "5", "--z", "0.5"]));
    assert!((v["value"]["re"].as_f64().unwrap() - 4.0).abs() < 1e-13);
}

#[test]
fn eval_complex_argument_and_method_override() {
    let v =
        json(&hypasym(&["eval", "--a", "1", "--b", "1", "--c", "2", "--z", "-0.3+0.2i", "--method", "direct-series"]));
    assert_eq!(v["method"], "direct-series");
    assert!(v["value"]["im"].as_f64().unwrap() != 0.0);
}

#[test]
fn eval_exit_codes() {
    assert_eq!(hypasym(&["eval", "--a", "1", "--b", "1", "--c", "2", "--z", "2"]).status.code(), Some(2));
    assert_eq!(hypasym(&["eval", "--a", "1", "--b", "1", "--c", "2", "--z", "two"]).status.code(), Some(1));
    assert_eq!(hypasym(&["eval", "--a", "1"]).status.code(), Some(1));
    assert_eq!(
        hypasym(&["eval", "--a", "1", "--b", "1", "--c", "2", "--z", "0.5", "--method", "nope"]).status.code(),
        Some(1)
    );
    assert_eq!(hypasym(&["--help"]).status.code(), Some(0));
}

#[test]
fn classify_examples() {
    let v = json(&hypasym(&["classify", "--dir", "0,0,-1"]));
    assert_eq!(v["case"], "A");
    assert_eq!(v["root"], serde_json::json!([0, 0, -1]));
    assert_eq!(v["steps"][0]["rule"], "conn-1mz");
    assert_eq!(v["leaves"].as_array().unwrap().len(), 2);
    let v = json(&hypasym(&["classify", "--dir", "1,1,-1", "--certify"]));
    assert_eq!(v["case"], "D");
    assert!(v["residual"].as_f64().unwrap() <= 1e-9);
    assert_eq!(hypasym(&["classify", "--dir", "0,0,0"]).status.code(), Some(1));
    assert_eq!(hypasym(&["classify", "--dir", "2,0,0"]).status.code(), Some(1));
}

#[test]
fn compare_watson_decays() {
    let o = hypasym(&["compare", "--expansion", "watson", "--lambda", "50,100,200", "--order", "4"]);
    assert!(o.status.success());
    let errs = csv_column(&stdout(&o), "rel_error");
    assert_eq!(errs.len(), 3);
    assert!(errs[1] < errs[0] && errs[2] < errs[1]);
}

#[test]
fn compare_bcase_decays() {
    let o = hypasym(&["compare", "--expansion", "bcase-erfc", "--z", "1", "--n", "25,100,400"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let errs = csv_column(&text, "rel_error");
    assert!(errs[1] < errs[0] && errs[2] < errs[1]);
    assert_eq!(csv_column(&text, "n"), vec![25.0, 100.0, 400.0]);
}

#[test]
fn compare_errors_are_per_row() {
    let o = hypasym(&["compare", "--expansion", "watson", "--z", "0.5,3", "--lambda", "50"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].ends_with(','));
    assert!(rows[1].contains("branch cut"));
}

#[test]
fn compare_json_format() {
    let o = hypasym(&[
        "compare",
        "--expansion",
        "uniform-u",
        "--a",
        "0.5",
        "--b",
        "1.25",
        "--c",
        "1.5",
        "--z",
        "-1e6",
        "--lambda",
        "50",
        "--format",
        "json",
    ]);
    let v = json(&o);
    assert!(v[0]["rel_error"].as_f64().unwrap() < 1e-4);
}

#[test]
fn compare_empty_grid_is_a_usage_error() {
    assert_eq!(hypasym(&["compare", "--expansion", "watson", "--lambda", ""]).status.code(), Some(1));
    assert_eq!(hypasym(&["compare", "--expansion", "watson"]).status.code(), Some(1));
    assert_eq!(hypasym(&["compare", "--expansion", "bcase-erfc", "--n", ","]).status.code(), Some(1));
}

#[test]
fn jacobi_figure_two_dataset() {
    let dir = scratch("fig2");
    let o = hypasym(&["jacobi", "--figure", "2", "--out", dir.to_str().unwrap()]);
    let summary = json(&o);
    assert_eq!(summary["roots"], 25);
    let text = std::fs::read_to_string(dir.join("jacobi_n25_a-24.5_b-49.csv")).unwrap();
    assert_eq!(text.lines().next().unwrap(), "re,im,residual,curve_distance");
    assert_eq!(text.lines().count(), 26);
    assert!(csv_column(&text, "curve_distance").iter().all(|d| d.is_finite()));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn jacobi_explicit_parameters_pick_up_the_curve() {
    let dir = scratch("fig4");
    let summary =
        json(&hypasym(&["jacobi", "--n", "30", "--alpha", "31", "--beta", "-31", "--out", dir.to_str().unwrap()]));
    assert_eq!(summary["curve"], "fig4-curve");
    assert!(summary["max_curve_distance"].as_f64().unwrap() < 0.1);
    let text = std::fs::read_to_string(dir.join("jacobi_n30_a31_b-31.csv")).unwrap();
    for line in text.lines().skip(1) {
        let f: Vec<f64> = line.split(',').take(2).map(|x| x.parse().unwrap()).collect();
        let m = one_minus_square_abs(f[0], f[1]);
        assert!((m - 1.0).abs() < 0.35, "|1 - z^2| = {m}");
    }
    std::fs::remove_dir_all(dir).unwrap();
}

/// |1 - z^2| for z = x + iy.
fn one_minus_square_abs(x: f64, y: f64) -> f64 {
    let (re, im) = (1.0 - (x * x - y * y), -2.0 * x * y);
    re.hypot(im)
}

#[test]
fn jacobi_usage_errors() {
    assert_eq!(hypasym(&["jacobi", "--figure", "3"]).status.code(), Some(1));
    assert_eq!(hypasym(&["jacobi", "--alpha", "1", "--beta", "2"]).status.code(), Some(1));
    assert_eq!(hypasym(&["jacobi", "--n", "3", "--alpha", "x", "--beta", "2"]).status.code(), Some(1));
}

#[test]
fn larcombe_approaches_two() {
    let o = hypasym(&["f32", "larcombe", "--n-max", "100"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let f = csv_column(&text, "f_exact");
    assert_eq!(f.len(), 101);
    assert!(f[3..].windows(2).all(|w| w[1] < w[0] && w[1] > 2.0));
    assert!((f[100] - 2.0).abs() < 6e-3);
}

#[test]
fn vidunas_grid() {
    let o = hypasym(&["f32", "vidunas", "--n", "-1,0,3", "--a", "1.5", "--b", "0.3"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().next().unwrap(), "n,a,b,P,Q,identity_residual,asym_rel_err");
    assert!(csv_column(&text, "identity_residual").iter().all(|r| *r < 1e-12));
    assert_eq!(csv_column(&text, "P")[0], 1.0);
    assert_eq!(csv_column(&text, "Q")[0], 0.0);
}
