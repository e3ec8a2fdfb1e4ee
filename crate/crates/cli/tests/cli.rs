use std::path::PathBuf;
use std::process::{Command, Output};

use krull_core::decay::DecayJson;
use krull_core::ZetaEstimate;
use serde_json::Value;

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_krull-zeta")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

#[test]
fn hilbert_strong_atoms_json() {
    let hilbert = data("hilbert.json");
    let text = stdout(&["strong-atoms", "--spec", &hilbert, "--bound", "100", "--json"]);
    let got: Vec<u64> = serde_json::from_str(&text).unwrap();
    let mut expected: Vec<u64> = (2..=100u64)
        .filter(|&p| is_prime(p))
        .filter_map(|p| match p % 4 {
            1 => Some(p),
            3 if p * p <= 100 => Some(p * p),
            _ => None,
        })
        .collect();
    expected.sort();
    assert_eq!(got, expected);
    assert_eq!(&got[..8], &[5, 9, 13, 17, 29, 37, 41, 49]);
}

#[test]
fn wallis_product() {
    let naturals = data("naturals.json");
    let text = stdout(&["euler", "--spec", &naturals, "--scale", "wallis", "--atoms", "2500", "--json"]);
    let v: Value = serde_json::from_str(&text).unwrap();
    let product = v["product"].as_f64().unwrap();
    let direct: f64 = (1..=2500u64).map(|k| (4 * k * k) as f64 / (4 * k * k - 1) as f64).product();
    assert!((product - direct).abs() < 1e-12);
    // truncation error of the 2500-term product is about π/(8·2500)
    assert!((product - std::f64::consts::FRAC_PI_2).abs() < 2e-4, "{product}");
}

#[test]
fn decay_json_matches_example() {
    let hilbert = data("hilbert.json");
    let text = stdout(&["decay", "--spec", &hilbert, "--element", "21", "--json"]);
    assert_eq!(text.trim(), r#"{"m":2,"exponents":[{"atom":"9","e":1},{"atom":"49","e":1}],"delta":"1/1"}"#);
    let parsed: DecayJson = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string(&parsed).unwrap(), text.trim());
}

#[test]
fn field_decay_uses_ideal_labels() {
    let field = data("field_minus5.json");
    let text = stdout(&["decay", "--spec", &field, "--element", "1,1", "--json"]);
    assert_eq!(text.trim(), r#"{"m":2,"exponents":[{"atom":"P2^2","e":1},{"atom":"P3[2]^2","e":1}],"delta":"1/1"}"#);
}

#[test]
fn zeta_json_round_trips_and_csv_has_header() {
    let naturals = data("naturals.json");
    let args = ["zeta", "--spec", &naturals, "--terms", "1000", "--atoms", "168", "--tail", "0.001"];
    let json = stdout(&[&args[..], &["--json"]].concat());
    let est: ZetaEstimate = serde_json::from_str(&json).unwrap();
    assert_eq!(serde_json::to_string(&est).unwrap(), json.trim());
    assert!(est.lower <= est.upper.unwrap());
    let csv = stdout(&[&args[..], &["--csv"]].concat());
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(ZetaEstimate::CSV_HEADER));
    assert_eq!(lines.next(), Some(est.csv_row().as_str()));
}

#[test]
fn factorize_hilbert_441() {
    let hilbert = data("hilbert.json");
    let text = stdout(&["factorize", "--spec", &hilbert, "--element", "441", "--json"]);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["factorizations"], serde_json::json!([[9, 49], [21, 21]]));
    assert_eq!(v["lengths"], serde_json::json!([2]));
}

#[test]
fn affine_strong_atoms() {
    let pyramid = data("pyramid.json");
    let text = stdout(&["strong-atoms", "--spec", &pyramid, "--json"]);
    let got: Vec<Vec<i64>> = serde_json::from_str(&text).unwrap();
    assert_eq!(got, vec![vec![-1, -1, 1], vec![-1, 1, 1], vec![1, -1, 1], vec![1, 1, 1]]);
}

#[test]
fn output_is_deterministic() {
    let field = data("field_minus5.json");
    let args = ["dedekind", "--spec", &field, "--bound", "2000", "--json"];
    let a = stdout(&args);
    assert_eq!(a, stdout(&args));
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["counts_match_oracle"], Value::Bool(true));
}

#[test]
fn exit_codes() {
    let hilbert = data("hilbert.json");
    assert_eq!(run(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(run(&["info", "--no-such-flag"]).status.code(), Some(64));
    assert_eq!(run(&["info"]).status.code(), Some(64));
    let bad = std::env::temp_dir().join("krull-zeta-bad-spec.json");
    std::fs::write(&bad, r#"{"family":"hilbert","bund":3}"#).unwrap();
    assert_eq!(run(&["info", "--spec", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["decay", "--spec", &hilbert, "--element", "7"]).status.code(), Some(2));
    assert_eq!(run(&["factorize", "--spec", &hilbert, "--element", "441", "--bound", "10"]).status.code(), Some(3));
    assert_eq!(run(&["euler", "--spec", &hilbert, "--scale", "power:0"]).status.code(), Some(2));
}

#[test]
fn verify_passes() {
    let out = run(&["verify", "--pairs", "100", "--json"]);
    assert!(out.status.success());
    let v: Vec<Value> = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v.iter().all(|c| c["passed"] == Value::Bool(true)));
}
