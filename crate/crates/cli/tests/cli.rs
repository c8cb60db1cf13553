use serde_json::Value;
use std::process::{Command, Output};

fn qkw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qkw")).args(args).output().expect("qkw runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn rows(doc: &Value) -> &Vec<Value> {
    doc["results"].as_array().unwrap()
}

#[test]
fn kac_two_loop_quiver() {
    let out = qkw(&["kac", "--quiver", "builtin:loops-2", "--box", "3", "--flavor", "plain"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = json(&out);
    assert_eq!(doc["command"], "kac");
    assert_eq!(doc["box"], serde_json::json!([3]));
    let coeffs: Vec<Vec<String>> = rows(&doc)
        .iter()
        .map(|r| r["coeffs"].as_array().unwrap().iter().map(|c| c.as_str().unwrap().to_string()).collect())
        .collect();
    assert_eq!(coeffs[0], ["0", "0", "1"]);
    // t^3 (t^4 - 1) / (t^2 - 1) = t^3 + t^5
    assert_eq!(coeffs[1], ["0", "0", "0", "1", "0", "1"]);
    assert_eq!(coeffs.len(), 3);
}

#[test]
fn verify_jordan_passes() {
    let out = qkw(&["verify", "--quiver", "builtin:jordan", "--primes", "2,3", "--box", "2"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = json(&out);
    let rows = rows(&doc);
    assert!(rows.len() > 20);
    for r in rows {
        assert_eq!(r["status"], "pass", "{r}");
    }
    let ids: Vec<&str> = rows.iter().map(|r| r["id"].as_str().unwrap()).collect();
    for id in ["oracle-lambda/plain/p=2", "oracle-lambda/nil0/p=3", "oracle-nakajima/M/p=2", "kac-constant-term", "qbinomial"] {
        assert!(ids.contains(&id), "missing {id}");
    }
}

#[test]
fn series_reports_jordan_lambda_counts() {
    let out = qkw(&["series", "--quiver", "builtin:jordan", "--box", "2", "--primes", "2"]);
    assert!(out.status.success());
    let doc = json(&out);
    let count = |kind: &str, flavor: &str| {
        rows(&doc)
            .iter()
            .find(|r| r["kind"] == kind && r["flavor"] == flavor && r["dim_vector"] == serde_json::json!([2]))
            .map(|r| r["point_counts"]["2"].as_str().unwrap().to_string())
            .unwrap()
    };
    assert_eq!(count("lambda", "plain"), "10");
    assert_eq!(count("lambda", "nil1"), "28");
    assert_eq!(count("lambda", "nil0"), "28");
}

#[test]
fn malformed_quiver_is_rejected_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\n  \"vertices\": [\"a\"],\n  \"arrows\": [[\"a\", \"b\"]]\n}\n").unwrap();
    let out = qkw(&["kac", "--quiver", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("parse error at line 3"), "{err}");

    std::fs::write(&path, "{\"vertices\": [\"a\"], \"arrows\": [").unwrap();
    let out = qkw(&["kac", "--quiver", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("parse error"));
}

#[test]
fn bad_arguments_exit_two() {
    assert_eq!(qkw(&["kac", "--quiver", "builtin:nope"]).status.code(), Some(2));
    assert_eq!(qkw(&["kac", "--quiver", "builtin:a2", "--box", "1,2,3"]).status.code(), Some(2));
    assert_eq!(qkw(&["series", "--quiver", "builtin:a2", "--primes", "4"]).status.code(), Some(2));
}

#[test]
fn output_is_reproducible() {
    let args = ["nakajima", "--quiver", "builtin:loop-plus-edge", "--box", "2", "--jobs", "2"];
    let a = qkw(&args);
    let b = qkw(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let args = ["census", "--quiver", "builtin:kronecker", "--box", "2", "--primes", "2"];
    assert_eq!(qkw(&args).stdout, qkw(&args).stdout);
}

#[test]
fn csv_and_latex_formats() {
    let out = qkw(&["gkm", "--quiver", "builtin:loops-2", "--box", "4", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("kind,dim_vector,value,constant_term"));
    assert_eq!(lines.next(), Some("multiplicity,1,1,1"));
    assert!(text.contains("character,4,8,"));

    let out = qkw(&["kac", "--quiver", "builtin:a2", "--box", "1", "--format", "latex", "--flavor", "nil0"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("\\begin{tabular}{lll}"));
    assert!(text.contains("flavor & dim\\_vector & coeffs"));
    assert!(text.trim_end().ends_with("\\end{tabular}"));
}
