use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn ulrich(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ulrich")).args(args).output().unwrap()
}

fn ulrich_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_ulrich"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let out = ulrich(&full);
    let stdout = String::from_utf8(out.stdout).unwrap();
    let value = serde_json::from_str(&stdout).unwrap_or_else(|e| panic!("{e}: {stdout}"));
    (out.status.code().unwrap(), value)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn classify_bordiga() {
    let (code, v) = json(&["classify", "--builtin", "bordiga"]);
    assert_eq!(code, 0);
    assert_eq!(v["ulrich_wild"], "true");
    assert_eq!(v["stable_special_exists"], "true");
    assert_eq!(v["moduli_dim_lower_chern"], 12);
    assert_eq!(v["invariants"]["pi"], 3);
}

#[test]
fn catalog_verify_passes() {
    let (code, v) = json(&["catalog", "verify"]);
    assert_eq!(code, 0);
    assert_eq!(v["passed"], true);
    assert_eq!(v["rows"].as_array().unwrap().len(), 7);
}

#[test]
fn enumerate_quadric() {
    let (code, v) = json(&["enumerate", "--builtin", "p1xp1-2-3", "--bound", "6"]);
    assert_eq!(code, 0);
    let sols: Vec<(i64, i64)> = v["solutions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| (s["xi"].as_i64().unwrap(), s["f"].as_i64().unwrap()))
        .collect();
    assert_eq!(sols, [(1, 5), (3, 2)]);
    let (_, exact) = json(&["enumerate", "--builtin", "p1xp1-2-3"]);
    assert_eq!(exact["method"], "exact");
    assert_eq!(exact["solutions"], v["solutions"]);
}

#[test]
fn enumerate_higher_rank_needs_a_bound() {
    let out = ulrich(&["enumerate", "--builtin", "del-pezzo-7"]);
    assert_eq!(out.status.code(), Some(1));
    let (code, v) = json(&["enumerate", "--builtin", "del-pezzo-7", "--bound", "3"]);
    assert_eq!(code, 0);
    assert!(v["count"].as_u64().unwrap() > 0);
}

#[test]
fn table_and_json_agree() {
    for args in [
        vec!["info", "--builtin", "kim-5-9"],
        vec!["classify", "--builtin", "enriques-10"],
        vec!["special-chern", "--builtin", "del-pezzo-5"],
        vec!["clifford", "--a", "6", "--m", "2"],
    ] {
        let (_, v) = json(&args);
        let table = stdout(&ulrich(&args));
        let mut numbers = Vec::new();
        collect_numbers(&v, &mut numbers);
        for n in numbers {
            assert!(table.contains(&n), "{args:?}: {n} missing from\n{table}");
        }
    }
}

fn collect_numbers(v: &Value, out: &mut Vec<String>) {
    match v {
        Value::Number(n) => out.push(n.to_string()),
        Value::Array(xs) => xs.iter().for_each(|x| collect_numbers(x, out)),
        Value::Object(m) => m.values().for_each(|x| collect_numbers(x, out)),
        _ => {}
    }
}

#[test]
fn convert_round_trips() {
    let first = stdout(&ulrich(&["convert", "--builtin", "table1-row-5"]));
    let second = stdout(&ulrich_stdin(&["convert", "--surface", "-"], &first));
    assert_eq!(first, second);
    let v: Value = serde_json::from_str(&first).unwrap();
    assert_eq!(v["name"], "table1-row-5");
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(
        keys,
        [
            "name",
            "basis",
            "gram",
            "K",
            "h",
            "pg",
            "q",
            "kind",
            "flags",
            "provenance"
        ]
    );
}

#[test]
fn surface_files_are_read() {
    let dir = std::env::temp_dir().join(format!("ulrich-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("quartic.json");
    // numerics of a quartic of sectional genus 0 with no recorded family
    std::fs::write(
        &path,
        r#"{"name": "q", "basis": ["h", "x"], "gram": [[4, 1], [1, 0]], "K": [-2, 2], "h": [1, 0], "pg": 0, "q": 0,
            "flags": {"very_ample": "true", "non_special": "true"}}"#,
    )
    .unwrap();
    let (code, v) = json(&["classify", "--surface", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["stable_special_exists"], "unknown");
    assert_eq!(v["minimal_degree"], true);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn validation_errors_name_the_field() {
    let bad =
        r#"{"name": "x", "basis": ["a", "b"], "gram": [[0, 1], [2, 0]], "K": [0, 0], "h": [1, 1], "pg": 0, "q": 0}"#;
    let out = ulrich_stdin(&["info", "--surface", "-", "--format", "json"], bad);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "validation");
    assert_eq!(err["error"]["path"], "gram");
    let out = ulrich_stdin(&["info", "--surface", "-"], bad);
    assert!(String::from_utf8(out.stderr).unwrap().contains("`gram`"));
}

#[test]
fn failing_checks_exit_with_two() {
    let out = ulrich(&[
        "check-rank",
        "--builtin",
        "bordiga",
        "--rank",
        "2",
        "--c1",
        "9,-2,-2,-2,-2,-2,-2,-2,-2,-2,-2",
        "--c2",
        "13",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = ulrich(&[
        "check-rank",
        "--builtin",
        "bordiga",
        "--rank",
        "2",
        "--c1",
        "9,-2,-2,-2,-2,-2,-2,-2,-2,-2,-2",
        "--c2",
        "14",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let (code, v) = json(&["check-line", "--builtin", "p1xp1-2-3", "--divisor", "1,5"]);
    assert_eq!(code, 0);
    assert_eq!(v["passed"], true);
}

#[test]
fn usage_errors() {
    assert_eq!(ulrich(&["classify"]).status.code(), Some(1));
    assert_eq!(ulrich(&["classify", "--builtin", "nope"]).status.code(), Some(1));
    assert_eq!(
        ulrich(&["check-line", "--builtin", "p2-1", "--divisor", "1,2"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(ulrich(&["clifford", "--a", "4", "--m", "10"]).status.code(), Some(1));
    assert_eq!(ulrich(&["--format", "yaml", "info"]).status.code(), Some(1));
}

#[test]
fn catalog_list_covers_every_family() {
    let (code, v) = json(&["catalog", "list"]);
    assert_eq!(code, 0);
    let names: Vec<&str> = v["builtins"]
        .as_array()
        .unwrap()
        .iter()
        .map(|b| b["name"].as_str().unwrap())
        .collect();
    for expected in [
        "p2-1",
        "hirzebruch-e2-a1-b3",
        "del-pezzo-3",
        "enriques-10",
        "kim-5-9",
        "table1-row-4",
        "bordiga",
    ] {
        assert!(names.contains(&expected), "{expected}");
    }
}
