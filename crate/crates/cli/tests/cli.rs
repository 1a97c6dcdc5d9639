//! End-to-end checks of the binary: exit codes, format stability, and the
//! regression command against a perturbed fixture.

use std::io::Write;
use std::process::Command;

fn carnot() -> Command {
    Command::new(env!("CARGO_BIN_EXE_carnot"))
}

fn write_tmp(name: &str, contents: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join("carnot-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    let mut f = std::fs::File::create(&path).unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    path
}

#[test]
fn analyze_catalog_json_is_byte_stable() {
    let run = || {
        carnot()
            .args(["analyze", "catalog:engel", "--format", "json"])
            .output()
            .unwrap()
    };
    let a = run();
    let b = run();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "JSON output must be byte-stable");
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    let pinch = &v["pinching"]["degrees"][1];
    assert_eq!(pinch["beta"], serde_json::json!(["2", "3"]));
    assert_eq!(pinch["alpha"], serde_json::json!(["7/3", "7/2"]));
}

#[test]
fn regress_passes_and_honors_filter() {
    let out = carnot().args(["regress", "--filter", "engel"]).output().unwrap();
    assert!(out.status.success(), "regress --filter engel should pass");
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("engel"));
    assert!(text.contains("PASS"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn malformed_input_exits_2() {
    let path = write_tmp("malformed.json", "{ not json");
    let out = carnot()
        .args(["analyze", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn invalid_structure_constants_exit_2() {
    // grading fails: [x0,x1] lands in weight 1 instead of 2
    let bad = r#"{
        "name": "broken",
        "dim": 3,
        "labels": ["a", "b", "c"],
        "weights": [1, 1, 1],
        "brackets": [
            {"i": 0, "j": 1, "terms": [{"k": 2, "c": "1"}]}
        ]
    }"#;
    let path = write_tmp("bad_algebra.json", bad);
    let out = carnot()
        .args(["analyze", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr).to_lowercase();
    assert!(err.contains("grading") || err.contains("jacobi") || err.contains("invalid"));
}

#[test]
fn valid_json_algebra_round_trips_through_analyze() {
    // the 3-dim Heisenberg algebra as an input file
    let good = r#"{
        "name": "h3-from-file",
        "dim": 3,
        "labels": ["X", "Y", "Z"],
        "weights": [1, 1, 2],
        "brackets": [
            {"i": 0, "j": 1, "terms": [{"k": 2, "c": "1"}]}
        ]
    }"#;
    let path = write_tmp("h3.json", good);
    let out = carnot()
        .args(["analyze", path.to_str().unwrap(), "--format", "json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["algebra"]["name"], "h3-from-file");
    assert_eq!(v["pinching"]["degrees"][1]["beta"], serde_json::json!(["2", "2"]));
}

#[test]
fn unknown_catalog_entry_exits_2() {
    let out = carnot().args(["analyze", "catalog:nonsense"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dc_engel_text_shows_cubic_entry() {
    let out = carnot()
        .args(["dc", "catalog:engel", "--degree", "1"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("X^3"), "missing cubic symbol entry:\n{text}");
}
