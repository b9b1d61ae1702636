//! End-to-end runs of the binary on emitted fixtures.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_assemblers"))
        .args(args)
        .env_remove("ASSEMBLERS_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn emit(dir: &Path, name: &str, params: &[&str]) -> PathBuf {
    let path = dir.join(format!("{name}.json"));
    let mut args = vec!["fixture", name];
    args.extend_from_slice(params);
    args.extend_from_slice(&["--emit", path.to_str().unwrap()]);
    let o = run(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    path
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json report")
}

#[test]
fn validate_accepts_fixtures() {
    let dir = tempfile::tempdir().unwrap();
    for (name, params) in [("trivial", vec![]), ("preorder5", vec![]), ("finite_sets", vec!["2"]), ("sphere_group", vec!["S3"])] {
        let p = emit(dir.path(), name, &params);
        let o = run(&["validate", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stdout(&o));
        assert!(stdout(&o).contains("axiom R: OK"));
    }
}

#[test]
fn missing_composite_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("broken.json");
    let doc = r#"{
        "objects": ["0", "A", "B", "C"],
        "initial": "0",
        "morphisms": [
            {"id": "f", "src": "A", "tgt": "B"},
            {"id": "g", "src": "B", "tgt": "C"}
        ],
        "composition": [],
        "covers": []
    }"#;
    std::fs::write(&p, doc).unwrap();
    let o = run(&["validate", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let all = stdout(&o) + &String::from_utf8_lossy(&o.stderr);
    assert!(all.contains("incomplete composition (f,g)"), "{all}");
}

#[test]
fn k0_of_finite_sets_is_z() {
    let dir = tempfile::tempdir().unwrap();
    let p = emit(dir.path(), "finite_sets", &["3"]);
    let o = run(&["--json", "k0", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["rank"], 1);
    assert_eq!(v["classes"]["{1,2,3}"], serde_json::json!(["3"]));
}

#[test]
fn devissage_on_singletons() {
    let dir = tempfile::tempdir().unwrap();
    let p = emit(dir.path(), "finite_sets", &["2"]);
    let o = run(&["devissage", p.to_str().unwrap(), "--sub", "S"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("hypothesis: OK"));
    assert!(out.contains("π₀: iso ℤ→ℤ"));
}

#[test]
fn localization_reports_the_complement_witness() {
    let dir = tempfile::tempdir().unwrap();
    let p = emit(dir.path(), "preorder5", &[]);
    let o = run(&["localize", p.to_str().unwrap(), "--sieve", "D"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("complements hypothesis: FAIL"));
    assert!(out.contains("A->B"));
}

#[test]
fn quotient_emits_a_loadable_document() {
    let dir = tempfile::tempdir().unwrap();
    let p = emit(dir.path(), "preorder5", &[]);
    let q = dir.path().join("q.json");
    let o = run(&["quotient", p.to_str().unwrap(), "--sieve", "D", "--emit", q.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["--json", "validate", q.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["category_laws"], true);
}

#[test]
fn sink_group_of_the_sphere() {
    let dir = tempfile::tempdir().unwrap();
    let p = emit(dir.path(), "sphere_group", &["S3"]);
    let o = run(&["--json", "sink-group", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["order"], 6);
    assert_eq!(v["projection_valid"], true);
}

#[test]
fn wcat_and_homology() {
    let dir = tempfile::tempdir().unwrap();
    let p = emit(dir.path(), "sphere_group", &["Z2"]);
    let o = run(&["--json", "wcat", p.to_str().unwrap(), "--max-tuple", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["monic"], true);
    let o = run(&["--json", "homology", p.to_str().unwrap(), "--degree", "2", "--max-tuple", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["homology"], serde_json::json!(["ℤ", "ℤ"]));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{").unwrap();
    assert_eq!(run(&["k0", bad.to_str().unwrap()]).status.code(), Some(3));
    assert_eq!(run(&["k0", dir.path().join("missing.json").to_str().unwrap()]).status.code(), Some(3));
    let p = emit(dir.path(), "finite_sets", &["2"]);
    assert_eq!(run(&["--budget", "10", "k0", p.to_str().unwrap()]).status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_assemblers"))
        .args(["k0", p.to_str().unwrap()])
        .env("ASSEMBLERS_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn json_keys_are_sorted() {
    let dir = tempfile::tempdir().unwrap();
    let p = emit(dir.path(), "preorder5", &[]);
    let o = run(&["--json", "localize", p.to_str().unwrap(), "--sieve", "D"]);
    let v = json(&o);
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}
