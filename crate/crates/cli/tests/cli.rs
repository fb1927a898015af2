use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_beauville")).current_dir(dir).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn analyze_writes_a_report() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    write(d, "ab5.json", r#"{"family": "abelian", "n": 5}"#);
    let o = run(d, &["analyze", "--spec", "ab5.json", "--expect", "yes", "--criterion", "1", "--out", "r.json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = json(&d.join("r.json"));
    assert_eq!(r["schema"], "report-v1");
    assert_eq!(r["beauville"]["verdict"], "yes");
    assert_eq!(r["checks"][0]["criterion"], 1);
    assert_eq!(r["checks"][0]["passed"], true);
    assert_eq!(r["fixtures"]["ab5.json"].as_str().unwrap().len(), 64);
}

#[test]
fn reports_are_deterministic_apart_from_timing() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    write(d, "n.json", r#"{"family": "nottingham", "p": 3, "k": 7, "rng-seed": 5}"#);
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("timing");
        v
    };
    assert_eq!(code(&run(d, &["analyze", "--spec", "n.json", "--out", "a.json"])), 0);
    assert_eq!(code(&run(d, &["analyze", "--spec", "n.json", "--out", "b.json"])), 0);
    assert_eq!(strip(json(&d.join("a.json"))), strip(json(&d.join("b.json"))));
}

#[test]
fn input_errors_exit_two() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    write(d, "bad.json", r#"{"family": "nottingham""#);
    write(d, "unknown.json", r#"{"family": "sporadic", "n": 5}"#);
    write(d, "n.json", r#"{"family": "nottingham", "p": 5, "k": 8}"#);
    write(d, "w.json", r#"{"pair1": ["u", "q"], "pair2": ["u", "v"]}"#);
    assert_eq!(code(&run(d, &["analyze", "--spec", "bad.json"])), 2);
    assert_eq!(code(&run(d, &["analyze", "--spec", "unknown.json"])), 2);
    assert_eq!(code(&run(d, &["analyze", "--spec", "absent.json"])), 2);
    assert_eq!(code(&run(d, &["beauville", "verify", "--spec", "n.json", "--witness", "w.json"])), 2);
    assert_eq!(code(&run(d, &["nottingham-table", "--p", "4", "--k-max", "5"])), 2);
}

#[test]
fn verify_standard_structure_on_quotient() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    write(d, "n.json", r#"{"family": "nottingham", "p": 5, "k": 8}"#);
    write(d, "good.json", r#"{"pair1": ["u", "v"], "pair2": ["u*v^2", "u*v^4"]}"#);
    write(d, "bad.json", r#"{"pair1": ["u", "u"], "pair2": ["u*v^2", "u*v^4"]}"#);
    let o = run(d, &["beauville", "verify", "--spec", "n.json", "--witness", "good.json", "--out", "g.json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&d.join("g.json"))["beauville"]["verdict"], "yes");
    // A non-generating pair is an answer, not an error.
    let o = run(d, &["beauville", "verify", "--spec", "n.json", "--witness", "bad.json", "--out", "b.json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&d.join("b.json"))["beauville"]["verdict"], "no");
}

#[test]
fn verify_cross_checks_small_groups_literally() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    write(d, "ab5.json", r#"{"family": "abelian", "n": 5}"#);
    write(d, "w.json", r#"{"pair1": ["a", "b"], "pair2": ["a*b^2", "a^3*b"]}"#);
    let o = run(d, &["beauville", "verify", "--spec", "ab5.json", "--witness", "w.json", "--out", "r.json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(json(&d.join("r.json"))["literal-agrees"], true);
}

#[test]
fn search_finds_and_refutes() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    write(d, "h3.json", r#"{"family": "pc", "builtin": {"name": "h34", "p": 5, "r": 1}}"#);
    write(d, "c9.json", r#"{"family": "abelian", "n": 9}"#);
    assert_eq!(code(&run(d, &["beauville", "search", "--spec", "h3.json", "--expect", "yes", "--out", "h.json"])), 0);
    let h = json(&d.join("h.json"));
    assert_eq!(h["beauville"]["verdict"], "yes");
    assert!(h["beauville"]["witness"].is_array());
    assert_eq!(code(&run(d, &["beauville", "search", "--spec", "c9.json", "--expect", "no", "--out", "c.json"])), 0);
    assert_eq!(json(&d.join("c.json"))["beauville"]["verdict"], "no");
    // A wrong expectation is a failed check.
    assert_eq!(code(&run(d, &["beauville", "search", "--spec", "c9.json", "--expect", "yes"])), 1);
}

#[test]
fn report_merges_and_flags_missing_criteria() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let empty = d.join("empty");
    std::fs::create_dir(&empty).unwrap();
    assert_eq!(code(&run(d, &["report", "--dir", "empty"])), 4);
    let runs = d.join("runs");
    std::fs::create_dir(&runs).unwrap();
    write(&runs, "ab7.json", r#"{"family": "abelian", "n": 7}"#);
    let o = run(&runs, &["analyze", "--spec", "ab7.json", "--expect", "yes", "--criterion", "1", "--out", "r1.json"]);
    assert_eq!(code(&o), 0);
    let o = run(d, &["report", "--dir", "runs", "--out", "summary.json"]);
    assert_eq!(code(&o), 4);
    let s = json(&d.join("summary.json"));
    assert_eq!(s["schema"], "acceptance-v1");
    assert_eq!(s["criteria"][0]["status"], "pass");
    assert_eq!(s["missing"].as_array().unwrap().len(), 12);
    let first = std::fs::read(d.join("summary.json")).unwrap();
    run(d, &["report", "--dir", "runs", "--out", "summary.json"]);
    assert_eq!(first, std::fs::read(d.join("summary.json")).unwrap());
}

#[test]
fn formulas_check_detects_mirrored_composition() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let ok = ["formulas-check", "--suite", "product", "--samples", "20"];
    assert_eq!(code(&run(d, &ok)), 0);
    let mirrored = ["formulas-check", "--suite", "product", "--samples", "20", "--mirrored"];
    assert_eq!(code(&run(d, &mirrored)), 1);
}

#[test]
fn small_nottingham_table_agrees() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let o = run(d, &["nottingham-table", "--p", "3", "--k-max", "7", "--out", "t.json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let t = json(&d.join("t.json"));
    let rows = t["table"].as_array().unwrap();
    assert!(rows.iter().all(|r| r["agrees"] == true));
    assert!(String::from_utf8_lossy(&o.stdout).contains("disagreements: 0"));
}
