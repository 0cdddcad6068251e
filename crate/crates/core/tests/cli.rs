use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn corpus(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("corpus")
        .join(name)
        .display()
        .to_string()
}

fn et0l(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_et0l"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(args: &[&str]) -> (Value, i32) {
    let mut all = args.to_vec();
    all.extend(["--json", "--no-timing"]);
    let out = et0l(&all);
    let v = serde_json::from_slice(&out.stdout).expect("json report");
    (v, out.status.code().unwrap())
}

#[test]
fn enumeration_report() {
    let g = corpus("power_grammar.json");
    let (v, code) = report(&["grammar", "enum", "--grammar", &g, "--max-word", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["verb"], "grammar enum");
    assert_eq!(v["verdicts"]["words"], serde_json::json!(["", "ab", "aabb", "abab"]));
    assert_eq!(v["inputs"]["grammar"].as_str().unwrap().len(), 64);
}

#[test]
fn reports_are_deterministic() {
    let g = corpus("grigorchuk.json");
    let args = ["coword", "crosscheck", "--group", &g, "--max-len", "2", "--json", "--no-timing"];
    let a = et0l(&args);
    let b = et0l(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), Some(0));
}

#[test]
fn violations_set_the_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    let text = std::fs::read_to_string(corpus("counter.json"))
        .unwrap()
        .replace(r##""to": "q0", "push": "A #b""##, r##""to": "q0", "push": "#b A""##);
    std::fs::write(&bad, text).unwrap();
    let (v, code) = report(&["machine", "validate", "--machine", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(v["violations"].as_array().unwrap().len(), 1);

    let (_, code) = report(&["machine", "validate", "--machine", &corpus("counter.json")]);
    assert_eq!(code, 0);
}

#[test]
fn errors_exit_with_two() {
    let out = et0l(&["group", "eval", "--group", "/nonexistent.json", "--word", "a", "--vertex", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("i/o error"));
}

#[test]
fn conversions_chain() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.json");
    let g2 = dir.path().join("g.json");
    let g = corpus("power_grammar.json");
    assert_eq!(et0l(&["convert", "g2m", "--grammar", &g, "--out", m.to_str().unwrap()]).status.code(), Some(0));
    let (v, code) = report(&["crosscheck", "--grammar", &g, "--machine", m.to_str().unwrap(), "--max-len", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdicts"]["accepted_by_both"], 4);

    let counter = corpus("counter.json");
    let out = et0l(&["convert", "m2g", "--machine", &counter, "--out", g2.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let (v, code) = report(&[
        "crosscheck", "--grammar", g2.to_str().unwrap(), "--machine", &counter, "--max-len", "4", "--max-control", "64",
    ]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["verdicts"]["accepted_by_both"], 3);
}

#[test]
fn group_verbs() {
    let g = corpus("grigorchuk.json");
    let (v, _) = report(&["group", "eval", "--group", &g, "--word", "a b", "--vertex", "111"]);
    assert_eq!(v["verdicts"]["image"], "212");
    let (v, _) = report(&["group", "witness", "--group", &g, "--word", "a b"]);
    assert_eq!(v["verdicts"]["witness"], "1");
    let (v, _) = report(&["group", "classify", "--group", &g]);
    assert_eq!(v["verdicts"]["a"]["kind"], "finitary");
    assert_eq!(v["verdicts"]["d"]["kind"], "directed");
    let (v, _) = report(&["group", "spine", "--group", &g, "--generator", "d"]);
    assert_eq!(v["verdicts"]["spine"]["pi"], "222");
}

#[test]
fn coword_check_on_built_machine() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("mg.json");
    let g = corpus("gupta_sidki.json");
    assert_eq!(et0l(&["coword", "build", "--group", &g, "--out", m.to_str().unwrap()]).status.code(), Some(0));
    let (v, _) = report(&["coword", "check", "--machine", m.to_str().unwrap(), "--word", "g a", "--max-cs", "4"]);
    assert_eq!(v["verdicts"]["accepted"], true);
    let (v, _) = report(&["coword", "check", "--machine", m.to_str().unwrap(), "--word", "g G", "--max-cs", "4"]);
    assert_eq!(v["verdicts"]["accepted"], false);
}
