use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn gform(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gform")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn symbol_of_minus_one_and_t() {
    let o = gform(&["symbol", "-1", "t", "--pretty"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("(t): -1"), "{text}");
    assert!(text.contains("inf: -1"), "{text}");
    assert!(text.contains("product +1"), "{text}");
}

#[test]
fn symbol_json_product() {
    let o = gform(&["symbol", "t", "t+1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["product"], 1);
    assert_eq!(v["p"], 3);
}

#[test]
fn ramification_of_the_default_algebra() {
    let o = gform(&["ram", "-1", "t"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["ramification"].as_array().unwrap().len(), 2);
    assert_eq!(v["split"], false);
}

#[test]
fn malformed_input_exits_2() {
    assert_eq!(gform(&["symbol", "t+", "1"]).status.code(), Some(2));
    assert_eq!(gform(&["symbol", "0", "t"]).status.code(), Some(2));
    assert_eq!(gform(&["--p", "4", "symbol", "t", "t"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", "{\"p\": 3, \"gram\": [[\"1\", \"0\"], [\"1\", \"1\"]]}");
    assert_eq!(gform(&["qf-equiv", &bad, &bad]).status.code(), Some(2));
    let missing = dir.path().join("missing.json");
    assert_eq!(gform(&["hp-check", missing.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn qf_equiv_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.json", "{\"p\": 3, \"gram\": [[\"1\", \"0\"], [\"0\", \"t\"]]}");
    let b = write(dir.path(), "b.json", "[[\"t\", \"0\"], [\"0\", \"1\"]]");
    let c = write(dir.path(), "c.json", "[[\"1\", \"0\"], [\"0\", \"-t\"]]");
    let o = gform(&["qf-equiv", &a, &b]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["equivalent"], true);
    assert_eq!(gform(&["qf-equiv", &a, &c]).status.code(), Some(1));
}

#[test]
fn hp_check_trivial_module() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.json", "{\"p\": 3, \"generators\": [\"g\"], \"dim\": 1, \"action\": {\"g\": [[\"1\"]]}}");
    let q = write(dir.path(), "q.json", "[[\"1\"]]");
    let o = gform(&["hp-check", &m, &q, "--pretty"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("guaranteed (orthogonal split)"), "{}", stdout(&o));
}

#[test]
fn verify_subcommand_passes() {
    let o = gform(&["verify-paper", "--pretty"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(!text.contains("FAIL"));
    assert!(text.lines().filter(|l| l.starts_with("PASS")).count() > 10);
}

#[test]
fn counterexample_writes_equivalent_grams() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let grams = dir.path().join("grams");
    let o = gform(&["counterexample", "-o", report.to_str().unwrap(), "--grams", grams.to_str().unwrap(), "--samples", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["p"], 3);
    let (q, q2) = (grams.join("q.json"), grams.join("q_prime.json"));
    let o = gform(&["qf-equiv", q.to_str().unwrap(), q2.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
}
