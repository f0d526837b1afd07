use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn wildram(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wildram"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn index_reports_every_residue() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "f.json", r#"{"p":3,"prec":62,"coeffs":[[5,1],[6,2]]}"#);
    let v = stdout_json(&wildram(&["index", spec.to_str().unwrap()]));
    assert_eq!(v["q"], 4);
    assert_eq!(v["ells"], serde_json::json!([1, 4]));
    assert_eq!(v["pind"][0], 2);
    assert_eq!(v["smallest_j"], 1);

    let v = stdout_json(&wildram(&["index", spec.to_str().unwrap(), "--j", "2"]));
    assert_eq!(v["ell_j"], 4);
}

#[test]
fn ramify_json_and_csv() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "f.json", r#"{"p":3,"prec":62,"coeffs":[[5,1],[6,2]]}"#);
    let v = stdout_json(&wildram(&["ramify", spec.to_str().unwrap(), "--n-max", "2"]));
    let values: Vec<u64> = v["levels"].as_array().unwrap().iter().map(|l| l["value"].as_u64().unwrap()).collect();
    assert_eq!(values, [4, 13, 40]);
    assert_eq!(v["classification"]["verdict"]["kind"], "match");

    let out = wildram(&["ramify", spec.to_str().unwrap(), "--n-max", "2", "--csv"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "q,ell_j,i_0,i_1,i_2\n4,1,4,13,40\n");
}

#[test]
fn ramify_marks_unresolved_levels() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "f.json", r#"{"p":3,"prec":20,"coeffs":[[5,1],[6,2]]}"#);
    let v = stdout_json(&wildram(&["ramify", spec.to_str().unwrap(), "--n-max", "2"]));
    assert_eq!(v["levels"][1]["exact"], true);
    assert_eq!(v["levels"][2]["exact"], false);
}

#[test]
fn normal_form_keeps_the_index() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "f.json", r#"{"p":3,"prec":30,"coeffs":[[5,2],[6,1],[7,1],[8,2]]}"#);
    let index = stdout_json(&wildram(&["index", spec.to_str().unwrap()]));
    let nf = stdout_json(&wildram(&["normal-form", spec.to_str().unwrap(), "--j", "1"]));
    assert_eq!(nf["pind_j"], index["pind"][0]);
    let degrees: Vec<u64> = nf["normal_form"]["coeffs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c[0].as_u64().unwrap())
        .collect();
    // Nothing strictly between z^{q+1} and z^{q+ℓ+1}, nor up to z^{q+ℓ+p}.
    assert!(degrees.iter().all(|&d| d == 5 || d == 6 || d > 8), "{degrees:?}");
}

#[test]
fn newton_on_valued_input() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "v.json", r#"{"p":3,"prec":6,"coeffs":[[5,"t"],[6,"t^2"]],"valued":true}"#);
    let v = stdout_json(&wildram(&["newton", spec.to_str().unwrap()]));
    assert_eq!(v["fixed_points"]["pass"], true);
    assert_eq!(v["periodic_points"]["pass"], true);
    assert_eq!(v["periodic_points"]["i_1"], 13);
}

#[test]
fn parse_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", r#"{"p":4,"prec":10,"coeffs":[[3,1]]}"#);
    let out = wildram(&["index", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not a prime"));

    let dup = write(&dir, "dup.json", r#"{"p":3,"prec":10,"coeffs":[[3,1],[3,1]]}"#);
    assert_eq!(wildram(&["index", dup.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(wildram(&["index", "/nonexistent/spec.json"]).status.code(), Some(2));
    assert_eq!(wildram(&["verify", "no-such-suite", "--seed", "1"]).status.code(), Some(2));
    assert_eq!(wildram(&["ramify"]).status.code(), Some(2));
}

#[test]
fn verify_writes_identical_reports() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let out = wildram(&[
            "verify",
            "criterion1",
            "--seed",
            "7",
            "--q",
            "4",
            "--samples",
            "20",
            "--json",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["pass"], 20);
    assert_eq!(v["fail"], 0);
}

#[test]
fn verify_symbolic_cases_from_flags() {
    let out = wildram(&["verify", "main-lemma", "--seed", "0", "--case", "3,4,1", "--case", "3,5,2", "--case", "5,7,2"]);
    let v = stdout_json(&out);
    assert_eq!(v["pass"], 3);
}

#[test]
fn verify_rejects_bad_parameters() {
    let out = wildram(&["verify", "criterion1", "--seed", "1", "--q", "6"]);
    assert_eq!(out.status.code(), Some(2));
}
