use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn ucayley(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ucayley")).args(args).env("UCAYLEY_THREADS", "2").output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn json_file(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn paper_example_charpoly() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let res = ucayley(&["run-example", "m2z4-gcd-charpoly", "--out", out.to_str().unwrap()]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let cp = fs::read_to_string(out.join("charpoly.txt")).unwrap();
    for factor in ["(x+15)^6", "(x+7)^72", "(x+3)^96", "(x-9)^72", "(x-17)^9", "(x-81)"] {
        assert!(cp.contains(factor), "{factor} missing from {cp}");
    }
    for f in ["structure.json", "spectrum.json", "spectrum.csv", "pst.json", "oracle.json", "graph.dot", "config.json"] {
        assert!(out.join(f).exists(), "{f}");
    }
    let spectrum = json_file(&out.join("spectrum.json"));
    assert_eq!(spectrum["eigenvalues"].as_array().unwrap().len(), 6);
    assert_eq!(spectrum["eigenvalues"][0]["eigenvalue"]["integer"], 81);
    let oracle = json_file(&out.join("oracle.json"));
    assert_eq!(oracle["per_element_agrees"], true);
}

#[test]
fn empty_analyses_is_a_validation_error() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "bad.json",
        r#"{"version": 1, "ring": {"zmod": 4}, "subgroup": "units", "selector": {"units": true}, "analyses": []}"#,
    );
    let res = ucayley(&["analyze", &cfg, "--out", tmp.path().join("o").to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("analyses"));
}

#[test]
fn unknown_fields_are_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "bad.json",
        r#"{"version": 1, "ring": {"zmod": 4}, "subgroup": "units", "selector": {"units": true}, "analyses": ["spectrum"], "extra": 0}"#,
    );
    let res = ucayley(&["analyze", &cfg, "--out", tmp.path().join("o").to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("extra"));
}

#[test]
fn cap_exceeded_exits_three() {
    let tmp = tempfile::tempdir().unwrap();
    let big = write_config(
        tmp.path(),
        "big.json",
        r#"{"version": 1, "ring": {"matrix": {"size": 3, "base": {"zmod": 5}}}, "subgroup": "units", "selector": {"units": true}, "analyses": ["structure"]}"#,
    );
    let res = ucayley(&["analyze", &big, "--out", tmp.path().join("o").to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(3));
    let capped = write_config(
        tmp.path(),
        "capped.json",
        r#"{"version": 1, "ring": {"zmod": 100}, "subgroup": "units", "selector": {"units": true}, "analyses": ["spectrum"], "caps": {"ring_size": 64}}"#,
    );
    let res = ucayley(&["analyze", &capped, "--out", tmp.path().join("p").to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(3));
}

#[test]
fn c4_transfer_report() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "c4.json",
        r#"{"version": 1, "ring": {"zmod": 4}, "subgroup": {"generated": [1]}, "selector": {"units": true}, "analyses": ["pst"]}"#,
    );
    let out = tmp.path().join("o");
    let res = ucayley(&["analyze", &cfg, "--out", out.to_str().unwrap()]);
    assert!(res.status.success());
    let pst = json_file(&out.join("pst.json"));
    assert_eq!(pst["verdict"], "Exists");
    assert_eq!(pst["witnesses"][0]["tau"], "1/4");
    assert_eq!(pst["witnesses"][0]["s"], 2);
}

#[test]
fn reports_are_byte_identical_and_guarded() {
    let tmp = tempfile::tempdir().unwrap();
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    for dir in [&a, &b] {
        assert!(ucayley(&["run-example", "m2f3-sl-unitary", "--out", dir.to_str().unwrap()]).status.success());
    }
    for entry in fs::read_dir(&a).unwrap() {
        let name = entry.unwrap().file_name();
        assert_eq!(fs::read(a.join(&name)).unwrap(), fs::read(b.join(&name)).unwrap(), "{name:?}");
    }
    let again = ucayley(&["run-example", "m2f3-sl-unitary", "--out", a.to_str().unwrap()]);
    assert_eq!(again.status.code(), Some(2));
    let forced = ucayley(&["run-example", "m2f3-sl-unitary", "--out", a.to_str().unwrap(), "--force"]);
    assert!(forced.status.success());
    let leftovers: Vec<_> = fs::read_dir(&a)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.starts_with(".tmp"))
        .collect();
    assert!(leftovers.is_empty(), "{leftovers:?}");
}

#[test]
fn structure_keys_are_sorted() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("o");
    assert!(ucayley(&["run-example", "m2f2-gl-unitary", "--out", out.to_str().unwrap()]).status.success());
    let text = fs::read_to_string(out.join("structure.json")).unwrap();
    let top: Vec<&str> = text
        .lines()
        .filter(|l| l.starts_with("  \"") && !l.starts_with("   "))
        .map(|l| l.trim().split('"').nth(1).unwrap())
        .collect();
    let mut sorted = top.clone();
    sorted.sort();
    assert_eq!(top, sorted);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["prime_verdict"], "prime");
    assert_eq!(v["bipartite"], false);
    assert_eq!(v["diameter"], 2);
}

#[test]
fn examples_lists_the_gallery() {
    let res = ucayley(&["examples"]);
    assert!(res.status.success());
    let text = String::from_utf8(res.stdout).unwrap();
    assert!(text.lines().count() >= 10);
    assert!(text.contains("z4-c4-pst"));
    let missing = ucayley(&["run-example", "no-such-example"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn bad_thread_count_is_rejected() {
    let res = Command::new(env!("CARGO_BIN_EXE_ucayley"))
        .arg("examples")
        .env("UCAYLEY_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(res.status.code(), Some(2));
}
