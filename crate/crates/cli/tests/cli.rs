use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn kqext(args: &[&str], cache: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kqext")).args(args).env("KQEXT_CACHE_DIR", cache).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn error_json(o: &Output) -> Value {
    serde_json::from_slice(o.stderr.trim_ascii()).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stderr)))
}

const SMALL: [&str; 4] = ["--range", "s=-2..6", "f=0..3", "w=-3..4"];

fn ext_args<'a>(module: &'a str, extra: &[&'a str]) -> Vec<&'a str> {
    let mut v = vec!["ext", "--module", module];
    v.extend(SMALL);
    v.extend(extra);
    v
}

#[test]
fn ext_reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = kqext(&ext_args("B0(1)", &["--no-cache"]), dir.path());
    let b = kqext(&ext_args("B0(1)", &["--no-cache"]), dir.path());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["module"], "B0(1)");
    assert!(fs::read_dir(dir.path()).map_or(true, |mut d| d.next().is_none()));
}

#[test]
fn cache_serves_stored_results() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c");
    let first = kqext(&ext_args("M2", &[]), &cache);
    assert!(first.status.success());
    let entries: Vec<_> = fs::read_dir(&cache).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(entries.len(), 1);
    assert_eq!(fs::read(&entries[0]).unwrap(), first.stdout);
    fs::write(&entries[0], "{\"marker\": true}\n").unwrap();
    let second = kqext(&ext_args("M2", &[]), &cache);
    assert_eq!(stdout(&second), "{\"marker\": true}\n");
    let other = kqext(&ext_args("M2", &["--base", "C"]), &cache);
    assert_ne!(stdout(&other), "{\"marker\": true}\n");
    assert_eq!(fs::read_dir(&cache).unwrap().count(), 2);
    let flag = dir.path().join("flag");
    let third = kqext(&ext_args("M2", &["--cache-dir", flag.to_str().unwrap()]), &cache);
    assert_eq!(third.stdout, first.stdout);
    assert_eq!(fs::read_dir(&flag).unwrap().count(), 1);
}

#[test]
fn parse_and_usage_errors_are_json() {
    let dir = tempfile::tempdir().unwrap();
    let o = kqext(&ext_args("B0(1) * Q", &["--no-cache"]), dir.path());
    assert_eq!(o.status.code(), Some(2));
    let e = error_json(&o);
    assert_eq!(e["error"], "parse");
    assert!(e["message"].as_str().unwrap().contains("position 8"));
    let o = kqext(&["ext", "--module", "M2", "--range", "s=0..1", "f=0..1"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_json(&o)["error"], "usage");
    let o = kqext(&["ext", "--module", "M2", "--range", "s=0..1", "f=0..1", "x=0..1"], dir.path());
    assert_eq!(error_json(&o)["error"], "range");
    let mut args = vec!["bockstein", "--base", "C", "--module", "M2"];
    args.extend(SMALL);
    assert_eq!(error_json(&kqext(&args, dir.path()))["error"], "base");
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("v.json");
    let o = kqext(&["verify", "hopf-axioms", "--json", json.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("[PASS]  1 hopf-axioms"));
    let v: Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 1);
    assert_eq!(kqext(&["verify", "brown-gitler"], dir.path()).status.code(), Some(0));
    let o = kqext(&["verify", "nope"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_json(&o)["error"], "suite");
}

#[test]
fn compare_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let (r, c) = (dir.path().join("r.json"), dir.path().join("c.json"));
    let mut a = ext_args("M2", &["--no-cache", "--json", r.to_str().unwrap()]);
    assert!(kqext(&a, dir.path()).status.success());
    a = ext_args("M2", &["--no-cache", "--base", "C", "--json", c.to_str().unwrap()]);
    assert!(kqext(&a, dir.path()).status.success());
    let same = kqext(&["compare", r.to_str().unwrap(), r.to_str().unwrap()], dir.path());
    assert_eq!(same.status.code(), Some(0));
    assert!(stdout(&same).starts_with("no differences"));
    let diff = kqext(&["compare", r.to_str().unwrap(), c.to_str().unwrap(), "--ops", "h0,h1"], dir.path());
    assert_eq!(diff.status.code(), Some(1));
    let missing = kqext(&["compare", r.to_str().unwrap(), "/nonexistent.json"], dir.path());
    assert_eq!(error_json(&missing)["error"], "io");
}

#[test]
fn chart_rendering() {
    let dir = tempfile::tempdir().unwrap();
    let r = dir.path().join("r.json");
    let args = ext_args("B0(1)", &["--no-cache", "--json", r.to_str().unwrap()]);
    assert!(kqext(&args, dir.path()).status.success());
    let text = stdout(&kqext(&["chart", r.to_str().unwrap()], dir.path()));
    assert!(text.lines().count() > 5);
    assert!(text.contains("  3 |"));
    let svg = dir.path().join("c.svg");
    let o = kqext(&["chart", r.to_str().unwrap(), "--svg", "--coweight", "2", "-o", svg.to_str().unwrap()], dir.path());
    assert!(o.status.success());
    let body = fs::read_to_string(&svg).unwrap();
    assert!(body.starts_with("<?xml"));
    assert!(body.contains("<svg") && body.trim_end().ends_with("</svg>"));
    assert!(body.contains("cw = 2 mod 4"));
}

#[test]
fn empty_chart_renders_axes_only() {
    let dir = tempfile::tempdir().unwrap();
    let r = dir.path().join("r.json");
    let args = ext_args("B0(1)", &["--no-cache", "--json", r.to_str().unwrap()]);
    assert!(kqext(&args, dir.path()).status.success());
    // B0(1) has nothing on the cw = 1 page
    let text = stdout(&kqext(&["chart", r.to_str().unwrap(), "--coweight", "1"], dir.path()));
    for row in text.lines().filter_map(|l| l.split_once(" |").map(|(_, cells)| cells)) {
        assert!(row.chars().all(|c| matches!(c, ' ' | '.' | '+')), "{row}");
    }
    let svg = stdout(&kqext(&["chart", r.to_str().unwrap(), "--coweight", "1", "--svg"], dir.path()));
    assert!(!svg.contains("<circle") && !svg.contains("width=\"8\""));
    assert!(svg.contains("<line"));
}

#[test]
fn aahss_and_bockstein_run() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["aahss", "--module", "B0(1)", "--no-cache"];
    args.extend(SMALL);
    let o = kqext(&args, dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pages"].as_array().unwrap().len(), 4);
    assert!(v["convergence_failures"].as_array().unwrap().is_empty());
    let mut args = vec!["bockstein", "--module", "M2", "--no-cache", "--last", "3"];
    args.extend(SMALL);
    let v: Value = serde_json::from_slice(&kqext(&args, dir.path()).stdout).unwrap();
    assert!(v["e1_failures"].as_array().unwrap().is_empty());
}
