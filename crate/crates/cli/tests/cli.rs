use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use capan_core::properties::Fact;
use capan_core::report::Report;

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name)
}

fn capan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_capan")).args(args).env("CAPAN_COLOR", "0").output().unwrap()
}

fn run(args: &[&str]) -> (i32, String) {
    let out = capan(args);
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn path(name: &str) -> String {
    corpus(name).to_str().unwrap().to_string()
}

#[test]
fn linearity_example_is_proved() {
    let (code, out) = run(&["check", &path("linearity.cap"), "--property", "linearity"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("1*p3 + 1*p6 + 1*p8 = 1"), "{out}");
}

#[test]
fn pingpong_is_bounded() {
    let (code, out) = run(&["check", &path("pingpong.cap"), "--property", "bounded"]);
    assert_eq!(code, 0, "{out}");
    for p in [3, 7, 9] {
        assert!(out.contains(&format!("p{p} in [0;1]")), "{out}");
    }
}

#[test]
fn flood_is_not_proved() {
    let (code, out) = run(&["check", &path("flood.cap"), "--property", "bounded"]);
    assert_eq!(code, 1);
    assert!(out.contains("p5 in [0;inf]"), "{out}");
}

#[test]
fn missing_file_is_usage_error() {
    assert_eq!(run(&["analyze", "does_not_exist.cap"]).0, 2);
}

#[test]
fn parse_error_is_usage_error() {
    let dir = std::env::temp_dir().join(format!("capan-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let f = dir.join("bad.cap");
    std::fs::write(&f, "nu a. a |> [").unwrap();
    let out = capan(&["analyze", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("syntax error"));
}

#[test]
fn unknown_flag_is_usage_error() {
    assert_eq!(run(&["check", &path("pingpong.cap"), "--property", "liveness"]).0, 2);
}

#[test]
fn iteration_limit_exits_3() {
    assert_eq!(run(&["analyze", &path("pingpong.cap"), "--max-iter", "1"]).0, 3);
}

#[test]
fn tuning_flags_are_accepted() {
    let file = path("pingpong.cap");
    let (code, out) = run(&["check", &file, "--widen-delay", "3", "--chaotic", "--property", "bounded"]);
    assert_eq!(code, 0, "{out}");
    let (code, out) = run(&["check", &file, "--widen-delay", "0", "--no-narrow", "--property", "bounded"]);
    assert!(code <= 1 && out.starts_with("bounded-resources"), "{out}");
}

#[test]
fn json_matches_text() {
    let file = path("linearity.cap");
    let (_, text) = run(&["check", &file]);
    let (_, json) = run(&["check", &file, "--format", "json"]);
    let report = Report::from_json(&json).unwrap();
    let rebuilt: String = report.properties.iter().map(|p| p.to_string()).collect();
    assert_eq!(rebuilt, text);
    report.verify_evidence().unwrap();
    assert!(report.properties[0].evidence.contains(&Fact::Equation { equation: "1*p3 + 1*p6 + 1*p8 = 1".into() }));
}

#[test]
fn output_is_deterministic() {
    let file = path("deadcode.cap");
    let a = run(&["analyze", &file, "--format", "json"]);
    let b = run(&["analyze", &file, "--format", "json"]);
    assert_eq!(a, b);
}

#[test]
fn golden_reports() {
    for name in ["behavior", "deadcode", "flood", "linearity", "pingpong", "spawn"] {
        let (_, json) = run(&["check", &path(&format!("{name}.cap")), "--format", "json"]);
        let golden = std::fs::read_to_string(corpus(&format!("{name}.expected.json"))).unwrap();
        assert_eq!(json, golden, "{name}");
    }
}

#[test]
fn audit_pingpong() {
    let (code, out) = run(&["audit", &path("pingpong.cap"), "--depth", "12"]);
    assert_eq!(code, 0);
    assert!(out.contains("passed"), "{out}");
}

#[test]
fn audit_budget_is_limit() {
    assert_eq!(run(&["audit", &path("deadcode.cap"), "--budget", "2"]).0, 3);
}

#[test]
fn simulate_prints_trace_lines() {
    let (code, out) = run(&["simulate", &path("behavior.cap"), "--depth", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("step 1: comm(4,6) -> launched {5:ε} removed {1:ε,6:ε}"), "{out}");
    assert!(out.contains("  step 2: comm(8,5)"), "{out}");
}

#[test]
fn simulate_json_tree() {
    let (_, out) = run(&["simulate", &path("pingpong.cap"), "--depth", "2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v[0]["transition"], "comm(2,9)");
    assert_eq!(v[0]["children"][0]["transition"], "comm(6,3)");
}

#[test]
fn interactive_simulation() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_capan"))
        .args(["simulate", &path("pingpong.cap"), "--interactive", "--depth", "3"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"0\n0\nq\n").unwrap();
    let out = child.wait_with_output().unwrap();
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.contains("step 1: comm(2,9)"), "{s}");
    assert!(s.contains("step 2: comm(6,3)"), "{s}");
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn no_color_when_disabled() {
    let (_, out) = run(&["check", &path("flood.cap")]);
    assert!(!out.contains('\x1b'));
}
