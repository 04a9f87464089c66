use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;
use veeverify_core::report::RunReport;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_veeverify"))
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_with_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = bin().args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn generate_then_check_everything() {
    let generated = run(&["generate", "--family", "A_deformed", "--rank", "2", "--m", "2"]);
    assert_eq!(generated.status.code(), Some(0));
    let checked = run_with_stdin(&["check", "--all", "--samples", "50", "-"], &generated.stdout);
    assert_eq!(checked.status.code(), Some(0), "{}", stdout(&checked));
    let text = stdout(&checked);
    assert_eq!(text.lines().filter(|l| l.starts_with('✓')).count(), 8);
    assert!(text.contains("μ = 5"));
}

#[test]
fn broken_a2_names_the_failing_class() {
    let o = run(&["check", "--checks", "main-exact", "--format", "json", &fixture("broken_a2.json")]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let witness = &v["checks"][0]["witness"];
    assert_eq!(witness["kind"], "class");
    assert_eq!(witness["plane"]["members"], serde_json::json!([0, 1, 2]));
    assert!(witness["class"].as_array().is_some_and(|c| !c.is_empty()));
}

#[test]
fn malformed_input_is_exit_two_with_record() {
    let o = run(&["check", "--all", &fixture("malformed.json")]);
    assert_eq!(o.status.code(), Some(2));
    let record: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(record["error"]["kind"], "InvalidJson");
    let missing = run(&["check", "--all", "/nonexistent/config.json"]);
    assert_eq!(missing.status.code(), Some(2));
    let collinear = run_with_stdin(
        &["check", "--all", "-"],
        br#"{"name":"c","ambient_dim":1,"radicand":{"num":"0","den":"1"},"direction":[{"num":"1","den":"1"}],
            "members":[{"coords":[[{"num":"1","den":"1"},{"num":"0","den":"1"}]],"multiplicity":{"num":"1","den":"1"}},
                       {"coords":[[{"num":"2","den":"1"},{"num":"0","den":"1"}]],"multiplicity":{"num":"1","den":"1"}}]}"#,
    );
    assert_eq!(collinear.status.code(), Some(2));
    let record: Value = serde_json::from_slice(&collinear.stderr).unwrap();
    assert_eq!(record["error"]["kind"], "CollinearPair");
}

#[test]
fn bad_arguments_are_exit_two() {
    assert_eq!(run(&["check", "--checks", "nope", "-"]).status.code(), Some(2));
    assert_eq!(run(&["check", "--family", "F4", "--rank", "4", "--all"]).status.code(), Some(2));
    assert_eq!(run(&["check", "--family", "B", "--rank", "2", "--mult", "short=1", "--all"]).status.code(), Some(2));
    assert_eq!(run(&["check", "--family", "A", "--rank", "2", "--checks", "wdvv", "--samples", "0"]).status.code(), Some(2));
    assert_eq!(run(&["generate", "--family", "C_deformed", "--rank", "1", "--m", "1", "--l", "-1/2"]).status.code(), Some(2));
}

#[test]
fn reports_round_trip_and_repeat() {
    let args = ["check", "--all", "--family", "B", "--rank", "2", "--mult", "short=1", "--mult", "long=3", "--samples", "30", "--seed", "7", "--format", "json"];
    let a = stdout(&run(&args));
    let b = stdout(&run(&args));
    assert_eq!(a, b);
    let parsed: RunReport = serde_json::from_str(&a).unwrap();
    assert_eq!(parsed.to_json() + "\n", a);
    let other_seed = stdout(&run(&[&args[..12], &["--seed", "8", "--format", "json"]].concat()));
    assert_ne!(a, other_seed);
}

#[test]
fn thread_count_does_not_change_reports() {
    let args = ["check", "--checks", "main-numeric,wdvv", "--family", "D", "--rank", "4", "--samples", "40", "--format", "json"];
    let single = bin().args(args).env("VEEVERIFY_THREADS", "1").output().unwrap();
    let many = bin().args(args).env("VEEVERIFY_THREADS", "4").output().unwrap();
    assert_eq!(single.stdout, many.stdout);
}

#[test]
fn near_tolerance_is_inconclusive() {
    let base = ["check", "--checks", "main-numeric", "--family", "A", "--rank", "2", "--samples", "20", "--format", "json"];
    let first: Value = serde_json::from_str(&stdout(&run(&base))).unwrap();
    let r = first["checks"][0]["numeric"]["max_residual"].as_f64().unwrap();
    assert!(r > 0.0);
    let tol = format!("{:e}", r / 2.0);
    let o = run(&[&base[..], &["--tol", &tol]].concat());
    assert_eq!(o.status.code(), Some(3), "{}", stdout(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["checks"][0]["verdict"], "inconclusive");
    assert!(v["checks"][0]["numeric"]["escalated_residual"].as_f64().unwrap() < r / 2.0);
}

#[test]
fn witness_matrices_on_request() {
    let args = ["check", "--checks", "wdvv,flat", "--family", "A", "--rank", "2", "--samples", "5", "--format", "json"];
    let plain: Value = serde_json::from_str(&stdout(&run(&args))).unwrap();
    assert!(plain["checks"][0]["witness"].is_null());
    let with = stdout(&run(&[&args[..], &["--emit-witness-matrices"]].concat()));
    let v: Value = serde_json::from_str(&with).unwrap();
    for check in v["checks"].as_array().unwrap() {
        let m = &check["witness"]["matrices"];
        assert!(m["P"].is_array() && m["Q"].is_array() && m["commutator"].is_array());
    }
}

#[test]
fn out_flag_writes_files() {
    let dir = std::env::temp_dir().join(format!("veeverify-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let config = dir.join("g2.json");
    let report = dir.join("report.json");
    let g = run(&["generate", "--family", "G2", "--rank", "2", "--out", config.to_str().unwrap()]);
    assert_eq!(g.status.code(), Some(0));
    assert!(g.stdout.is_empty());
    let c = run(&["check", "--checks", "main-exact,vee,scalar-M", config.to_str().unwrap(), "--format", "json", "--out", report.to_str().unwrap()]);
    assert_eq!(c.status.code(), Some(0));
    let parsed: RunReport = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(parsed.checks.len(), 3);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn version_subcommand() {
    let o = run(&["version"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("veeverify "));
}
