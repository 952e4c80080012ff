use std::path::PathBuf;
use std::process::{Command, Output};

fn dkatl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dkatl")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("dkatl-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn check_true_exits_zero() {
    let o = dkatl(&[
        "check",
        "--builtin",
        "M1",
        "--history",
        "q0 -(L,n,n)-> q1",
        "--formula",
        "<<g1,g2>> X win",
        "--horizon",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains(": true"));
}

#[test]
fn check_false_exits_one() {
    let o =
        dkatl(&["check", "--builtin", "M4", "--history", "q0 -(n,a)-> q1", "--formula", "<<1>> G p", "--horizon", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains(": false"));
}

#[test]
fn unparseable_formula_exits_two_with_position() {
    let o = dkatl(&["check", "--builtin", "M1", "--history", "q0", "--formula", "<<g1 X win"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("column 6"), "{err}");
    assert!(err.contains("       ^"), "{err}");
}

#[test]
fn bad_history_and_unknown_names_exit_two() {
    let o = dkatl(&["check", "--builtin", "M1", "--history", "q0 -(L,n,n)-> q2", "--formula", "win"]);
    assert_eq!(o.status.code(), Some(2));
    let o = dkatl(&["check", "--builtin", "M1", "--history", "q0", "--formula", "<<nobody>> X win"]);
    assert_eq!(o.status.code(), Some(2));
    let o = dkatl(&["check", "--builtin", "M9", "--history", "q0", "--formula", "win"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn insufficient_horizon_exits_two() {
    let o =
        dkatl(&["check", "--builtin", "M1", "--history", "q0", "--formula", "<<g1>> X <<g1>> X win", "--horizon", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("budget"));
}

#[test]
fn structured_check_is_tagged() {
    let o = dkatl(&[
        "check",
        "--builtin",
        "M3",
        "--history",
        "q0 -(n,a)-> q1",
        "--formula",
        "<<1>> p U q",
        "--horizon",
        "2",
        "--witness",
        "--stable-check",
        "--format",
        "structured",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["format"], "dkatl-check/1");
    assert_eq!(v["verdict"], true);
    assert_eq!(v["horizon_stable"], true);
    assert!(v["witness"].as_array().is_some_and(|w| !w.is_empty()));
}

#[test]
fn dumped_builtin_validates_and_checks_from_file() {
    let o = dkatl(&["builtin", "M2"]);
    assert_eq!(o.status.code(), Some(0));
    let path = scratch("m2.icgs", &stdout(&o));
    let p = path.to_str().unwrap();
    assert_eq!(dkatl(&["validate", "--model", p]).status.code(), Some(0));
    let o =
        dkatl(&["check", "--model", p, "--history", "q0 -(L,n,n)-> q1", "--formula", "<<g1>> X win", "--horizon", "1"]);
    assert_eq!(o.status.code(), Some(0));
    std::fs::remove_file(path).ok();
}

#[test]
fn invalid_model_reports_violations() {
    let text = "agents: a\nstates: s, t\nalphabet: x, y\nactions:\n  a: s = x\n  a: t = y\nindist:\n  a = {s, t}\ntransitions:\n  s * -> t\n  t * -> s\n";
    let path = scratch("incoherent.icgs", text);
    let o = dkatl(&["validate", "--model", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("coherence"), "{}", stdout(&o));
    std::fs::remove_file(path).ok();
}

#[test]
fn missing_model_file_exits_two() {
    let o = dkatl(&["validate", "--model", "/nonexistent/model.icgs"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn falsify_reports_and_lists() {
    let o = dkatl(&["falsify", "box-fixpoint-lhs", "--trials", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("M4 at q0 -(n,a)-> q1"));
    let o = dkatl(&["falsify"]);
    assert!(stdout(&o).contains("until-knowledge-converse"));
    assert_eq!(dkatl(&["falsify", "no-such-schema"]).status.code(), Some(2));
}
