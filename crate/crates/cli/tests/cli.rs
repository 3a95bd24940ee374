use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn mrel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mrel"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8")
}

fn report(out: &Output) -> Value {
    serde_json::from_str(&stdout(out)).expect("report json")
}

#[test]
fn relations_of_spine_fixture() {
    let out = mrel(&["relations", "--fixture", "2_4"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["relations"][0], "x^2 + y^2 + z^2");
}

#[test]
fn relations_of_sphere() {
    let out = mrel(&["relations", "--fixture", "S4"]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["relations"].as_array().unwrap().len(), 6);
    assert_eq!(v["variables"].as_array().unwrap().len(), 15);
    assert_eq!(v["field"], "Q");
}

#[test]
fn malformed_input_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\n  \"simplices\": [[0,1,2,3,4],").unwrap();
    let out = mrel(&["relations", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2"), "{err}");

    let out = mrel(&["relations", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    let out = mrel(&["count", "--fixture", "2_4", "--fields", "6"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn count_reports_dimension() {
    let out = mrel(&["count", "--fixture", "2_4"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["payload"]["dimension"]["dimension"], 2);
    assert_eq!(r["status"], "pass");
    assert_eq!(r["timing"], Value::Null);
}

#[test]
fn empty_system_counts_every_point() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.json");
    std::fs::write(&path, r#"{"field":"F2","variables":["x","y","z"],"relations":[]}"#).unwrap();
    let out = mrel(&["count", path.to_str().unwrap(), "--fields", "2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(report(&out)["payload"]["counts"][0]["count"], "8");
}

#[test]
fn budget_exceeded_exits_three() {
    let out = mrel(&["count", "--fixture", "S4", "--budget", "1000"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn inadmissible_move_exits_four() {
    let out = mrel(&["pachner", "--fixture", "S4", "--move", "2-4", "--locus", "1,2,3,4"]);
    assert_eq!(code(&out), 4);
    assert!(String::from_utf8_lossy(&out.stderr).contains("inadmissible"));
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn one_five_round_trip_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let s4 = "{\"dimension\":4,\"vertices\":6,\"simplices\":[[0,1,2,3,4],[0,1,2,3,5],[0,1,2,4,5],[0,1,3,4,5],[0,2,3,4,5],[1,2,3,4,5]]}\n";
    let input = write(dir.path(), "s4.json", s4);
    let once = mrel(&["pachner", &input, "--move", "1-5", "--locus", "0"]);
    assert_eq!(code(&once), 0);
    let v: Value = serde_json::from_str(&stdout(&once)).unwrap();
    assert_eq!(v["simplices"].as_array().unwrap().len(), 10);
    let once_path = write(dir.path(), "once.json", &stdout(&once));
    let back_path = dir.path().join("back.json");
    let back = mrel(&["pachner", &once_path, "--move", "5-1", "--locus", "6", "--out", back_path.to_str().unwrap()]);
    assert_eq!(code(&back), 0);
    assert_eq!(std::fs::read_to_string(back_path).unwrap(), s4);
}

#[test]
fn identity_check_move() {
    let out = mrel(&["check-move", "--fixture", "pentachoron", "--locus", "0", "--fields", "2"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["payload"]["comparison"]["verdict"]["verdict"], "CONSISTENT");
    assert_eq!(r["payload"]["comparison"]["verdict"]["k"], 0);
}

#[test]
fn thread_count_does_not_change_reports() {
    let a = stdout(&mrel(&["oracle", "pachner", "--trials", "40", "--threads", "1"]));
    let b = stdout(&mrel(&["oracle", "pachner", "--trials", "40", "--threads", "3"]));
    assert_eq!(a, b);
    let a = stdout(&mrel(&["count", "--fixture", "2_1", "--threads", "1"]));
    let b = stdout(&mrel(&["count", "--fixture", "2_1", "--threads", "4"]));
    assert_eq!(a, b);
}

#[test]
fn timing_only_when_asked() {
    let r = report(&mrel(&["oracle", "quad", "--trials", "4", "--timing"]));
    assert!(r["timing"]["elapsed_ms"].as_f64().is_some());
}

#[test]
fn oracle_unknown_suite_is_rejected() {
    assert_eq!(code(&mrel(&["oracle", "nope"])), 2);
}
