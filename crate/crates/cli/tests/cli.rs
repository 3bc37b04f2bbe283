use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn qspectra(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qspectra"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn without_timing(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timing");
    v
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn selftest_passes_with_schema() {
    let out = qspectra(&["selftest", "--seed", "42", "--n", "8"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = report(&out);
    assert_eq!(v["schema"], "qspectra-report-v1");
    assert_eq!(v["scenario"], "selftest");
    assert_eq!(v["status"], "pass");
    assert_eq!(v["seed"], 42);
    assert!(v["timing"]["elapsedMs"].is_number());
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.len() >= 12);
    for c in checks {
        for key in ["name", "residual", "tol", "pass"] {
            assert!(c.get(key).is_some(), "check lacks {key}");
        }
    }
}

#[test]
fn selftest_is_reproducible() {
    let a = report(&qspectra(&["selftest", "--seed", "42", "--n", "8"]));
    let b = report(&qspectra(&["selftest", "--seed", "42", "--n", "8"]));
    assert_eq!(without_timing(a), without_timing(b));
}

#[test]
fn selftest_in_another_frame() {
    let out = qspectra(&["selftest", "--n", "4", "--m", "0,0,-0.6,0.8"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn flag_errors_exit_3() {
    assert_eq!(qspectra(&["selftest", "--n", "0"]).status.code(), Some(3));
    assert_eq!(qspectra(&["selftest", "--n", "65"]).status.code(), Some(3));
    assert_eq!(qspectra(&["selftest", "--m", "0,1,1,0"]).status.code(), Some(3));
    assert_eq!(qspectra(&["selftest", "--m", "0,1"]).status.code(), Some(3));
    assert_eq!(qspectra(&["selftest", "--bogus"]).status.code(), Some(3));
    assert_eq!(qspectra(&["example", "--grid", "1"]).status.code(), Some(3));
    assert_eq!(qspectra(&[]).status.code(), Some(3));
    assert_eq!(qspectra(&["--help"]).status.code(), Some(0));
}

#[test]
fn tight_tolerance_exits_1() {
    let out = qspectra(&["selftest", "--n", "4", "--tol", "1e-300"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["status"], "fail");
}

#[test]
fn example_reproduces() {
    for grid in ["64", "2"] {
        let out = qspectra(&["example", "--grid", grid]);
        assert_eq!(out.status.code(), Some(0));
        let v = report(&out);
        let norm = v["checks"].as_array().unwrap().iter().find(|c| c["name"] == "example.norm").unwrap();
        assert!(norm["pass"].as_bool().unwrap());
    }
}

#[test]
fn decompose_files() {
    let dir = tempfile::tempdir().unwrap();
    let j = write(dir.path(), "j.json", r#"{"n": 1, "entries": [[[0, 0, 1, 0]]]}"#);
    let out = qspectra(&["decompose", &j, "--m", "0,1,0,0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    let d = &v["decomposition"];
    assert_eq!(d["schema"], "qspectra-report-v1");
    let phi = d["phi"][0].as_array().unwrap();
    assert!((phi[1].as_f64().unwrap() - 1.0).abs() < 1e-14);
    assert!((d["orbits"][0][1].as_f64().unwrap() - 1.0).abs() < 1e-14);
    assert!(d["residual"].is_number());
    assert!(d["normCheck"]["pass"].as_bool().unwrap());

    let shift = write(
        dir.path(),
        "shift.json",
        r#"{"n": 2, "entries": [[[0,0,0,0],[1,0,0,0]], [[0,0,0,0],[0,0,0,0]]]}"#,
    );
    let out = qspectra(&["decompose", &shift]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("||A*A - AA*||_F"));

    let bad = write(dir.path(), "bad.json", "{\"n\": 1, \"entries\": [[[0, 0, 1");
    assert_eq!(qspectra(&["decompose", &bad]).status.code(), Some(3));
    let missing = dir.path().join("missing.json");
    assert_eq!(qspectra(&["decompose", missing.to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn transform_files() {
    let dir = tempfile::tempdir().unwrap();
    let three = write(dir.path(), "three.json", r#"{"n": 2, "entries": [[[3,0,0,0],[0,0,0,0]], [[0,0,0,0],[3,0,0,0]]]}"#);
    let out = qspectra(&["transform", &three]);
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    let norm = v["checks"].as_array().unwrap().iter().find(|c| c["name"] == "transform.norm").unwrap();
    assert!((norm["residual"].as_f64().unwrap() - 0.9486833).abs() < 1e-7);

    let unit = write(dir.path(), "k.json", r#"{"n": 1, "entries": [[[0,0,0,1]]]}"#);
    let out = qspectra(&["transform", &unit, "--inverse"]);
    assert_eq!(out.status.code(), Some(2));
    let v = report(&out);
    assert_eq!(v["status"], "fail");
    assert!(v["error"].as_str().unwrap().contains("not invertible"));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = qspectra(&["example", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["scenario"], "example");
}
