use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn locus(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_locus")).args(args).output().unwrap()
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn solve_equal_multiplicities() {
    let o = locus(&["solve", "1", "1", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    let t: Vec<f64> = v["thetas"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    for (got, want) in t.iter().zip([0.0, 2.0944, 4.1888]) {
        assert!((got - want).abs() < 1e-4);
    }
    assert_eq!(v["multiplicities"], serde_json::json!([1, 1, 1]));
    assert!(v["iterations"].is_u64() && v["potential"].is_f64() && v["gradient_inf_norm"].is_f64());
}

#[test]
fn solve_with_verify_appends_report() {
    let v = stdout_json(&locus(&["solve", "2", "1", "1", "--verify"]));
    assert_eq!(v["locus_report"]["all_locus_pass"], true);

    let o = locus(&["solve", "2", "3", "1", "1", "--verify"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["locus_report"]["first_locus_pass"], true);
    assert!(v["locus_report"]["all_locus_pass"].is_boolean());
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(locus(&["solve", "5"]).status.code(), Some(1));
    assert_eq!(locus(&["solve", "1", "0"]).status.code(), Some(1));
    assert_eq!(locus(&["solve", "1", "x"]).status.code(), Some(1));
    assert_eq!(locus(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(locus(&["verify", "/nonexistent/file.json"]).status.code(), Some(1));
}

#[test]
fn non_convergence_exits_two() {
    let o = locus(&["solve", "6", "1", "1", "2", "1", "--max-iters", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout_json(&o)["error"].is_string());
}

#[test]
fn verify_coxeter_and_perturbed() {
    let dir = tempfile::tempdir().unwrap();
    let third = std::f64::consts::TAU / 3.0;
    let cox = write(
        dir.path(),
        "cox.json",
        &format!(r#"{{"multiplicities": [1, 1, 1], "thetas": [0.0, {}, {}]}}"#, third, 2.0 * third),
    );
    let o = locus(&["verify", &cox]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["all_locus_pass"], true);

    let bent = write(
        dir.path(),
        "bent.json",
        &format!(r#"{{"multiplicities": [1, 1, 1], "thetas": [0.0, {}, {}]}}"#, third + 0.1, 2.0 * third),
    );
    let o = locus(&["verify", &bent]);
    assert_ne!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["all_locus_pass"], false);
    assert!(v["lines"][0]["residuals"][0].as_f64().unwrap().abs() > 1e-3);
}

#[test]
fn verify_rejects_bad_schema() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", r#"{"multiplicities": [1, 1], "thetas": [0.0]}"#);
    assert_eq!(locus(&["verify", &bad]).status.code(), Some(1));
    let bad = write(dir.path(), "bad2.json", "not json");
    assert_eq!(locus(&["verify", &bad]).status.code(), Some(1));
}

#[test]
fn solve_output_round_trips_through_verify() {
    let dir = tempfile::tempdir().unwrap();
    let solved = locus(&["solve", "3", "1", "2", "1"]);
    let path = dir.path().join("solved.json");
    std::fs::write(&path, &solved.stdout).unwrap();
    let o = locus(&["verify", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    // angles survive the file exactly
    let a = stdout_json(&solved);
    let text = std::fs::read_to_string(&path).unwrap();
    let b: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(a["thetas"], b["thetas"]);
}

#[test]
fn coarse_reports_symmetry() {
    let v = stdout_json(&locus(&["coarse", "3", "1", "2", "1"]));
    assert_eq!(v["coarsely_symmetric"], true);
    let v = stdout_json(&locus(&["coarse", "2", "3", "1", "1"]));
    assert_eq!(v["coarsely_symmetric"], false);
}

#[test]
fn plot_writes_deterministic_svg() {
    let dir = tempfile::tempdir().unwrap();
    let arr = write(dir.path(), "a.json", r#"{"multiplicities": [2, 1, 1], "thetas": [0.0, 2.3, 3.98]}"#);
    let out1 = dir.path().join("a.svg");
    let out2 = dir.path().join("b.svg");
    assert_eq!(locus(&["plot", &arr, out1.to_str().unwrap()]).status.code(), Some(0));
    assert_eq!(locus(&["plot", &arr, out2.to_str().unwrap()]).status.code(), Some(0));
    let a = std::fs::read(&out1).unwrap();
    assert_eq!(a, std::fs::read(&out2).unwrap());
    let svg = String::from_utf8(a).unwrap();
    assert_eq!(svg.matches("<line ").count(), 3);
    assert_eq!(locus(&["plot", &arr, out1.to_str().unwrap(), "--style", "neon"]).status.code(), Some(1));
}

#[test]
fn check_suites_pass() {
    for suite in ["gradients", "families", "uniqueness"] {
        let o = locus(&["check", suite]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(stdout_json(&o)["pass"], true);
    }
    assert_eq!(locus(&["check", "bogus"]).status.code(), Some(1));
}
