//! End-to-end runs of the `contact-lie` binary.

use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_contact-lie")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write_tmp(name: &str, text: &str) -> String {
    let path = std::env::temp_dir().join(format!("contact-lie-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

fn bundled_text(name: &str) -> String {
    std::fs::read_to_string(format!("{}/../core/systems/{name}.json", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

#[test]
fn check_contact_reports_reeb() {
    let v = json(&["check-contact", "--system", "brockett"]);
    assert_eq!(v["contact"], true);
    assert_eq!(v["reeb"]["components"], serde_json::json!(["0", "0", "2"]));
    assert_eq!(v["volume"]["terms"][0], serde_json::json!(["dx^dy^dz", "1/2"]));
}

#[test]
fn classify3d_sl2_flags_the_strict_inequality() {
    let v = json(&["classify3d", "--algebra", "sl2"]);
    assert_eq!(v["condition"], "l1^2 + 2*l2*l3 != 0");
    assert_eq!(v["matches_table"], true);
    assert!(v["notes"][0].as_str().unwrap().contains("> 0"));
    let all = json(&["classify3d"]);
    assert_eq!(all.as_array().unwrap().len(), 9);
}

#[test]
fn closure_of_riccati_is_sl2() {
    let v = json(&["closure", "--system", "riccati"]);
    assert_eq!(v["dimension"], 3);
    let rel: Vec<&str> = v["structure"]["relations"].as_array().unwrap().iter().map(|r| r.as_str().unwrap()).collect();
    assert_eq!(rel, ["[X1, X2] = X1", "[X1, X3] = 2*X2", "[X2, X3] = X3"]);
}

#[test]
fn classify_system_verdicts() {
    assert_eq!(json(&["classify-system", "--system", "brockett"])["class"], "conservative_contact");
    let v = json(&["classify-system", "--system", "nonconservative"]);
    assert_eq!(v["class"], "contact");
    assert_eq!(v["reeb_derivatives"][2], "p");
    assert_eq!(v["no_go"]["rank"], 3);
}

#[test]
fn reduce_and_momentum() {
    assert_eq!(json(&["momentum", "--system", "quantum5d"])["components"], serde_json::json!(["x2", "-x1", "-1"]));
    let v = json(&["reduce", "--system", "quantum5d"]);
    assert_eq!(v["contact_form"]["terms"], serde_json::json!([["dx3", "x4"], ["dx5", "1"]]));
}

#[test]
fn superposition_is_bit_stable() {
    let a = run(&["superposition", "--system", "sl2-automorphic", "--seed", "7"]);
    let b = run(&["superposition", "--system", "sl2-automorphic", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["rank"]["rank"], 3);
    assert_eq!(v["integrals"].as_array().unwrap().len(), 3);
}

#[test]
fn integrate_csv_has_monitor_columns() {
    let out = run(&[
        "integrate", "--system", "schwarz-reduced", "--x0", "0.5,0.3", "--t1", "0.1", "--step", "0.01", "--format", "csv",
        "--monitor", "q^2*p/2 - q - p/2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,q,p,q^2*p/2 - q - p/2");
    assert_eq!(lines.len(), 12);
}

#[test]
fn portrait_finds_two_saddles() {
    let v = json(&["portrait", "--system", "schwarz-reduced"]);
    let kinds: Vec<&str> = v["equilibria"].as_array().unwrap().iter().map(|e| e["kind"].as_str().unwrap()).collect();
    assert_eq!(kinds, ["saddle", "saddle"]);
}

#[test]
fn verify_single_criterion() {
    let v = json(&["verify-paper", "--criterion", "3"]);
    assert_eq!(v["passed"], true);
    assert_eq!(v["criteria"][0]["id"], 3);
}

#[test]
fn exit_codes_separate_input_from_rejection() {
    assert_eq!(run(&["check-contact", "--system", "no-such-system"]).status.code(), Some(1));
    assert_eq!(run(&["bogus"]).status.code(), Some(1));
    assert_eq!(run(&["reeb", "--system", "brockett", "--format", "csv"]).status.code(), Some(1));
    assert_eq!(run(&["verify-paper", "--criterion", "12"]).status.code(), Some(1));

    let not_contact = write_tmp("nc.json", &bundled_text("brockett").replacen("\"dz\": \"1/2\", ", "", 1));
    let out = run(&["check-contact", "--system", &not_contact]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/contact_form"));

    let mislabeled = write_tmp(
        "h.json",
        &bundled_text("brockett").replacen("\"hamiltonians\": [\"y\", \"-x\", \"-1\"]", "\"hamiltonians\": [\"y\", \"x\", \"-1\"]", 1),
    );
    let out = run(&["classify-system", "--system", &mislabeled]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("X_h - X2 = (-2)*d/dy + (-2*x)*d/dz"));

    assert_eq!(run(&["ham-vf", "--system", "schwarz", "--field", "X9"]).status.code(), Some(1));
}

#[test]
fn help_exits_zero() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_passes_on_bundled_examples() {
    let out = run(&["verify-paper", "--format", "csv"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 9);
}
