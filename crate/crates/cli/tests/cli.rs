use std::io::Write;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tropsing"))
        .args(args)
        .env_remove("TROPSING_SEED")
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout));
    })
}

#[test]
fn bound_on_a_monomial_map() {
    let out = run(&["bound", "--json", r#"{"map":[{"support":[[2,0]]},{"support":[[0,3]]}]}"#]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["kushnirenko"], "6");
    assert_eq!(v["m_F"], "6");
    assert_eq!(v["equality"], true);
}

#[test]
fn bound_omits_m_f_for_general_maps() {
    let out = run(&["bound", "--json", r#"{"n":2,"map":[{"support":[[1,0],[0,1]]},{"support":[[1,0],[0,1]]}]}"#]);
    let v = stdout_json(&out);
    assert_eq!(v["kushnirenko"], "1");
    assert_eq!(v["bernstein"], "1");
    assert!(v.get("m_F").is_none());
}

#[test]
fn lct_of_the_maximal_ideal() {
    let out = run(&["lct", "--json", r#"{"n":2,"support":[[1,0],[0,1]]}"#]);
    assert_eq!(stdout_json(&out), json!({"lambda": "1/2", "lct": "2"}));
}

#[test]
fn nu_with_one_weight() {
    let out = run(&["nu", "-a", "1,1", "--json", r#"{"n":2,"support":[[2,0],[0,3]]}"#]);
    assert_eq!(stdout_json(&out), json!({"nu": "2"}));
}

#[test]
fn type_reports_certificates() {
    let out = run(&["type", "--poly", "x1^2 + x2^3", "--n", "2", "--weight", "1,2"]);
    let v = stdout_json(&out);
    assert_eq!(v["sigma"], "2");
    assert!(!v["certificates"].as_array().unwrap().is_empty());
}

#[test]
fn type_against_a_weight_file() {
    let mut psi = tempfile::NamedTempFile::new().unwrap();
    write!(psi, r#"{{"n":2,"support":[[1,0],[0,1]]}}"#).unwrap();
    let out = run(&["type", "--json", r#"{"n":2,"support":[[1,0]]}"#, "--psi", psi.path().to_str().unwrap()]);
    assert_eq!(stdout_json(&out)["sigma"], "1");

    // Not locally bounded off the origin: no vertex on either axis.
    let mut bad = tempfile::NamedTempFile::new().unwrap();
    write!(bad, r#"{{"n":2,"support":[[1,1]]}}"#).unwrap();
    let out = run(&["type", "--json", r#"{"n":2,"support":[[1,0]]}"#, "--psi", bad.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn polyhedron_prints_vertices_and_facets() {
    let out = run(&["polyhedron", "--poly", "x1^2 + x1*x2 + x2^3", "--n", "2"]);
    let v = stdout_json(&out);
    assert_eq!(v["vertices"], json!([["0", "3"], ["1", "1"], ["2", "0"]]));
    assert_eq!(v["facets"].as_array().unwrap().len(), 2);
}

#[test]
fn covol_with_verification() {
    let out = run(&["covol", "--json", r#"{"n":2,"support":[[2,0],[1,1],[0,3]]}"#, "--verify", "--samples", "200000"]);
    let v = stdout_json(&out);
    assert_eq!(v["covol"], "5/2");
    assert_eq!(v["residual_ma_mass"], "5");
    assert_eq!(v["verify"]["staircase"], "5/2");
    assert_eq!(v["verify"]["within_3_stderr"], true);
}

#[test]
fn mixed_covol_of_a_map() {
    let out = run(&["mixed-covol", "--json", r#"{"n":2,"map":[{"support":[[1,0],[0,1]]},{"support":[[2,0],[0,2]]}]}"#]);
    assert_eq!(stdout_json(&out)["mixed_covol"], "1");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["nu", "--poly", "x1 + x3", "--n", "2"]).status.code(), Some(1));
    assert_eq!(run(&["nu", "--json", r#"{"n":2,"support":[[0.5,1]]}"#]).status.code(), Some(1));
    assert_eq!(run(&["nu", "--json", "{not json"]).status.code(), Some(1));
    let out = run(&["covol", "--json", r#"{"n":2,"support":[[2,1],[1,2]]}"#]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("covolume is infinite"));
}

#[test]
fn dequantize_formats() {
    let csv = run(&["dequantize", "--poly", "x1 + x2", "--n", "2", "--format", "csv", "--t", "-1,-2"]);
    assert_eq!(csv.status.code(), Some(0));
    let text = String::from_utf8(csv.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t_1,t_2,m,sampled,exact,error"));
    assert_eq!(lines.count(), 3);

    let json_out = run(&["dequantize", "--poly", "x1^2 + 3*x2^3", "--n", "2"]);
    let v = stdout_json(&json_out);
    assert_eq!(v["pass"], true);
    assert_eq!(v["rows"].as_array().unwrap().len(), 25 * 3);
}

#[test]
fn dequantize_fails_with_exit_three() {
    // A single coarse scale cannot reach the tolerance.
    let out = run(&["dequantize", "--poly", "x1 + x2", "--n", "2", "--m-schedule", "1", "--t", "-1,-1"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stdout_json(&out)["pass"], false);
}

#[test]
fn check_passes_on_germs_and_maps() {
    let out = run(&["check", "--poly", "x1^2 + 3*x2^3 + x1*x2", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let out = run(&["check", "--json", r#"{"n":2,"map":[{"support":[[2,0]]},{"support":[[0,3]]}]}"#]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(stdout_json(&out)["pass"], true);
}

#[test]
fn output_is_deterministic_and_seed_reads_the_environment() {
    let args = ["covol", "--json", r#"{"n":3,"support":[[2,0,0],[0,3,0],[0,0,1],[1,1,1]]}"#, "--verify", "--samples", "100000"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);

    let with_flag = run(&[&args[..], &["--seed", "9"]].concat());
    let with_env = Command::new(env!("CARGO_BIN_EXE_tropsing"))
        .args(args)
        .env("TROPSING_SEED", "9")
        .output()
        .unwrap();
    assert_eq!(with_flag.stdout, with_env.stdout);
    assert_ne!(with_flag.stdout, a.stdout);
}

#[test]
fn floats_carry_twelve_significant_digits() {
    let out = run(&["covol", "--json", r#"{"n":2,"support":[[1,0],[0,1]]}"#, "--verify", "--samples", "1000"]);
    let v = stdout_json(&out);
    let mc = v["verify"]["monte_carlo"].as_str().unwrap();
    let mantissa = mc.split('e').next().unwrap().replace(['-', '.'], "");
    assert_eq!(mantissa.len(), 12, "{mc}");
}

#[test]
fn polynomial_input_file() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "x1^3 + x2^2").unwrap();
    let out = run(&["lct", "--input", f.path().to_str().unwrap(), "--n", "2"]);
    assert_eq!(stdout_json(&out), json!({"lambda": "6/5", "lct": "5/6"}));
}
