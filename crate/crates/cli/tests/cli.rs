//! End-to-end runs of the `period-engine` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};

use period_engine::{catalog, ThetaOperator};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_period-engine"))
        .args(args)
        .env_remove("PERIOD_ENGINE_PRECISION")
        .output()
        .expect("binary runs")
}

fn run_json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn coeffs(op: &ThetaOperator) -> Value {
    let rows = op.int_coeffs().iter().map(|r| r.iter().map(|c| json!(c.to_string())).collect()).collect();
    Value::Array(rows)
}

fn as_strings(v: &Value) -> Value {
    Value::Array(
        v.as_array()
            .unwrap()
            .iter()
            .map(|row| Value::Array(row.as_array().unwrap().iter().map(|c| Value::String(c.to_string())).collect()))
            .collect(),
    )
}

#[test]
fn elliptic_yukawa() {
    let v = run_json(&["yukawa", "--op", &data("lpf.json"), "--order", "20"]);
    let flat = &v["flat"];
    assert_eq!(flat["order"], json!(20));
    assert_eq!(flat["coeffs"][0], json!("1"));
    assert!(flat["coeffs"].as_array().unwrap()[1..].iter().all(|c| c == "0"));
    let alg = &v["algebraic"];
    assert_eq!(alg["num"], json!(["1"]));
    assert_eq!(alg["den"], json!(["1", "-1"]));
    assert_eq!(alg["exponent"], json!("-1"));
}

#[test]
fn symmetric_square_matches_k3_fixture() {
    let v = run_json(&["symsq", "--construct", "--op", &data("ltri.json")]);
    let k3: Value = serde_json::from_str(&std::fs::read_to_string(data("lk3.json")).unwrap()).unwrap();
    assert_eq!(as_strings(&v["theta_coeffs"]), as_strings(&k3["theta_coeffs"]));
    let d = run_json(&["symsq", "--detect", "--op", &data("lk3.json")]);
    assert_eq!(d["is_symmetric_square"], json!(true));
    assert_eq!(as_strings(&d["witness"]["theta_coeffs"]), coeffs(&catalog::l_triangular()));
}

#[test]
fn polar_dual_of_p2() {
    let v = run_json(&["toric", "polar", "--in", &data("p2.json")]);
    let dual: Value = serde_json::from_str(&std::fs::read_to_string(data("p2_dual.json")).unwrap()).unwrap();
    let mut got: Vec<Value> = v["vertices"].as_array().unwrap().clone();
    let mut want: Vec<Value> = dual["vertices"].as_array().unwrap().clone();
    got.sort_by_key(|x| x.to_string());
    want.sort_by_key(|x| x.to_string());
    assert_eq!(got, want);
    let pts = run_json(&["toric", "points", "--in", &data("p2.json")]);
    assert_eq!(pts["count"], json!(10));
}

#[test]
fn cubic_sections_from_derived_rays() {
    let v = run_json(&["toric", "sections", "--in", &data("p2.json")]);
    assert_eq!(v["degree"], json!(3));
    let names: Vec<&str> = v["monomials"].as_array().unwrap().iter().map(|m| m["monomial"].as_str().unwrap()).collect();
    assert_eq!(names.len(), 10);
    assert!(names.contains(&"z1*z2*z3"));
}

#[test]
fn fixtures_match_catalog() {
    let pairs = [
        ("lpf.json", catalog::l_pf()),
        ("lk3.json", catalog::l_k3()),
        ("ltri.json", catalog::l_triangular()),
        ("lelliptic.json", catalog::l_elliptic()),
        ("le8.json", catalog::l_e8()),
        ("lquintic.json", catalog::l_quintic()),
    ];
    for (file, op) in pairs {
        // identity pullback echoes the parsed operator
        let v = run_json(&["pullback", "--op", &data(file), "--map", "affine:1,0"]);
        assert_eq!(as_strings(&v["theta_coeffs"]), coeffs(&op), "{file}");
        assert_eq!(v["var"], json!(op.var()), "{file}");
    }
}

#[test]
fn fricke_pullback_is_identity() {
    let v = run_json(&["pullback", "--op", &data("lpf.json"), "--map", "affine:-1,1"]);
    assert_eq!(as_strings(&v["theta_coeffs"]), coeffs(&catalog::l_pf()));
}

#[test]
fn unipotent_monodromy_at_zero() {
    let v = run_json(&["monodromy", "--op", &data("lpf.json"), "--around", "0", "--basis", "frobenius", "--precision", "30"]);
    let m = &v["matrix"];
    let re = |i: usize, j: usize| m[i][j][0].as_str().unwrap().parse::<f64>().unwrap();
    let im = |i: usize, j: usize| m[i][j][1].as_str().unwrap().parse::<f64>().unwrap();
    let want = [[1.0, 1.0], [0.0, 1.0]];
    for i in 0..2 {
        for j in 0..2 {
            assert!((re(i, j) - want[i][j]).abs() < 1e-20 && im(i, j).abs() < 1e-20);
        }
    }
    assert!(v["determinant_residual"].as_f64().unwrap() < 1e-20);
}

#[test]
fn closed_path_file() {
    let v = run_json(&["monodromy", "--op", &data("lpf.json"), "--in", &data("loop0.json")]);
    assert_eq!(v["matrix"].as_array().unwrap().len(), 2);
}

#[test]
fn schema_errors_exit_2() {
    for args in [
        vec!["yukawa", "--op", "/nonexistent.json"],
        vec!["yukawa", "--op", &data("p2.json")],
        vec!["yukawa", "--op", &data("lpf.json"), "--order", "3"],
        vec!["cayley", "--op", &data("lpf.json"), "--precision", "10"],
        vec!["pullback", "--op", &data("lpf.json"), "--map", "spiral:1"],
        vec!["no-such-command"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err: Value = serde_json::from_slice(&out.stderr).expect("json error");
        assert_eq!(err["error"]["kind"], json!("schema"), "{args:?}");
    }
}

#[test]
fn math_errors_exit_3() {
    // algebraic coupling of the triangular operator has a square root
    let out = run(&["yukawa", "--op", &data("ltri.json")]);
    assert_eq!(out.status.code(), Some(3));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], json!("math"));
    let out = run(&["symsq", "--detect", "--op", &data("lpf.json")]);
    assert_eq!(out.status.code(), Some(3));
    let out = run(&["mirror-map", "--op", &data("lpf.json"), "--gauge-shift=-2"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn precision_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_period-engine"))
        .args(["monodromy", "--op", &data("lpf.json"), "--around", "1"])
        .env("PERIOD_ENGINE_PRECISION", "8")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let args = ["mirror-map", "--op", &data("lk3.json"), "--order", "12", "--format", "tsv"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let args = ["fricke-check", "--op", &data("lpf.json"), "--precision", "20", "--alphas", "1/3"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn out_file_written() {
    let path = std::env::temp_dir().join(format!("pe-out-{}.json", std::process::id()));
    let p = path.display().to_string();
    let out = run(&["frobenius", "--op", &data("lpf.json"), "--order", "6", "--out", &p]);
    assert!(out.status.success() && out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(v["basis"].as_array().unwrap().len(), 2);
    assert_eq!(v["indicial_roots"][0]["multiplicity"], json!(2));
}

#[test]
fn identity_suite_runs_named_checks() {
    let v = run_json(&["identity-suite", "--name", "1", "--name", "12", "--name", "3-hesse"]);
    assert_eq!(v["failed"], json!([]));
    assert_eq!(v["results"].as_array().unwrap().len(), 3);
    let listed = run_json(&["identity-suite", "--list"]);
    let ids: Vec<&str> = listed.as_array().unwrap().iter().map(|x| x["id"].as_str().unwrap()).collect();
    for id in 1..=14 {
        assert!(ids.contains(&id.to_string().as_str()));
    }
    let out = run(&["identity-suite", "--name", "nope"]);
    assert_eq!(out.status.code(), Some(2));
}
