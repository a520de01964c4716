use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn akgeo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_akgeo")).args(args).output().unwrap()
}

fn model(name: &str) -> String {
    format!("{}/models/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap_or_else(|e| panic!("{e}: {l}")))
        .collect()
}

fn report<'a>(v: &'a [Value], name: &str) -> &'a Value {
    v.iter()
        .find(|r| r["name"] == name)
        .unwrap_or_else(|| panic!("no report {name}"))
}

fn strip_timing(v: &mut [Value]) {
    for r in v {
        if let Some(o) = r.as_object_mut() {
            o.remove("ms");
        }
    }
}

#[test]
fn flat_curvature_vanishes() {
    let out = akgeo(&["curvature", "--model", &model("flat.mdl"), "--point", "0,0,0,0"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = lines(&out);
    for name in ["riemann_zero", "ricci_zero", "scalar_zero", "weyl_zero"] {
        let r = report(&v, name);
        assert_eq!(r["status"], "pass");
        assert_eq!(r["max_residual"].as_f64(), Some(0.0));
    }
    assert_eq!(v.last().unwrap()["summary"]["total"], 4);
}

#[test]
fn ricci_flat_model_is_curved() {
    let out = akgeo(&["curvature", "--model", &model("ricci_flat.mdl"), "--samples", "4"]);
    assert_eq!(out.status.code(), Some(1));
    let v = lines(&out);
    assert_eq!(report(&v, "ricci_zero")["status"], "pass");
    assert_eq!(report(&v, "riemann_zero")["status"], "fail");
}

#[test]
fn linear_potential_fails_the_pde() {
    let out = akgeo(&["pde", "--K", "v"]);
    assert_eq!(out.status.code(), Some(1));
    let v = lines(&out);
    let r = report(&v, "przanowski_residual");
    assert_eq!(r["status"], "fail");
    assert!(r["max_residual"].as_f64().unwrap() > 1e-3);
    assert!(v.iter().filter(|r| r["status"] == "fail").count() >= 2);
}

#[test]
fn trivial_bfp_solution_passes() {
    let out = akgeo(&["bfp", "--F", "0"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn ricci_flat_model_petrov_types() {
    let out = akgeo(&["petrov", "--model", &model("ricci_flat.mdl"), "--samples", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = lines(&out);
    assert!(report(&v, "petrov_plus")["detail"].as_str().unwrap().contains("D:3"));
    assert!(report(&v, "petrov_minus")["detail"].as_str().unwrap().contains("O:3"));
}

#[test]
fn flat_structure_classifies_as_kahler() {
    let out = akgeo(&[
        "classify",
        "--model",
        &model("flat.mdl"),
        "--samples",
        "3",
        "--expect",
        "Kahler",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn wrong_expectation_exits_one() {
    let out = akgeo(&[
        "classify",
        "--model",
        &model("flat.mdl"),
        "--samples",
        "3",
        "--expect",
        "AlmostKahlerNonKahler",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(akgeo(&["verify", "nonsense"]).status.code(), Some(2));
    assert_eq!(akgeo(&["curvature"]).status.code(), Some(2));
    assert_eq!(
        akgeo(&["curvature", "--model", "/nonexistent.mdl"]).status.code(),
        Some(2)
    );
    assert_eq!(akgeo(&["pde", "--K", "v +* 2"]).status.code(), Some(2));
    assert_eq!(akgeo(&["curvature", "--point", "1,2"]).status.code(), Some(2));
}

#[test]
fn malformed_model_exits_two() {
    let dir = std::env::temp_dir().join(format!("akgeo-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.mdl");
    std::fs::write(&path, "coords: x1 x2 x3 x4\ncoframe:\n  M = dz1\n  N = dz1\n").unwrap();
    let out = akgeo(&["curvature", "--model", path.to_str().unwrap()]);
    std::fs::remove_dir_all(&dir).ok();
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn runs_are_deterministic_up_to_timing() {
    let args = [
        "curvature",
        "--model",
        &model("ricci_flat.mdl"),
        "--samples",
        "3",
        "--seed",
        "9",
    ];
    let (mut a, mut b) = (lines(&akgeo(&args)), lines(&akgeo(&args)));
    strip_timing(&mut a);
    strip_timing(&mut b);
    assert_eq!(a, b);
    assert!(a.iter().filter(|r| r.get("seed").is_some()).all(|r| r["seed"] == 9));
}

#[test]
fn json_flag_writes_the_report_file() {
    let path: PathBuf = std::env::temp_dir().join(format!("akgeo-json-{}.jsonl", std::process::id()));
    let out = akgeo(&["bfp", "--F", "0", "--json", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    let last: Value = serde_json::from_str(text.lines().last().unwrap()).unwrap();
    assert_eq!(last["status"], "pass");
    assert!(String::from_utf8_lossy(&out.stdout).contains("bfp"));
}
