use std::ffi::{c_char, c_int, CStr, CString};
use std::ptr;

use akgeo_ffi::*;
use serde_json::Value;

fn model_text(name: &str) -> CString {
    let path = format!("{}/../core/models/{name}", env!("CARGO_MANIFEST_DIR"));
    CString::new(std::fs::read_to_string(path).unwrap()).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(akgeo_last_error()) }
        .to_string_lossy()
        .into_owned()
}

fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_string_lossy().into_owned();
    unsafe { akgeo_string_free(s) };
    out
}

fn parse(name: &str) -> *mut AkgeoModel {
    let mut m = ptr::null_mut();
    let st = unsafe { akgeo_model_parse(model_text(name).as_ptr(), 42, &mut m) };
    assert_eq!(st, AkgeoStatus::Ok, "{}", last_error());
    m
}

#[test]
fn expression_evaluation() {
    let e = CString::new("z1*conj(z1) + i*x4").unwrap();
    let (mut re, mut im) = (0.0, 0.0);
    let st = unsafe { akgeo_expr_eval(e.as_ptr(), [1.0, 2.0, 0.0, 3.0].as_ptr(), &mut re, &mut im) };
    assert_eq!(st, AkgeoStatus::Ok, "{}", last_error());
    assert!((re - 5.0).abs() < 1e-14 && (im - 3.0).abs() < 1e-14);
    assert_eq!(last_error(), "");
}

#[test]
fn errors_are_reported_by_code_and_message() {
    let bad = CString::new("x1 +* 2").unwrap();
    let (mut re, mut im) = (0.0, 0.0);
    let p = [0.0; 4];
    assert_eq!(
        unsafe { akgeo_expr_eval(bad.as_ptr(), p.as_ptr(), &mut re, &mut im) },
        AkgeoStatus::Parse
    );
    assert!(!last_error().is_empty());
    assert_eq!(
        unsafe { akgeo_expr_eval(ptr::null(), p.as_ptr(), &mut re, &mut im) },
        AkgeoStatus::NullPointer
    );
    let log = CString::new("log(x1)").unwrap();
    assert_eq!(
        unsafe { akgeo_expr_eval(log.as_ptr(), p.as_ptr(), &mut re, &mut im) },
        AkgeoStatus::Eval
    );
    let nan = [f64::NAN, 0.0, 0.0, 0.0];
    let one = CString::new("1").unwrap();
    assert_eq!(
        unsafe { akgeo_expr_eval(one.as_ptr(), nan.as_ptr(), &mut re, &mut im) },
        AkgeoStatus::InvalidArgument
    );
}

#[test]
fn model_errors_map_to_codes() {
    let cases = [
        (
            "coords: x1 x2 x3 x4\ncoframe:\n  M = dz1\n  N = dz1\n",
            AkgeoStatus::Model,
        ),
        (
            "coords: x1 x2 x3 x4\ncoframe:\n  M = dz1 *\n  N = dz2\n",
            AkgeoStatus::Parse,
        ),
    ];
    for (text, want) in cases {
        let src = CString::new(text).unwrap();
        let mut m = ptr::dangling_mut();
        assert_eq!(unsafe { akgeo_model_parse(src.as_ptr(), 1, &mut m) }, want, "{text}");
        assert!(m.is_null());
    }
    let bytes = [0xffu8, 0xfe, 0];
    let mut m = ptr::null_mut();
    assert_eq!(
        unsafe { akgeo_model_parse(bytes.as_ptr().cast(), 1, &mut m) },
        AkgeoStatus::InvalidUtf8
    );
}

#[test]
fn flat_model_metric_and_curvature() {
    let m = parse("flat.mdl");
    let mut g = [0.0; 16];
    assert_eq!(
        unsafe { akgeo_model_metric(m, [0.1, 0.2, 0.3, 0.4].as_ptr(), g.as_mut_ptr()) },
        AkgeoStatus::Ok
    );
    for i in 0..4 {
        for j in 0..4 {
            assert_eq!(g[4 * i + j], if i == j { g[0] } else { 0.0 });
        }
    }
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { akgeo_model_curvature_json(m, [0.0; 4].as_ptr(), &mut s) },
        AkgeoStatus::Ok
    );
    let v: Value = serde_json::from_str(&take(s)).unwrap();
    assert_eq!(v["riemann_max"], 0.0);
    assert_eq!(v["weyl_plus"]["type"], "O");
    unsafe { akgeo_model_free(m) };
}

#[test]
fn ricci_flat_model_through_the_abi() {
    let m = parse("ricci_flat.mdl");
    let mut pts = [0.0; 12];
    assert_eq!(
        unsafe { akgeo_model_sample(m, 3, 5, pts.as_mut_ptr()) },
        AkgeoStatus::Ok
    );
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { akgeo_model_curvature_json(m, pts.as_ptr(), &mut s) },
        AkgeoStatus::Ok,
        "{}",
        last_error()
    );
    let v: Value = serde_json::from_str(&take(s)).unwrap();
    assert!(v["ricci_frame_max"].as_f64().unwrap() < 1e-7);
    assert!(v["riemann_max"].as_f64().unwrap() > 1e-3);
    assert_eq!(v["weyl_plus"]["type"], "D");
    assert_eq!(v["weyl_minus"]["type"], "O");

    let phi = CString::new("phi").unwrap();
    assert_eq!(unsafe { akgeo_model_set_param(m, phi.as_ptr(), 0.7) }, AkgeoStatus::Ok);
    let other = CString::new("psi").unwrap();
    assert_eq!(
        unsafe { akgeo_model_set_param(m, other.as_ptr(), 0.7) },
        AkgeoStatus::InvalidArgument
    );
    assert_eq!(
        unsafe { akgeo_model_sample(m, 0, 5, pts.as_mut_ptr()) },
        AkgeoStatus::InvalidArgument
    );
    unsafe { akgeo_model_free(m) };
}

#[test]
fn null_handles_are_rejected_and_free_accepts_null() {
    let mut g = [0.0; 16];
    assert_eq!(
        unsafe { akgeo_model_metric(ptr::null(), [0.0; 4].as_ptr(), g.as_mut_ptr()) },
        AkgeoStatus::NullPointer
    );
    unsafe {
        akgeo_model_free(ptr::null_mut());
        akgeo_string_free(ptr::null_mut());
    }
}

#[test]
fn version_matches_the_package() {
    let v = unsafe { CStr::from_ptr(akgeo_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn suite_runs_through_the_abi() {
    let mut s = ptr::null_mut();
    let mut code: c_int = -1;
    assert_eq!(unsafe { akgeo_verify_paper(42, 4, &mut s, &mut code) }, AkgeoStatus::Ok);
    let text = take(s);
    let reports: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let summary = reports.last().unwrap();
    assert_eq!(summary["summary"]["total"].as_u64(), Some(reports.len() as u64 - 1));
    let failed: Vec<&str> = reports
        .iter()
        .filter(|r| r["status"] == "fail")
        .filter_map(|r| r["name"].as_str())
        .collect();
    assert_eq!(code, i32::from(!failed.is_empty()));
    assert_eq!(
        unsafe { akgeo_verify_paper(42, 0, &mut s, &mut code) },
        AkgeoStatus::InvalidArgument
    );
}
