//! C ABI over `akgeo`.
//!
//! Every entry point returns an [`AkgeoStatus`]. On failure a message is kept
//! per thread and can be read with [`akgeo_last_error`]. Strings handed out by
//! the library are owned by the caller and released with [`akgeo_string_free`].
//! Model handles are not synchronized; share one between threads only behind a lock.

use std::cell::{OnceCell, RefCell};
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use akgeo::cli::{paper_suite, parse_model_file_with, render, ModelError, ModelFile, SuiteOptions};
use akgeo::geometry::{
    curvature_bundle, petrov_classify_with, weyl_halves_from_values, CurvatureBundle, MetricField, PetrovTolerances,
    WeylHalf,
};
use akgeo::sym::{evaluate, parse_expression, Point};
use serde_json::{json, Value};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AkgeoStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Model = 4,
    Eval = 5,
    Geometry = 6,
    InvalidArgument = 7,
    Panic = 8,
}

/// Parsed model file plus its metric; curvature is built on first use.
pub struct AkgeoModel {
    model: ModelFile,
    metric: MetricField,
    overrides: Vec<(String, f64)>,
    curvature: OnceCell<CurvatureBundle>,
}

impl AkgeoModel {
    fn curvature(&self) -> &CurvatureBundle {
        self.curvature.get_or_init(|| curvature_bundle(&self.metric))
    }

    fn point(&self, coords: [f64; 4]) -> Point {
        self.model.bind(Point::new(coords), &self.overrides)
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(AkgeoStatus, String);

impl Failure {
    fn new(status: AkgeoStatus, msg: impl ToString) -> Self {
        Failure(status, msg.to_string())
    }
}

impl From<ModelError> for Failure {
    fn from(e: ModelError) -> Self {
        let status = match e {
            ModelError::Syntax { .. } | ModelError::Expression { .. } => AkgeoStatus::Parse,
            ModelError::Eval(_) => AkgeoStatus::Eval,
            _ => AkgeoStatus::Model,
        };
        Failure::new(status, e)
    }
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> AkgeoStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => AkgeoStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_owned());
            set_error(&format!("internal error: {msg}"));
            AkgeoStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::new(AkgeoStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure::new(AkgeoStatus::InvalidUtf8, e))
}

unsafe fn coords(p: *const f64) -> Result<[f64; 4], Failure> {
    if p.is_null() {
        return Err(Failure::new(AkgeoStatus::NullPointer, "null coordinates"));
    }
    let x = *p.cast::<[f64; 4]>();
    if x.iter().all(|v| v.is_finite()) {
        Ok(x)
    } else {
        Err(Failure::new(AkgeoStatus::InvalidArgument, "coordinates must be finite"))
    }
}

unsafe fn model<'a>(p: *const AkgeoModel) -> Result<&'a AkgeoModel, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure::new(AkgeoStatus::NullPointer, "null model"))
}

fn nonnull<T>(p: *mut T, what: &str) -> Result<(), Failure> {
    if p.is_null() {
        Err(Failure::new(AkgeoStatus::NullPointer, format!("null {what}")))
    } else {
        Ok(())
    }
}

fn into_c(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|e| Failure::new(AkgeoStatus::Panic, e))
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn akgeo_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn akgeo_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn akgeo_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Evaluate an expression in `x1..x4`, `z1`, `z2`, `z1b`, `z2b`, `v` at `point[4]`.
///
/// # Safety
/// `expr` must be a NUL-terminated string, `point` must hold four doubles and
/// `re`, `im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn akgeo_expr_eval(
    expr: *const c_char,
    point: *const f64,
    re: *mut f64,
    im: *mut f64,
) -> AkgeoStatus {
    guard(|| {
        nonnull(re, "re")?;
        nonnull(im, "im")?;
        let e = parse_expression(text(expr)?, &[]).map_err(|e| Failure::new(AkgeoStatus::Parse, e))?;
        let z = evaluate(&e, &Point::new(coords(point)?)).map_err(|e| Failure::new(AkgeoStatus::Eval, e))?;
        *re = z.re;
        *im = z.im;
        Ok(())
    })
}

/// Parse a model file. On success `*out` owns a handle for [`akgeo_model_free`].
///
/// # Safety
/// `source` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn akgeo_model_parse(source: *const c_char, seed: u64, out: *mut *mut AkgeoModel) -> AkgeoStatus {
    guard(|| {
        nonnull(out, "out")?;
        *out = ptr::null_mut();
        let model = parse_model_file_with(text(source)?, seed)?;
        let probe = model
            .sample(1, seed, &[])
            .map_err(|e| Failure::new(AkgeoStatus::Model, e))?
            .remove(0);
        let metric = model.metric(&probe)?;
        *out = Box::into_raw(Box::new(AkgeoModel {
            model,
            metric,
            overrides: Vec::new(),
            curvature: OnceCell::new(),
        }));
        Ok(())
    })
}

/// # Safety
/// `m` must come from [`akgeo_model_parse`] and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn akgeo_model_free(m: *mut AkgeoModel) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Override a declared parameter such as `phi`.
///
/// # Safety
/// `m` must be a live handle and `name` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn akgeo_model_set_param(m: *mut AkgeoModel, name: *const c_char, value: f64) -> AkgeoStatus {
    guard(|| {
        let m = m
            .as_mut()
            .ok_or_else(|| Failure::new(AkgeoStatus::NullPointer, "null model"))?;
        let name = text(name)?;
        if !m.model.params.iter().any(|(p, _)| p == name) {
            return Err(Failure::new(
                AkgeoStatus::InvalidArgument,
                format!("undeclared parameter `{name}`"),
            ));
        }
        m.overrides.retain(|(p, _)| p != name);
        m.overrides.push((name.to_owned(), value));
        Ok(())
    })
}

/// Metric components at `point[4]`, row-major into `out[16]`.
///
/// # Safety
/// `m` must be a live handle, `point` must hold four doubles and `out` sixteen.
#[no_mangle]
pub unsafe extern "C" fn akgeo_model_metric(m: *const AkgeoModel, point: *const f64, out: *mut f64) -> AkgeoStatus {
    guard(|| {
        let m = model(m)?;
        nonnull(out, "out")?;
        let g = m
            .metric
            .at(&m.point(coords(point)?))
            .map_err(|e| Failure::new(AkgeoStatus::Eval, e))?;
        for i in 0..4 {
            for j in 0..4 {
                *out.add(4 * i + j) = g[(i, j)];
            }
        }
        Ok(())
    })
}

/// `n` seeded points from the model domain into `out[4n]`.
///
/// # Safety
/// `m` must be a live handle and `out` must hold `4n` doubles.
#[no_mangle]
pub unsafe extern "C" fn akgeo_model_sample(m: *const AkgeoModel, n: usize, seed: u64, out: *mut f64) -> AkgeoStatus {
    guard(|| {
        let m = model(m)?;
        nonnull(out, "out")?;
        let pts = m
            .model
            .sample(n, seed, &[])
            .map_err(|e| Failure::new(AkgeoStatus::InvalidArgument, e))?;
        for (k, p) in pts.iter().enumerate() {
            for (c, x) in p.coords.iter().enumerate() {
                *out.add(4 * k + c) = *x;
            }
        }
        Ok(())
    })
}

fn half_json(w: &WeylHalf) -> Value {
    let kind = petrov_classify_with(w, PetrovTolerances::default()).map_or_else(|e| e.to_string(), |t| t.to_string());
    let eig: Vec<[f64; 2]> = w.eigenvalues().iter().map(|z| [z.re, z.im]).collect();
    json!({ "type": kind, "norm": w.norm(), "eigenvalues": eig })
}

/// Curvature summary at `point[4]` as a JSON object in `*out`.
///
/// # Safety
/// `m` must be a live handle, `point` must hold four doubles and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn akgeo_model_curvature_json(
    m: *const AkgeoModel,
    point: *const f64,
    out: *mut *mut c_char,
) -> AkgeoStatus {
    guard(|| {
        let m = model(m)?;
        nonnull(out, "out")?;
        *out = ptr::null_mut();
        let p = m.point(coords(point)?);
        let v = m.curvature().at(&p).map_err(|e| Failure::new(AkgeoStatus::Eval, e))?;
        let (wp, wm) = weyl_halves_from_values(&v, m.metric.orientation(), &p)
            .map_err(|e| Failure::new(AkgeoStatus::Geometry, e))?;
        let doc = json!({
            "point": p.coords,
            "riemann_max": v.riemann_max(),
            "ricci_max": v.ricci.amax(),
            "ricci_frame_max": v.ricci_frame_max(),
            "scalar": v.scalar,
            "weyl_max": v.weyl_max(),
            "weyl_plus": half_json(&wp),
            "weyl_minus": half_json(&wm),
        });
        *out = into_c(doc.to_string())?;
        Ok(())
    })
}

/// Run the built-in check suite. `*out` receives JSON lines ending in a summary
/// object and `*exit_status` is 0 iff every check passed.
///
/// # Safety
/// `out` and `exit_status` must be writable.
#[no_mangle]
pub unsafe extern "C" fn akgeo_verify_paper(
    seed: u64,
    samples: usize,
    out: *mut *mut c_char,
    exit_status: *mut c_int,
) -> AkgeoStatus {
    guard(|| {
        nonnull(out, "out")?;
        nonnull(exit_status, "exit_status")?;
        *out = ptr::null_mut();
        if samples == 0 {
            return Err(Failure::new(AkgeoStatus::InvalidArgument, "samples must be at least 1"));
        }
        let reports = paper_suite(SuiteOptions { seed, samples });
        *exit_status = akgeo::cli::exit_status(&reports);
        *out = into_c(render(&reports))?;
        Ok(())
    })
}
