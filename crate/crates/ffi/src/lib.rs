//! C ABI for raglab.
//!
//! Every function returns a [`RaglabStatus`]; results go through out
//! pointers. Objects are opaque handles released with their `_free`
//! function. After a non-zero status, `raglab_last_error` describes the
//! failure on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use raglab::curvetop::trace_curve;
use raglab::discriminant::{raffalli_distance, DistanceMode};
use raglab::ensembles::{sample_kostlan, RngStream};
use raglab::lab::report::to_json;
use raglab::lab::{run_experiment, Config, ExperimentReport};
use raglab::roots1::count_projective_roots;
use raglab::{Error, HomogeneousPoly};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RaglabStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Dimension = 3,
    Degenerate = 4,
    Parity = 5,
    Precision = 6,
    Singular = 7,
    NearTangency = 8,
    NonGenericDirection = 9,
    Optimization = 10,
    CommonComponent = 11,
    Unsupported = 12,
    UnknownExperiment = 13,
    InvalidParameter = 14,
    Io = 15,
    Json = 16,
    Panic = 99,
}

/// A real homogeneous polynomial of degree `d` in `n + 1` variables.
pub struct RaglabPoly(HomogeneousPoly);

/// An experiment report.
pub struct RaglabReport(ExperimentReport);

/// Selects the distance algorithm of `raglab_discriminant_distance`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RaglabDistanceMode {
    Empirical = 0,
    Certified = 1,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> RaglabStatus {
    use RaglabStatus as S;
    match e {
        Error::Dimension(_) | Error::InvalidChart { .. } | Error::Normalization { .. } => S::Dimension,
        Error::Degenerate(_) => S::Degenerate,
        Error::Parity { .. } => S::Parity,
        Error::Precision(_) => S::Precision,
        Error::Singular(_) => S::Singular,
        Error::NearTangency(_) => S::NearTangency,
        Error::NonGenericDirection(_) => S::NonGenericDirection,
        Error::Optimization(_) => S::Optimization,
        Error::CommonComponent => S::CommonComponent,
        Error::Unsupported(_) => S::Unsupported,
        Error::UnknownExperiment(_) => S::UnknownExperiment,
        Error::InvalidParameter { .. } => S::InvalidParameter,
        Error::Io { .. } => S::Io,
        Error::Json(_) => S::Json,
    }
}

enum Fail {
    Null(&'static str),
    Arg(String),
    Core(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Core(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> RaglabStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            RaglabStatus::Ok
        }
        Ok(Err(Fail::Null(what))) => {
            set_error(&format!("null pointer: {what}"));
            RaglabStatus::NullPointer
        }
        Ok(Err(Fail::Arg(msg))) => {
            set_error(&msg);
            RaglabStatus::InvalidArgument
        }
        Ok(Err(Fail::Core(e))) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic");
            RaglabStatus::Panic
        }
    }
}

unsafe fn out<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or(Fail::Null(what))
}

unsafe fn handle<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(what))
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &'static str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn string<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail::Arg(format!("{what} is not UTF-8")))
}

/// Library version; a static string.
#[no_mangle]
pub extern "C" fn raglab_version() -> *const c_char {
    concat!("raglab ", env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failure on this thread; empty after success. The
/// pointer stays valid until the next raglab call on the same thread.
#[no_mangle]
pub extern "C" fn raglab_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds a polynomial from `nterms` terms; `exponents` holds `n + 1`
/// entries per term and repeated exponents accumulate.
///
/// # Safety
/// `exponents` must point to `nterms·(n+1)` values, `coeffs` to `nterms`.
#[no_mangle]
pub unsafe extern "C" fn raglab_poly_new(
    n: usize,
    d: usize,
    exponents: *const u32,
    coeffs: *const f64,
    nterms: usize,
    result: *mut *mut RaglabPoly,
) -> RaglabStatus {
    guard(|| {
        let result = out(result, "result")?;
        let ex = slice(exponents, nterms * (n + 1), "exponents")?;
        let cs = slice(coeffs, nterms, "coeffs")?;
        let terms: Vec<(Vec<u32>, f64)> = (0..nterms)
            .map(|i| (ex[i * (n + 1)..(i + 1) * (n + 1)].to_vec(), cs[i]))
            .collect();
        let p = HomogeneousPoly::from_terms(n, d, &terms)?;
        *result = Box::into_raw(Box::new(RaglabPoly(p)));
        Ok(())
    })
}

/// A Kostlan polynomial drawn from stream `index` of `seed`.
///
/// # Safety
/// `result` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn raglab_poly_kostlan(
    n: usize,
    d: usize,
    seed: u64,
    index: u64,
    result: *mut *mut RaglabPoly,
) -> RaglabStatus {
    guard(|| {
        let result = out(result, "result")?;
        if n == 0 || n > 8 || d > 200 {
            return Err(Fail::Arg(format!("unsupported size n = {n}, d = {d}")));
        }
        let p = sample_kostlan(n, d, &mut RngStream::new(seed, index));
        *result = Box::into_raw(Box::new(RaglabPoly(p)));
        Ok(())
    })
}

/// # Safety
/// `p` must come from this library and not be used afterwards; null is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn raglab_poly_free(p: *mut RaglabPoly) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Writes `n` and `d`.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn raglab_poly_shape(p: *const RaglabPoly, n: *mut usize, d: *mut usize) -> RaglabStatus {
    guard(|| {
        let p = handle(p, "poly")?;
        *out(n, "n")? = p.0.n();
        *out(d, "d")? = p.0.d();
        Ok(())
    })
}

/// # Safety
/// `x` must point to `len` values; `len` must equal `n + 1`.
#[no_mangle]
pub unsafe extern "C" fn raglab_poly_eval(
    p: *const RaglabPoly,
    x: *const f64,
    len: usize,
    value: *mut f64,
) -> RaglabStatus {
    guard(|| {
        let p = handle(p, "poly")?;
        let x = slice(x, len, "x")?;
        if len != p.0.num_vars() {
            return Err(Error::Dimension(format!("point has {len} coordinates, expected {}", p.0.num_vars())).into());
        }
        *out(value, "value")? = p.0.eval(x);
        Ok(())
    })
}

/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn raglab_poly_bw_norm(p: *const RaglabPoly, norm: *mut f64) -> RaglabStatus {
    guard(|| {
        *out(norm, "norm")? = handle(p, "poly")?.0.bw_norm();
        Ok(())
    })
}

/// Distinct real zeros in `RP¹` of a binary form.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn raglab_count_projective_roots(p: *const RaglabPoly, count: *mut usize) -> RaglabStatus {
    guard(|| {
        *out(count, "count")? = count_projective_roots(&handle(p, "poly")?.0)?;
        Ok(())
    })
}

/// Connected components in `RP²` of the zero set of a ternary form.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn raglab_curve_components(
    p: *const RaglabPoly,
    level: usize,
    b0: *mut usize,
) -> RaglabStatus {
    guard(|| {
        *out(b0, "b0")? = trace_curve(&handle(p, "poly")?.0, level)?.b0_rp2();
        Ok(())
    })
}

/// Bombieri–Weyl distance to the discriminant. `lower_bound` receives the
/// certified lower bound in certified mode and NaN otherwise; it may be null.
///
/// # Safety
/// `p` and `distance` must be valid; `lower_bound` may be null.
#[no_mangle]
pub unsafe extern "C" fn raglab_discriminant_distance(
    p: *const RaglabPoly,
    mode: RaglabDistanceMode,
    distance: *mut f64,
    lower_bound: *mut f64,
) -> RaglabStatus {
    guard(|| {
        let p = handle(p, "poly")?;
        let distance = out(distance, "distance")?;
        let mode = match mode {
            RaglabDistanceMode::Empirical => DistanceMode::Empirical,
            RaglabDistanceMode::Certified => DistanceMode::Certified,
        };
        let r = raffalli_distance(&p.0, mode)?;
        *distance = r.value;
        if let Some(lb) = lower_bound.as_mut() {
            *lb = r.certified_lower_bound.unwrap_or(f64::NAN);
        }
        Ok(())
    })
}

/// Runs an experiment. `config_json` is a JSON object of parameters or null
/// for the defaults.
///
/// # Safety
/// `name` and a non-null `config_json` must be NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn raglab_run_experiment(
    name: *const c_char,
    config_json: *const c_char,
    result: *mut *mut RaglabReport,
) -> RaglabStatus {
    guard(|| {
        let result = out(result, "result")?;
        let name = string(name, "name")?;
        let cfg = if config_json.is_null() {
            Config::new()
        } else {
            Config::from_json_str(string(config_json, "config_json")?)?
        };
        let rep = run_experiment(name, &cfg)?;
        *result = Box::into_raw(Box::new(RaglabReport(rep)));
        Ok(())
    })
}

/// # Safety
/// `r` must come from this library and not be used afterwards; null is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn raglab_report_free(r: *mut RaglabReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Headline statistics. Any out pointer may be null.
///
/// # Safety
/// `r` must be valid.
#[no_mangle]
pub unsafe extern "C" fn raglab_report_summary(
    r: *const RaglabReport,
    mean: *mut f64,
    se: *mut f64,
    replicates: *mut usize,
    discarded: *mut usize,
) -> RaglabStatus {
    guard(|| {
        let r = &handle(r, "report")?.0;
        if let Some(m) = mean.as_mut() {
            *m = r.mean;
        }
        if let Some(s) = se.as_mut() {
            *s = r.se;
        }
        if let Some(n) = replicates.as_mut() {
            *n = r.replicates;
        }
        if let Some(k) = discarded.as_mut() {
            *k = r.discarded;
        }
        Ok(())
    })
}

/// Whether every invariant check in the report passed.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn raglab_report_checks_pass(r: *const RaglabReport, pass: *mut bool) -> RaglabStatus {
    guard(|| {
        *out(pass, "pass")? = handle(r, "report")?.0.checks_pass();
        Ok(())
    })
}

/// Serializes the report; release the string with `raglab_string_free`.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn raglab_report_to_json(
    r: *const RaglabReport,
    raw: bool,
    json: *mut *mut c_char,
) -> RaglabStatus {
    guard(|| {
        let json = out(json, "json")?;
        let s = to_json(&handle(r, "report")?.0, raw)?;
        *json = CString::new(s).map_err(|e| Fail::Arg(e.to_string()))?.into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library and not be used afterwards; null is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn raglab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

