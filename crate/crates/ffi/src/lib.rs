//! C interface to `simplexvol`.
//!
//! Objects are opaque heap handles released with their `*_free` function.
//! Every fallible call returns an [`SvolStatus`]; the message of the most
//! recent failure on the calling thread is available from [`svol_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use simplexvol::cli::parse_simplex;
use simplexvol::cubature::{conical_product_rule, grundmann_moller_rule, CubatureRule};
use simplexvol::functions::FunctionSpec;
use simplexvol::geometry::{simplex_volume, AnySimplex, Simplex};
use simplexvol::relaxations::{cutoff_report, integrate_function, RelaxConfig};
use simplexvol::scalar::{format_rational, Value};
use simplexvol::{Error, ErrorKind};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SvolStatus {
    Ok = 0,
    Parse = 2,
    Precondition = 3,
    Numeric = 4,
    Io = 5,
    NullPointer = 6,
    Panic = 7,
}

/// A simplex, exact when built from rational text.
pub struct SvolSimplex(AnySimplex);

/// An integrand.
pub struct SvolFunction(FunctionSpec);

/// A cubature rule on the standard simplex.
pub struct SvolRule(CubatureRule);

/// Relaxation volumes of one report.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SvolVolumes {
    pub integral: f64,
    pub perspective: f64,
    pub naive: f64,
    pub cutoff_amount: f64,
    /// Meaningful only when `ratio_defined` is nonzero.
    pub cutoff_ratio: f64,
    pub ratio_defined: i32,
    /// Sum of the error estimates of the two volumes.
    pub error: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> SvolStatus {
    match e.kind() {
        ErrorKind::Parse => SvolStatus::Parse,
        ErrorKind::Precondition => SvolStatus::Precondition,
        ErrorKind::Numeric => SvolStatus::Numeric,
        ErrorKind::Io => SvolStatus::Io,
    }
}

fn guard(f: impl FnOnce() -> Result<(), SvolStatus>) -> SvolStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SvolStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic".into());
            SvolStatus::Panic
        }
    }
}

fn fail(e: Error) -> SvolStatus {
    let s = status_of(&e);
    set_error(e.to_string());
    s
}

fn null(name: &str) -> SvolStatus {
    set_error(format!("null pointer: {name}"));
    SvolStatus::NullPointer
}

unsafe fn read_str<'a>(p: *const c_char, name: &str) -> Result<&'a str, SvolStatus> {
    if p.is_null() {
        return Err(null(name));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(Error::parse(name, "not valid UTF-8")))
}

unsafe fn get<'a, T>(p: *const T, name: &str) -> Result<&'a T, SvolStatus> {
    p.as_ref().ok_or_else(|| null(name))
}

unsafe fn put<T>(out: *mut T, value: T, name: &str) -> Result<(), SvolStatus> {
    if out.is_null() {
        return Err(null(name));
    }
    out.write(value);
    Ok(())
}

/// Message of the last failure on this thread, or NULL. Valid until the next failing call.
#[no_mangle]
pub extern "C" fn svol_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parses a shorthand such as `std:2`, `interval:1,2` or `shifted:2,1,1,1`.
///
/// # Safety
/// `text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn svol_simplex_parse(text: *const c_char, out: *mut *mut SvolSimplex) -> SvolStatus {
    guard(|| {
        let text = read_str(text, "text")?;
        let s = parse_simplex(text).map_err(fail)?;
        put(out, Box::into_raw(Box::new(SvolSimplex(s))), "out")
    })
}

/// Builds a simplex from `(d+1)·d` row-major vertex coordinates.
///
/// # Safety
/// `coords` must point to `(d+1)·d` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn svol_simplex_new(d: usize, coords: *const f64, out: *mut *mut SvolSimplex) -> SvolStatus {
    guard(|| {
        if coords.is_null() {
            return Err(null("coords"));
        }
        if d == 0 {
            return Err(fail(Error::Shape("dimension must be positive".into())));
        }
        let flat = std::slice::from_raw_parts(coords, (d + 1) * d);
        let vertices: Vec<Vec<f64>> = flat.chunks(d).map(<[f64]>::to_vec).collect();
        let s = Simplex::new(vertices).map_err(fail)?;
        put(out, Box::into_raw(Box::new(SvolSimplex(AnySimplex::Numeric(s)))), "out")
    })
}

/// # Safety
/// `s` must come from a simplex constructor or be NULL.
#[no_mangle]
pub unsafe extern "C" fn svol_simplex_free(s: *mut SvolSimplex) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Dimension, or 0 for NULL.
///
/// # Safety
/// `s` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn svol_simplex_dim(s: *const SvolSimplex) -> usize {
    s.as_ref().map_or(0, |s| s.0.dim())
}

/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn svol_simplex_volume(s: *const SvolSimplex, out: *mut f64) -> SvolStatus {
    guard(|| {
        let s = get(s, "simplex")?;
        let v = simplex_volume(&s.0.to_f64()).map_err(fail)?;
        put(out, v, "out")
    })
}

/// Parses `poly:…`, `linpow:…`, `exp:…` or `logsumexp:…`.
///
/// # Safety
/// `text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn svol_function_parse(text: *const c_char, out: *mut *mut SvolFunction) -> SvolStatus {
    guard(|| {
        let text = read_str(text, "text")?;
        let f = FunctionSpec::parse(text).map_err(fail)?;
        put(out, Box::into_raw(Box::new(SvolFunction(f))), "out")
    })
}

/// # Safety
/// `f` must come from [`svol_function_parse`] or be NULL.
#[no_mangle]
pub unsafe extern "C" fn svol_function_free(f: *mut SvolFunction) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// `∫_J f` by the best available route, with an absolute error estimate.
///
/// # Safety
/// Handles must be live; `value` and `error` must be writable.
#[no_mangle]
pub unsafe extern "C" fn svol_integrate(
    s: *const SvolSimplex,
    f: *const SvolFunction,
    value: *mut f64,
    error: *mut f64,
) -> SvolStatus {
    guard(|| {
        let (s, f) = (get(s, "simplex")?, get(f, "function")?);
        let q = integrate_function(&s.0, &f.0, &RelaxConfig::default()).map_err(fail)?;
        put(value, q.to_f64(), "value")?;
        put(error, q.error, "error")
    })
}

/// Exact `∫_J f` as a newly allocated `"p/q"` string; free it with [`svol_string_free`].
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn svol_integrate_exact(
    s: *const SvolSimplex,
    f: *const SvolFunction,
    out: *mut *mut c_char,
) -> SvolStatus {
    guard(|| {
        let (s, f) = (get(s, "simplex")?, get(f, "function")?);
        let q = integrate_function(&s.0, &f.0, &RelaxConfig::default()).map_err(fail)?;
        let Value::Exact(r) = &q.value else {
            return Err(fail(Error::NotExact(format!("{} has no exact integral", f.0))));
        };
        let c = CString::new(format_rational(r)).expect("digits only");
        put(out, c.into_raw(), "out")
    })
}

/// # Safety
/// `p` must come from this library or be NULL.
#[no_mangle]
pub unsafe extern "C" fn svol_string_free(p: *mut c_char) {
    if !p.is_null() {
        drop(CString::from_raw(p));
    }
}

/// Perspective and naive volumes; `rule_s` sets the cubature degree `2·rule_s+1` where needed.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn svol_volumes(
    s: *const SvolSimplex,
    f: *const SvolFunction,
    rule_s: usize,
    out: *mut SvolVolumes,
) -> SvolStatus {
    guard(|| {
        let (s, f) = (get(s, "simplex")?, get(f, "function")?);
        let cfg = RelaxConfig {
            s: rule_s,
            ..RelaxConfig::default()
        };
        let r = cutoff_report(&s.0, &f.0, &cfg).map_err(fail)?;
        let v = SvolVolumes {
            integral: r.integral.to_f64(),
            perspective: r.perspective_volume.to_f64(),
            naive: r.naive_volume.to_f64(),
            cutoff_amount: r.cutoff_amount.to_f64(),
            cutoff_ratio: r.ratio_f64().unwrap_or(0.0),
            ratio_defined: r.cutoff_ratio.is_some() as i32,
            error: r.perspective_volume.error + r.naive_volume.error,
        };
        put(out, v, "out")
    })
}

/// Grundmann-Möller rule of degree `2s+1` on Δ_d.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn svol_rule_gm(d: usize, s: usize, out: *mut *mut SvolRule) -> SvolStatus {
    guard(|| {
        let r = grundmann_moller_rule(d, s).map_err(fail)?;
        put(out, Box::into_raw(Box::new(SvolRule(r))), "out")
    })
}

/// Conical product rule of degree `2s+1` on Δ_d.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn svol_rule_conical(d: usize, s: usize, out: *mut *mut SvolRule) -> SvolStatus {
    guard(|| {
        let r = conical_product_rule(d, s).map_err(fail)?;
        put(out, Box::into_raw(Box::new(SvolRule(r))), "out")
    })
}

/// # Safety
/// `r` must come from a rule constructor or be NULL.
#[no_mangle]
pub unsafe extern "C" fn svol_rule_free(r: *mut SvolRule) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Number of points, or 0 for NULL.
///
/// # Safety
/// `r` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn svol_rule_len(r: *const SvolRule) -> usize {
    r.as_ref().map_or(0, |r| r.0.len())
}

/// Copies point `i` into `coords` (`d` doubles) and its weight into `weight`.
///
/// # Safety
/// `r` must be live; `coords` must hold `d` doubles; `weight` must be writable.
#[no_mangle]
pub unsafe extern "C" fn svol_rule_point(
    r: *const SvolRule,
    i: usize,
    coords: *mut f64,
    weight: *mut f64,
) -> SvolStatus {
    guard(|| {
        let r = get(r, "rule")?;
        if i >= r.0.len() {
            return Err(fail(Error::Precondition(format!("point {i} out of range"))));
        }
        if coords.is_null() {
            return Err(null("coords"));
        }
        let p = &r.0.points[i];
        std::slice::from_raw_parts_mut(coords, p.len()).copy_from_slice(p);
        put(weight, r.0.weights[i], "weight")
    })
}

/// `h_q(values)`, the complete homogeneous symmetric polynomial.
///
/// # Safety
/// `values` must point to `n` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn svol_h_complete(q: u32, values: *const f64, n: usize, out: *mut f64) -> SvolStatus {
    guard(|| {
        if values.is_null() && n > 0 {
            return Err(null("values"));
        }
        let v = if n == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(values, n)
        };
        put(out, simplexvol::relaxations::h_complete(q, v), "out")
    })
}
