//! C interface to `pssmp`.
//!
//! Objects are opaque handles created by `*_new`/`*_from_*` functions and
//! released with the matching `*_free`. Every call returns a [`PssmpStatus`];
//! results are written through out-pointers. After a failure the message is
//! available from [`pssmp_last_error_message`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use pssmp::error::{Error, ErrorClass};
use pssmp::occupation::OccupationEvaluator;
use pssmp::scale::{ruin_probability, ScaleFunction, ScaleMethod};
use pssmp::series::SeriesEvaluator;
use pssmp::specials::{eval_special, SpecialFnParams};
use pssmp::{LevyExponent, Preset};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PssmpStatus {
    Ok = 0,
    /// Bad parameters, constraint violations, malformed JSON.
    InvalidArgument = 1,
    /// Overflow, non-convergence and other numeric failures.
    Numeric = 2,
    NullPointer = 3,
    /// A Rust panic was caught at the boundary.
    Panic = 4,
}

pub struct PssmpExponent(LevyExponent);
pub struct PssmpSeries(SeriesEvaluator);
pub struct PssmpScale(ScaleFunction);
pub struct PssmpOccupation(OccupationEvaluator);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

enum Failure {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type FfiResult<T> = Result<T, Failure>;

fn guard<F: FnOnce() -> FfiResult<()>>(f: F) -> PssmpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            PssmpStatus::Ok
        }
        Ok(Err(Failure::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            PssmpStatus::NullPointer
        }
        Ok(Err(Failure::Lib(e))) => {
            set_error(e.to_string());
            match e.class() {
                ErrorClass::Validation => PssmpStatus::InvalidArgument,
                ErrorClass::Numeric => PssmpStatus::Numeric,
            }
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            PssmpStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, what: &'static str) -> FfiResult<&'a T> {
    p.as_ref().ok_or(Failure::Null(what))
}

unsafe fn out<'a, T>(p: *mut T, what: &'static str) -> FfiResult<&'a mut T> {
    p.as_mut().ok_or(Failure::Null(what))
}

unsafe fn text<'a>(p: *const c_char, what: &'static str) -> FfiResult<&'a str> {
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::Lib(Error::InvalidArgument(format!("{what} is not valid UTF-8"))))
}

fn boxed<T>(v: T) -> *mut T {
    Box::into_raw(Box::new(v))
}

/// Message of the last failed call on this thread, or NULL. The pointer stays
/// valid until the next call into the library from this thread.
#[no_mangle]
pub extern "C" fn pssmp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn pssmp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Exponent of a named family such as `"bessel:3"` or `"sawtooth:3,1"`.
///
/// # Safety
/// `preset` must be a NUL-terminated string; `out_handle` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pssmp_exponent_from_preset(preset: *const c_char, out_handle: *mut *mut PssmpExponent) -> PssmpStatus {
    guard(|| {
        let slot = out(out_handle, "out")?;
        let p: Preset = text(preset, "preset")?.parse()?;
        *slot = boxed(PssmpExponent(p.exponent()?));
        Ok(())
    })
}

/// Exponent from its JSON descriptor.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out_handle` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pssmp_exponent_from_json(json: *const c_char, out_handle: *mut *mut PssmpExponent) -> PssmpStatus {
    guard(|| {
        let slot = out(out_handle, "out")?;
        let e: LevyExponent = serde_json::from_str(text(json, "json")?).map_err(Error::from)?;
        *slot = boxed(PssmpExponent(e));
        Ok(())
    })
}

/// `T_β` applied to `exponent`, as a new handle.
///
/// # Safety
/// `exponent` must be a live handle; `out_handle` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pssmp_exponent_tee(exponent: *const PssmpExponent, beta: f64, out_handle: *mut *mut PssmpExponent) -> PssmpStatus {
    guard(|| {
        let slot = out(out_handle, "out")?;
        let e = borrow(exponent, "exponent")?;
        *slot = boxed(PssmpExponent(e.0.tee_transform(beta)?));
        Ok(())
    })
}

/// Esscher transform of `exponent`, as a new handle.
///
/// # Safety
/// `exponent` must be a live handle; `out_handle` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pssmp_exponent_esscher(
    exponent: *const PssmpExponent,
    beta: f64,
    out_handle: *mut *mut PssmpExponent,
) -> PssmpStatus {
    guard(|| {
        let slot = out(out_handle, "out")?;
        let e = borrow(exponent, "exponent")?;
        *slot = boxed(PssmpExponent(e.0.esscher(beta)?));
        Ok(())
    })
}

/// # Safety
/// `exponent` must be a live handle; `value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pssmp_exponent_eval(exponent: *const PssmpExponent, u: f64, value: *mut f64) -> PssmpStatus {
    guard(|| {
        let slot = out(value, "value")?;
        *slot = borrow(exponent, "exponent")?.0.evaluate(u)?;
        Ok(())
    })
}

/// Largest root θ of the exponent.
///
/// # Safety
/// `exponent` must be a live handle; `theta` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pssmp_exponent_largest_root(exponent: *const PssmpExponent, theta: *mut f64) -> PssmpStatus {
    guard(|| {
        let slot = out(theta, "theta")?;
        *slot = borrow(exponent, "exponent")?.0.largest_root()?;
        Ok(())
    })
}

/// # Safety
/// `exponent` must be NULL or a handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn pssmp_exponent_free(exponent: *mut PssmpExponent) {
    if !exponent.is_null() {
        drop(Box::from_raw(exponent));
    }
}

/// Series evaluator of `I_{ψ,α}`.
///
/// # Safety
/// `exponent` must be a live handle; `out_handle` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pssmp_series_new(exponent: *const PssmpExponent, alpha: f64, out_handle: *mut *mut PssmpSeries) -> PssmpStatus {
    guard(|| {
        let slot = out(out_handle, "out")?;
        let e = borrow(exponent, "exponent")?;
        *slot = boxed(PssmpSeries(SeriesEvaluator::new(e.0.clone(), alpha)?));
        Ok(())
    })
}

/// `I(z)`, with the number of terms and the tail bound. `terms_used` and
/// `tail_bound` may be NULL.
///
/// # Safety
/// `series` must be a live handle; `value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pssmp_series_eval(
    series: *const PssmpSeries,
    z: f64,
    value: *mut f64,
    terms_used: *mut usize,
    tail_bound: *mut f64,
) -> PssmpStatus {
    guard(|| {
        let slot = out(value, "value")?;
        let v = borrow(series, "series")?.0.eval(z)?;
        *slot = v.value;
        if let Some(t) = terms_used.as_mut() {
            *t = v.terms_used;
        }
        if let Some(t) = tail_bound.as_mut() {
            *t = v.tail_bound;
        }
        Ok(())
    })
}

/// `E_x[exp(-q T_a)]` for the process with the series' exponent.
///
/// # Safety
/// `series` must be a live handle; `value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pssmp_hitting_laplace(series: *const PssmpSeries, x: f64, a: f64, q: f64, value: *mut f64) -> PssmpStatus {
    guard(|| {
        let slot = out(value, "value")?;
        *slot = borrow(series, "series")?.0.hitting_laplace(x, a, q)?;
        Ok(())
    })
}

/// # Safety
/// `series` must be NULL or a handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn pssmp_series_free(series: *mut PssmpSeries) {
    if !series.is_null() {
        drop(Box::from_raw(series));
    }
}

/// Scale function of `exponent`; closed form when available, Talbot otherwise.
///
/// # Safety
/// `exponent` must be a live handle; `out_handle` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pssmp_scale_new(exponent: *const PssmpExponent, out_handle: *mut *mut PssmpScale) -> PssmpStatus {
    guard(|| {
        let slot = out(out_handle, "out")?;
        let e = borrow(exponent, "exponent")?;
        *slot = boxed(PssmpScale(ScaleFunction::new(e.0.clone(), ScaleMethod::Auto)?));
        Ok(())
    })
}

/// # Safety
/// `scale` must be a live handle; `value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pssmp_scale_eval(scale: *const PssmpScale, x: f64, value: *mut f64) -> PssmpStatus {
    guard(|| {
        let slot = out(value, "value")?;
        *slot = borrow(scale, "scale")?.0.eval(x)?;
        Ok(())
    })
}

/// # Safety
/// `scale` must be NULL or a handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn pssmp_scale_free(scale: *mut PssmpScale) {
    if !scale.is_null() {
        drop(Box::from_raw(scale));
    }
}

/// Probability that the process with exponent `T_α ψ` started at `y >= 1`
/// never goes below 1.
///
/// # Safety
/// `exponent` must be a live handle; `value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pssmp_ruin_probability(exponent: *const PssmpExponent, alpha: f64, y: f64, value: *mut f64) -> PssmpStatus {
    guard(|| {
        let slot = out(value, "value")?;
        *slot = ruin_probability(&borrow(exponent, "exponent")?.0, alpha, y)?;
        Ok(())
    })
}

/// Occupation-time evaluator for `T_α ψ`.
///
/// # Safety
/// `exponent` must be a live handle; `out_handle` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pssmp_occupation_new(
    exponent: *const PssmpExponent,
    alpha: f64,
    out_handle: *mut *mut PssmpOccupation,
) -> PssmpStatus {
    guard(|| {
        let slot = out(out_handle, "out")?;
        let e = borrow(exponent, "exponent")?;
        *slot = boxed(PssmpOccupation(OccupationEvaluator::new(e.0.clone(), alpha)?));
        Ok(())
    })
}

/// `E_x[exp(-q ∫ 1{X_s <= a} ds)]`.
///
/// # Safety
/// `occupation` must be a live handle; `value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pssmp_occupation_laplace(
    occupation: *const PssmpOccupation,
    x: f64,
    a: f64,
    q: f64,
    value: *mut f64,
) -> PssmpStatus {
    guard(|| {
        let slot = out(value, "value")?;
        *slot = borrow(occupation, "occupation")?.0.occupation_laplace(x, a, q)?;
        Ok(())
    })
}

/// # Safety
/// `occupation` must be NULL or a handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn pssmp_occupation_free(occupation: *mut PssmpOccupation) {
    if !occupation.is_null() {
        drop(Box::from_raw(occupation));
    }
}

/// Special function described by JSON, e.g. `{"family":"bessel_i","order":0.5}`.
///
/// # Safety
/// `params_json` must be a NUL-terminated string; `value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pssmp_special_eval(params_json: *const c_char, x: f64, value: *mut f64) -> PssmpStatus {
    guard(|| {
        let slot = out(value, "value")?;
        let p: SpecialFnParams = serde_json::from_str(text(params_json, "params_json")?).map_err(Error::from)?;
        *slot = eval_special(&p, x)?;
        Ok(())
    })
}
