//! C ABI over `dgz-galois`.
//!
//! Curves are opaque handles. Every call returns a [`DgzStatus`]; on failure
//! [`dgz_last_error`] describes the error for the calling thread. Strings
//! returned through out-parameters are owned by the caller and released with
//! [`dgz_string_free`]. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dgz_galois::curve::Curve;
use dgz_galois::field::default_working_degree;
use dgz_galois::galois::{decide, theorem_scan, DecideConfig, ScanConfig, SearchBounds, Verdict};
use dgz_galois::report::{to_json, verify_facts, CertifyArtifact, CurveArtifact, ScanArtifact};
use dgz_galois::Error;

/// Result of every call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DgzStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    GuardExceeded = 3,
    ParseError = 4,
    ComputationFailed = 5,
    Panic = 6,
}

/// Outcome of a certificate search.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DgzVerdict {
    Positive = 0,
    Negative = 1,
    Inconclusive = 2,
}

/// Opaque curve handle.
pub struct DgzCurve {
    curve: Curve,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> DgzStatus {
    match e {
        Error::GuardExceeded { .. } | Error::FieldTooLarge { .. } => DgzStatus::GuardExceeded,
        Error::Parse(_) | Error::InvalidElement(_) => DgzStatus::ParseError,
        Error::NotPrime(_)
        | Error::NotPrimePower(_)
        | Error::NotASubfield { .. }
        | Error::NotDefinedOver { .. }
        | Error::ZeroVector
        | Error::Config(_) => DgzStatus::InvalidArgument,
        _ => DgzStatus::ComputationFailed,
    }
}

/// Runs `f`, converting errors and panics into a status and last-error text.
fn guarded(f: impl FnOnce() -> Result<(), (DgzStatus, String)>) -> DgzStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DgzStatus::Ok,
        Ok(Err((status, message))) => {
            set_last_error(message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_last_error(format!("internal panic: {message}"));
            DgzStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (DgzStatus, String) {
    (status_of(&e), e.to_string())
}

fn null_err(what: &str) -> (DgzStatus, String) {
    (DgzStatus::NullPointer, format!("{what} is null"))
}

unsafe fn curve_ref<'a>(curve: *const DgzCurve) -> Result<&'a Curve, (DgzStatus, String)> {
    // SAFETY: the caller passes a handle from `dgz_curve_new` or null.
    unsafe { curve.as_ref() }
        .map(|h| &h.curve)
        .ok_or_else(|| null_err("curve"))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), (DgzStatus, String)> {
    let c = CString::new(s).map_err(|e| (DgzStatus::ComputationFailed, e.to_string()))?;
    // SAFETY: checked non-null by the caller of this helper.
    unsafe { *out = c.into_raw() };
    Ok(())
}

/// Builds the curve over `F_q` with working degree `working_degree`
/// (0 selects the default) and stores a new handle in `out`.
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn dgz_curve_new(
    q: u64,
    working_degree: u32,
    out: *mut *mut DgzCurve,
) -> DgzStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null_err("out"));
        }
        let l = if working_degree == 0 {
            default_working_degree(q)
        } else {
            working_degree
        };
        let curve = Curve::for_q(q, l).map_err(lib_err)?;
        // SAFETY: checked non-null above.
        unsafe { *out = Box::into_raw(Box::new(DgzCurve { curve })) };
        Ok(())
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `curve` must be null or a handle from [`dgz_curve_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dgz_curve_free(curve: *mut DgzCurve) {
    if !curve.is_null() {
        // SAFETY: ownership returns from the caller.
        drop(unsafe { Box::from_raw(curve) });
    }
}

/// Degree of the defining polynomial.
///
/// # Safety
/// `curve` must be a live handle; `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn dgz_curve_degree(curve: *const DgzCurve, out: *mut u32) -> DgzStatus {
    guarded(|| {
        let c = unsafe { curve_ref(curve) }?;
        if out.is_null() {
            return Err(null_err("out"));
        }
        // SAFETY: checked non-null above.
        unsafe { *out = c.degree() };
        Ok(())
    })
}

/// Curve artifact as JSON.
///
/// # Safety
/// `curve` must be a live handle; `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn dgz_curve_to_json(
    curve: *const DgzCurve,
    out: *mut *mut c_char,
) -> DgzStatus {
    guarded(|| {
        let c = unsafe { curve_ref(curve) }?;
        if out.is_null() {
            return Err(null_err("out"));
        }
        unsafe { write_string(out, to_json(&CurveArtifact::new(c))) }
    })
}

/// Singular-locus and intersection-order checks up to extension degree
/// `ext_bound`; `pass` receives the overall result.
///
/// # Safety
/// `curve` must be a live handle; `out` and `pass` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn dgz_verify_facts(
    curve: *const DgzCurve,
    ext_bound: u32,
    out: *mut *mut c_char,
    pass: *mut bool,
) -> DgzStatus {
    guarded(|| {
        let c = unsafe { curve_ref(curve) }?;
        if out.is_null() || pass.is_null() {
            return Err(null_err("out"));
        }
        if ext_bound == 0 {
            return Err((
                DgzStatus::InvalidArgument,
                "ext_bound must be positive".into(),
            ));
        }
        let report = verify_facts(c, ext_bound).map_err(lib_err)?;
        // SAFETY: checked non-null above.
        unsafe { *pass = report.pass };
        unsafe { write_string(out, to_json(&report)) }
    })
}

/// Certificate for the point `a,b,c` with coordinates in `F_{q^subfield}`
/// (see the command-line `--point` syntax).
///
/// # Safety
/// `curve` must be a live handle, `point` a NUL-terminated string, and
/// `out` and `verdict` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn dgz_certify(
    curve: *const DgzCurve,
    point: *const c_char,
    subfield: u32,
    seed: u64,
    out: *mut *mut c_char,
    verdict: *mut DgzVerdict,
) -> DgzStatus {
    guarded(|| {
        let c = unsafe { curve_ref(curve) }?;
        if point.is_null() || out.is_null() || verdict.is_null() {
            return Err(null_err("argument"));
        }
        // SAFETY: caller guarantees a NUL-terminated string.
        let text = unsafe { CStr::from_ptr(point) }
            .to_str()
            .map_err(|e| (DgzStatus::ParseError, e.to_string()))?;
        let p = dgz_galois::cli::parse_point(c.ctx(), text, subfield).map_err(lib_err)?;
        let config = DecideConfig {
            bounds: SearchBounds {
                seed,
                ..SearchBounds::default()
            },
            ..DecideConfig::default()
        };
        let cert = decide(c, &p, &config).map_err(lib_err)?;
        let v = match cert.verdict() {
            Verdict::Positive => DgzVerdict::Positive,
            Verdict::Negative => DgzVerdict::Negative,
            Verdict::Inconclusive => DgzVerdict::Inconclusive,
        };
        // SAFETY: checked non-null above.
        unsafe { *verdict = v };
        unsafe { write_string(out, to_json(&CertifyArtifact::new(c, &cert))) }
    })
}

/// Theorem scan; `galois_count` and `pass` receive the summary.
///
/// # Safety
/// `curve` must be a live handle; the out-parameters valid for writing.
#[no_mangle]
pub unsafe extern "C" fn dgz_scan(
    curve: *const DgzCurve,
    ext_bound: u32,
    samples: u32,
    seed: u64,
    out: *mut *mut c_char,
    galois_count: *mut u32,
    pass: *mut bool,
) -> DgzStatus {
    guarded(|| {
        let c = unsafe { curve_ref(curve) }?;
        if out.is_null() || galois_count.is_null() || pass.is_null() {
            return Err(null_err("out"));
        }
        if ext_bound == 0 {
            return Err((
                DgzStatus::InvalidArgument,
                "ext_bound must be positive".into(),
            ));
        }
        let config = ScanConfig::with_ext_bound(c.ctx().working_degree(), ext_bound, samples, seed);
        let report = theorem_scan(c, &config).map_err(lib_err)?;
        let art = ScanArtifact::new(c, &report);
        // SAFETY: checked non-null above.
        unsafe {
            *galois_count = art.summary.galois_count as u32;
            *pass = art.summary.pass;
        }
        unsafe { write_string(out, to_json(&art)) }
    })
}

/// Releases a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dgz_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: ownership returns from the caller.
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Message for the most recent failure on this thread, or null. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn dgz_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
