//! C ABI for `locus-core`.
//!
//! Arrangements cross the boundary as opaque `LocusArrangement` handles that
//! the caller releases with [`locus_arrangement_free`]. Every fallible call
//! returns a [`LocusStatus`]; on failure a description is available from
//! [`locus_last_error_message`] on the same thread. Strings returned by the
//! library are released with [`locus_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use locus_core::locus::max_relative_force;
use locus_core::{
    cm_force, cm_potential, is_coarsely_symmetric, locus_report,
    solve_equilibrium, Arrangement, Error, MultiplicityList, SolverConfig, Tolerances,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocusStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Schema = 3,
    Collision = 4,
    NoConvergence = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

/// Opaque arrangement handle.
pub struct LocusArrangement {
    inner: Arrangement,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LocusSolveInfo {
    /// Reduced-gradient infinity norm over the largest charge product.
    pub gradient_inf_norm: f64,
    pub iterations: usize,
    pub potential: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocusTolerances {
    pub first: f64,
    pub locus: f64,
    pub reflection: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LocusVerdict {
    pub first_locus_pass: bool,
    pub all_locus_pass: bool,
    pub coarsely_coxeter: bool,
    /// Largest relative residual over all lines and orders.
    pub max_relative_residual: f64,
    /// Largest relative force on the particle ensemble.
    pub max_relative_force: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn fail(status: LocusStatus, msg: impl Into<String>) -> LocusStatus {
    set_error(msg);
    status
}

fn from_error(e: Error) -> LocusStatus {
    let status = match e {
        Error::Collision { .. } | Error::Singular { .. } => LocusStatus::Collision,
        Error::NoConvergence { .. } | Error::Bracket { .. } => LocusStatus::NoConvergence,
        Error::Schema(_) => LocusStatus::Schema,
        _ => LocusStatus::InvalidArgument,
    };
    fail(status, e.to_string())
}

/// Runs `f`, turning panics into [`LocusStatus::Panic`].
fn guarded(f: impl FnOnce() -> LocusStatus) -> LocusStatus {
    std::panic::catch_unwind(std::panic::AssertUnwindSafe(f))
        .unwrap_or_else(|_| fail(LocusStatus::Panic, "internal panic"))
}

unsafe fn slice<'a, T>(p: *const T, n: usize) -> Option<&'a [T]> {
    if p.is_null() {
        None
    } else {
        Some(std::slice::from_raw_parts(p, n))
    }
}

unsafe fn handle<'a>(a: *const LocusArrangement) -> Option<&'a Arrangement> {
    a.as_ref().map(|h| &h.inner)
}

fn into_handle(a: Arrangement) -> *mut LocusArrangement {
    Box::into_raw(Box::new(LocusArrangement { inner: a }))
}

fn tolerances(tol: *const LocusTolerances) -> Tolerances {
    // SAFETY: callers pass either NULL or a valid pointer
    match unsafe { tol.as_ref() } {
        Some(t) => Tolerances { first: t.first, locus: t.locus, reflection: t.reflection },
        None => Tolerances::default(),
    }
}

fn into_c_string(s: String, out: *mut *mut c_char) -> LocusStatus {
    match CString::new(s) {
        Ok(c) => {
            // SAFETY: checked non-null by callers
            unsafe { *out = c.into_raw() };
            LocusStatus::Ok
        }
        Err(_) => fail(LocusStatus::Panic, "string contains a nul byte"),
    }
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn locus_status_string(status: LocusStatus) -> *const c_char {
    let s: &'static CStr = match status {
        LocusStatus::Ok => c"ok",
        LocusStatus::NullPointer => c"null pointer argument",
        LocusStatus::InvalidArgument => c"invalid argument",
        LocusStatus::Schema => c"malformed arrangement JSON",
        LocusStatus::Collision => c"particle collision or singular point",
        LocusStatus::NoConvergence => c"solver did not converge",
        LocusStatus::BufferTooSmall => c"output buffer too small",
        LocusStatus::Panic => c"internal error",
    };
    s.as_ptr()
}

/// Message of the last failure on this thread, or NULL. Valid until the next
/// failing call on the same thread.
#[no_mangle]
pub extern "C" fn locus_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

#[no_mangle]
pub extern "C" fn locus_default_tolerances() -> LocusTolerances {
    let t = Tolerances::default();
    LocusTolerances { first: t.first, locus: t.locus, reflection: t.reflection }
}

/// Solves for the equilibrium arrangement of `n` cyclic multiplicities.
///
/// Non-positive `grad_tol` or zero `max_iters` select the defaults. `info` may
/// be NULL.
///
/// # Safety
/// `mults` must point to `n` readable values and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn locus_solve(
    mults: *const u32,
    n: usize,
    grad_tol: f64,
    max_iters: usize,
    out: *mut *mut LocusArrangement,
    info: *mut LocusSolveInfo,
) -> LocusStatus {
    guarded(|| {
        let Some(m) = slice(mults, n) else {
            return fail(LocusStatus::NullPointer, "mults is NULL");
        };
        if out.is_null() {
            return fail(LocusStatus::NullPointer, "out is NULL");
        }
        let m = match MultiplicityList::new(m.to_vec()) {
            Ok(m) => m,
            Err(e) => return from_error(e),
        };
        let mut cfg = SolverConfig::default();
        if grad_tol > 0.0 {
            cfg.grad_tol = grad_tol;
        }
        if max_iters > 0 {
            cfg.max_iters = max_iters;
        }
        match solve_equilibrium(&m, &cfg) {
            Ok(r) => {
                if let Some(info) = info.as_mut() {
                    *info = LocusSolveInfo {
                        gradient_inf_norm: r.gradient_inf_norm,
                        iterations: r.iterations,
                        potential: r.potential_value,
                    };
                }
                *out = into_handle(r.arrangement);
                LocusStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Builds an arrangement from multiplicities and angles in `[0, 2π)`.
///
/// # Safety
/// `mults` and `thetas` must point to `n` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn locus_arrangement_new(
    mults: *const u32,
    thetas: *const f64,
    n: usize,
    out: *mut *mut LocusArrangement,
) -> LocusStatus {
    guarded(|| {
        let (Some(m), Some(t)) = (slice(mults, n), slice(thetas, n)) else {
            return fail(LocusStatus::NullPointer, "mults or thetas is NULL");
        };
        if out.is_null() {
            return fail(LocusStatus::NullPointer, "out is NULL");
        }
        let built = MultiplicityList::new(m.to_vec()).and_then(|m| Arrangement::new(m, t.to_vec()));
        match built {
            Ok(a) => {
                *out = into_handle(a);
                LocusStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Parses `{"multiplicities": [...], "thetas": [...]}`.
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn locus_arrangement_from_json(
    json: *const c_char,
    out: *mut *mut LocusArrangement,
) -> LocusStatus {
    guarded(|| {
        if json.is_null() || out.is_null() {
            return fail(LocusStatus::NullPointer, "json or out is NULL");
        }
        let Ok(text) = CStr::from_ptr(json).to_str() else {
            return fail(LocusStatus::Schema, "json is not UTF-8");
        };
        match Arrangement::from_json(text) {
            Ok(a) => {
                *out = into_handle(a);
                LocusStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Serializes the arrangement; free the string with [`locus_string_free`].
///
/// # Safety
/// `a` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn locus_arrangement_to_json(
    a: *const LocusArrangement,
    out: *mut *mut c_char,
) -> LocusStatus {
    guarded(|| {
        let Some(a) = handle(a) else {
            return fail(LocusStatus::NullPointer, "arrangement is NULL");
        };
        if out.is_null() {
            return fail(LocusStatus::NullPointer, "out is NULL");
        }
        into_c_string(a.to_json(), out)
    })
}

/// # Safety
/// `a` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn locus_arrangement_free(a: *mut LocusArrangement) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// Number of lines, or 0 for NULL.
///
/// # Safety
/// `a` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn locus_arrangement_len(a: *const LocusArrangement) -> usize {
    handle(a).map_or(0, Arrangement::len)
}

/// Copies the angles into `out[0..len]`.
///
/// # Safety
/// `a` must be a live handle and `out` must have room for `capacity` values.
#[no_mangle]
pub unsafe extern "C" fn locus_arrangement_thetas(
    a: *const LocusArrangement,
    out: *mut f64,
    capacity: usize,
) -> LocusStatus {
    let (Some(a), false) = (handle(a), out.is_null()) else {
        return fail(LocusStatus::NullPointer, "arrangement or out is NULL");
    };
    if capacity < a.len() {
        return fail(LocusStatus::BufferTooSmall, format!("need {} values", a.len()));
    }
    ptr::copy_nonoverlapping(a.thetas().as_ptr(), out, a.len());
    LocusStatus::Ok
}

/// Copies the multiplicities into `out[0..len]`.
///
/// # Safety
/// `a` must be a live handle and `out` must have room for `capacity` values.
#[no_mangle]
pub unsafe extern "C" fn locus_arrangement_multiplicities(
    a: *const LocusArrangement,
    out: *mut u32,
    capacity: usize,
) -> LocusStatus {
    let (Some(a), false) = (handle(a), out.is_null()) else {
        return fail(LocusStatus::NullPointer, "arrangement or out is NULL");
    };
    if capacity < a.len() {
        return fail(LocusStatus::BufferTooSmall, format!("need {} values", a.len()));
    }
    let m = a.multiplicities().as_slice();
    ptr::copy_nonoverlapping(m.as_ptr(), out, m.len());
    LocusStatus::Ok
}

/// # Safety
/// `a` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn locus_cm_potential(a: *const LocusArrangement, out: *mut f64) -> LocusStatus {
    guarded(|| {
        let (Some(a), false) = (handle(a), out.is_null()) else {
            return fail(LocusStatus::NullPointer, "arrangement or out is NULL");
        };
        match cm_potential(a.ensemble()) {
            Ok(v) => {
                *out = v;
                LocusStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Force on particle `i` (half of the potential's partial derivative).
///
/// # Safety
/// `a` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn locus_cm_force(
    a: *const LocusArrangement,
    i: usize,
    out: *mut f64,
) -> LocusStatus {
    guarded(|| {
        let (Some(a), false) = (handle(a), out.is_null()) else {
            return fail(LocusStatus::NullPointer, "arrangement or out is NULL");
        };
        match cm_force(a.ensemble(), i) {
            Ok(v) => {
                *out = v;
                LocusStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Residual of the `k`-th locus equation at line `i`. Either output may be NULL.
///
/// # Safety
/// `a` must be a live handle; non-NULL outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn locus_residual(
    a: *const LocusArrangement,
    i: usize,
    k: u32,
    residual: *mut f64,
    relative: *mut f64,
) -> LocusStatus {
    guarded(|| {
        let Some(a) = handle(a) else {
            return fail(LocusStatus::NullPointer, "arrangement is NULL");
        };
        match locus_core::locus_residual(a, i, k) {
            Ok(r) => {
                if let Some(p) = residual.as_mut() {
                    *p = r.residual;
                }
                if let Some(p) = relative.as_mut() {
                    *p = r.relative;
                }
                LocusStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Locus verdicts; `tol` may be NULL for the defaults.
///
/// # Safety
/// `a` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn locus_verify(
    a: *const LocusArrangement,
    tol: *const LocusTolerances,
    out: *mut LocusVerdict,
) -> LocusStatus {
    guarded(|| {
        let (Some(a), false) = (handle(a), out.is_null()) else {
            return fail(LocusStatus::NullPointer, "arrangement or out is NULL");
        };
        let report = locus_report(a, &tolerances(tol));
        let force = match max_relative_force(a) {
            Ok(f) => f,
            Err(e) => return from_error(e),
        };
        *out = LocusVerdict {
            first_locus_pass: report.first_locus_pass,
            all_locus_pass: report.all_locus_pass,
            coarsely_coxeter: report.coarsely_coxeter,
            max_relative_residual: report.max_relative_all(),
            max_relative_force: force,
        };
        LocusStatus::Ok
    })
}

/// Full report as JSON; free the string with [`locus_string_free`].
///
/// # Safety
/// `a` must be a live handle; `out` must be writable; `tol` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn locus_report_json(
    a: *const LocusArrangement,
    tol: *const LocusTolerances,
    out: *mut *mut c_char,
) -> LocusStatus {
    guarded(|| {
        let (Some(a), false) = (handle(a), out.is_null()) else {
            return fail(LocusStatus::NullPointer, "arrangement or out is NULL");
        };
        let report = locus_report(a, &tolerances(tol));
        match serde_json::to_string(&report) {
            Ok(s) => into_c_string(s, out),
            Err(e) => fail(LocusStatus::Panic, e.to_string()),
        }
    })
}

/// # Safety
/// `mults` must point to `n` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn locus_is_coarsely_symmetric(
    mults: *const u32,
    n: usize,
    out: *mut bool,
) -> LocusStatus {
    let (Some(m), false) = (slice(mults, n), out.is_null()) else {
        return fail(LocusStatus::NullPointer, "mults or out is NULL");
    };
    match MultiplicityList::new(m.to_vec()) {
        Ok(m) => {
            *out = is_coarsely_symmetric(&m);
            LocusStatus::Ok
        }
        Err(e) => from_error(e),
    }
}

/// # Safety
/// `s` must be NULL or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn locus_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
