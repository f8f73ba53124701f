//! C ABI over `weylkit`.
//!
//! Every entry point returns an `i32` status (`WK_OK` or a negative
//! `WK_ERR_*` code) and writes results through out-pointers. Objects cross
//! the boundary as opaque handles released with the matching `*_free`.
//! Strings handed out by the library are released with [`wk_string_free`].
//! After a failure, [`wk_last_error`] describes it on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use weylkit::levi::{decompose, normalize_levi, Decomposition};
use weylkit::report::{run_suite, Suite, SuiteOptions};
use weylkit::shadow::CuspidalShadow;
use weylkit::Error;

pub const WK_OK: i32 = 0;
pub const WK_ERR_NULL: i32 = -1;
pub const WK_ERR_INVALID_ARGUMENT: i32 = -2;
pub const WK_ERR_CAP_EXCEEDED: i32 = -3;
pub const WK_ERR_PRECONDITION: i32 = -4;
pub const WK_ERR_NO_WITNESS: i32 = -5;
pub const WK_ERR_INADMISSIBLE: i32 = -6;
pub const WK_ERR_UTF8: i32 = -7;
pub const WK_ERR_JSON: i32 = -8;
pub const WK_ERR_PANIC: i32 = -9;

/// Orbit decomposition of a normalized standard Levi datum.
pub struct WkDecomposition(Decomposition);

/// A validated cuspidal shadow.
pub struct WkShadow(CuspidalShadow);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WkSuite {
    Relations = 0,
    RelWeyl = 1,
    Extend = 2,
    Shadows = 3,
    Table1 = 4,
    All = 5,
}

/// Orders of the relative Weyl groups of a shadow.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct WkRelWeylOrders {
    pub w_hat: u64,
    pub w_tilde: u64,
    pub w_lambda: u64,
    pub k_lambda: u64,
    /// whether `W(λ̃)` has index two in `W(λ)`
    pub index_two: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let msg = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn fail(code: i32, msg: &str) -> i32 {
    set_error(msg);
    code
}

fn code_of(e: &Error) -> i32 {
    match e {
        Error::InvalidArgument(_) => WK_ERR_INVALID_ARGUMENT,
        Error::CapExceeded { .. } => WK_ERR_CAP_EXCEEDED,
        Error::Precondition(_) => WK_ERR_PRECONDITION,
        Error::NoWitness(_) => WK_ERR_NO_WITNESS,
        Error::Inadmissible(_) => WK_ERR_INADMISSIBLE,
    }
}

fn from_error(e: Error) -> i32 {
    fail(code_of(&e), &e.to_string())
}

/// Runs `f`, turning panics into `WK_ERR_PANIC`.
fn guard(f: impl FnOnce() -> i32) -> i32 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(code) => code,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(WK_ERR_PANIC, &msg)
        }
    }
}

unsafe fn write_string(s: String, out: *mut *mut c_char) -> i32 {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            WK_OK
        }
        Err(_) => fail(WK_ERR_UTF8, "output contains a nul byte"),
    }
}

/// Message for the most recent failure on this thread, or an empty string.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn wk_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn wk_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn wk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Normalizes the Levi datum given by 1-based simple root indices and
/// decomposes it. `swapped` (optional) receives whether the graph
/// automorphism was applied.
///
/// # Safety
/// `delta` must point to `len` readable values (or be null with `len == 0`);
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wk_decompose(
    rank: usize,
    delta: *const usize,
    len: usize,
    out: *mut *mut WkDecomposition,
    swapped: *mut bool,
) -> i32 {
    guard(|| {
        if out.is_null() || (delta.is_null() && len > 0) {
            return fail(WK_ERR_NULL, "null pointer");
        }
        let delta = if len == 0 { &[][..] } else { std::slice::from_raw_parts(delta, len) };
        match normalize_levi(rank, delta) {
            Ok((levi, sw)) => {
                if !swapped.is_null() {
                    *swapped = sw;
                }
                *out = Box::into_raw(Box::new(WkDecomposition(decompose(&levi))));
                WK_OK
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `h` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wk_decomposition_orbit_count(h: *const WkDecomposition, out: *mut usize) -> i32 {
    if h.is_null() || out.is_null() {
        return fail(WK_ERR_NULL, "null pointer");
    }
    *out = (*h).0.orbits.len();
    WK_OK
}

/// Writes the decomposition as JSON; free with [`wk_string_free`].
///
/// # Safety
/// `h` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wk_decomposition_to_json(h: *const WkDecomposition, out: *mut *mut c_char) -> i32 {
    if h.is_null() || out.is_null() {
        return fail(WK_ERR_NULL, "null pointer");
    }
    guard(|| write_string((*h).0.to_json().to_string(), out))
}

/// # Safety
/// `h` must come from [`wk_decompose`] and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn wk_decomposition_free(h: *mut WkDecomposition) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Parses and validates a shadow. Inadmissible input fails with
/// `WK_ERR_INADMISSIBLE` and the violated axioms in [`wk_last_error`].
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wk_shadow_from_json(json: *const c_char, out: *mut *mut WkShadow) -> i32 {
    if json.is_null() || out.is_null() {
        return fail(WK_ERR_NULL, "null pointer");
    }
    guard(|| {
        let Ok(text) = CStr::from_ptr(json).to_str() else {
            return fail(WK_ERR_UTF8, "input is not UTF-8");
        };
        let value: serde_json::Value = match serde_json::from_str(text) {
            Ok(v) => v,
            Err(e) => return fail(WK_ERR_JSON, &e.to_string()),
        };
        let shadow = match CuspidalShadow::from_json(&value) {
            Ok(s) => s,
            Err(e) => return from_error(e),
        };
        if let Err(e) = shadow.check() {
            return from_error(e);
        }
        *out = Box::into_raw(Box::new(WkShadow(shadow)));
        WK_OK
    })
}

/// Writes the shadow in canonical JSON form; free with [`wk_string_free`].
///
/// # Safety
/// `h` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wk_shadow_to_json(h: *const WkShadow, out: *mut *mut c_char) -> i32 {
    if h.is_null() || out.is_null() {
        return fail(WK_ERR_NULL, "null pointer");
    }
    guard(|| write_string((*h).0.to_json().to_string(), out))
}

/// # Safety
/// `h` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wk_shadow_rel_weyl_orders(h: *const WkShadow, out: *mut WkRelWeylOrders) -> i32 {
    if h.is_null() || out.is_null() {
        return fail(WK_ERR_NULL, "null pointer");
    }
    guard(|| {
        let s = &(*h).0;
        let rw = s.rel_weyl();
        *out = WkRelWeylOrders {
            w_hat: rw.w_hat.order() as u64,
            w_tilde: rw.w_tilde.order() as u64,
            w_lambda: rw.w_lambda.order() as u64,
            k_lambda: rw.k_lambda.order() as u64,
            index_two: s.index_two(),
        };
        WK_OK
    })
}

/// # Safety
/// `h` must come from [`wk_shadow_from_json`] and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn wk_shadow_free(h: *mut WkShadow) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Runs a verification suite and writes its JSON report. `passed` receives
/// whether every record passed; a failing suite still returns `WK_OK`.
///
/// # Safety
/// `out` and `passed` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wk_verify(
    suite: WkSuite,
    rank: usize,
    seed: u64,
    out: *mut *mut c_char,
    passed: *mut bool,
) -> i32 {
    if out.is_null() || passed.is_null() {
        return fail(WK_ERR_NULL, "null pointer");
    }
    if !(1..=weylkit::levi::MAX_RANK).contains(&rank) {
        return fail(WK_ERR_INVALID_ARGUMENT, &format!("rank must lie in 1..={}", weylkit::levi::MAX_RANK));
    }
    guard(|| {
        let suite = match suite {
            WkSuite::Relations => Suite::Relations,
            WkSuite::RelWeyl => Suite::RelWeyl,
            WkSuite::Extend => Suite::Extend,
            WkSuite::Shadows => Suite::Shadows,
            WkSuite::Table1 => Suite::Table1,
            WkSuite::All => Suite::All,
        };
        let report = run_suite(suite, &SuiteOptions { rank, seed, ..SuiteOptions::default() });
        *passed = report.passed();
        write_string(report.to_json(), out)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_codes_are_distinct() {
        let errs = [
            Error::InvalidArgument(String::new()),
            Error::CapExceeded { what: String::new(), cap: 0 },
            Error::Precondition(String::new()),
            Error::NoWitness(String::new()),
            Error::Inadmissible(String::new()),
        ];
        let mut codes: Vec<i32> = errs.iter().map(code_of).collect();
        codes.sort();
        codes.dedup();
        assert_eq!(codes.len(), errs.len());
        assert!(codes.iter().all(|&c| c < 0));
    }

    #[test]
    fn panics_become_codes() {
        assert_eq!(guard(|| panic!("boom")), WK_ERR_PANIC);
        let msg = unsafe { CStr::from_ptr(wk_last_error()) };
        assert_eq!(msg.to_str().unwrap(), "boom");
    }
}
