//! C ABI for the densitylab core.
//!
//! Every entry point returns a [`DlStatus`]; results travel through out
//! pointers. Sets are opaque [`DlSet`] handles created from JSON or shorthand
//! text and released with [`dl_set_free`]. On failure a message is kept per
//! thread and can be read with [`dl_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use densitylab::density::{self, CountKind};
use densitylab::intset::{materialize, IntervalSet, SetSpec, Window};
use densitylab::{monad, productset, progressions, Error};

/// Status codes; the non-zero values match the command-line exit codes where
/// both exist.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DlStatus {
    Ok = 0,
    Validation = 2,
    Exhausted = 3,
    Capacity = 4,
    Domain = 5,
    Io = 6,
    NullPointer = 7,
    Panic = 8,
}

/// Opaque set handle.
pub struct DlSet {
    spec: SetSpec,
}

/// Gap witness for a product set window `[lo, hi] = [x, n x]`.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DlGapReport {
    pub n: u64,
    pub x: u64,
    pub m: u64,
    pub products: u64,
    pub lo: u64,
    pub hi: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> DlStatus {
    match e {
        Error::Validation(_) => DlStatus::Validation,
        Error::Domain(_) => DlStatus::Domain,
        Error::Capacity(_) => DlStatus::Capacity,
        Error::Io(_) => DlStatus::Io,
    }
}

/// Runs `f`, mapping errors and panics to a status and recording a message.
fn guard(f: impl FnOnce() -> Result<DlStatus, Error>) -> DlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err(e)) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            DlStatus::Panic
        }
    }
}

macro_rules! nonnull {
    ($($p:expr),+) => {
        $(if $p.is_null() {
            set_error(format!("null pointer: {}", stringify!($p)));
            return DlStatus::NullPointer;
        })+
    };
}

/// Message for the most recent failure on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn dl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn dl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a set from a JSON document (`{"kind": ..., "params": ...}`) or
/// shorthand such as `squarefree` or `intervals:2-4,65-130`.
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dl_set_parse(text: *const c_char, out: *mut *mut DlSet) -> DlStatus {
    nonnull!(text, out);
    guard(|| {
        let s = unsafe { CStr::from_ptr(text) }.to_str().map_err(|e| Error::Validation(e.to_string()))?;
        let spec: SetSpec = s.parse()?;
        unsafe { *out = Box::into_raw(Box::new(DlSet { spec })) };
        Ok(DlStatus::Ok)
    })
}

/// Builds an interval-union set from `n_pairs` `[a, b]` pairs stored flat.
///
/// # Safety
/// `pairs` must point to `2 * n_pairs` readable values; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn dl_set_from_intervals(pairs: *const u64, n_pairs: usize, out: *mut *mut DlSet) -> DlStatus {
    nonnull!(out);
    if n_pairs > 0 {
        nonnull!(pairs);
    }
    guard(|| {
        let flat = if n_pairs == 0 { &[][..] } else { unsafe { std::slice::from_raw_parts(pairs, 2 * n_pairs) } };
        let set = IntervalSet::new(flat.chunks_exact(2).map(|p| (p[0], p[1])).collect())?;
        unsafe { *out = Box::into_raw(Box::new(DlSet { spec: SetSpec::IntervalUnion(set) })) };
        Ok(DlStatus::Ok)
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `set` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn dl_set_free(set: *mut DlSet) {
    if !set.is_null() {
        drop(unsafe { Box::from_raw(set) });
    }
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn dl_set_contains(set: *const DlSet, x: u64, out: *mut bool) -> DlStatus {
    nonnull!(set, out);
    guard(|| {
        unsafe { *out = (*set).spec.contains(x) };
        Ok(DlStatus::Ok)
    })
}

/// Writes the members of `[lo, hi]` into `buf`. `*len` receives the member
/// count; if it exceeds `cap` nothing is written and the status is
/// `Capacity`.
///
/// # Safety
/// `buf` must have room for `cap` values (may be null when `cap == 0`).
#[no_mangle]
pub unsafe extern "C" fn dl_set_materialize(set: *const DlSet, lo: u64, hi: u64, buf: *mut u64, cap: usize, len: *mut usize) -> DlStatus {
    nonnull!(set, len);
    guard(|| {
        let els = materialize(unsafe { &(*set).spec }, lo, hi)?;
        unsafe { *len = els.len() };
        if els.len() > cap {
            return Err(Error::Capacity(format!("{} members do not fit in a buffer of {cap}", els.len())));
        }
        if !els.is_empty() {
            if buf.is_null() {
                return Err(Error::Validation("null output buffer".into()));
            }
            unsafe { ptr::copy_nonoverlapping(els.as_ptr(), buf, els.len()) };
        }
        Ok(DlStatus::Ok)
    })
}

/// `|A ∩ [1, n]| / n`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn dl_counting_density(set: *const DlSet, n: u64, out: *mut f64) -> DlStatus {
    nonnull!(set, out);
    guard(|| {
        let p = density::counting_profile(unsafe { &(*set).spec }, CountKind::Upper, n, &[n])?;
        unsafe { *out = p.final_value().unwrap_or(0.0) };
        Ok(DlStatus::Ok)
    })
}

/// `(sum_{x in A, x <= n} 1/x) / ln n`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn dl_log_density(set: *const DlSet, n: u64, out: *mut f64) -> DlStatus {
    nonnull!(set, out);
    guard(|| {
        let p = density::log_profile(unsafe { &(*set).spec }, n, &[n])?;
        unsafe { *out = p.final_value().unwrap_or(0.0) };
        Ok(DlStatus::Ok)
    })
}

/// Largest reciprocal sum over windows `[k, k n)` with `k n <= H + 1`.
///
/// # Safety
/// Pointers must be valid; `k_star` may be null.
#[no_mangle]
pub unsafe extern "C" fn dl_banach_window_sup(set: *const DlSet, n: u64, horizon: u64, value: *mut f64, k_star: *mut u64) -> DlStatus {
    nonnull!(set, value);
    guard(|| {
        let w = density::banach_window_sup(unsafe { &(*set).spec }, n, horizon)?;
        unsafe { write_sup(w, value, k_star) };
        Ok(DlStatus::Ok)
    })
}

unsafe fn write_sup(w: density::WindowSup, value: *mut f64, k_star: *mut u64) {
    unsafe {
        *value = w.value;
        if !k_star.is_null() {
            *k_star = w.k_star;
        }
    }
}

/// Grid minimum of the window supremum over `ln n`, for `n <= n_max`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn dl_lbd_estimate(set: *const DlSet, n_max: u64, horizon: u64, out: *mut f64) -> DlStatus {
    nonnull!(set, out);
    guard(|| {
        let e = density::lbd_estimate(unsafe { &(*set).spec }, n_max, horizon)?;
        unsafe { *out = e.value };
        Ok(DlStatus::Ok)
    })
}

/// Densest window `[k, k + n]` below the horizon, as a fraction of `n + 1`.
///
/// # Safety
/// Pointers must be valid; `k_star` may be null.
#[no_mangle]
pub unsafe extern "C" fn dl_bd_estimate(set: *const DlSet, n: u64, horizon: u64, value: *mut f64, k_star: *mut u64) -> DlStatus {
    nonnull!(set, value);
    guard(|| {
        let w = density::bd_estimate(unsafe { &(*set).spec }, n, horizon)?;
        unsafe { write_sup(w, value, k_star) };
        Ok(DlStatus::Ok)
    })
}

/// Root-weighted window supremum with exponent `m`.
///
/// # Safety
/// Pointers must be valid; `k_star` may be null.
#[no_mangle]
pub unsafe extern "C" fn dl_bdm_window_sup(set: *const DlSet, m: u32, n: u64, horizon: u64, value: *mut f64, k_star: *mut u64) -> DlStatus {
    nonnull!(set, value);
    guard(|| {
        let w = density::bdm_window_sup(unsafe { &(*set).spec }, m, n, horizon)?;
        unsafe { write_sup(w, value, k_star) };
        Ok(DlStatus::Ok)
    })
}

/// Harmonic measure of an explicit or interval set in the window
/// `[k, span k]`.
///
/// # Safety
/// Pointers must be valid; `error_bound` may be null.
#[no_mangle]
pub unsafe extern "C" fn dl_nu(set: *const DlSet, k: u64, span: u64, value: *mut f64, error_bound: *mut f64) -> DlStatus {
    nonnull!(set, value);
    guard(|| {
        let spec = unsafe { &(*set).spec };
        let intervals = match spec {
            SetSpec::Explicit(xs) => IntervalSet::from_sorted_elements(xs)?,
            other => other
                .as_intervals()
                .ok_or_else(|| Error::Validation(format!("{} sets have no interval form", other.kind_name())))?,
        };
        let r = monad::nu(&Window::new(k, span)?, &intervals)?;
        unsafe {
            *value = r.value;
            if !error_bound.is_null() {
                *error_bound = r.error_bound;
            }
        }
        Ok(DlStatus::Ok)
    })
}

/// `*certified` is true iff no `a < b <= H` in the set has `b^2 / a` in it.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn dl_gp_free_certify(set: *const DlSet, horizon: u64, certified: *mut bool) -> DlStatus {
    nonnull!(set, certified);
    guard(|| {
        let ok = progressions::gp_free_certify(unsafe { &(*set).spec }, horizon)?;
        unsafe { *certified = ok };
        Ok(DlStatus::Ok)
    })
}

/// Least `(a, r)` of an n-approximate geometric progression of length `l`.
/// Returns `Exhausted` when the search finds nothing.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn dl_find_geo(
    set: *const DlSet,
    l: u32,
    n: u64,
    min_a: u64,
    min_r: u64,
    horizon: u64,
    a: *mut u64,
    r: *mut u64,
) -> DlStatus {
    nonnull!(set, a, r);
    guard(|| match progressions::find_geo(unsafe { &(*set).spec }, l, n, min_a, min_r, horizon)? {
        Some(w) => {
            unsafe {
                *a = w.a;
                *r = w.r.unwrap_or(0);
            }
            Ok(DlStatus::Ok)
        }
        None => {
            set_error("search exhausted".into());
            Ok(DlStatus::Exhausted)
        }
    })
}

/// Minimal-gap window for `A·B` and `n`; `Exhausted` when no window holds a
/// product.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn dl_gap_witness(a: *const DlSet, b: *const DlSet, n: u64, horizon: u64, out: *mut DlGapReport) -> DlStatus {
    nonnull!(a, b, out);
    guard(|| match productset::gap_witness(unsafe { &(*a).spec }, unsafe { &(*b).spec }, n, horizon)? {
        Some(r) => {
            unsafe {
                *out = DlGapReport { n: r.n, x: r.x, m: r.m, products: r.products_examined, lo: r.window.0, hi: r.window.1 };
            }
            Ok(DlStatus::Ok)
        }
        None => {
            set_error("no window holds a product".into());
            Ok(DlStatus::Exhausted)
        }
    })
}
