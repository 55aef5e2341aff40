//! C ABI over `tclique`.
//!
//! Tournaments cross the boundary as opaque `TcTournament` handles. Every
//! fallible call returns a `TcStatus`; on failure a message for the calling
//! thread is available from `tc_last_error`. Strings returned to the caller
//! are owned by it and released with `tc_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use tclique::constructions::{self, Family};
use tclique::solvers::{chi_dir, omega_dir, SolverConfig};
use tclique::{bounds, canon, containment, trn, Error, Tournament};

/// Pass as `budget` for an unlimited search.
pub const TC_NO_BUDGET: u64 = u64::MAX;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    SizeLimit = 4,
    BudgetExceeded = 5,
    Io = 6,
    Internal = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TcFamily {
    A = 0,
    D = 1,
    U = 2,
}

/// Opaque tournament handle.
pub struct TcTournament(Tournament);

/// Result of an exact solve. When `exact` is 0 the budget ran out and
/// `lower <= true value <= value`.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TcSolveResult {
    pub value: usize,
    pub lower: usize,
    pub exact: bool,
    pub nodes: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> TcStatus {
    match e {
        Error::Parse { .. } | Error::Dimension { .. } | Error::Loop(_) | Error::Digon(..) | Error::MissingArc(..) => {
            TcStatus::Parse
        }
        Error::SizeLimit { .. } => TcStatus::SizeLimit,
        Error::BudgetExceeded { .. } | Error::Undecided { .. } => TcStatus::BudgetExceeded,
        Error::Io(_) => TcStatus::Io,
        Error::Consistency(_) | Error::Json(_) => TcStatus::Internal,
        _ => TcStatus::InvalidArgument,
    }
}

/// Runs `f`, converting errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), (TcStatus, String)>) -> TcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            TcStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside tclique".into());
            TcStatus::Panic
        }
    }
}

fn lib<T>(r: tclique::Result<T>) -> Result<T, (TcStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (TcStatus, String) {
    (TcStatus::NullPointer, format!("{what} is null"))
}

unsafe fn handle<'a>(p: *const TcTournament, what: &str) -> Result<&'a Tournament, (TcStatus, String)> {
    // SAFETY: caller passes a handle from this library or null.
    unsafe { p.as_ref() }.map(|h| &h.0).ok_or_else(|| null(what))
}

unsafe fn store<T>(out: *mut T, value: T, what: &str) -> Result<(), (TcStatus, String)> {
    if out.is_null() {
        return Err(null(what));
    }
    // SAFETY: non-null, caller guarantees it is writable.
    unsafe { out.write(value) };
    Ok(())
}

fn boxed(t: Tournament) -> *mut TcTournament {
    Box::into_raw(Box::new(TcTournament(t)))
}

fn c_string(s: String) -> Result<*mut c_char, (TcStatus, String)> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| (TcStatus::Internal, "string contains nul".into()))
}

fn config(budget: u64) -> SolverConfig {
    SolverConfig {
        budget: (budget != TC_NO_BUDGET).then_some(budget),
        ..SolverConfig::default()
    }
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn tc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn tc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses `.trn` text.
///
/// # Safety
/// `text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tc_tournament_parse(text: *const c_char, out: *mut *mut TcTournament) -> TcStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        // SAFETY: checked non-null; caller guarantees nul termination.
        let s = unsafe { CStr::from_ptr(text) }
            .to_str()
            .map_err(|_| (TcStatus::Parse, "text is not UTF-8".to_string()))?;
        let t = lib(trn::parse(s))?;
        unsafe { store(out, boxed(t), "out") }
    })
}

/// Builds from an `n`×`n` row-major 0/1 matrix.
///
/// # Safety
/// `cells` must point to `n * n` bytes; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tc_tournament_from_matrix(
    n: usize,
    cells: *const u8,
    out: *mut *mut TcTournament,
) -> TcStatus {
    guard(|| {
        if cells.is_null() && n > 0 {
            return Err(null("cells"));
        }
        let len = n
            .checked_mul(n)
            .ok_or_else(|| (TcStatus::InvalidArgument, "n too large".to_string()))?;
        let flat: &[u8] = if n == 0 {
            &[]
        } else {
            // SAFETY: caller guarantees `n * n` readable bytes.
            unsafe { std::slice::from_raw_parts(cells, len) }
        };
        let rows: Vec<&[u8]> = flat.chunks(n.max(1)).collect();
        let t = lib(Tournament::from_matrix(n, &rows))?;
        unsafe { store(out, boxed(t), "out") }
    })
}

/// Member `n` of a family.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tc_tournament_build(family: TcFamily, n: usize, out: *mut *mut TcTournament) -> TcStatus {
    guard(|| {
        let f = match family {
            TcFamily::A => Family::A,
            TcFamily::D => Family::D,
            TcFamily::U => Family::U,
        };
        let t = lib(constructions::build(f, n))?;
        unsafe { store(out, boxed(t), "out") }
    })
}

/// Uniformly random tournament from a seed.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tc_tournament_random(n: usize, seed: u64, out: *mut *mut TcTournament) -> TcStatus {
    guard(|| unsafe { store(out, boxed(Tournament::random(n, seed)), "out") })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `t` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tc_tournament_free(t: *mut TcTournament) {
    if !t.is_null() {
        // SAFETY: allocated by `boxed`.
        drop(unsafe { Box::from_raw(t) });
    }
}

/// Number of vertices; 0 for null.
///
/// # Safety
/// `t` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn tc_tournament_n(t: *const TcTournament) -> usize {
    unsafe { t.as_ref() }.map_or(0, |h| h.0.n())
}

/// 1 if `u -> v`, 0 if `v -> u`, -1 for null, equal or out-of-range vertices.
///
/// # Safety
/// `t` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn tc_tournament_arc(t: *const TcTournament, u: usize, v: usize) -> i32 {
    match unsafe { t.as_ref() } {
        Some(h) if u < h.0.n() && v < h.0.n() && u != v => h.0.arc(u, v) as i32,
        _ => -1,
    }
}

/// `.trn` text of the tournament.
///
/// # Safety
/// `t` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tc_tournament_format(t: *const TcTournament, out: *mut *mut c_char) -> TcStatus {
    guard(|| {
        let t = unsafe { handle(t, "tournament") }?;
        let s = c_string(trn::format(t))?;
        unsafe { store(out, s, "out") }
    })
}

/// Hex canonical code (at most 16 vertices).
///
/// # Safety
/// `t` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tc_canonical_code(t: *const TcTournament, out: *mut *mut c_char) -> TcStatus {
    guard(|| {
        let t = unsafe { handle(t, "tournament") }?;
        let s = c_string(lib(canon::code_hex(t))?)?;
        unsafe { store(out, s, "out") }
    })
}

/// Releases a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tc_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: produced by `CString::into_raw`.
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Exact clique number. If `order` is non-null and `order_len >= n`, an
/// optimal (or, when inexact, the best known) ordering is written there.
///
/// # Safety
/// `t` must be a live handle; `out` writable; `order` null or writable for
/// `order_len` entries.
#[no_mangle]
pub unsafe extern "C" fn tc_omega(
    t: *const TcTournament,
    budget: u64,
    out: *mut TcSolveResult,
    order: *mut usize,
    order_len: usize,
) -> TcStatus {
    guard(|| {
        let t = unsafe { handle(t, "tournament") }?;
        let cert = lib(omega_dir(t, &config(budget)))?;
        if !order.is_null() && order_len >= cert.order.len() {
            // SAFETY: room for `order_len` entries.
            unsafe { ptr::copy_nonoverlapping(cert.order.as_ptr(), order, cert.order.len()) };
        }
        let res = TcSolveResult {
            value: cert.value,
            lower: cert.lower,
            exact: cert.is_exact(),
            nodes: cert.nodes_expanded,
        };
        unsafe { store(out, res, "out") }
    })
}

/// Exact dichromatic number. If `colour` is non-null and `colour_len >= n`,
/// the class index of every vertex is written there.
///
/// # Safety
/// As for [`tc_omega`].
#[no_mangle]
pub unsafe extern "C" fn tc_chi(
    t: *const TcTournament,
    budget: u64,
    out: *mut TcSolveResult,
    colour: *mut usize,
    colour_len: usize,
) -> TcStatus {
    guard(|| {
        let tt = unsafe { handle(t, "tournament") }?;
        let cert = lib(chi_dir(tt, &config(budget)))?;
        if !colour.is_null() && colour_len >= tt.n() {
            for (k, class) in cert.classes.iter().enumerate() {
                for &v in class {
                    // SAFETY: v < n <= colour_len.
                    unsafe { colour.add(v).write(k) };
                }
            }
        }
        let res = TcSolveResult {
            value: cert.value,
            lower: cert.lower,
            exact: cert.is_exact(),
            nodes: cert.nodes_expanded,
        };
        unsafe { store(out, res, "out") }
    })
}

/// Induced copy of `pattern` in `host`. Sets `*found`; when found and `map`
/// has room for the pattern's vertices, writes the host vertex of each.
///
/// # Safety
/// Handles live; `found` writable; `map` null or writable for `map_len`.
#[no_mangle]
pub unsafe extern "C" fn tc_contains(
    host: *const TcTournament,
    pattern: *const TcTournament,
    found: *mut bool,
    map: *mut usize,
    map_len: usize,
) -> TcStatus {
    guard(|| {
        let h = unsafe { handle(host, "host") }?;
        let p = unsafe { handle(pattern, "pattern") }?;
        let m = containment::contains_copy(h, p);
        if let Some(m) = &m {
            if !map.is_null() && map_len >= m.len() {
                // SAFETY: room for `map_len` entries.
                unsafe { ptr::copy_nonoverlapping(m.as_ptr(), map, m.len()) };
            }
        }
        unsafe { store(found, m.is_some(), "found") }
    })
}

/// Largest `n` with `A_n` (or `D_n`) contained in the tournament.
///
/// # Safety
/// `t` live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tc_family_index(t: *const TcTournament, family: TcFamily, out: *mut usize) -> TcStatus {
    guard(|| {
        let t = unsafe { handle(t, "tournament") }?;
        let f = match family {
            TcFamily::A => Family::A,
            TcFamily::D => Family::D,
            TcFamily::U => return Err((TcStatus::InvalidArgument, "no index for U".into())),
        };
        let k = lib(containment::family_index(t, f))?;
        unsafe { store(out, k, "out") }
    })
}

/// Decimal (or symbolic, when not materializable) value of `f(t)`.
///
/// # Safety
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tc_bound_f(t: usize, out: *mut *mut c_char) -> TcStatus {
    guard(|| {
        let e = lib(bounds::f_main(t))?;
        let s = c_string(e.value().to_string())?;
        unsafe { store(out, s, "out") }
    })
}
