use std::ffi::{CStr, CString};
use std::ptr;

use tclique_ffi::*;

fn build(f: TcFamily, n: usize) -> *mut TcTournament {
    let mut t = ptr::null_mut();
    assert_eq!(unsafe { tc_tournament_build(f, n, &mut t) }, TcStatus::Ok);
    t
}

fn take(s: *mut std::ffi::c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { tc_string_free(s) };
    out
}

#[test]
fn parse_format_round_trip() {
    let text = CString::new("3\n010\n001\n100\n").unwrap();
    let mut t = ptr::null_mut();
    assert_eq!(unsafe { tc_tournament_parse(text.as_ptr(), &mut t) }, TcStatus::Ok);
    assert_eq!(unsafe { tc_tournament_n(t) }, 3);
    assert_eq!(unsafe { tc_tournament_arc(t, 0, 1) }, 1);
    assert_eq!(unsafe { tc_tournament_arc(t, 1, 0) }, 0);
    assert_eq!(unsafe { tc_tournament_arc(t, 0, 0) }, -1);
    assert_eq!(unsafe { tc_tournament_arc(t, 0, 9) }, -1);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { tc_tournament_format(t, &mut s) }, TcStatus::Ok);
    assert!(take(s).ends_with("010\n001\n100\n"));
    unsafe { tc_tournament_free(t) };
}

#[test]
fn parse_errors_set_message() {
    let text = CString::new("2\n11\n00\n").unwrap();
    let mut t = ptr::null_mut();
    assert_eq!(unsafe { tc_tournament_parse(text.as_ptr(), &mut t) }, TcStatus::Parse);
    assert!(t.is_null());
    let msg = unsafe { CStr::from_ptr(tc_last_error()) }.to_str().unwrap();
    assert!(!msg.is_empty());
    assert_eq!(unsafe { tc_tournament_parse(ptr::null(), &mut t) }, TcStatus::NullPointer);
}

#[test]
fn matrix_constructor_checks_shape() {
    let cells = [0u8, 1, 0, 0, 0, 1, 1, 0, 0];
    let mut t = ptr::null_mut();
    assert_eq!(unsafe { tc_tournament_from_matrix(3, cells.as_ptr(), &mut t) }, TcStatus::Ok);
    let mut r = TcSolveResult::default();
    assert_eq!(unsafe { tc_omega(t, TC_NO_BUDGET, &mut r, ptr::null_mut(), 0) }, TcStatus::Ok);
    assert_eq!((r.value, r.exact), (2, true));
    unsafe { tc_tournament_free(t) };

    let bad = [0u8, 1, 1, 0];
    assert_eq!(unsafe { tc_tournament_from_matrix(2, bad.as_ptr(), &mut t) }, TcStatus::Parse);
}

#[test]
fn solvers_through_the_abi() {
    let d3 = build(TcFamily::D, 3);
    let n = unsafe { tc_tournament_n(d3) };
    let mut order = vec![usize::MAX; n];
    let mut r = TcSolveResult::default();
    assert_eq!(unsafe { tc_omega(d3, TC_NO_BUDGET, &mut r, order.as_mut_ptr(), n) }, TcStatus::Ok);
    assert_eq!((r.value, r.lower, r.exact), (2, 2, true));
    let mut sorted = order.clone();
    sorted.sort_unstable();
    assert_eq!(sorted, (0..n).collect::<Vec<_>>());

    let a3 = build(TcFamily::A, 3);
    let mut colour = vec![usize::MAX; 9];
    assert_eq!(unsafe { tc_chi(a3, TC_NO_BUDGET, &mut r, colour.as_mut_ptr(), 9) }, TcStatus::Ok);
    assert_eq!((r.value, r.exact), (3, true));
    assert!(colour.iter().all(|&c| c < 3));

    let mut k = 0;
    assert_eq!(unsafe { tc_family_index(a3, TcFamily::A, &mut k) }, TcStatus::Ok);
    assert_eq!(k, 3);
    assert_eq!(unsafe { tc_family_index(a3, TcFamily::U, &mut k) }, TcStatus::InvalidArgument);

    // 15 vertices exceeds the default exact-solver limit.
    let d4 = build(TcFamily::D, 4);
    assert_eq!(unsafe { tc_omega(d4, TC_NO_BUDGET, &mut r, ptr::null_mut(), 0) }, TcStatus::SizeLimit);
    assert_eq!(unsafe { tc_chi(d3, 0, &mut r, ptr::null_mut(), 0) }, TcStatus::Ok);
    assert!(!r.exact || r.value == r.lower);

    for t in [d3, a3, d4] {
        unsafe { tc_tournament_free(t) };
    }
}

#[test]
fn containment_and_canon() {
    let a2 = build(TcFamily::A, 2);
    let a3 = build(TcFamily::A, 3);
    let n2 = unsafe { tc_tournament_n(a2) };
    let mut found = false;
    let mut map = vec![usize::MAX; n2];
    assert_eq!(unsafe { tc_contains(a3, a2, &mut found, map.as_mut_ptr(), n2) }, TcStatus::Ok);
    assert!(found);
    for u in 0..n2 {
        for v in 0..n2 {
            if u != v {
                assert_eq!(unsafe { tc_tournament_arc(a2, u, v) }, unsafe {
                    tc_tournament_arc(a3, map[u], map[v])
                });
            }
        }
    }
    assert_eq!(unsafe { tc_contains(a2, a3, &mut found, ptr::null_mut(), 0) }, TcStatus::Ok);
    assert!(!found);

    let mut r1 = ptr::null_mut();
    let mut r2 = ptr::null_mut();
    assert_eq!(unsafe { tc_tournament_random(7, 5, &mut r1) }, TcStatus::Ok);
    assert_eq!(unsafe { tc_tournament_random(7, 5, &mut r2) }, TcStatus::Ok);
    let (mut c1, mut c2) = (ptr::null_mut(), ptr::null_mut());
    assert_eq!(unsafe { tc_canonical_code(r1, &mut c1) }, TcStatus::Ok);
    assert_eq!(unsafe { tc_canonical_code(r2, &mut c2) }, TcStatus::Ok);
    assert_eq!(take(c1), take(c2));
    for t in [a2, a3, r1, r2] {
        unsafe { tc_tournament_free(t) };
    }
}

#[test]
fn bounds_and_nulls() {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { tc_bound_f(1, &mut s) }, TcStatus::Ok);
    assert_eq!(take(s), "0");
    let mut r = TcSolveResult::default();
    assert_eq!(unsafe { tc_omega(ptr::null(), 0, &mut r, ptr::null_mut(), 0) }, TcStatus::NullPointer);
    assert_eq!(unsafe { tc_tournament_n(ptr::null()) }, 0);
    unsafe { tc_tournament_free(ptr::null_mut()) };
    unsafe { tc_string_free(ptr::null_mut()) };
    let v = unsafe { CStr::from_ptr(tc_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
