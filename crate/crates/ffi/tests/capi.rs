use std::ffi::{CStr, CString};
use std::ptr;

use ljt_ffi::*;

fn sequent(text: &str) -> *mut LjtSequent {
    let c = CString::new(text).unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { ljt_sequent_parse(c.as_ptr(), &mut s) }, LjtStatus::Ok);
    s
}

fn take(p: *mut std::ffi::c_char) -> String {
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
    unsafe { ljt_string_free(p) };
    s
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(ljt_last_error()) }.to_str().unwrap().to_owned()
}

#[test]
fn represent_church() {
    let s = sequent("|- (p -> p) -> p -> p");
    let mut t = ptr::null_mut();
    unsafe {
        assert_eq!(ljt_represent(s, &mut t), LjtStatus::Ok);
        let mut out = ptr::null_mut();
        assert_eq!(ljt_finterm_to_string(t, false, &mut out), LjtStatus::Ok);
        assert!(take(out).contains("gfp X1"));
        let mut ok = false;
        assert_eq!(ljt_finterm_typecheck(t, s, &mut ok), LjtStatus::Ok);
        assert!(ok);
        ljt_finterm_free(t);
        ljt_sequent_free(s);
    }
}

#[test]
fn json_round_trip() {
    let s = sequent("|- ((p -> p) -> p) -> p");
    unsafe {
        let mut t = ptr::null_mut();
        ljt_represent(s, &mut t);
        let mut json = ptr::null_mut();
        assert_eq!(ljt_finterm_to_string(t, true, &mut json), LjtStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(ljt_finterm_parse(json, true, &mut back), LjtStatus::Ok);
        let (mut a, mut b) = (ptr::null_mut(), ptr::null_mut());
        ljt_finterm_to_string(t, false, &mut a);
        ljt_finterm_to_string(back, false, &mut b);
        assert_eq!(take(a), take(b));
        ljt_string_free(json);
        ljt_finterm_free(back);
        ljt_finterm_free(t);
        ljt_sequent_free(s);
    }
}

#[test]
fn decide_and_count() {
    let s = sequent("|- p -> p -> p");
    unsafe {
        let mut v = LjtVerdict { inhabited: false, solvable: false, finite: -1, witness: ptr::null_mut() };
        assert_eq!(ljt_decide(s, &mut v), LjtStatus::Ok);
        assert!(v.inhabited && v.solvable);
        assert_eq!(v.finite, 1);
        assert!(!v.witness.is_null());
        ljt_verdict_clear(&mut v);
        assert!(v.witness.is_null());
        let mut n = 0usize;
        assert_eq!(ljt_count_members(s, 10, &mut n), LjtStatus::Ok);
        assert_eq!(n, 2);
        let mut eq = false;
        assert_eq!(ljt_check_equivalence(s, 6, &mut eq), LjtStatus::Ok);
        assert!(eq);
        let mut f = ptr::null_mut();
        assert_eq!(ljt_expand(s, 3, false, &mut f), LjtStatus::Ok);
        assert_eq!(take(f), "\\z1:p. \\z2:p. z1 + z2");
        ljt_sequent_free(s);
    }
}

#[test]
fn typecheck_reports_reason() {
    let s = sequent("|- p -> p -> p");
    let good = CString::new("\\x:p. \\y:p. y").unwrap();
    let bad = CString::new("\\x:p. \\y:p. z").unwrap();
    unsafe {
        let mut ok = false;
        assert_eq!(ljt_typecheck(s, good.as_ptr(), &mut ok), LjtStatus::Ok);
        assert!(ok);
        assert_eq!(ljt_typecheck(s, bad.as_ptr(), &mut ok), LjtStatus::Ok);
        assert!(!ok);
        assert!(last_error().contains('z'));
        ljt_sequent_free(s);
    }
}

#[test]
fn error_codes() {
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(ljt_sequent_parse(ptr::null(), &mut s), LjtStatus::NullPointer);
        let bad = CString::new("|- p ->").unwrap();
        assert_eq!(ljt_sequent_parse(bad.as_ptr(), &mut s), LjtStatus::ParseError);
        assert!(!last_error().is_empty());
        let invalid = [0xffu8 as std::ffi::c_char, 0];
        assert_eq!(ljt_sequent_parse(invalid.as_ptr(), &mut s), LjtStatus::InvalidUtf8);
        let ok = sequent("|- p");
        assert_eq!(ljt_count_members(ok, 3, ptr::null_mut()), LjtStatus::NullPointer);
        ljt_sequent_free(ok);
        ljt_sequent_free(ptr::null_mut());
        ljt_string_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/ljt.h")).unwrap();
    for name in [
        "ljt_last_error",
        "ljt_string_free",
        "ljt_sequent_parse",
        "ljt_sequent_free",
        "ljt_sequent_to_string",
        "ljt_represent",
        "ljt_finterm_parse",
        "ljt_finterm_free",
        "ljt_finterm_to_string",
        "ljt_finterm_typecheck",
        "ljt_expand",
        "ljt_check_equivalence",
        "ljt_decide",
        "ljt_verdict_clear",
        "ljt_count_members",
        "ljt_typecheck",
        "typedef struct LjtSequent LjtSequent",
        "LJT_STATUS_PARSE_ERROR = 3",
    ] {
        assert!(header.contains(name), "{name}");
    }
}
