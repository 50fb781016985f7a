//! C ABI over `ljt-core`.
//!
//! Sequents and finitary terms cross the boundary as opaque handles; every
//! other result is a status code plus out-parameters. Strings returned to the
//! caller are owned by the caller and released with [`ljt_string_free`].
//! After a failing call, [`ljt_last_error`] describes the failure.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ljt_core::analysis::{count_members, decide};
use ljt_core::finitary::{fin_typecheck, represent_elided, FinTerm, FpContext};
use ljt_core::forest::expand;
use ljt_core::lambda_bar::check_diagnostic;
use ljt_core::parse::{parse_fin_term, parse_proof_term, parse_sequent};
use ljt_core::semantics::try_check_equivalence;
use ljt_core::syntax::Sequent;
use ljt_core::tree::{fin_to_tree, forest_to_tree, tree_to_fin, Tree};
use ljt_core::Ternary;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LjtStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    Precondition = 4,
    Panic = 5,
}

/// Opaque sequent handle.
pub struct LjtSequent(Sequent);

/// Opaque finitary term handle.
pub struct LjtFinTerm(FinTerm);

/// Result of [`ljt_decide`]. `finite` is 1 (yes), 0 (no) or -1 (unknown).
/// `witness` is null when there is no inhabitant; release it with
/// [`ljt_verdict_clear`].
#[repr(C)]
pub struct LjtVerdict {
    pub inhabited: bool,
    pub solvable: bool,
    pub finite: i32,
    pub witness: *mut c_char,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

type Failure = (LjtStatus, String);

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> LjtStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LjtStatus::Ok,
        Ok(Err((status, message))) => {
            set_error(message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(message);
            LjtStatus::Panic
        }
    }
}

fn null() -> Failure {
    (LjtStatus::NullPointer, "null pointer argument".into())
}

unsafe fn read_str<'a>(text: *const c_char) -> Result<&'a str, Failure> {
    if text.is_null() {
        return Err(null());
    }
    CStr::from_ptr(text)
        .to_str()
        .map_err(|e| (LjtStatus::InvalidUtf8, e.to_string()))
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(null)
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    out.write(value);
    Ok(())
}

fn to_c(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("interior nul removed").into_raw()
}

/// The message of the last failure on this thread, or null. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ljt_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ljt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `Γ |- A`.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ljt_sequent_parse(text: *const c_char, out: *mut *mut LjtSequent) -> LjtStatus {
    guard(|| {
        let s = parse_sequent(read_str(text)?).map_err(|e| (LjtStatus::ParseError, e.to_string()))?;
        write(out, Box::into_raw(Box::new(LjtSequent(s))))
    })
}

/// # Safety
/// `s` must be null or a handle from [`ljt_sequent_parse`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ljt_sequent_free(s: *mut LjtSequent) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// # Safety
/// `s` must be a live sequent handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ljt_sequent_to_string(s: *const LjtSequent, out: *mut *mut c_char) -> LjtStatus {
    guard(|| write(out, to_c(deref(s)?.0.to_string())))
}

/// The finitary representation of `s`, vacuous fixed points elided.
///
/// # Safety
/// `s` must be a live sequent handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ljt_represent(s: *const LjtSequent, out: *mut *mut LjtFinTerm) -> LjtStatus {
    guard(|| {
        let t = represent_elided(&deref(s)?.0, &FpContext::new()).map_err(|e| (LjtStatus::Precondition, e.to_string()))?;
        write(out, Box::into_raw(Box::new(LjtFinTerm(t))))
    })
}

/// Parses a finitary term, either in the textual syntax or, when `json` is
/// set, as a JSON tree.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ljt_finterm_parse(text: *const c_char, json: bool, out: *mut *mut LjtFinTerm) -> LjtStatus {
    guard(|| {
        let text = read_str(text)?;
        let t = if json {
            Tree::from_json(text)
                .and_then(|t| tree_to_fin(&t))
                .map_err(|e| (LjtStatus::ParseError, e.to_string()))?
        } else {
            parse_fin_term(text).map_err(|e| (LjtStatus::ParseError, e.to_string()))?
        };
        write(out, Box::into_raw(Box::new(LjtFinTerm(t))))
    })
}

/// # Safety
/// `t` must be null or a finitary term handle, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ljt_finterm_free(t: *mut LjtFinTerm) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// # Safety
/// `t` must be a live finitary term handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ljt_finterm_to_string(t: *const LjtFinTerm, json: bool, out: *mut *mut c_char) -> LjtStatus {
    guard(|| {
        let t = &deref(t)?.0;
        let text = if json { fin_to_tree(t).to_json() } else { t.to_string() };
        write(out, to_c(text))
    })
}

/// Whether `t` has type `s` with no fixed-point declarations.
///
/// # Safety
/// `t` and `s` must be live handles and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ljt_finterm_typecheck(t: *const LjtFinTerm, s: *const LjtSequent, out: *mut bool) -> LjtStatus {
    guard(|| {
        let s = &deref(s)?.0;
        write(out, fin_typecheck(&FpContext::new(), &s.ctx, &deref(t)?.0, &s.goal))
    })
}

/// The solution space of `s` truncated at `fuel`, as text or a JSON tree.
///
/// # Safety
/// `s` must be a live sequent handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ljt_expand(s: *const LjtSequent, fuel: usize, json: bool, out: *mut *mut c_char) -> LjtStatus {
    guard(|| {
        let f = expand(&deref(s)?.0, fuel);
        write(out, to_c(if json { forest_to_tree(&f).to_json() } else { f.to_string() }))
    })
}

/// # Safety
/// `s` must be a live sequent handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ljt_check_equivalence(s: *const LjtSequent, fuel: usize, out: *mut bool) -> LjtStatus {
    guard(|| {
        let eq = try_check_equivalence(&deref(s)?.0, &FpContext::new(), fuel).map_err(|e| (LjtStatus::Precondition, e.to_string()))?;
        write(out, eq)
    })
}

/// # Safety
/// `s` must be a live sequent handle and `out` a writable pointer. A
/// verdict written here must be released with [`ljt_verdict_clear`].
#[no_mangle]
pub unsafe extern "C" fn ljt_decide(s: *const LjtSequent, out: *mut LjtVerdict) -> LjtStatus {
    guard(|| {
        let v = decide(&deref(s)?.0);
        write(
            out,
            LjtVerdict {
                inhabited: v.inhabited,
                solvable: v.solvable,
                finite: match v.finitely_inhabited {
                    Ternary::Yes => 1,
                    Ternary::No => 0,
                    Ternary::Unknown => -1,
                },
                witness: v.witness.map_or(ptr::null_mut(), |w| to_c(w.to_string())),
            },
        )
    })
}

/// Frees the witness string of `v` and resets it to null.
///
/// # Safety
/// `v` must be null or point to a verdict filled by [`ljt_decide`].
#[no_mangle]
pub unsafe extern "C" fn ljt_verdict_clear(v: *mut LjtVerdict) {
    if let Some(v) = v.as_mut() {
        ljt_string_free(v.witness);
        v.witness = ptr::null_mut();
    }
}

/// # Safety
/// `s` must be a live sequent handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ljt_count_members(s: *const LjtSequent, max_size: usize, out: *mut usize) -> LjtStatus {
    guard(|| write(out, count_members(&deref(s)?.0, max_size)))
}

/// Typechecks a proof term, given in the textual syntax, against `s`. A
/// rejected term is not an error: `out` receives false and the reason is
/// available from [`ljt_last_error`].
///
/// # Safety
/// `s` must be a live sequent handle, `term` a nul-terminated string and
/// `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ljt_typecheck(s: *const LjtSequent, term: *const c_char, out: *mut bool) -> LjtStatus {
    guard(|| {
        let s = &deref(s)?.0;
        let t = parse_proof_term(read_str(term)?).map_err(|e| (LjtStatus::ParseError, e.to_string()))?;
        let r = check_diagnostic(&s.ctx, &t, &s.goal);
        if let Err(e) = &r {
            set_error(e.to_string());
        }
        write(out, r.is_ok())
    })
}
