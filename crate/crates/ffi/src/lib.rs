//! C interface to `hslnest`.
//!
//! Every function returns an [`HnStatus`]. On failure a message is kept per
//! thread and can be read with [`hn_last_error`]. Strings handed out by this
//! library must be released with [`hn_string_free`], handles with their own
//! `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hslnest::grammar::{reachable, Grammar};
use hslnest::labelled::{check_labelled, LabelledProof, LabelledSequent, Mode, RelAtom};
use hslnest::nested::{check_nested, prove_with_limits, NestedProof, NestedSequent, SearchLimits};
use hslnest::refine::{eliminate_structural, prop_graph_labelled};
use hslnest::syntax::{AxiomSet, Formula};
use hslnest::translate::{to_labelled, to_nested};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HnStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    /// The input parsed but is not valid, e.g. a proof that does not check.
    Invalid = 4,
    /// Search gave up, or no path exists.
    NotFound = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HnCalculus {
    Labelled = 0,
    Refined = 1,
    Either = 2,
    Nested = 3,
}

/// An axiom set: HSL pairs and optionally seriality.
pub struct HnAxioms(AxiomSet);

/// A nested proof found by [`hn_prove`].
pub struct HnProof(NestedProof);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

struct Fail(HnStatus, String);

fn fail(status: HnStatus, msg: impl ToString) -> Fail {
    Fail(status, msg.to_string())
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> HnStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            HnStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            HnStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(fail(HnStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(HnStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn axioms<'a>(p: *const HnAxioms) -> Result<&'a AxiomSet, Fail> {
    p.as_ref().map(|a| &a.0).ok_or_else(|| fail(HnStatus::NullArgument, "axioms is null"))
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(fail(HnStatus::NullArgument, "output pointer is null"));
    }
    let c = CString::new(s).map_err(|_| fail(HnStatus::Invalid, "output contains a NUL byte"))?;
    *out = c.into_raw();
    Ok(())
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn hn_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hn_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses an axiom set such as `"D; 1,1"` or `"T 4"`. The empty string gives
/// the base logic.
///
/// # Safety
/// `spec` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hn_axioms_parse(spec: *const c_char, out: *mut *mut HnAxioms) -> HnStatus {
    guard(|| {
        let spec = text(spec, "spec")?;
        if out.is_null() {
            return Err(fail(HnStatus::NullArgument, "output pointer is null"));
        }
        let a: AxiomSet = spec.parse().map_err(|e| fail(HnStatus::ParseError, e))?;
        *out = Box::into_raw(Box::new(HnAxioms(a)));
        Ok(())
    })
}

/// # Safety
/// `a` must be null or a handle from [`hn_axioms_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hn_axioms_free(a: *mut HnAxioms) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// Writes the grammar of an axiom set, e.g. `{d -> bbd, b -> bdd}`.
///
/// # Safety
/// `a` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hn_axioms_grammar(a: *const HnAxioms, out: *mut *mut c_char) -> HnStatus {
    guard(|| {
        let g = Grammar::from_axioms(axioms(a)?);
        put_string(out, g.to_string())
    })
}

/// Searches for a nested proof of `goal` with height at most `depth`.
/// `max_expansions` of 0 means the default budget. `goal` is a formula, or a
/// nested sequent when `is_sequent` is nonzero. Returns `NotFound` when no
/// proof was found.
///
/// # Safety
/// `a` must be a live handle, `goal` a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hn_prove(
    a: *const HnAxioms,
    goal: *const c_char,
    is_sequent: i32,
    depth: u32,
    max_expansions: u64,
    out: *mut *mut HnProof,
) -> HnStatus {
    guard(|| {
        let a = axioms(a)?;
        let goal = text(goal, "goal")?;
        if out.is_null() {
            return Err(fail(HnStatus::NullArgument, "output pointer is null"));
        }
        let s = if is_sequent != 0 {
            goal.parse::<NestedSequent>().map_err(|e| fail(HnStatus::ParseError, e))?
        } else {
            NestedSequent::goal(goal.parse::<Formula>().map_err(|e| fail(HnStatus::ParseError, e))?)
        };
        let mut limits = SearchLimits::depth(depth as usize);
        if max_expansions > 0 {
            limits.max_expansions = max_expansions as usize;
        }
        match prove_with_limits(&s, a, limits) {
            (Some(p), _) => {
                *out = Box::into_raw(Box::new(HnProof(p)));
                Ok(())
            }
            (None, stats) if stats.exhausted => Err(fail(HnStatus::NotFound, "expansion budget exhausted")),
            (None, _) => Err(fail(HnStatus::NotFound, format!("no proof of height at most {depth}"))),
        }
    })
}

/// # Safety
/// `p` must be a live handle from [`hn_prove`].
#[no_mangle]
pub unsafe extern "C" fn hn_proof_height(p: *const HnProof) -> u32 {
    p.as_ref().map_or(0, |p| p.0.height() as u32)
}

/// Writes the proof as JSON.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hn_proof_to_json(p: *const HnProof, out: *mut *mut c_char) -> HnStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| fail(HnStatus::NullArgument, "proof is null"))?;
        put_string(out, p.0.to_json())
    })
}

/// # Safety
/// `p` must be null or a handle from [`hn_prove`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hn_proof_free(p: *mut HnProof) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Checks a JSON proof. `Invalid` means it parsed but some node is wrong.
///
/// # Safety
/// `a` must be a live handle and `json` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn hn_check_json(a: *const HnAxioms, calculus: HnCalculus, json: *const c_char) -> HnStatus {
    guard(|| {
        let a = axioms(a)?;
        let json = text(json, "json")?;
        let mode = match calculus {
            HnCalculus::Nested => {
                let p = NestedProof::from_json(json).map_err(|e| fail(HnStatus::ParseError, e))?;
                return check_nested(&p, a).map_err(|e| fail(HnStatus::Invalid, e));
            }
            HnCalculus::Labelled => Mode::Base,
            HnCalculus::Refined => Mode::Refined,
            HnCalculus::Either => Mode::Either,
        };
        let p = LabelledProof::from_json(json).map_err(|e| fail(HnStatus::ParseError, e))?;
        check_labelled(&p, a, mode).map_err(|e| fail(HnStatus::Invalid, e))
    })
}

/// Removes every `S(n,k)` from a labelled JSON proof and writes the refined
/// proof as JSON.
///
/// # Safety
/// `a` must be a live handle, `json` a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hn_refine_json(a: *const HnAxioms, json: *const c_char, out: *mut *mut c_char) -> HnStatus {
    guard(|| {
        let a = axioms(a)?;
        let p = LabelledProof::from_json(text(json, "json")?).map_err(|e| fail(HnStatus::ParseError, e))?;
        let r = eliminate_structural(&p, a).map_err(|e| fail(HnStatus::Invalid, e))?;
        put_string(out, r.to_json())
    })
}

/// Finds a propagation path from `from` to `to` over relational atoms such as
/// `"v R u, u R w"` and writes it as `"w, b, u, d, v"`.
///
/// # Safety
/// All pointers must be valid; strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn hn_reach(
    a: *const HnAxioms,
    relations: *const c_char,
    from: *const c_char,
    to: *const c_char,
    out: *mut *mut c_char,
) -> HnStatus {
    guard(|| {
        let g = Grammar::from_axioms(axioms(a)?);
        let mut rel = Vec::new();
        for item in text(relations, "relations")?.split([',', ';']).map(str::trim).filter(|s| !s.is_empty()) {
            match item.split_whitespace().collect::<Vec<_>>()[..] {
                [x, "R", y] => rel.push(RelAtom::new(x, y)),
                _ => return Err(fail(HnStatus::ParseError, format!("expected `x R y`, found {item:?}"))),
            }
        }
        let pg = prop_graph_labelled(&rel);
        match reachable(&pg, &g, text(from, "from")?, text(to, "to")?) {
            Ok(Some(path)) => put_string(out, path.to_string()),
            Ok(None) => Err(fail(HnStatus::NotFound, "unreachable")),
            Err(e) => Err(fail(HnStatus::Invalid, e)),
        }
    })
}

/// Translates a sequent between the two syntaxes: a nested sequent to a
/// labelled one when `to_nested` is zero, otherwise a labelled tree sequent
/// to a nested one.
///
/// # Safety
/// `seq` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hn_translate_sequent(seq: *const c_char, to_nested_form: i32, out: *mut *mut c_char) -> HnStatus {
    guard(|| {
        let seq = text(seq, "sequent")?;
        let result = if to_nested_form != 0 {
            let l: LabelledSequent = seq.parse().map_err(|e| fail(HnStatus::ParseError, e))?;
            to_nested(&l).map_err(|e| fail(HnStatus::Invalid, e))?.to_string()
        } else {
            let n: NestedSequent = seq.parse().map_err(|e| fail(HnStatus::ParseError, e))?;
            to_labelled(&n).map_err(|e| fail(HnStatus::Invalid, e))?.to_string()
        };
        put_string(out, result)
    })
}
