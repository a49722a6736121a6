use std::ffi::{c_char, CStr, CString};
use std::ptr;

use hslnest_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    hn_string_free(s);
    out
}

unsafe fn last_error() -> String {
    let e = hn_last_error();
    assert!(!e.is_null());
    CStr::from_ptr(e).to_string_lossy().into_owned()
}

unsafe fn axioms(spec: &str) -> *mut HnAxioms {
    let mut a = ptr::null_mut();
    assert_eq!(hn_axioms_parse(c(spec).as_ptr(), &mut a), HnStatus::Ok);
    a
}

#[test]
fn grammar_of_hsl_pair() {
    unsafe {
        let a = axioms("2,1");
        let mut out = ptr::null_mut();
        assert_eq!(hn_axioms_grammar(a, &mut out), HnStatus::Ok);
        assert_eq!(take(out), "{d -> bbd, b -> bdd}");
        hn_axioms_free(a);
    }
}

#[test]
fn bad_axiom_spec_sets_error() {
    unsafe {
        let mut a = ptr::null_mut();
        assert_eq!(hn_axioms_parse(c("2;;x").as_ptr(), &mut a), HnStatus::ParseError);
        assert!(a.is_null());
        assert!(!last_error().is_empty());
        assert_eq!(hn_axioms_parse(ptr::null(), &mut a), HnStatus::NullArgument);
    }
}

#[test]
fn prove_and_check_round_trip() {
    unsafe {
        let a = axioms("1,1");
        let mut p = ptr::null_mut();
        let st = hn_prove(a, c("<>[]p -> []p").as_ptr(), 0, 12, 0, &mut p);
        assert_eq!(st, HnStatus::Ok);
        assert!(hn_proof_height(p) >= 1);
        let mut json = ptr::null_mut();
        assert_eq!(hn_proof_to_json(p, &mut json), HnStatus::Ok);
        let json = take(json);
        assert_eq!(hn_check_json(a, HnCalculus::Nested, c(&json).as_ptr()), HnStatus::Ok);
        hn_proof_free(p);

        let base = axioms("");
        assert_eq!(hn_check_json(base, HnCalculus::Nested, c(&json).as_ptr()), HnStatus::Invalid);
        assert_eq!(hn_check_json(base, HnCalculus::Nested, c("{").as_ptr()), HnStatus::ParseError);
        hn_axioms_free(base);
        hn_axioms_free(a);
    }
}

#[test]
fn unprovable_is_not_found() {
    unsafe {
        let a = axioms("");
        let mut p = ptr::null_mut();
        assert_eq!(hn_prove(a, c("p | ~p").as_ptr(), 0, 6, 0, &mut p), HnStatus::NotFound);
        assert!(p.is_null());
        hn_axioms_free(a);
    }
}

#[test]
fn reach_example_path() {
    unsafe {
        let a = axioms("2,1");
        let mut out = ptr::null_mut();
        let st = hn_reach(a, c("v R u, u R w").as_ptr(), c("w").as_ptr(), c("u").as_ptr(), &mut out);
        assert_eq!(st, HnStatus::Ok);
        assert_eq!(take(out), "w, b, u, b, v, d, u");
        let st = hn_reach(a, c("v R u").as_ptr(), c("u").as_ptr(), c("v").as_ptr(), &mut out);
        assert_eq!(st, HnStatus::NotFound);
        hn_axioms_free(a);
    }
}

#[test]
fn translate_sequents_both_ways() {
    unsafe {
        let mut out = ptr::null_mut();
        assert_eq!(hn_translate_sequent(c("q^o, [ p^i ]").as_ptr(), 0, &mut out), HnStatus::Ok);
        let labelled = take(out);
        assert_eq!(labelled, "w0 R w1 ; w1: p |- w0: q");
        assert_eq!(hn_translate_sequent(c(&labelled).as_ptr(), 1, &mut out), HnStatus::Ok);
        assert_eq!(take(out), "q^o, [ p^i ]");
        let cyclic = "w R u, u R w ; w: p |- u: q";
        assert_eq!(hn_translate_sequent(c(cyclic).as_ptr(), 1, &mut out), HnStatus::Invalid);
    }
}

#[test]
fn refine_rejects_garbage() {
    unsafe {
        let a = axioms("");
        let mut out = ptr::null_mut();
        assert_eq!(hn_refine_json(a, c("[]").as_ptr(), &mut out), HnStatus::ParseError);
        hn_axioms_free(a);
    }
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/hslnest.h")).unwrap();
    for name in [
        "hn_last_error",
        "hn_string_free",
        "hn_axioms_parse",
        "hn_axioms_free",
        "hn_axioms_grammar",
        "hn_prove",
        "hn_proof_height",
        "hn_proof_to_json",
        "hn_proof_free",
        "hn_check_json",
        "hn_refine_json",
        "hn_reach",
        "hn_translate_sequent",
        "typedef struct HnAxioms HnAxioms",
        "HN_STATUS_NOT_FOUND = 5",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}
