use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::ptr;

use stackres_ffi::*;

fn fixture(name: &str) -> CString {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures").join(name);
    CString::new(std::fs::read_to_string(p).unwrap()).unwrap()
}

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(stackres_last_error()) }.to_str().unwrap().to_owned()
}

fn take(s: *mut std::ffi::c_char) -> serde_json::Value {
    assert!(!s.is_null());
    let v = serde_json::from_str(unsafe { CStr::from_ptr(s) }.to_str().unwrap()).unwrap();
    unsafe { stackres_string_free(s) };
    v
}

fn parse(doc: &CString, lint: bool) -> (StackresStatus, *mut StackresInstance) {
    let mut inst = ptr::null_mut();
    let st = unsafe { stackres_instance_parse(doc.as_ptr(), lint, &mut inst) };
    (st, inst)
}

#[test]
fn roundtrip_and_fundprop_on_node() {
    let (st, inst) = parse(&fixture("node.json"), false);
    assert_eq!(st, StackresStatus::Ok, "{}", last_error());
    let (g, s, r1, r2) = (c("G"), c("S"), c("R1"), c("R2"));
    let mut out = ptr::null_mut();
    let mut ok = false;
    let st = unsafe { stackres_roundtrip(inst, g.as_ptr(), s.as_ptr(), r1.as_ptr(), &mut out, &mut ok) };
    assert_eq!(st, StackresStatus::Ok, "{}", last_error());
    assert!(ok);
    assert_eq!(take(out)["ok"], true);

    let st = unsafe {
        stackres_fundprop(inst, ptr::null(), g.as_ptr(), s.as_ptr(), r1.as_ptr(), r2.as_ptr(), &mut out, &mut ok)
    };
    assert_eq!(st, StackresStatus::Ok, "{}", last_error());
    assert!(!ok);
    let v = take(out);
    assert_eq!(v["verdict_i"], false);
    assert_eq!(v["verdict_ii"], false);
    unsafe { stackres_instance_free(inst) };
}

#[test]
fn fundprop_across_an_equivalence() {
    let (_, inst) = parse(&fixture("flip_to_point.json"), false);
    let (x, s, ra, rpt) = (c("X"), c("S"), c("Ra"), c("Rpt"));
    let mut out = ptr::null_mut();
    let mut ok = false;
    let st = unsafe {
        stackres_fundprop(inst, x.as_ptr(), ptr::null(), s.as_ptr(), ra.as_ptr(), rpt.as_ptr(), &mut out, &mut ok)
    };
    assert_eq!(st, StackresStatus::Ok, "{}", last_error());
    assert!(ok);
    take(out);
    unsafe { stackres_instance_free(inst) };
}

#[test]
fn validation_and_error_codes() {
    let (st, inst) = parse(&fixture("broken.json"), false);
    assert_eq!(st, StackresStatus::ValidationError);
    assert!(inst.is_null());
    assert!(last_error().contains("mul"), "{}", last_error());

    let (st, inst) = parse(&fixture("broken.json"), true);
    assert_eq!(st, StackresStatus::Ok);
    let mut out = ptr::null_mut();
    let mut valid = true;
    assert_eq!(unsafe { stackres_validate(inst, &mut out, &mut valid) }, StackresStatus::Ok);
    assert!(!valid);
    assert_eq!(take(out)["valid"], false);
    unsafe { stackres_instance_free(inst) };

    let (st, _) = parse(&c("{\"spaces\": "), false);
    assert_eq!(st, StackresStatus::ParseError);
    assert!(last_error().contains("line 1"), "{}", last_error());

    let (_, inst) = parse(&fixture("node.json"), false);
    let (h, s, r1) = (c("H"), c("S"), c("R1"));
    let st = unsafe { stackres_roundtrip(inst, h.as_ptr(), s.as_ptr(), r1.as_ptr(), &mut out, ptr::null_mut()) };
    assert_eq!(st, StackresStatus::DanglingReference);
    let st = unsafe { stackres_roundtrip(inst, ptr::null(), s.as_ptr(), r1.as_ptr(), &mut out, ptr::null_mut()) };
    assert_eq!(st, StackresStatus::NullArgument);
    let st = unsafe {
        stackres_fundprop(inst, ptr::null(), ptr::null(), s.as_ptr(), r1.as_ptr(), r1.as_ptr(), &mut out, ptr::null_mut())
    };
    assert_eq!(st, StackresStatus::NullArgument);
    unsafe { stackres_instance_free(inst) };
    unsafe { stackres_instance_free(ptr::null_mut()) };
    unsafe { stackres_string_free(ptr::null_mut()) };
}

#[test]
fn invalid_utf8_is_rejected() {
    let bad = CString::new(vec![b'{', 0xff, b'}']).unwrap();
    let (st, _) = parse(&bad, false);
    assert_eq!(st, StackresStatus::InvalidUtf8);
}

#[test]
fn version_matches_the_crate() {
    let v = unsafe { CStr::from_ptr(stackres_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
