//! C interface to `stackres`.
//!
//! Documents are passed as NUL-terminated UTF-8 JSON and loaded into an
//! opaque [`StackresInstance`]. Commands write their report as a JSON string
//! the caller releases with [`stackres_string_free`]. Every function returns
//! a [`StackresStatus`]; on failure [`stackres_last_error`] describes it.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use stackres::cli::{Outcome, Session};
use stackres::instance::Mode;
use stackres::Error;

/// Status codes. Verdicts are reported separately, so a false verdict is
/// still `STACKRES_OK`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StackresStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    ValidationError = 4,
    DanglingReference = 5,
    HypothesisFailure = 6,
    BoundExceeded = 7,
    OtherError = 8,
    Panic = 9,
}

/// A loaded instance document.
pub struct StackresInstance {
    session: Session,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> StackresStatus {
    match e {
        Error::Parse { .. } => StackresStatus::ParseError,
        Error::DanglingReference(_) => StackresStatus::DanglingReference,
        Error::BoundExceeded(_) => StackresStatus::BoundExceeded,
        Error::Validation { .. } | Error::Invalid { .. } => StackresStatus::ValidationError,
        Error::NotStable(_)
        | Error::NotClosed
        | Error::NotInS(_)
        | Error::NotFull
        | Error::InvalidSubgroupoid(_)
        | Error::GroupoidMismatch(_)
        | Error::HypothesisFailure(_) => StackresStatus::HypothesisFailure,
        _ => StackresStatus::OtherError,
    }
}

struct Fail(StackresStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

/// Runs `f`, converting errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> StackresStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            StackresStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            StackresStatus::Panic
        }
    }
}

unsafe fn required<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(StackresStatus::NullArgument, format!("`{what}` is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(StackresStatus::InvalidUtf8, format!("`{what}` is not UTF-8")))
}

unsafe fn optional<'a>(p: *const c_char, what: &str) -> Result<Option<&'a str>, Fail> {
    if p.is_null() {
        Ok(None)
    } else {
        required(p, what).map(Some)
    }
}

unsafe fn instance<'a>(p: *const StackresInstance) -> Result<&'a StackresInstance, Fail> {
    p.as_ref()
        .ok_or_else(|| Fail(StackresStatus::NullArgument, "`instance` is null".into()))
}

/// Writes the JSON report to `out` and whether the verdict holds to
/// `verdict` (if non-null).
unsafe fn deliver(o: Outcome, out: *mut *mut c_char, verdict: *mut bool) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(StackresStatus::NullArgument, "`out` is null".into()));
    }
    let text = serde_json::to_string(&o.json).expect("reports serialize");
    *out = CString::new(text).expect("JSON has no NULs").into_raw();
    if !verdict.is_null() {
        *verdict = o.code == 0;
    }
    Ok(())
}

/// Parses and loads `json`. With `lint`, unknown fields and invalid objects
/// are dropped instead of rejected. On success `*out` owns a new instance.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn stackres_instance_parse(
    json: *const c_char,
    lint: bool,
    out: *mut *mut StackresInstance,
) -> StackresStatus {
    guard(|| {
        let text = required(json, "json")?;
        if out.is_null() {
            return Err(Fail(StackresStatus::NullArgument, "`out` is null".into()));
        }
        let mode = if lint { Mode::Lint } else { Mode::Strict };
        let session = Session::parse(text, mode)?;
        *out = Box::into_raw(Box::new(StackresInstance { session }));
        Ok(())
    })
}

/// Releases an instance. Null is ignored.
///
/// # Safety
/// `instance` must come from [`stackres_instance_parse`] and not be used
/// afterwards.
#[no_mangle]
pub unsafe extern "C" fn stackres_instance_free(instance: *mut StackresInstance) {
    if !instance.is_null() {
        drop(Box::from_raw(instance));
    }
}

/// Validates every object of the instance. `*valid` is false when some
/// object failed; the report lists them.
///
/// # Safety
/// Pointers must be valid; `valid` may be null.
#[no_mangle]
pub unsafe extern "C" fn stackres_validate(
    instance: *const StackresInstance,
    report: *mut *mut c_char,
    valid: *mut bool,
) -> StackresStatus {
    guard(|| {
        let o = self::instance(instance)?.session.validate()?;
        deliver(o, report, valid)
    })
}

/// Decides whether subgroupoids `sub_left` and `sub_right` give isomorphic
/// resolutions and whether they are related by a subgroupoid equivalence,
/// across `bimodule`, or across the identity of `groupoid` when `bimodule`
/// is null. `*verdict` is true when both hold and agree.
///
/// # Safety
/// String arguments must be NUL-terminated; `bimodule` or `groupoid` may be
/// null but not both; `verdict` may be null.
#[no_mangle]
pub unsafe extern "C" fn stackres_fundprop(
    instance: *const StackresInstance,
    bimodule: *const c_char,
    groupoid: *const c_char,
    stable: *const c_char,
    sub_left: *const c_char,
    sub_right: *const c_char,
    evidence: *mut *mut c_char,
    verdict: *mut bool,
) -> StackresStatus {
    guard(|| {
        let inst = self::instance(instance)?;
        let bimodule = optional(bimodule, "bimodule")?;
        let groupoid = optional(groupoid, "groupoid")?;
        if bimodule.is_none() && groupoid.is_none() {
            return Err(Fail(StackresStatus::NullArgument, "`bimodule` and `groupoid` are both null".into()));
        }
        let o = inst.session.fundprop(
            bimodule,
            groupoid,
            required(stable, "stable")?,
            required(sub_left, "sub_left")?,
            required(sub_right, "sub_right")?,
        )?;
        deliver(o, evidence, verdict)
    })
}

/// Runs subgroupoid `sub` of `groupoid` through the product construction
/// and back. `*ok` is true when it comes back unchanged.
///
/// # Safety
/// String arguments must be NUL-terminated; `ok` may be null.
#[no_mangle]
pub unsafe extern "C" fn stackres_roundtrip(
    instance: *const StackresInstance,
    groupoid: *const c_char,
    stable: *const c_char,
    sub: *const c_char,
    evidence: *mut *mut c_char,
    ok: *mut bool,
) -> StackresStatus {
    guard(|| {
        let inst = self::instance(instance)?;
        let o = inst.session.roundtrip(
            required(groupoid, "groupoid")?,
            required(stable, "stable")?,
            required(sub, "sub")?,
        )?;
        deliver(o, evidence, ok)
    })
}

/// Message for the last failure on this thread, empty after a success.
/// Valid until the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn stackres_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn stackres_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version, statically allocated.
#[no_mangle]
pub extern "C" fn stackres_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
