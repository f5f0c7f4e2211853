//! C ABI for chainforge.
//!
//! Groups, chains and families are opaque handles created from JSON
//! descriptors and released with the matching `*_free` function. Every entry
//! point returns a [`CfStatus`]; on failure [`cf_last_error`] describes the
//! most recent error on the calling thread. Strings returned through `char **`
//! out-parameters are owned by the caller and must be released with
//! [`cf_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use chainforge::chains::{stability_report, GroupChain};
use chainforge::groups::{core, Group, DEFAULT_MAX_ELEMENTS};
use chainforge::io::{parse_chain_spec, parse_family, parse_group, parse_subgroup};
use chainforge::profinite::{family_stability_report, FamilySpec};
use chainforge::taileq::family_tail_decide;
use chainforge::Error;

/// Result of every call. The non-zero values 2, 3 and 4 match the exit codes
/// of the command-line tool.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CfStatus {
    Ok = 0,
    /// Malformed input, failed precondition or invalid data.
    Spec = 2,
    /// An enumeration bound was exceeded.
    Resource = 3,
    /// An internal consistency check failed.
    Invariant = 4,
    /// A required pointer argument was null.
    NullArgument = 5,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 6,
    /// A value does not fit the output type.
    Overflow = 7,
    /// The library panicked; the handle arguments should be considered lost.
    Panic = 8,
}

/// A finite group.
pub struct CfGroup(Group);

/// A validated chain of subgroups.
pub struct CfChain(GroupChain);

/// A family of unitriangular subgroups over a list of primes.
pub struct CfFamily(FamilySpec);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(err: &Error) -> CfStatus {
    match err.exit_code() {
        3 => CfStatus::Resource,
        4 => CfStatus::Invariant,
        _ => CfStatus::Spec,
    }
}

struct Fail(CfStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

impl From<serde_json::Error> for Fail {
    fn from(e: serde_json::Error) -> Self {
        Fail(CfStatus::Spec, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> CfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            CfStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside chainforge");
            CfStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(Fail(CfStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Fail(CfStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn read_json(s: *const c_char, what: &str) -> Result<serde_json::Value, Fail> {
    let text = read_str(s, what)?;
    serde_json::from_str(text).map_err(|e| Fail(CfStatus::Spec, format!("{what}: {e}")))
}

fn non_null<T>(p: *const T, what: &str) -> Result<(), Fail> {
    if p.is_null() {
        Err(Fail(CfStatus::NullArgument, format!("{what} is null")))
    } else {
        Ok(())
    }
}

fn bound(max_elements: usize) -> usize {
    if max_elements == 0 {
        DEFAULT_MAX_ELEMENTS
    } else {
        max_elements
    }
}

fn to_u64(x: u128) -> Result<u64, Fail> {
    u64::try_from(x).map_err(|_| Fail(CfStatus::Overflow, format!("{x} does not fit in 64 bits")))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    let c = CString::new(s).map_err(|_| Fail(CfStatus::Invariant, "output contains a NUL byte".into()))?;
    *out = c.into_raw();
    Ok(())
}

/// Message for the last failed call on this thread. Empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn cf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn cf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn cf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a group descriptor. `max_elements` bounds enumeration (0 for the
/// default).
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn cf_group_from_json(
    json: *const c_char,
    max_elements: usize,
    out: *mut *mut CfGroup,
) -> CfStatus {
    guard(|| {
        non_null(out, "out")?;
        let v = read_json(json, "json")?;
        let g = parse_group(&v, "group")?.with_max_elements(bound(max_elements));
        *out = Box::into_raw(Box::new(CfGroup(g)));
        Ok(())
    })
}

/// # Safety
/// `group` must come from [`cf_group_from_json`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn cf_group_free(group: *mut CfGroup) {
    if !group.is_null() {
        drop(Box::from_raw(group));
    }
}

/// # Safety
/// `group` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cf_group_order(group: *const CfGroup, out: *mut u64) -> CfStatus {
    guard(|| {
        non_null(group, "group")?;
        non_null(out, "out")?;
        *out = to_u64((*group).0.order()?)?;
        Ok(())
    })
}

/// Order of the normal core of a subgroup given by a subgroup descriptor.
///
/// # Safety
/// `group` must be a live handle, `subgroup_json` NUL-terminated, `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn cf_core_order(
    group: *const CfGroup,
    subgroup_json: *const c_char,
    out: *mut u64,
) -> CfStatus {
    guard(|| {
        non_null(group, "group")?;
        non_null(out, "out")?;
        let g = &(*group).0;
        let h = parse_subgroup(g, &read_json(subgroup_json, "subgroup_json")?, "subgroup")?;
        *out = to_u64(core(g, &h)?.order()?)?;
        Ok(())
    })
}

/// Parses a chain spec (explicit or family form) into a chain.
///
/// # Safety
/// `json` must be NUL-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cf_chain_from_json(
    json: *const c_char,
    max_elements: usize,
    out: *mut *mut CfChain,
) -> CfStatus {
    guard(|| {
        non_null(out, "out")?;
        let v = read_json(json, "json")?;
        let max = bound(max_elements);
        let chain = parse_chain_spec(&v, max)?.to_chain(max)?;
        *out = Box::into_raw(Box::new(CfChain(chain)));
        Ok(())
    })
}

/// # Safety
/// `chain` must come from [`cf_chain_from_json`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn cf_chain_free(chain: *mut CfChain) {
    if !chain.is_null() {
        drop(Box::from_raw(chain));
    }
}

/// # Safety
/// `chain` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cf_chain_depth(chain: *const CfChain, out: *mut usize) -> CfStatus {
    guard(|| {
        non_null(chain, "chain")?;
        non_null(out, "out")?;
        *out = (*chain).0.depth();
        Ok(())
    })
}

/// Index `[G_0 : G_level]`.
///
/// # Safety
/// `chain` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cf_chain_index(chain: *const CfChain, level: usize, out: *mut u64) -> CfStatus {
    guard(|| {
        non_null(chain, "chain")?;
        non_null(out, "out")?;
        let indices = (*chain).0.indices();
        let idx = indices.get(level).ok_or_else(|| {
            Fail(CfStatus::Spec, format!("level {level} exceeds depth {}", indices.len() - 1))
        })?;
        *out = to_u64(*idx)?;
        Ok(())
    })
}

/// Stability report of the chain as JSON.
///
/// # Safety
/// `chain` must be a live handle and `out` writable; free the result with
/// [`cf_string_free`].
#[no_mangle]
pub unsafe extern "C" fn cf_chain_report_json(chain: *const CfChain, out: *mut *mut c_char) -> CfStatus {
    guard(|| {
        non_null(chain, "chain")?;
        non_null(out, "out")?;
        let report = stability_report(&(*chain).0)?;
        write_string(out, serde_json::to_string(&report)?)
    })
}

/// Parses a family spec `{"primes":[…],"bits":[…]}`.
///
/// # Safety
/// `json` must be NUL-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cf_family_from_json(json: *const c_char, out: *mut *mut CfFamily) -> CfStatus {
    guard(|| {
        non_null(out, "out")?;
        let fam = parse_family(&read_json(json, "json")?, "family")?;
        *out = Box::into_raw(Box::new(CfFamily(fam)));
        Ok(())
    })
}

/// # Safety
/// `family` must come from [`cf_family_from_json`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn cf_family_free(family: *mut CfFamily) {
    if !family.is_null() {
        drop(Box::from_raw(family));
    }
}

/// Stability report of the family computed from its product form, as JSON.
///
/// # Safety
/// `family` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cf_family_report_json(family: *const CfFamily, out: *mut *mut c_char) -> CfStatus {
    guard(|| {
        non_null(family, "family")?;
        non_null(out, "out")?;
        let report = family_stability_report(&(*family).0)?;
        write_string(out, serde_json::to_string(&report)?)
    })
}

/// Tail comparison of two families over their first `window` indices (0 for
/// all of them). `*equivalent` is set to 1 when the bits agree on a tail of
/// the window, 0 otherwise; `verdict_json` may be null.
///
/// # Safety
/// Handles must be live, `equivalent` writable, and `verdict_json` null or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn cf_family_compare(
    left: *const CfFamily,
    right: *const CfFamily,
    window: usize,
    equivalent: *mut i32,
    verdict_json: *mut *mut c_char,
) -> CfStatus {
    guard(|| {
        non_null(left, "left")?;
        non_null(right, "right")?;
        non_null(equivalent, "equivalent")?;
        let w = (window > 0).then_some(window);
        let verdict = family_tail_decide(&(*left).0, &(*right).0, w)?;
        *equivalent = verdict.is_equivalent() as i32;
        if !verdict_json.is_null() {
            write_string(verdict_json, serde_json::to_string(&verdict)?)?;
        }
        Ok(())
    })
}
