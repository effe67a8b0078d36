//! C ABI bindings for the varlab engine.
//!
//! Conventions shared by every function here:
//!
//! * Opaque handles ([`VarlabTables`], [`VarlabVariety`]) are created by the
//!   `*_new` constructors and released by the matching `*_free` functions;
//!   a null return means failure, with the cause available through
//!   [`varlab_last_error_message`].
//! * Functions returning `char *` transfer ownership of a NUL-terminated
//!   UTF-8 string to the caller, who must release it with
//!   [`varlab_string_free`]. A null return signals an error.
//! * Status-returning functions yield [`VARLAB_OK`] (zero) on success and a
//!   negative `VARLAB_ERR_*` code on failure.
//! * The error message is thread-local and overwritten by the next failure
//!   on the same thread; copy it out before calling back in.
//! * Panics never cross the boundary: they are caught and reported as
//!   [`VARLAB_ERR_INTERNAL`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use serde_json::{json, Value};

use varlab::coherence::{classify_alternating, solve_coherence, LAMBDA_TARGET, LAMBDA_TERMS};
use varlab::fdalg::gray_counterexample;
use varlab::flatkappa::{analyze_kappa, standard_pair, DegreeBound};
use varlab::poly::scalar_to_string;
use varlab::tideal::Tables;
use varlab::variety::{
    parse_identity, resolve_variety, variety_from_json, VarietyPresentation,
};
use varlab::words::{Multidegree, VarId};

/// Success.
pub const VARLAB_OK: i32 = 0;
/// A required pointer argument was null.
pub const VARLAB_ERR_NULL: i32 = -1;
/// A string argument was not valid UTF-8.
pub const VARLAB_ERR_UTF8: i32 = -2;
/// Parsing or validation of the input failed.
pub const VARLAB_ERR_INPUT: i32 = -3;
/// An internal invariant failed (a caught panic).
pub const VARLAB_ERR_INTERNAL: i32 = -4;

/// Opaque handle to the memoised law tables (and optional on-disk cache).
pub struct VarlabTables {
    inner: Tables,
}

/// Opaque handle to a variety presentation.
pub struct VarlabVariety {
    inner: VarietyPresentation,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> =
        RefCell::new(CString::new("no error").expect("static message"));
}

fn set_error(message: &str) {
    let clean = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(clean).expect("NUL bytes removed");
    });
}

/// Reads a required C string argument.
///
/// # Safety
/// `p` must be null or point to a NUL-terminated string.
unsafe fn required_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, i32> {
    if p.is_null() {
        set_error(&format!("{what} must not be null"));
        return Err(VARLAB_ERR_NULL);
    }
    match CStr::from_ptr(p).to_str() {
        Ok(s) => Ok(s),
        Err(_) => {
            set_error(&format!("{what} is not valid UTF-8"));
            Err(VARLAB_ERR_UTF8)
        }
    }
}

fn give_string(s: String) -> *mut c_char {
    let clean = s.replace('\0', " ");
    CString::new(clean).expect("NUL bytes removed").into_raw()
}

fn catching_status(f: impl FnOnce() -> i32) -> i32 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(code) => code,
        Err(payload) => {
            set_error(&panic_text(payload));
            VARLAB_ERR_INTERNAL
        }
    }
}

fn catching_ptr<T>(f: impl FnOnce() -> *mut T) -> *mut T {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(p) => p,
        Err(payload) => {
            set_error(&panic_text(payload));
            ptr::null_mut()
        }
    }
}

fn panic_text(payload: Box<dyn std::any::Any + Send>) -> String {
    let detail = payload
        .downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| payload.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "unknown panic".to_string());
    format!("internal error: {detail}")
}

/// Returns the message describing the most recent failure on this thread.
///
/// The pointer stays valid until the next failing call on the same thread;
/// never free it.
#[no_mangle]
pub extern "C" fn varlab_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a pointer previously returned by a `varlab_*`
/// function that documents string ownership transfer, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn varlab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Creates the law tables. `cache_dir` may be null for a purely in-memory
/// instance, or a directory path for a persistent consequence-space cache.
///
/// # Safety
/// `cache_dir` must be null or a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn varlab_tables_new(cache_dir: *const c_char) -> *mut VarlabTables {
    catching_ptr(|| {
        let dir = if cache_dir.is_null() {
            None
        } else {
            match required_str(cache_dir, "cache_dir") {
                Ok(s) => Some(PathBuf::from(s)),
                Err(_) => return ptr::null_mut(),
            }
        };
        Box::into_raw(Box::new(VarlabTables {
            inner: Tables::new(dir),
        }))
    })
}

/// Releases a tables handle. Null is ignored.
///
/// # Safety
/// `t` must be null or an unfreed pointer from [`varlab_tables_new`].
#[no_mangle]
pub unsafe extern "C" fn varlab_tables_free(t: *mut VarlabTables) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Resolves a variety selector: `builtin:<key>` (for example
/// `builtin:lie`) or a path to a presentation file.
///
/// # Safety
/// `spec` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn varlab_variety_new(spec: *const c_char) -> *mut VarlabVariety {
    catching_ptr(|| {
        let spec = match required_str(spec, "spec") {
            Ok(s) => s,
            Err(_) => return ptr::null_mut(),
        };
        match resolve_variety(spec) {
            Ok(v) => Box::into_raw(Box::new(VarlabVariety { inner: v })),
            Err(e) => {
                set_error(&e);
                ptr::null_mut()
            }
        }
    })
}

/// Parses a presentation from JSON text of the form
/// `{"name": "...", "identities": ["x*x", ...]}`.
///
/// # Safety
/// `json_text` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn varlab_variety_from_json(
    json_text: *const c_char,
) -> *mut VarlabVariety {
    catching_ptr(|| {
        let text = match required_str(json_text, "json_text") {
            Ok(s) => s,
            Err(_) => return ptr::null_mut(),
        };
        match variety_from_json(text) {
            Ok(v) => Box::into_raw(Box::new(VarlabVariety { inner: v })),
            Err(e) => {
                set_error(&e.to_string());
                ptr::null_mut()
            }
        }
    })
}

/// Returns the presentation's name as a fresh string.
///
/// # Safety
/// `v` must be an unfreed pointer from a variety constructor.
#[no_mangle]
pub unsafe extern "C" fn varlab_variety_name(v: *const VarlabVariety) -> *mut c_char {
    catching_ptr(|| {
        if v.is_null() {
            set_error("variety must not be null");
            return ptr::null_mut();
        }
        give_string((*v).inner.name().to_string())
    })
}

/// Releases a variety handle. Null is ignored.
///
/// # Safety
/// `v` must be null or an unfreed pointer from a variety constructor.
#[no_mangle]
pub unsafe extern "C" fn varlab_variety_free(v: *mut VarlabVariety) {
    if !v.is_null() {
        drop(Box::from_raw(v));
    }
}

/// Decides whether `identity` is a law of the variety, writing the verdict
/// to `out_is_law`.
///
/// # Safety
/// `t` and `v` must be live handles, `identity` a NUL-terminated string and
/// `out_is_law` a valid, writable pointer.
#[no_mangle]
pub unsafe extern "C" fn varlab_is_law(
    t: *const VarlabTables,
    v: *const VarlabVariety,
    identity: *const c_char,
    out_is_law: *mut bool,
) -> i32 {
    catching_status(|| {
        if t.is_null() || v.is_null() || out_is_law.is_null() {
            set_error("tables, variety and out_is_law must not be null");
            return VARLAB_ERR_NULL;
        }
        let src = match required_str(identity, "identity") {
            Ok(s) => s,
            Err(code) => return code,
        };
        let parsed = match parse_identity(src) {
            Ok(i) => i,
            Err(e) => {
                set_error(&e.to_string());
                return VARLAB_ERR_INPUT;
            }
        };
        let check = (*t).inner.is_law(&(*v).inner, parsed.poly());
        *out_is_law = check.holds;
        VARLAB_OK
    })
}

/// Reduces a polynomial to its normal form modulo the variety's laws and
/// returns it as text.
///
/// # Safety
/// `t` and `v` must be live handles and `polynomial` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn varlab_reduce(
    t: *const VarlabTables,
    v: *const VarlabVariety,
    polynomial: *const c_char,
) -> *mut c_char {
    catching_ptr(|| {
        if t.is_null() || v.is_null() {
            set_error("tables and variety must not be null");
            return ptr::null_mut();
        }
        let src = match required_str(polynomial, "polynomial") {
            Ok(s) => s,
            Err(_) => return ptr::null_mut(),
        };
        match parse_identity(src) {
            Ok(parsed) => {
                let reduced = (*t).inner.reduce(&(*v).inner, parsed.poly());
                give_string(reduced.to_string())
            }
            Err(e) => {
                set_error(&e.to_string());
                ptr::null_mut()
            }
        }
    })
}

/// Runs the eight-parameter rewriting criterion and returns a JSON report
/// (`solvable`, `particular`, `freedom`, `freedom_rank`).
///
/// # Safety
/// `t` and `v` must be live handles.
#[no_mangle]
pub unsafe extern "C" fn varlab_coherence_json(
    t: *const VarlabTables,
    v: *const VarlabVariety,
) -> *mut c_char {
    catching_ptr(|| {
        if t.is_null() || v.is_null() {
            set_error("tables and variety must not be null");
            return ptr::null_mut();
        }
        let solution = solve_coherence(&(*t).inner, &(*v).inner);
        let value = json!({
            "variety": (*v).inner.name(),
            "target": LAMBDA_TARGET,
            "terms": LAMBDA_TERMS,
            "solvable": solution.solvable,
            "particular": solution
                .particular
                .as_ref()
                .map(|p| p.iter().map(scalar_to_string).collect::<Vec<String>>()),
            "freedom": solution
                .freedom
                .iter()
                .map(|row| row.iter().map(scalar_to_string).collect::<Vec<String>>())
                .collect::<Vec<Vec<String>>>(),
            "freedom_rank": solution.freedom_rank(),
        });
        give_string(value.to_string())
    })
}

/// Classifies an alternating variety and returns a JSON report (`verdict`,
/// `jacobi`, `antiassociative`, `triple_products_vanish`, `coherent`).
/// Fails when `x*x` is not a law of the variety.
///
/// # Safety
/// `t` and `v` must be live handles.
#[no_mangle]
pub unsafe extern "C" fn varlab_classify_json(
    t: *const VarlabTables,
    v: *const VarlabVariety,
) -> *mut c_char {
    catching_ptr(|| {
        if t.is_null() || v.is_null() {
            set_error("tables and variety must not be null");
            return ptr::null_mut();
        }
        match classify_alternating(&(*t).inner, &(*v).inner) {
            Ok(report) => give_string(
                json!({
                    "variety": (*v).inner.name(),
                    "verdict": report.verdict.to_string(),
                    "jacobi": report.jacobi,
                    "antiassociative": report.antiassociative,
                    "triple_products_vanish": report.triple_products_vanish,
                    "coherent": report.coherent,
                })
                .to_string(),
            ),
            Err(e) => {
                set_error(&e.to_string());
                ptr::null_mut()
            }
        }
    })
}

/// Analyses the comparison map on the standard pair with `b_vars` operator
/// variables and `x_vars`/`y_vars` argument variables per factor, at total
/// merged degree ≤ `max_degree`, returning the full JSON report.
///
/// # Safety
/// `t` and `v` must be live handles.
#[no_mangle]
pub unsafe extern "C" fn varlab_kappa_json(
    t: *const VarlabTables,
    v: *const VarlabVariety,
    max_degree: u32,
    b_vars: u32,
    x_vars: u32,
    y_vars: u32,
) -> *mut c_char {
    catching_ptr(|| {
        if t.is_null() || v.is_null() {
            set_error("tables and variety must not be null");
            return ptr::null_mut();
        }
        if max_degree < 1 || b_vars < 1 || x_vars < 1 || y_vars < 1 {
            set_error("max_degree and alphabet sizes must be at least 1");
            return ptr::null_mut();
        }
        let tables = &(*t).inner;
        let variety = &(*v).inner;
        let pair = standard_pair(
            tables,
            variety,
            b_vars as usize,
            x_vars as usize,
            y_vars as usize,
            DegreeBound::by_total(max_degree),
        );
        let analysis = analyze_kappa(tables, variety, &pair);
        give_string(analysis.to_json(&pair).to_string())
    })
}

/// Computes the semidirect-product membership obstruction fixture and
/// returns its JSON report; pass `mutated = true` for the control with the
/// obstruction product removed.
#[no_mangle]
pub extern "C" fn varlab_gray_json(mutated: bool) -> *mut c_char {
    catching_ptr(|| give_string(gray_counterexample(mutated).to_json().to_string()))
}

/// Decides membership of the fixed associator query `x*(y*z) + (x*y)*z` in
/// the multilinear consequence space of one or more law sets. `laws_json`
/// may be null for the default pair of law sets, or a JSON array of identity
/// strings forming a single set.
///
/// # Safety
/// `t` must be a live handle; `laws_json` must be null or a NUL-terminated
/// string.
#[no_mangle]
pub unsafe extern "C" fn varlab_audit_lemma34_json(
    t: *const VarlabTables,
    laws_json: *const c_char,
) -> *mut c_char {
    catching_ptr(|| {
        if t.is_null() {
            set_error("tables must not be null");
            return ptr::null_mut();
        }
        let law_sets: Vec<Vec<String>> = if laws_json.is_null() {
            vec![
                vec!["x*(x*y)".to_string()],
                vec!["x*x".to_string(), "x*(x*y)".to_string()],
            ]
        } else {
            let text = match required_str(laws_json, "laws_json") {
                Ok(s) => s,
                Err(_) => return ptr::null_mut(),
            };
            match serde_json::from_str::<Vec<String>>(text) {
                Ok(set) => vec![set],
                Err(e) => {
                    set_error(&format!("laws_json must be a JSON string array: {e}"));
                    return ptr::null_mut();
                }
            }
        };
        let query = parse_identity("x*(y*z) + (x*y)*z").expect("fixed query parses");
        let degree = Multidegree::from_counts([
            (VarId::new("x").expect("valid"), 1),
            (VarId::new("y").expect("valid"), 1),
            (VarId::new("z").expect("valid"), 1),
        ]);
        let mut entries: Vec<Value> = Vec::new();
        for set in &law_sets {
            let mut identities = Vec::new();
            for src in set {
                match parse_identity(src) {
                    Ok(i) => identities.push(i),
                    Err(e) => {
                        set_error(&format!("law {src:?}: {e}"));
                        return ptr::null_mut();
                    }
                }
            }
            let variety = VarietyPresentation::new("audit", identities);
            let space = (*t).inner.consequence_space(&variety, &degree);
            entries.push(json!({ "laws": set, "member": space.contains(query.poly()) }));
        }
        give_string(
            json!({
                "query": query.poly().to_string(),
                "results": entries,
            })
            .to_string(),
        )
    })
}
