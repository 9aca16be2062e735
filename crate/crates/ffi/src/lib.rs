//! C interface to the curriculum-bn engine.
//!
//! Models are opaque handles created by `cbn_model_default` or
//! `cbn_model_load` and released with `cbn_model_free`. Every fallible call
//! returns a `CbnStatus`; on failure the thread's last error is set and
//! `cbn_last_error` returns it as an `{"error":{...}}` JSON document.
//! Strings returned through out-parameters are owned by the caller and must
//! be released with `cbn_string_free`.
//!
//! A handle is immutable once created and may be shared between threads.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use curriculum_bn::app::{ApiError, Endpoint, Renderer, Service};
use curriculum_bn::curriculum::build_default_model;
use curriculum_bn::inference::{evidence_likelihood, posterior_marginal};
use curriculum_bn::model::{load_model, Evidence};
use curriculum_bn::ErrorCode;

/// Result of a C interface call. Values other than `Ok` and `NullPointer`
/// mirror the engine's error codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CbnStatus {
    Ok = 0,
    UsageError = 1,
    ParseError = 2,
    SchemaError = 3,
    ValidationError = 4,
    UnknownSymbol = 5,
    ImpossibleEvidence = 6,
    DegenerateBaseline = 7,
    SizeLimit = 8,
    NullPointer = 9,
    BufferTooSmall = 10,
    Internal = 11,
}

impl From<ErrorCode> for CbnStatus {
    fn from(code: ErrorCode) -> Self {
        match code {
            ErrorCode::UsageError => CbnStatus::UsageError,
            ErrorCode::ParseError => CbnStatus::ParseError,
            ErrorCode::SchemaError => CbnStatus::SchemaError,
            ErrorCode::ValidationError => CbnStatus::ValidationError,
            ErrorCode::UnknownSymbol => CbnStatus::UnknownSymbol,
            ErrorCode::ImpossibleEvidence => CbnStatus::ImpossibleEvidence,
            ErrorCode::DegenerateBaseline => CbnStatus::DegenerateBaseline,
            ErrorCode::SizeLimit => CbnStatus::SizeLimit,
        }
    }
}

/// Opaque model handle.
pub struct CbnModel {
    service: Service,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(json: String) {
    let text = CString::new(json).unwrap_or_else(|_| CString::new("{\"error\":{}}").unwrap());
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(text));
}

fn fail(status: CbnStatus, err: ApiError) -> CbnStatus {
    set_last_error(err.to_json());
    status
}

fn api_fail(err: ApiError) -> CbnStatus {
    fail(err.code.into(), err)
}

fn null(what: &str) -> CbnStatus {
    fail(
        CbnStatus::NullPointer,
        ApiError::new(ErrorCode::UsageError, format!("{what} is null"), what),
    )
}

/// Runs `f`, turning panics into `Internal` and clearing the last error on
/// success.
fn guard(f: impl FnOnce() -> CbnStatus) -> CbnStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(CbnStatus::Ok) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            CbnStatus::Ok
        }
        Ok(status) => status,
        Err(_) => fail(
            CbnStatus::Internal,
            ApiError::new(ErrorCode::UsageError, "internal panic", ""),
        ),
    }
}

/// # Safety
/// `p` is null or a valid NUL-terminated string.
unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, CbnStatus> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        fail(
            CbnStatus::ParseError,
            ApiError::new(ErrorCode::ParseError, format!("{what} is not UTF-8"), what),
        )
    })
}

fn into_handle(net: curriculum_bn::model::BayesianNetwork, out: *mut *mut CbnModel) -> CbnStatus {
    let handle = Box::new(CbnModel {
        service: Service::new(net, Renderer::default()),
    });
    // SAFETY: checked non-null by callers.
    unsafe { *out = Box::into_raw(handle) };
    CbnStatus::Ok
}

/// Creates a handle for the bundled curriculum model.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn cbn_model_default(out: *mut *mut CbnModel) -> CbnStatus {
    guard(|| {
        if out.is_null() {
            return null("out");
        }
        into_handle(build_default_model(), out)
    })
}

/// Parses and validates a model document (JSON text).
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cbn_model_load(json: *const c_char, out: *mut *mut CbnModel) -> CbnStatus {
    guard(|| {
        if out.is_null() {
            return null("out");
        }
        let json = match text(json, "json") {
            Ok(s) => s,
            Err(status) => return status,
        };
        match load_model(json) {
            Ok(net) => into_handle(net, out),
            Err(e) => api_fail(e.into()),
        }
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `model` is null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cbn_model_free(model: *mut CbnModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Answers a JSON request. `endpoint` is one of `model`, `infer`, `map`,
/// `joint`, `likelihood`, `impact`, `plan`, `whatif`; request and response
/// bodies are those of the HTTP service. On success `*out_json` receives a
/// string to free with `cbn_string_free`.
///
/// # Safety
/// `model` is a live handle; `endpoint` and `request` are NUL-terminated
/// strings; `out_json` is writable.
#[no_mangle]
pub unsafe extern "C" fn cbn_query(
    model: *const CbnModel,
    endpoint: *const c_char,
    request: *const c_char,
    out_json: *mut *mut c_char,
) -> CbnStatus {
    guard(|| {
        if model.is_null() {
            return null("model");
        }
        if out_json.is_null() {
            return null("out_json");
        }
        let (endpoint, request) = match (text(endpoint, "endpoint"), text(request, "request")) {
            (Ok(e), Ok(r)) => (e, r),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        let endpoint: Endpoint = match endpoint.parse() {
            Ok(e) => e,
            Err(e) => return api_fail(e),
        };
        match (*model).service.handle(endpoint, request) {
            Ok(body) => {
                *out_json = CString::new(body).expect("JSON has no NUL").into_raw();
                CbnStatus::Ok
            }
            Err(e) => api_fail(e),
        }
    })
}

/// Posterior distribution of `query` given comma-separated `Var=state`
/// evidence, written in state order to `out_probs`. `*out_len` receives the
/// number of states; if it exceeds `capacity` nothing is written and
/// `BufferTooSmall` is returned.
///
/// # Safety
/// `model` is a live handle; strings are NUL-terminated; `out_probs` points
/// to `capacity` doubles; `out_len` is writable.
#[no_mangle]
pub unsafe extern "C" fn cbn_posterior(
    model: *const CbnModel,
    evidence: *const c_char,
    query: *const c_char,
    out_probs: *mut f64,
    capacity: usize,
    out_len: *mut usize,
) -> CbnStatus {
    guard(|| {
        if model.is_null() {
            return null("model");
        }
        if out_len.is_null() {
            return null("out_len");
        }
        let (evidence, query) = match (text(evidence, "evidence"), text(query, "query")) {
            (Ok(e), Ok(q)) => (e, q),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        let result = Evidence::parse(evidence).and_then(|e| posterior_marginal((*model).service.network(), &e, query));
        match result {
            Ok(dist) => {
                let n = dist.probabilities.len();
                *out_len = n;
                if n > capacity {
                    return fail(
                        CbnStatus::BufferTooSmall,
                        ApiError::new(ErrorCode::UsageError, format!("need room for {n} values"), "capacity"),
                    );
                }
                if out_probs.is_null() {
                    return null("out_probs");
                }
                ptr::copy_nonoverlapping(dist.probabilities.as_ptr(), out_probs, n);
                CbnStatus::Ok
            }
            Err(e) => api_fail(e.into()),
        }
    })
}

/// Probability of comma-separated `Var=state` evidence.
///
/// # Safety
/// `model` is a live handle; `evidence` is NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cbn_likelihood(model: *const CbnModel, evidence: *const c_char, out: *mut f64) -> CbnStatus {
    guard(|| {
        if model.is_null() {
            return null("model");
        }
        if out.is_null() {
            return null("out");
        }
        let evidence = match text(evidence, "evidence") {
            Ok(e) => e,
            Err(s) => return s,
        };
        match Evidence::parse(evidence).and_then(|e| evidence_likelihood((*model).service.network(), &e)) {
            Ok(p) => {
                *out = p;
                CbnStatus::Ok
            }
            Err(e) => api_fail(e.into()),
        }
    })
}

/// The calling thread's last error as JSON, or null after a successful
/// call. The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn cbn_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` is null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cbn_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
