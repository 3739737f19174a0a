//! C ABI for envlab.
//!
//! Models are opaque handles. Every call returns an [`EnvlabStatus`]; results
//! come back as NUL-terminated JSON strings owned by the caller and released
//! with [`envlab_string_free`]. The message of the last failure on the
//! calling thread is available from [`envlab_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use envlab::cli::{
    cmd_compute, cmd_verify, parse_rat, ComputeKind, Format, ModelSpec, RunConfig, VerifySuite, EXIT_OK, EXIT_VIOLATION,
};
use envlab::models::Model;
use envlab::ring::rat;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnvlabStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    /// The computation ran and reported a violated identity; the JSON
    /// diagnostic is still returned.
    Violation = 4,
    Internal = 5,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnvlabCompute {
    Walls = 0,
    Resonances = 1,
    Order = 2,
    Stab = 3,
    Limit = 4,
    Rmatrix = 5,
    Interface = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnvlabSuite {
    Quasiperiods = 0,
    Orthogonality = 1,
    Factorization = 2,
    Mirror = 3,
    All = 4,
}

/// Opaque model handle.
pub struct EnvlabModel {
    spec: ModelSpec,
    model: Model,
    labels: Vec<CString>,
    name: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let s = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(s).unwrap_or_default());
}

struct Fail(EnvlabStatus, String);

fn guard(f: impl FnOnce() -> Result<EnvlabStatus, Fail>) -> EnvlabStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err(Fail(s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal error");
            EnvlabStatus::Internal
        }
    }
}

unsafe fn opt_str<'a>(p: *const c_char) -> Result<Option<&'a str>, Fail> {
    if p.is_null() {
        return Ok(None);
    }
    CStr::from_ptr(p)
        .to_str()
        .map(Some)
        .map_err(|_| Fail(EnvlabStatus::InvalidUtf8, "argument is not UTF-8".into()))
}

unsafe fn req_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    opt_str(p)?.ok_or_else(|| Fail(EnvlabStatus::NullPointer, format!("{what} is null")))
}

fn invalid(e: impl std::fmt::Display) -> Fail {
    Fail(EnvlabStatus::InvalidArgument, e.to_string())
}

fn new_handle(spec: ModelSpec) -> Result<Box<EnvlabModel>, Fail> {
    let cfg = config(&spec, None, 1, None)?;
    let model = cfg.load().map_err(invalid)?;
    let labels = model
        .labels()
        .into_iter()
        .map(|l| CString::new(l).map_err(invalid))
        .collect::<Result<_, _>>()?;
    let name = CString::new(model.name.clone()).map_err(invalid)?;
    Ok(Box::new(EnvlabModel {
        spec,
        model,
        labels,
        name,
    }))
}

fn config(spec: &ModelSpec, slope: Option<&str>, chamber: i32, range: Option<(&str, &str)>) -> Result<RunConfig, Fail> {
    let slope = slope.map(parse_rat).transpose().map_err(invalid)?;
    let range = match range {
        Some((lo, hi)) => (parse_rat(lo).map_err(invalid)?, parse_rat(hi).map_err(invalid)?),
        None => (rat(0, 1), rat(1, 1)),
    };
    if range.0 > range.1 {
        return Err(invalid("range is empty"));
    }
    Ok(RunConfig {
        model: spec.clone(),
        slope,
        chamber: if chamber >= 0 { 1 } else { -1 },
        range,
        trunc: rat(6, 1),
        lattice: None,
        format: Format::Json,
        out: None,
    })
}

unsafe fn emit(text: String, code: i32, out: *mut *mut c_char) -> Result<EnvlabStatus, Fail> {
    let status = match code {
        EXIT_OK => EnvlabStatus::Ok,
        EXIT_VIOLATION => EnvlabStatus::Violation,
        _ => return Err(invalid(text.trim_start_matches("error: ").trim_end())),
    };
    let s = CString::new(text).map_err(invalid)?;
    *out = s.into_raw();
    if status == EnvlabStatus::Violation {
        set_error("identity violated; see the returned report");
    }
    Ok(status)
}

/// Creates a built-in model: `"toy"`, `"cotangent"` or `"hilb"` (with `n`
/// points; `n` is ignored otherwise).
///
/// # Safety
/// `name` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn envlab_model_new(name: *const c_char, n: u32, out: *mut *mut EnvlabModel) -> EnvlabStatus {
    guard(|| {
        if out.is_null() {
            return Err(Fail(EnvlabStatus::NullPointer, "out is null".into()));
        }
        let spec = match req_str(name, "name")? {
            "toy" => ModelSpec::Toy,
            "cotangent" => ModelSpec::Cotangent,
            "hilb" if n >= 1 => ModelSpec::Hilb(n),
            "hilb" => return Err(invalid("hilb needs n >= 1")),
            other => return Err(invalid(format!("unknown model '{other}'"))),
        };
        *out = Box::into_raw(new_handle(spec)?);
        Ok(EnvlabStatus::Ok)
    })
}

/// Loads a model from a JSON file.
///
/// # Safety
/// `path` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn envlab_model_load(path: *const c_char, out: *mut *mut EnvlabModel) -> EnvlabStatus {
    guard(|| {
        if out.is_null() {
            return Err(Fail(EnvlabStatus::NullPointer, "out is null".into()));
        }
        let path = PathBuf::from(req_str(path, "path")?);
        *out = Box::into_raw(new_handle(ModelSpec::File(path))?);
        Ok(EnvlabStatus::Ok)
    })
}

/// Releases a model. Null is ignored.
///
/// # Safety
/// `model` must come from a constructor above and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn envlab_model_free(model: *mut EnvlabModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Number of fixed points, 0 for null.
///
/// # Safety
/// `model` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn envlab_model_len(model: *const EnvlabModel) -> usize {
    model.as_ref().map_or(0, |m| m.model.len())
}

/// Model name, borrowed from the handle; null for a null handle.
///
/// # Safety
/// `model` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn envlab_model_name(model: *const EnvlabModel) -> *const c_char {
    model.as_ref().map_or(ptr::null(), |m| m.name.as_ptr())
}

/// Label of fixed point `i`, borrowed from the handle; null when out of range.
///
/// # Safety
/// `model` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn envlab_model_label(model: *const EnvlabModel, i: usize) -> *const c_char {
    model
        .as_ref()
        .and_then(|m| m.labels.get(i))
        .map_or(ptr::null(), |l| l.as_ptr())
}

/// Computes `kind` and returns its JSON document in `out`.
///
/// `slope`, `range_lo` and `range_hi` are exact rationals such as `"1/3"`
/// and may be null; the range defaults to `[0, 1]`. `chamber` is the sign
/// of the chamber.
///
/// # Safety
/// Pointers must be null or valid C strings; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn envlab_compute(
    model: *const EnvlabModel,
    kind: EnvlabCompute,
    slope: *const c_char,
    chamber: i32,
    range_lo: *const c_char,
    range_hi: *const c_char,
    out: *mut *mut c_char,
) -> EnvlabStatus {
    guard(|| {
        let m = model
            .as_ref()
            .ok_or_else(|| Fail(EnvlabStatus::NullPointer, "model is null".into()))?;
        if out.is_null() {
            return Err(Fail(EnvlabStatus::NullPointer, "out is null".into()));
        }
        let range = match (opt_str(range_lo)?, opt_str(range_hi)?) {
            (Some(lo), Some(hi)) => Some((lo, hi)),
            (None, None) => None,
            _ => return Err(invalid("give both ends of the range or neither")),
        };
        let cfg = config(&m.spec, opt_str(slope)?, chamber, range)?;
        let kind = match kind {
            EnvlabCompute::Walls => ComputeKind::Walls,
            EnvlabCompute::Resonances => ComputeKind::Resonances,
            EnvlabCompute::Order => ComputeKind::Order,
            EnvlabCompute::Stab => ComputeKind::Stab,
            EnvlabCompute::Limit => ComputeKind::Limit,
            EnvlabCompute::Rmatrix => ComputeKind::Rmatrix,
            EnvlabCompute::Interface => ComputeKind::Interface,
        };
        let o = cmd_compute(kind, &cfg);
        emit(o.text, o.code, out)
    })
}

/// Runs a verification suite and returns the JSON report in `out`.
/// Returns `Violation` (with the report) when a check fails.
///
/// # Safety
/// `slope` must be null or a valid C string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn envlab_verify(
    model: *const EnvlabModel,
    suite: EnvlabSuite,
    slope: *const c_char,
    chamber: i32,
    out: *mut *mut c_char,
) -> EnvlabStatus {
    guard(|| {
        let m = model
            .as_ref()
            .ok_or_else(|| Fail(EnvlabStatus::NullPointer, "model is null".into()))?;
        if out.is_null() {
            return Err(Fail(EnvlabStatus::NullPointer, "out is null".into()));
        }
        let cfg = config(&m.spec, opt_str(slope)?, chamber, None)?;
        let suite = match suite {
            EnvlabSuite::Quasiperiods => VerifySuite::Quasiperiods,
            EnvlabSuite::Orthogonality => VerifySuite::Orthogonality,
            EnvlabSuite::Factorization => VerifySuite::Factorization,
            EnvlabSuite::Mirror => VerifySuite::Mirror,
            EnvlabSuite::All => VerifySuite::All,
        };
        let o = cmd_verify(suite, &cfg);
        emit(o.text, o.code, out)
    })
}

/// Message of the last failure on this thread; empty if none. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn envlab_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned through an `out` parameter. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn envlab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version.
#[no_mangle]
pub extern "C" fn envlab_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
