use std::ffi::{c_char, CStr, CString};
use std::ptr;

use envlab_ffi::*;
use serde_json::Value;

fn model(name: &str, n: u32) -> *mut EnvlabModel {
    let name = CString::new(name).unwrap();
    let mut m = ptr::null_mut();
    let st = unsafe { envlab_model_new(name.as_ptr(), n, &mut m) };
    assert_eq!(st, EnvlabStatus::Ok, "{}", last_error());
    m
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(envlab_last_error()) }
        .to_str()
        .unwrap()
        .to_string()
}

fn take(s: *mut c_char) -> Value {
    let v = serde_json::from_str(unsafe { CStr::from_ptr(s) }.to_str().unwrap()).unwrap();
    unsafe { envlab_string_free(s) };
    v
}

fn compute(m: *const EnvlabModel, kind: EnvlabCompute, slope: Option<&str>) -> (EnvlabStatus, Option<Value>) {
    let slope = slope.map(|s| CString::new(s).unwrap());
    let mut out = ptr::null_mut();
    let st = unsafe {
        envlab_compute(
            m,
            kind,
            slope.as_ref().map_or(ptr::null(), |s| s.as_ptr()),
            1,
            ptr::null(),
            ptr::null(),
            &mut out,
        )
    };
    (st, (!out.is_null()).then(|| take(out)))
}

#[test]
fn handle_metadata() {
    let m = model("hilb", 3);
    unsafe {
        assert_eq!(envlab_model_len(m), 3);
        assert_eq!(CStr::from_ptr(envlab_model_name(m)).to_str().unwrap(), "hilb3");
        assert!(envlab_model_label(m, 3).is_null());
        assert!(!envlab_model_label(m, 0).is_null());
        envlab_model_free(m);
        assert_eq!(envlab_model_len(ptr::null()), 0);
        envlab_model_free(ptr::null_mut());
        let v = CStr::from_ptr(envlab_version()).to_str().unwrap();
        assert_eq!(v, env!("CARGO_PKG_VERSION"));
    }
}

#[test]
fn walls_and_limit() {
    let m = model("hilb", 2);
    let (st, v) = compute(m, EnvlabCompute::Walls, None);
    assert_eq!(st, EnvlabStatus::Ok);
    assert_eq!(v.unwrap()["points"], serde_json::json!(["0", "1/2", "1"]));
    unsafe { envlab_model_free(m) };

    let t = model("toy", 0);
    let (st, v) = compute(t, EnvlabCompute::Limit, Some("1/3"));
    assert_eq!(st, EnvlabStatus::Ok);
    assert_eq!(v.unwrap()["entries"][1][0], "1/(-1 + 1*a)");
    let (st, v) = compute(t, EnvlabCompute::Rmatrix, Some("2/5"));
    assert_eq!(st, EnvlabStatus::Ok);
    assert_eq!(v.unwrap()["entries"], serde_json::json!([["1", "0"], ["0", "1"]]));
    unsafe { envlab_model_free(t) };
}

#[test]
fn range_arguments() {
    let t = model("toy", 0);
    let (lo, hi) = (CString::new("-1").unwrap(), CString::new("1").unwrap());
    let mut out = ptr::null_mut();
    let st = unsafe {
        envlab_compute(
            t,
            EnvlabCompute::Resonances,
            ptr::null(),
            1,
            lo.as_ptr(),
            hi.as_ptr(),
            &mut out,
        )
    };
    assert_eq!(st, EnvlabStatus::Ok);
    assert_eq!(take(out)["points"], serde_json::json!(["-1", "0", "1"]));
    let st = unsafe {
        envlab_compute(
            t,
            EnvlabCompute::Walls,
            ptr::null(),
            1,
            lo.as_ptr(),
            ptr::null(),
            &mut out,
        )
    };
    assert_eq!(st, EnvlabStatus::InvalidArgument);
    unsafe { envlab_model_free(t) };
}

#[test]
fn verify_reports() {
    let t = model("toy", 0);
    let mut out = ptr::null_mut();
    let st = unsafe { envlab_verify(t, EnvlabSuite::All, ptr::null(), 1, &mut out) };
    assert_eq!(st, EnvlabStatus::Ok);
    assert_eq!(take(out)["passed"], true);
    unsafe { envlab_model_free(t) };

    let h = model("hilb", 2);
    let half = CString::new("1/2").unwrap();
    let st = unsafe { envlab_verify(h, EnvlabSuite::Mirror, half.as_ptr(), 1, &mut out) };
    assert_eq!(st, EnvlabStatus::Violation);
    assert_eq!(take(out)["passed"], false);
    assert!(!last_error().is_empty());
    unsafe { envlab_model_free(h) };
}

#[test]
fn errors() {
    let mut m = ptr::null_mut();
    let bad = CString::new("nope").unwrap();
    assert_eq!(
        unsafe { envlab_model_new(bad.as_ptr(), 0, &mut m) },
        EnvlabStatus::InvalidArgument
    );
    assert!(last_error().contains("nope"));
    let hilb = CString::new("hilb").unwrap();
    assert_eq!(
        unsafe { envlab_model_new(hilb.as_ptr(), 0, &mut m) },
        EnvlabStatus::InvalidArgument
    );
    assert_eq!(
        unsafe { envlab_model_new(ptr::null(), 0, &mut m) },
        EnvlabStatus::NullPointer
    );
    assert_eq!(
        unsafe { envlab_model_new(hilb.as_ptr(), 2, ptr::null_mut()) },
        EnvlabStatus::NullPointer
    );
    let missing = CString::new("/nonexistent/model.json").unwrap();
    assert_eq!(
        unsafe { envlab_model_load(missing.as_ptr(), &mut m) },
        EnvlabStatus::InvalidArgument
    );

    let (st, v) = compute(ptr::null(), EnvlabCompute::Walls, None);
    assert_eq!((st, v), (EnvlabStatus::NullPointer, None));

    let t = model("toy", 0);
    let (st, v) = compute(t, EnvlabCompute::Limit, Some("0.3"));
    assert_eq!((st, v), (EnvlabStatus::InvalidArgument, None));
    assert!(last_error().contains("0.3"));
    let (st, _) = compute(t, EnvlabCompute::Stab, None);
    assert_eq!(st, EnvlabStatus::InvalidArgument);
    let raw = [0xffu8, 0];
    let mut out = ptr::null_mut();
    let st = unsafe {
        envlab_compute(
            t,
            EnvlabCompute::Stab,
            raw.as_ptr().cast(),
            1,
            ptr::null(),
            ptr::null(),
            &mut out,
        )
    };
    assert_eq!(st, EnvlabStatus::InvalidUtf8);
    unsafe { envlab_model_free(t) };
}
