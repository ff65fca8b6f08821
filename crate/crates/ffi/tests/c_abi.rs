use std::ffi::{c_char, CStr, CString};
use std::ptr;

use serde_json::Value;
use strongnil_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = strongnil_last_error();
    assert!(!p.is_null(), "expected an error message");
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

/// Takes ownership of a returned string and parses it.
fn take_json(p: *mut c_char) -> Value {
    assert!(!p.is_null());
    let v = serde_json::from_str(unsafe { CStr::from_ptr(p) }.to_str().unwrap()).unwrap();
    unsafe { strongnil_string_free(p) };
    v
}

fn matrix(json: &str) -> *mut StrongnilMatrix {
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { strongnil_matrix_from_json(c(json).as_ptr(), &mut m) }, StrongnilStatus::Ok);
    m
}

fn map(json: &str) -> *mut StrongnilMap {
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { strongnil_map_from_json(c(json).as_ptr(), &mut h) }, StrongnilStatus::Ok);
    h
}

const H4: &str = r#"{"n": 4, "H": ["0", "x1^2", "x1^3", "3*x2*x1^2 - 2*x3*x1"]}"#;

#[test]
fn h4_jacobian_indices() {
    let h = map(H4);
    let mut jac = ptr::null_mut();
    unsafe {
        assert_eq!(strongnil_map_jacobian(h, &mut jac), StrongnilStatus::Ok);
        let (mut size, mut regular, mut strong) = (0, 0, 0);
        assert_eq!(strongnil_matrix_size(jac, &mut size), StrongnilStatus::Ok);
        assert_eq!(strongnil_matrix_indices(jac, 0, &mut regular, &mut strong), StrongnilStatus::Ok);
        assert_eq!((size, regular, strong), (4, 2, 3));
        let mut out = ptr::null_mut();
        assert_eq!(strongnil_matrix_triangularize(jac, &mut out), StrongnilStatus::Ok);
        let v = take_json(out);
        assert_eq!(v["strongly_nilpotent"], true);
        assert_eq!(v["verified"], true);
        strongnil_matrix_free(jac);
        strongnil_map_free(h);
    }
}

#[test]
fn fixture_handles() {
    unsafe {
        let mut m = ptr::null_mut();
        assert_eq!(strongnil_matrix_from_fixture(c("dual").as_ptr(), 0, 4, &mut m), StrongnilStatus::Ok);
        let (mut regular, mut strong) = (0, 0);
        assert_eq!(strongnil_matrix_indices(m, 0, &mut regular, &mut strong), StrongnilStatus::Ok);
        assert_eq!(regular, 5);
        let mut out = ptr::null_mut();
        assert_eq!(strongnil_matrix_triangularize(m, &mut out), StrongnilStatus::Precondition);
        assert!(out.is_null());
        strongnil_matrix_free(m);

        // the free fixture arrives as its commutative image
        let mut m = ptr::null_mut();
        assert_eq!(strongnil_matrix_from_fixture(c("NC3").as_ptr(), 0, 0, &mut m), StrongnilStatus::Ok);
        assert_eq!(strongnil_matrix_indices(m, 0, &mut regular, &mut strong), StrongnilStatus::Ok);
        assert_eq!((regular, strong), (3, 0));
        strongnil_matrix_free(m);
        assert_eq!(strongnil_matrix_from_fixture(c("nope").as_ptr(), 0, 0, &mut m), StrongnilStatus::InvalidInput);
        assert!(last_error().contains("unknown fixture"));
    }
}

#[test]
fn zero_matrix_is_one_block() {
    let m = matrix(r#"{"n": 1, "m": 3, "M": [["0","0","0"],["0","0","0"],["0","0","0"]]}"#);
    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(strongnil_matrix_report(m, 0, &mut out), StrongnilStatus::Ok);
        let v = take_json(out);
        assert_eq!((v["regular"].as_u64(), v["strong"].as_u64()), (Some(1), Some(1)));
        assert_eq!(v["blocks"], serde_json::json!([3]));
        strongnil_matrix_free(m);
    }
}

#[test]
fn matrix_json_round_trip() {
    let m = matrix(r#"{"n": 2, "m": 2, "M": [["0", "0"], ["x1*x2 - 1/2", "0"]]}"#);
    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(strongnil_matrix_to_json(m, 2, &mut out), StrongnilStatus::Ok);
        let text = CStr::from_ptr(out).to_str().unwrap().to_owned();
        strongnil_string_free(out);
        let again = matrix(&text);
        let mut out2 = ptr::null_mut();
        assert_eq!(strongnil_matrix_to_json(again, 2, &mut out2), StrongnilStatus::Ok);
        assert_eq!(CStr::from_ptr(out2).to_str().unwrap(), text);
        strongnil_string_free(out2);
        strongnil_matrix_free(again);
        strongnil_matrix_free(m);
    }
}

#[test]
fn map_reports() {
    let qt3 = map(r#"{"n": 3, "H": ["0", "x1^2", "x1^3"]}"#);
    let h4 = map(H4);
    unsafe {
        let mut out = ptr::null_mut();
        assert_eq!(strongnil_map_report(h4, &mut out), StrongnilStatus::Ok);
        let v = take_json(out);
        assert_eq!(v["det_jf"], "1");
        assert_eq!(v["quasi_translation"], false);

        assert_eq!(strongnil_map_equivalences(h4, 3, 0, &mut out), StrongnilStatus::Ok);
        assert_eq!(take_json(out)["agree"], true);
        assert_eq!(strongnil_map_equivalences(h4, 3, 9, &mut out), StrongnilStatus::InvalidInput);
        assert!(out.is_null());

        assert_eq!(strongnil_map_check_qt(qt3, &mut out), StrongnilStatus::Ok);
        let v = take_json(out);
        assert_eq!(v["quasi_translation"], true);
        strongnil_map_free(qt3);
        strongnil_map_free(h4);
    }
}

#[test]
fn fixture_suite_and_nc() {
    unsafe {
        let mut out = ptr::null_mut();
        assert_eq!(strongnil_run_fixtures(&mut out), StrongnilStatus::Ok);
        let v = take_json(out);
        assert_eq!(v["all_pass"], true);
        assert_eq!(v["failed"], 0);

        assert_eq!(strongnil_nc_check(ptr::null(), &mut out), StrongnilStatus::Ok);
        let v = take_json(out);
        assert_eq!(v["strongly_nilpotent"], false);

        let free = c(r#"{"n": 2, "m": 2, "M": [["0", "0"], ["x1*x2 - x2*x1", "0"]]}"#);
        assert_eq!(strongnil_nc_check(free.as_ptr(), &mut out), StrongnilStatus::Ok);
        let v = take_json(out);
        assert_eq!(v["agree"], true);
    }
}

#[test]
fn bad_arguments() {
    unsafe {
        let mut m = ptr::null_mut();
        assert_eq!(strongnil_matrix_from_json(ptr::null(), &mut m), StrongnilStatus::NullPointer);
        assert_eq!(strongnil_matrix_from_json(c("{}").as_ptr(), ptr::null_mut()), StrongnilStatus::NullPointer);
        assert_eq!(strongnil_matrix_from_json(c("not json").as_ptr(), &mut m), StrongnilStatus::InvalidInput);
        assert!(last_error().contains("malformed JSON"));
        assert!(m.is_null());

        let bad_utf8 = [0xffu8, 0xfe, 0];
        assert_eq!(strongnil_matrix_from_json(bad_utf8.as_ptr().cast(), &mut m), StrongnilStatus::InvalidUtf8);

        let mut h = ptr::null_mut();
        let text = c(r#"{"n": 2, "H": ["x1 +", "0"]}"#);
        assert_eq!(strongnil_map_from_json(text.as_ptr(), &mut h), StrongnilStatus::InvalidInput);
        let msg = last_error();
        assert!(msg.contains("component 1") && msg.contains("position"), "{msg}");

        let mut n = 0;
        assert_eq!(strongnil_matrix_size(ptr::null(), &mut n), StrongnilStatus::NullPointer);
        let mut out = ptr::null_mut();
        assert_eq!(strongnil_map_report(ptr::null(), &mut out), StrongnilStatus::NullPointer);

        // success clears the message
        let ok = matrix(r#"{"n": 0, "m": 1, "M": [["0"]]}"#);
        assert!(strongnil_last_error().is_null());
        strongnil_matrix_free(ok);
        strongnil_matrix_free(ptr::null_mut());
        strongnil_map_free(ptr::null_mut());
        strongnil_string_free(ptr::null_mut());
    }
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(strongnil_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
