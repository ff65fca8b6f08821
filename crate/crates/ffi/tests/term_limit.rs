//! Own test binary: the cap is read once per process.

use std::ffi::{CStr, CString};
use std::ptr;

use strongnil_ffi::*;

#[test]
fn term_cap_maps_to_status() {
    std::env::set_var("STRONGNIL_MAX_TERMS", "2");
    unsafe {
        let mut m = ptr::null_mut();
        let name = CString::new("H6").unwrap();
        assert_eq!(strongnil_matrix_from_fixture(name.as_ptr(), 0, 0, &mut m), StrongnilStatus::TermLimit);
        let msg = CStr::from_ptr(strongnil_last_error()).to_str().unwrap();
        assert!(msg.contains("term limit 2"), "{msg}");
        assert!(m.is_null());
    }
}
