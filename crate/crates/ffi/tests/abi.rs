use std::ffi::{c_char, CStr, CString};
use std::ptr;

use weylkit::shadow::{table_shadow, two_class_weight_two, TableRow};
use weylkit_ffi::*;

fn take_string(p: *mut c_char) -> String {
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
    unsafe { wk_string_free(p) };
    s
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(wk_last_error()) }.to_str().unwrap().to_owned()
}

#[test]
fn decomposition_handle() {
    let delta = [1usize, 3];
    let mut h = ptr::null_mut();
    let mut swapped = true;
    assert_eq!(unsafe { wk_decompose(5, delta.as_ptr(), delta.len(), &mut h, &mut swapped) }, WK_OK);
    assert!(!swapped);
    let mut n = 0;
    assert_eq!(unsafe { wk_decomposition_orbit_count(h, &mut n) }, WK_OK);
    assert_eq!(n, 3);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { wk_decomposition_to_json(h, &mut s) }, WK_OK);
    let v: serde_json::Value = serde_json::from_str(&take_string(s)).unwrap();
    assert_eq!(v["orbits"], serde_json::json!([[1, 2, 3], [4], [5]]));
    unsafe { wk_decomposition_free(h) };
}

#[test]
fn empty_delta_may_be_null() {
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { wk_decompose(4, ptr::null(), 0, &mut h, ptr::null_mut()) }, WK_OK);
    let mut n = 0;
    unsafe { wk_decomposition_orbit_count(h, &mut n) };
    assert_eq!(n, 4);
    unsafe { wk_decomposition_free(h) };
}

#[test]
fn decompose_errors() {
    let mut h = ptr::null_mut();
    let bad = [9usize];
    assert_eq!(unsafe { wk_decompose(4, bad.as_ptr(), 1, &mut h, ptr::null_mut()) }, WK_ERR_INVALID_ARGUMENT);
    assert!(h.is_null());
    assert!(!last_error().is_empty());
    assert_eq!(unsafe { wk_decompose(4, ptr::null(), 2, &mut h, ptr::null_mut()) }, WK_ERR_NULL);
    assert_eq!(unsafe { wk_decompose(4, bad.as_ptr(), 1, ptr::null_mut(), ptr::null_mut()) }, WK_ERR_NULL);
}

#[test]
fn shadow_orders_match_library() {
    let shadow = table_shadow(1, 1, TableRow::Plus);
    let json = CString::new(shadow.to_json().to_string()).unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { wk_shadow_from_json(json.as_ptr(), &mut h) }, WK_OK, "{}", last_error());
    let mut orders = WkRelWeylOrders::default();
    assert_eq!(unsafe { wk_shadow_rel_weyl_orders(h, &mut orders) }, WK_OK);
    let rw = shadow.rel_weyl();
    assert_eq!(orders.w_hat, rw.w_hat.order() as u64);
    assert_eq!(orders.w_tilde, rw.w_tilde.order() as u64);
    assert_eq!(orders.w_lambda, rw.w_lambda.order() as u64);
    assert_eq!(orders.k_lambda, rw.k_lambda.order() as u64);
    assert_eq!(orders.index_two, shadow.index_two());

    let mut s = ptr::null_mut();
    assert_eq!(unsafe { wk_shadow_to_json(h, &mut s) }, WK_OK);
    let back: serde_json::Value = serde_json::from_str(&take_string(s)).unwrap();
    assert_eq!(back, shadow.to_json());
    unsafe { wk_shadow_free(h) };
}

#[test]
fn inadmissible_shadow_is_rejected() {
    let json = CString::new(two_class_weight_two().to_json().to_string()).unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { wk_shadow_from_json(json.as_ptr(), &mut h) }, WK_ERR_INADMISSIBLE);
    assert!(h.is_null());
    assert!(last_error().contains("A2"), "{}", last_error());
}

#[test]
fn malformed_shadow_input() {
    let mut h = ptr::null_mut();
    let not_json = CString::new("{orbits").unwrap();
    assert_eq!(unsafe { wk_shadow_from_json(not_json.as_ptr(), &mut h) }, WK_ERR_JSON);
    let wrong_shape = CString::new("{\"classes\": []}").unwrap();
    assert_eq!(unsafe { wk_shadow_from_json(wrong_shape.as_ptr(), &mut h) }, WK_ERR_INVALID_ARGUMENT);
    let bad_utf8 = [0xffu8, 0];
    assert_eq!(unsafe { wk_shadow_from_json(bad_utf8.as_ptr().cast(), &mut h) }, WK_ERR_UTF8);
    assert_eq!(unsafe { wk_shadow_from_json(ptr::null(), &mut h) }, WK_ERR_NULL);
}

#[test]
fn verify_reports_failures_through_flag() {
    let mut s = ptr::null_mut();
    let mut passed = true;
    assert_eq!(unsafe { wk_verify(WkSuite::Table1, 4, 0, &mut s, &mut passed) }, WK_OK);
    assert!(passed);
    let v: serde_json::Value = serde_json::from_str(&take_string(s)).unwrap();
    assert_eq!(v["suite"], "table1");

    // the literal H_even x H_odd relation fails at rank 4
    assert_eq!(unsafe { wk_verify(WkSuite::Relations, 4, 0, &mut s, &mut passed) }, WK_OK);
    assert!(!passed);
    take_string(s);

    assert_eq!(unsafe { wk_verify(WkSuite::Relations, 0, 0, &mut s, &mut passed) }, WK_ERR_INVALID_ARGUMENT);
}

#[test]
fn free_functions_accept_null() {
    unsafe {
        wk_string_free(ptr::null_mut());
        wk_shadow_free(ptr::null_mut());
        wk_decomposition_free(ptr::null_mut());
    }
    let v = unsafe { CStr::from_ptr(wk_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
