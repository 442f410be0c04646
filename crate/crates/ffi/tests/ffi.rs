use std::ffi::{c_char, c_int, CStr, CString};
use std::ptr;

use bsgroupoid_ffi::*;

fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { bsg_string_free(s) };
    out
}

fn last_error() -> Option<String> {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { bsg_last_error(&mut s) }, BsgStatus::Ok);
    (!s.is_null()).then(|| take(s))
}

fn params(p: i64, q: i64) -> *mut BsgParams {
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { bsg_params_new(p, q, &mut h) }, BsgStatus::Ok);
    h
}

fn word(text: &str) -> *mut BsgWord {
    let c = CString::new(text).unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { bsg_word_parse(c.as_ptr(), &mut h) }, BsgStatus::Ok);
    h
}

fn cli(args: &[&str]) -> (c_int, String, String) {
    let owned: Vec<CString> = args.iter().map(|a| CString::new(*a).unwrap()).collect();
    let argv: Vec<*const c_char> = owned.iter().map(|a| a.as_ptr()).collect();
    let (mut out, mut err, mut code) = (ptr::null_mut(), ptr::null_mut(), -1);
    let s = unsafe { bsg_cli_run(argv.as_ptr(), argv.len(), &mut out, &mut err, &mut code) };
    assert_eq!(s, BsgStatus::Ok);
    (code, take(out), take(err))
}

#[test]
fn words_through_handles() {
    let p = params(2, 3);
    let w = word("t^2 a^5");
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { bsg_modular(p, w, &mut s) }, BsgStatus::Ok);
    assert_eq!(take(s), "9/4");

    let rel = word("t a^2 T a^-3");
    let mut id = -1;
    assert_eq!(unsafe { bsg_is_identity(p, rel, &mut id) }, BsgStatus::Ok);
    assert_eq!(id, 1);
    assert_eq!(unsafe { bsg_is_identity(p, w, &mut id) }, BsgStatus::Ok);
    assert_eq!(id, 0);

    let pinch = word("t a^4 T a");
    assert_eq!(unsafe { bsg_normal_form(p, pinch, &mut s) }, BsgStatus::Ok);
    assert_eq!(take(s), "a^7");

    unsafe {
        bsg_word_free(w);
        bsg_word_free(rel);
        bsg_word_free(pinch);
        bsg_params_free(p);
    }
}

#[test]
fn errors_are_reported() {
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { bsg_params_new(1, 3, &mut h) }, BsgStatus::InvalidArgument);
    assert!(h.is_null());
    assert!(last_error().is_some());

    let bad = CString::new("t^2 x").unwrap();
    let mut w = ptr::null_mut();
    assert_eq!(unsafe { bsg_word_parse(bad.as_ptr(), &mut w) }, BsgStatus::InvalidArgument);
    assert_eq!(unsafe { bsg_word_parse(ptr::null(), &mut w) }, BsgStatus::NullPointer);

    let mut s = ptr::null_mut();
    assert_eq!(unsafe { bsg_modular(ptr::null(), ptr::null(), &mut s) }, BsgStatus::NullPointer);
    assert!(s.is_null());

    let p = params(2, 3);
    assert_eq!(unsafe { bsg_is_identity(p, ptr::null(), ptr::null_mut()) }, BsgStatus::NullPointer);
    unsafe { bsg_params_free(p) };

    // a successful call clears the message
    let p = params(2, 5);
    assert!(last_error().is_none());
    unsafe {
        bsg_params_free(p);
        bsg_params_free(ptr::null_mut());
        bsg_string_free(ptr::null_mut());
    }
}

#[test]
fn level_model_product_is_the_modulus() {
    for (pp, qq, expect) in [(2, 3, "3/2"), (2, -3, "3/2"), (4, 6, "3/2")] {
        let p = params(pp, qq);
        let mut s = ptr::null_mut();
        assert_eq!(unsafe { bsg_level_model_product(p, 1, 1, &mut s) }, BsgStatus::Ok, "{:?}", last_error());
        assert_eq!(take(s), expect);
        unsafe { bsg_params_free(p) };
    }
}

#[test]
fn groupoid_handle() {
    let (code, doc, _) = cli(&["groupoid", "from-action", "--gen", "1,2,0", "--gen", "0,2,1"]);
    assert_eq!(code, 0);
    let json = CString::new(doc.trim()).unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { bsg_groupoid_from_json(json.as_ptr(), &mut g) }, BsgStatus::Ok, "{:?}", last_error());
    let (mut units, mut arrows) = (0usize, 0usize);
    assert_eq!(unsafe { bsg_groupoid_size(g, &mut units, &mut arrows) }, BsgStatus::Ok);
    assert_eq!((units, arrows), (3, 18));
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { bsg_groupoid_type(g, &mut s) }, BsgStatus::Ok);
    let ty: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
    assert_eq!(ty["type"], "II");
    unsafe { bsg_groupoid_free(g) };

    let garbage = CString::new("{ nope").unwrap();
    assert_eq!(unsafe { bsg_groupoid_from_json(garbage.as_ptr(), &mut g) }, BsgStatus::InvalidArgument);

    let mut broken: serde_json::Value = serde_json::from_str(&doc).unwrap();
    let products = broken["products"].as_array_mut().unwrap();
    let i = products.iter().position(|t| t[0] != t[2] && t[1] != t[2]).unwrap();
    let c = products[i][2].as_u64().unwrap();
    products[i][2] = (if c == 0 { 1 } else { 0 }).into();
    let broken = CString::new(broken.to_string()).unwrap();
    assert_eq!(unsafe { bsg_groupoid_from_json(broken.as_ptr(), &mut g) }, BsgStatus::VerificationFailed);
}

#[test]
fn cli_entry_point() {
    let (code, out, _) = cli(&["bs", "modular", "--p", "2", "--q", "3", "--word", "t^2 a^5"]);
    assert_eq!((code, out.as_str()), (0, "{\"value\":\"9/4\"}\n"));
    let (code, _, err) = cli(&["nonsense"]);
    assert_eq!(code, 2);
    assert!(!err.is_empty());
    let mut o = ptr::null_mut();
    assert_eq!(unsafe { bsg_cli_run(ptr::null(), 1, &mut o, &mut o, ptr::null_mut()) }, BsgStatus::NullPointer);
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(bsg_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/bsgroupoid.h")).unwrap();
    let src = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/src/lib.rs")).unwrap();
    let exports: Vec<&str> = src
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 14, "{exports:?}");
    for f in exports {
        assert!(header.contains(&format!("{f}(")), "{f} missing from header");
    }
    assert!(header.contains("BSG_STATUS_VERIFICATION_FAILED = 4"));
}
