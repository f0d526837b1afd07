use std::ffi::{c_char, CStr, CString};
use std::ptr;

use wildram_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn series(json: &str) -> *mut WrSeries {
    let mut h = ptr::null_mut();
    let text = cstr(json);
    assert_eq!(unsafe { wr_series_from_json(text.as_ptr(), &mut h) }, WrStatus::Ok);
    assert!(!h.is_null());
    h
}

fn last_error() -> String {
    let mut needed = 0;
    unsafe { wr_last_error(ptr::null_mut(), 0, &mut needed) };
    let mut buf = vec![0 as c_char; needed];
    assert_eq!(unsafe { wr_last_error(buf.as_mut_ptr(), buf.len(), &mut needed) }, WrStatus::Ok);
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap().to_owned()
}

#[test]
fn invariants_of_a_series() {
    let f = series(r#"{"p":3,"prec":62,"coeffs":[[5,1],[6,2]]}"#);
    let (mut p, mut prec, mut q, mut v, mut j) = (0u32, 0usize, 0usize, 0u32, 0usize);
    unsafe {
        assert_eq!(wr_series_info(f, &mut p, &mut prec), WrStatus::Ok);
        assert_eq!((p, prec), (3, 62));
        assert_eq!(wr_series_q(f, &mut q), WrStatus::Ok);
        assert_eq!(q, 4);
        assert_eq!(wr_series_pind(f, 1, &mut v), WrStatus::Ok);
        assert_eq!(v, 2);
        assert_eq!(wr_series_smallest_index(f, &mut j), WrStatus::Ok);
        assert_eq!(j, 1);
        assert_eq!(wr_series_resit(f, &mut v), WrStatus::Ok);

        let mut values = [0u64; 3];
        let mut exact = [0u8; 3];
        assert_eq!(wr_series_ramification(f, 2, values.as_mut_ptr(), exact.as_mut_ptr()), WrStatus::Ok);
        assert_eq!(values, [4, 13, 40]);
        assert_eq!(exact, [1, 1, 1]);
        wr_series_free(f);
    }
}

#[test]
fn normal_form_handle() {
    let f = series(r#"{"p":3,"prec":30,"coeffs":[[5,2],[6,1],[7,1],[8,2]]}"#);
    let mut g = ptr::null_mut();
    let (mut a, mut b) = (0u32, 0u32);
    unsafe {
        assert_eq!(wr_series_normal_form(f, 1, &mut g), WrStatus::Ok);
        assert_eq!(wr_series_pind(f, 1, &mut a), WrStatus::Ok);
        assert_eq!(wr_series_pind(g, 1, &mut b), WrStatus::Ok);
        assert_eq!(a, b);
        let mut needed = 0;
        assert_eq!(wr_series_to_json(g, ptr::null_mut(), 0, &mut needed), WrStatus::BufferTooSmall);
        let mut buf = vec![0 as c_char; needed];
        assert_eq!(wr_series_to_json(g, buf.as_mut_ptr(), buf.len(), &mut needed), WrStatus::Ok);
        let json = CStr::from_ptr(buf.as_ptr()).to_str().unwrap();
        assert!(json.contains("\"coeffs\""));
        wr_series_free(g);
        wr_series_free(f);
    }
}

#[test]
fn error_codes_and_messages() {
    let mut h = ptr::null_mut();
    let bad = cstr(r#"{"p":4,"prec":10,"coeffs":[[3,1]]}"#);
    assert_eq!(unsafe { wr_series_from_json(bad.as_ptr(), &mut h) }, WrStatus::ParseError);
    assert!(h.is_null());
    assert!(last_error().contains("not a prime"));

    let dup = cstr(r#"{"p":3,"prec":10,"coeffs":[[3,1],[3,1]]}"#);
    assert_eq!(unsafe { wr_series_from_json(dup.as_ptr(), &mut h) }, WrStatus::InvariantViolation);

    let valued = cstr(r#"{"p":3,"prec":6,"coeffs":[[5,"t"]],"valued":true}"#);
    assert_eq!(unsafe { wr_series_from_json(valued.as_ptr(), &mut h) }, WrStatus::WrongInputKind);

    assert_eq!(unsafe { wr_series_from_json(ptr::null(), &mut h) }, WrStatus::NullPointer);
    let mut q = 0;
    assert_eq!(unsafe { wr_series_q(ptr::null(), &mut q) }, WrStatus::NullPointer);

    let short = series(r#"{"p":3,"prec":6,"coeffs":[[5,1]]}"#);
    let mut v = 0;
    assert_eq!(unsafe { wr_series_pind(short, 2, &mut v) }, WrStatus::InsufficientPrecision);
    unsafe { wr_series_free(short) };

    let s = unsafe { CStr::from_ptr(wr_status_str(WrStatus::UnknownSuite)) };
    assert_eq!(s.to_str().unwrap(), "unknown suite");
}

#[test]
fn suites_through_the_abi() {
    let name = cstr("main-lemma");
    let params = cstr(r#"{"cases":[[3,4,1],[3,5,2],[5,7,2]]}"#);
    let mut r = ptr::null_mut();
    let (mut samples, mut pass, mut failed, mut ok) = (0, 0, 0, 0u8);
    unsafe {
        assert_eq!(wr_run_suite(name.as_ptr(), 0, params.as_ptr(), &mut r), WrStatus::Ok);
        assert_eq!(wr_report_counts(r, &mut samples, &mut pass, &mut failed, &mut ok), WrStatus::Ok);
        assert_eq!((samples, pass, failed, ok), (3, 3, 0, 1));
        let mut needed = 0;
        wr_report_json(r, ptr::null_mut(), 0, &mut needed);
        let mut buf = vec![0 as c_char; needed];
        assert_eq!(wr_report_json(r, buf.as_mut_ptr(), needed, &mut needed), WrStatus::Ok);
        let json = CStr::from_ptr(buf.as_ptr()).to_str().unwrap();
        assert!(json.contains("\"suite\": \"main-lemma\""));
        wr_report_free(r);

        let unknown = cstr("nope");
        assert_eq!(wr_run_suite(unknown.as_ptr(), 0, ptr::null(), &mut r), WrStatus::UnknownSuite);
        assert!(r.is_null());
    }
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/wildram.h")).unwrap();
    for symbol in [
        "wr_series_from_json",
        "wr_series_free",
        "wr_series_pind",
        "wr_series_ramification",
        "wr_run_suite",
        "wr_report_json",
        "wr_last_error",
        "typedef struct WrSeries WrSeries;",
        "WR_STATUS_BUFFER_TOO_SMALL = 9",
    ] {
        assert!(header.contains(symbol), "header lacks {symbol}");
    }
}
