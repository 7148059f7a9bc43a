use std::ffi::{CStr, CString};
use std::ptr;

use massey_ffi::*;

fn last_error() -> String {
    let p = massey_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

unsafe fn take_string(p: *mut std::ffi::c_char) -> String {
    let s = CStr::from_ptr(p).to_str().unwrap().to_string();
    massey_string_free(p);
    s
}

fn monomial(r: u32) -> *mut MasseyPresentation {
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { massey_presentation_monomial(r, &mut p) }, MasseyStatus::Ok);
    p
}

#[test]
fn presentation_handles() {
    unsafe {
        let p = monomial(5);
        let (mut n, mut m) = (0usize, 0usize);
        assert_eq!(massey_presentation_num_generators(p, &mut n), MasseyStatus::Ok);
        assert_eq!(massey_presentation_num_relators(p, &mut m), MasseyStatus::Ok);
        assert_eq!((n, m), (18, 83));

        let mut name = ptr::null_mut();
        assert_eq!(massey_presentation_relator_name(p, 0, &mut name), MasseyStatus::Ok);
        assert_eq!(take_string(name), "A^1");
        assert_eq!(massey_presentation_relator_name(p, 83, &mut name), MasseyStatus::InvalidArgument);
        assert!(last_error().contains("out of range"));

        let mut text = ptr::null_mut();
        assert_eq!(massey_presentation_format(p, false, &mut text), MasseyStatus::Ok);
        let text = take_string(text);
        let c_text = CString::new(text.clone()).unwrap();
        let mut q = ptr::null_mut();
        assert_eq!(massey_presentation_parse(c_text.as_ptr(), &mut q), MasseyStatus::Ok);
        let mut again = ptr::null_mut();
        assert_eq!(massey_presentation_format(q, false, &mut again), MasseyStatus::Ok);
        assert_eq!(take_string(again), text);
        massey_presentation_free(q);
        massey_presentation_free(p);
        massey_presentation_free(ptr::null_mut());
    }
}

#[test]
fn monomial_rank_error() {
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { massey_presentation_monomial(1, &mut p) }, MasseyStatus::InvalidArgument);
    assert!(p.is_null());
    assert!(last_error().contains("r >= 2"));
    assert_eq!(unsafe { massey_presentation_monomial(3, ptr::null_mut()) }, MasseyStatus::NullPointer);
}

#[test]
fn parse_error_carries_line() {
    let text = CString::new("generators 2\nrelator R : x1\n").unwrap();
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { massey_presentation_parse(text.as_ptr(), &mut p) }, MasseyStatus::ParseError);
    assert!(last_error().contains("line 2"));
}

#[test]
fn eps_over_integers_and_prime() {
    let w = CString::new("x1 x2 x1^-1 x2^-1").unwrap();
    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(massey_eps(w.as_ptr(), [2u32, 1].as_ptr(), 2, 0, &mut out), MasseyStatus::Ok);
        assert_eq!(take_string(out), "-1");
        assert_eq!(massey_eps(w.as_ptr(), [2u32, 1].as_ptr(), 2, 3, &mut out), MasseyStatus::Ok);
        assert_eq!(take_string(out), "2");
        assert_eq!(massey_eps(w.as_ptr(), [2u32, 1].as_ptr(), 2, 4, &mut out), MasseyStatus::NotPrime);
        assert_eq!(massey_eps(w.as_ptr(), [0u32].as_ptr(), 1, 0, &mut out), MasseyStatus::InvalidArgument);
        let bad = CString::new("x1 y2").unwrap();
        assert_eq!(massey_eps(bad.as_ptr(), [1u32].as_ptr(), 1, 0, &mut out), MasseyStatus::ParseError);
    }
}

#[test]
fn theorem_product_through_ffi() {
    unsafe {
        let p = monomial(3);
        let alpha = [1u32, 1, 1, 2, 2, 2, 0, 0, 0, 0, 0, 0];
        let beta = [0u32, 0, 0, 1, 1, 1, 2, 2, 2, 0, 0, 0];
        let mut c = [9u32; 39];
        assert_eq!(massey_cup(p, 3, alpha.as_ptr(), beta.as_ptr(), 12, c.as_mut_ptr(), 39), MasseyStatus::Ok);
        assert!(c.iter().all(|&v| v == 0));
        assert_eq!(massey_cup(p, 3, alpha.as_ptr(), beta.as_ptr(), 12, c.as_mut_ptr(), 38), MasseyStatus::DimensionMismatch);

        let mut o = ptr::null_mut();
        assert_eq!(massey_triple(p, 3, alpha.as_ptr(), alpha.as_ptr(), beta.as_ptr(), 12, &mut o), MasseyStatus::Ok);
        let mut vanishes = true;
        assert_eq!(massey_outcome_vanishes(o, &mut vanishes), MasseyStatus::Ok);
        assert!(!vanishes);
        let mut len = 0usize;
        assert_eq!(massey_outcome_len(o, &mut len), MasseyStatus::Ok);
        let mut rep = vec![0u32; len];
        assert_eq!(massey_outcome_representative(o, rep.as_mut_ptr(), len), MasseyStatus::Ok);
        assert_eq!(rep.iter().filter(|&&v| v != 0).count(), 18);
        let mut rank = 0usize;
        assert_eq!(massey_outcome_indeterminacy_rank(o, &mut rank), MasseyStatus::Ok);
        assert_eq!(rank, 17);
        let mut json = ptr::null_mut();
        assert_eq!(massey_outcome_json(o, &mut json), MasseyStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
        assert_eq!(v["vanishes"], false);
        assert_eq!(v["relator_names"].as_array().unwrap().len(), 39);
        massey_outcome_free(o);
        massey_presentation_free(p);
    }
}

#[test]
fn undefined_product_status() {
    unsafe {
        let mut p = ptr::null_mut();
        assert_eq!(massey_presentation_kty(&mut p), MasseyStatus::Ok);
        let (e1, e2) = ([1u32, 0, 0], [0u32, 1, 0]);
        let mut o = ptr::null_mut();
        assert_eq!(massey_triple(p, 2, e1.as_ptr(), e1.as_ptr(), e2.as_ptr(), 3, &mut o), MasseyStatus::UndefinedProduct);
        assert!(o.is_null());
        assert!(last_error().starts_with("undefined product"));
        assert_eq!(massey_triple(p, 2, e1.as_ptr(), e1.as_ptr(), e2.as_ptr(), 2, &mut o), MasseyStatus::DimensionMismatch);
        massey_presentation_free(p);
    }
}

#[test]
fn resonance_and_verification() {
    unsafe {
        let mut dim = 0usize;
        assert_eq!(massey_cpi_dimension(3, 3, &mut dim), MasseyStatus::Ok);
        assert_eq!(dim, 3);
        assert_eq!(massey_cpi_dimension(3, 5, &mut dim), MasseyStatus::Ok);
        assert_eq!(dim, 2);
        assert_eq!(massey_cpi_dimension(3, 6, &mut dim), MasseyStatus::NotPrime);

        let mut passed = false;
        let mut report = ptr::null_mut();
        assert_eq!(massey_verify_main(3, &mut passed, &mut report), MasseyStatus::Ok);
        assert!(passed);
        let v: serde_json::Value = serde_json::from_str(&take_string(report)).unwrap();
        assert_eq!(v["vanishes"], false);
        assert_eq!(massey_verify_main(2, &mut passed, ptr::null_mut()), MasseyStatus::NotPrime);
    }
}

#[test]
fn header_declares_the_surface() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/massey.h")).unwrap();
    for name in [
        "typedef struct MasseyPresentation MasseyPresentation",
        "typedef struct MasseyOutcome MasseyOutcome",
        "MASSEY_STATUS_UNDEFINED_PRODUCT = 6",
        "massey_last_error(void)",
        "massey_triple(",
        "massey_outcome_free(",
        "massey_cpi_dimension(",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}
