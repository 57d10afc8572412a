use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use hochdef_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(hd_last_error()) }.to_string_lossy().into_owned()
}

#[test]
fn hochschild_dimensions_through_handles() {
    let name = CString::new("beilinson-p2").unwrap();
    let mut a = ptr::null_mut();
    unsafe {
        assert_eq!(hd_algebra_builtin(name.as_ptr(), &mut a), HdStatus::Ok);
        let mut dim = 0;
        assert_eq!(hd_algebra_dim(a, &mut dim), HdStatus::Ok);
        assert_eq!(dim, 15);
        let mut hh = 0;
        assert_eq!(hd_algebra_hh_dimension(a, 2, &mut hh), HdStatus::Ok);
        assert_eq!(hh, 10);
        hd_algebra_free(a);
    }
}

#[test]
fn truncated_polynomial_hh0_is_the_whole_algebra() {
    let mut a = ptr::null_mut();
    unsafe {
        assert_eq!(hd_algebra_truncated_polynomial(3, &mut a), HdStatus::Ok);
        let mut hh = 0;
        assert_eq!(hd_algebra_hh_dimension(a, 0, &mut hh), HdStatus::Ok);
        assert_eq!(hh, 3);
        hd_algebra_free(a);
        assert_eq!(hd_algebra_truncated_polynomial(0, &mut a), HdStatus::OutOfRange);
    }
}

#[test]
fn errors_are_reported() {
    let mut a = ptr::null_mut();
    unsafe {
        assert_eq!(hd_algebra_from_text(ptr::null(), &mut a), HdStatus::NullPointer);
        let bad = CString::new("vertices 2\narrow a 1 7\n").unwrap();
        assert_eq!(hd_algebra_from_text(bad.as_ptr(), &mut a), HdStatus::Parse);
        assert!(!last_error().is_empty());
        assert!(a.is_null());
        let mut d = 0;
        assert_eq!(hd_algebra_dim(ptr::null(), &mut d), HdStatus::NullPointer);
    }
}

#[test]
fn lattice_round_trip_and_mutation() {
    let text = CString::new("n 3\nd 2\n1 3 6\n0 1 3\n0 0 1\nranks 1 1 1\n").unwrap();
    let mut l = ptr::null_mut();
    unsafe {
        assert_eq!(hd_lattice_from_text(text.as_ptr(), &mut l), HdStatus::Ok);
        let mut n = 0;
        assert_eq!(hd_lattice_len(l, &mut n), HdStatus::Ok);
        assert_eq!(n, 3);
        let word = CString::new("L1 R1").unwrap();
        let mut m = ptr::null_mut();
        assert_eq!(hd_lattice_mutate(l, word.as_ptr(), &mut m), HdStatus::Ok);
        for i in 0..3 {
            for j in 0..3 {
                let (mut x, mut y) = (0, 0);
                assert_eq!(hd_lattice_gram_entry(l, i, j, &mut x), HdStatus::Ok);
                assert_eq!(hd_lattice_gram_entry(m, i, j, &mut y), HdStatus::Ok);
                assert_eq!(x, y);
            }
        }
        let mut x = 0;
        assert_eq!(hd_lattice_gram_entry(l, 3, 0, &mut x), HdStatus::OutOfRange);
        let bad = CString::new("L9").unwrap();
        let mut z = ptr::null_mut();
        assert_ne!(hd_lattice_mutate(l, bad.as_ptr(), &mut z), HdStatus::Ok);

        let mut s = ptr::null_mut();
        assert_eq!(hd_lattice_to_text(l, &mut s), HdStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(hd_lattice_from_text(s, &mut back), HdStatus::Ok);
        hd_string_free(s);

        let mut r = ptr::null_mut();
        assert_eq!(hd_lattice_helix_check(back, &mut r), HdStatus::Ok);
        let mut ok = false;
        assert_eq!(hd_report_passed(r, &mut ok), HdStatus::Ok);
        assert!(ok);
        let mut json = ptr::null_mut();
        assert_eq!(hd_report_to_text(r, true, &mut json), HdStatus::Ok);
        assert!(CStr::from_ptr(json).to_str().unwrap().starts_with('{'));
        hd_string_free(json);
        hd_report_free(r);
        hd_lattice_free(back);
        hd_lattice_free(m);
        hd_lattice_free(l);
    }
}

fn manifest() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn header_is_valid_c() {
    let status = Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c"])
        .arg(manifest().join("include/hochdef.h"))
        .status()
        .expect("a C compiler");
    assert!(status.success());
}

#[test]
fn c_program_links_against_the_static_library() {
    // target/<profile>/deps/abi-* -> target/<profile>
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("libhochdef_ffi.a");
    assert!(lib.exists(), "{} missing", lib.display());
    let dir = tempfile::tempdir().unwrap();
    let bin = dir.path().join("smoke");
    let status = Command::new("cc")
        .arg(manifest().join("tests/smoke.c"))
        .arg("-I")
        .arg(manifest().join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .expect("a C compiler");
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}
