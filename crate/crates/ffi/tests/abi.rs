use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use symqudit_ffi::*;

fn take_string(p: *mut std::ffi::c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
    unsafe { sq_string_free(p) };
    s
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(sq_last_error()) }.to_str().unwrap().to_owned()
}

fn matrix(rows: usize, cols: usize, re: &[f64]) -> *mut SqMatrix {
    let re_im: Vec<f64> = re.iter().flat_map(|&x| [x, 0.0]).collect();
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { sq_matrix_new(rows, cols, re_im.as_ptr(), &mut m) }, SqStatus::Ok);
    m
}

#[test]
fn jordan_and_root() {
    let b = matrix(2, 2, &[5.0, 1.0, 0.0, 5.0]);
    let mut sig = ptr::null_mut();
    assert_eq!(unsafe { sq_jordan_signature(b, 1e-9, 1e-7, &mut sig) }, SqStatus::Ok);
    assert_eq!(take_string(sig), "{ { 2 } }");

    let x = matrix(2, 2, &[4.0, 0.0, 0.0, 9.0]);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { sq_nth_root(x, 2, 1e-9, 1e-7, &mut s) }, SqStatus::Ok);
    let (mut re, mut im) = (0.0, 0.0);
    assert_eq!(unsafe { sq_matrix_get(s, 1, 1, &mut re, &mut im) }, SqStatus::Ok);
    assert!((re - 3.0).abs() < 1e-12 && im.abs() < 1e-12);
    let (mut r, mut c) = (0, 0);
    assert_eq!(unsafe { sq_matrix_shape(s, &mut r, &mut c) }, SqStatus::Ok);
    assert_eq!((r, c), (2, 2));
    assert_eq!(unsafe { sq_matrix_get(s, 2, 0, &mut re, &mut im) }, SqStatus::InvalidArgument);
    unsafe {
        sq_matrix_free(b);
        sq_matrix_free(x);
        sq_matrix_free(s);
    }
}

#[test]
fn classify_w_state() {
    let mut w = ptr::null_mut();
    assert_eq!(unsafe { sq_state_excitation(3, 2, 1, &mut w) }, SqStatus::Ok);
    let mut dim = 0;
    assert_eq!(unsafe { sq_stabilizer_dimension(w, 1e-9, &mut dim) }, SqStatus::Ok);
    assert_eq!(dim, 2);
    let mut report = ptr::null_mut();
    assert_eq!(unsafe { sq_classify(w, 16, 0, 1e-9, 1e-7, &mut report) }, SqStatus::Ok);
    let report = take_string(report);
    assert!(report.contains(r#""generic_signature":"{ { 2 } }""#), "{report}");
    assert!(report.contains(r#""kind":"verified""#), "{report}");
    unsafe { sq_state_free(w) };
}

#[test]
fn json_round_trip_through_handles() {
    let blocks = [2usize, 1];
    let mut u = ptr::null_mut();
    assert_eq!(unsafe { sq_state_unique(3, blocks.as_ptr(), 2, &mut u) }, SqStatus::Ok);
    let mut text = ptr::null_mut();
    assert_eq!(unsafe { sq_state_to_json(u, &mut text) }, SqStatus::Ok);
    let text = take_string(text);
    let c = CString::new(text.clone()).unwrap();
    let mut back = ptr::null_mut();
    assert_eq!(unsafe { sq_state_from_json(c.as_ptr(), 1e-9, &mut back) }, SqStatus::Ok);
    let mut again = ptr::null_mut();
    assert_eq!(unsafe { sq_state_to_json(back, &mut again) }, SqStatus::Ok);
    assert_eq!(take_string(again), text);
    unsafe {
        sq_state_free(u);
        sq_state_free(back);
    }

    let m = matrix(1, 2, &[0.1, -2.5]);
    let mut mj = ptr::null_mut();
    assert_eq!(unsafe { sq_matrix_to_json(m, &mut mj) }, SqStatus::Ok);
    let mj = CString::new(take_string(mj)).unwrap();
    let mut m2 = ptr::null_mut();
    assert_eq!(unsafe { sq_matrix_from_json(mj.as_ptr(), &mut m2) }, SqStatus::Ok);
    unsafe {
        sq_matrix_free(m);
        sq_matrix_free(m2);
    }
}

#[test]
fn symmetrize_diagonal_bell() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let alpha = [h, 0.0, h, 0.0];
    let mut psi = ptr::null_mut();
    assert_eq!(unsafe { sq_state_ghz(2, 2, alpha.as_ptr(), &mut psi) }, SqStatus::Ok);
    let a1 = matrix(2, 2, &[2.0, 0.0, 0.0, 1.0]);
    let a2 = matrix(2, 2, &[0.5, 0.0, 0.0, 1.0]);
    let ops = [a1 as *const SqMatrix, a2 as *const SqMatrix];
    let mut json = ptr::null_mut();
    let mut a = ptr::null_mut();
    assert_eq!(
        unsafe { sq_symmetrize(psi, ops.as_ptr(), 2, 1e-9, 1e-7, &mut json, &mut a) },
        SqStatus::Ok
    );
    assert!(take_string(json).contains("\"unitary\":false"));
    let (mut re, mut im) = (0.0, 0.0);
    unsafe { sq_matrix_get(a, 0, 0, &mut re, &mut im) };
    assert!((re - 1.0).abs() < 1e-12);

    let x = matrix(2, 2, &[0.0, 1.0, 1.0, 0.0]);
    let id = matrix(2, 2, &[1.0, 0.0, 0.0, 1.0]);
    let mut product = ptr::null_mut();
    let zero = [1.0, 0.0, 0.0, 0.0];
    assert_eq!(unsafe { sq_state_ghz(2, 2, zero.as_ptr(), &mut product) }, SqStatus::Ok);
    let bad = [x as *const SqMatrix, id as *const SqMatrix];
    let mut json = ptr::null_mut();
    let status = unsafe { sq_symmetrize(product, bad.as_ptr(), 2, 1e-9, 1e-7, &mut json, ptr::null_mut()) };
    assert_eq!(status, SqStatus::NotSymmetric);
    assert!(json.is_null());
    assert!(!last_error().is_empty());
    unsafe {
        for m in [a1, a2, a, x, id] {
            sq_matrix_free(m);
        }
        sq_state_free(psi);
        sq_state_free(product);
    }
}

#[test]
fn error_reporting() {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { sq_matrix_from_json(ptr::null(), &mut out) }, SqStatus::NullPointer);
    assert!(last_error().contains("null"));
    let bad = CString::new("{\"rows\":2}").unwrap();
    assert_eq!(unsafe { sq_matrix_from_json(bad.as_ptr(), &mut out) }, SqStatus::Parse);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { sq_state_excitation(2, 2, 5, &mut s) }, SqStatus::InvalidArgument);
    let (mut a, mut b) = (0u64, 0u64);
    assert_eq!(unsafe { sq_count(4, &mut a, &mut b) }, SqStatus::Ok);
    assert_eq!((a, b), (14, 5));
    unsafe {
        sq_matrix_free(ptr::null_mut());
        sq_state_free(ptr::null_mut());
        sq_string_free(ptr::null_mut());
    }
}

#[test]
fn header_compiles_as_c() {
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let header = include.join("symqudit.h");
    assert!(header.exists());
    let src = std::env::temp_dir().join(format!("symqudit_header_{}.c", std::process::id()));
    std::fs::write(&src, "#include \"symqudit.h\"\nint main(void) { SqStatus s = SQ_STATUS_OK; return (int)s; }\n").unwrap();
    let status = Command::new("cc")
        .arg("-fsyntax-only")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(&include)
        .arg(&src)
        .status();
    let _ = std::fs::remove_file(&src);
    match status {
        Ok(s) => assert!(s.success(), "header failed to compile"),
        Err(e) => eprintln!("skipping header check, no C compiler: {e}"),
    }
}
