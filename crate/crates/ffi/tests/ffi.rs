use std::ffi::{CStr, CString};
use std::ptr;

use rnla_ffi::*;

fn new_matrix(rows: usize, cols: usize, data: &[f64]) -> *mut RnlaMatrix {
    let mut out = ptr::null_mut();
    let status = unsafe { rnla_matrix_new(rows, cols, data.as_ptr(), &mut out) };
    assert_eq!(status, RnlaStatus::Ok);
    out
}

fn last_error() -> String {
    let p = rnla_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn matrix_handle_round_trip() {
    let data = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
    let m = new_matrix(2, 3, &data);
    unsafe {
        assert_eq!((rnla_matrix_rows(m), rnla_matrix_cols(m)), (2, 3));
        let mut buf = [0.0; 6];
        assert_eq!(rnla_matrix_copy_data(m, buf.as_mut_ptr(), 6), RnlaStatus::Ok);
        assert_eq!(buf, data);
        let mut small = [0.0; 5];
        assert_eq!(
            rnla_matrix_copy_data(m, small.as_mut_ptr(), 5),
            RnlaStatus::BufferTooSmall
        );
        rnla_matrix_free(m);
        rnla_matrix_free(ptr::null_mut());
    }
}

#[test]
fn non_finite_rejected() {
    let mut out = ptr::null_mut();
    let status = unsafe { rnla_matrix_new(1, 2, [1.0, f64::NAN].as_ptr(), &mut out) };
    assert_eq!(status, RnlaStatus::NonFinite);
    assert!(out.is_null());
    assert!(!last_error().is_empty());
}

#[test]
fn null_arguments() {
    unsafe {
        assert_eq!(
            rnla_matrix_new(1, 1, ptr::null(), ptr::null_mut()),
            RnlaStatus::NullPointer
        );
        assert_eq!(rnla_matrix_rows(ptr::null()), 0);
        assert_eq!(
            rnla_matrix_read(ptr::null(), ptr::null_mut()),
            RnlaStatus::NullPointer
        );
    }
}

#[test]
fn file_round_trip_and_missing_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = CString::new(dir.path().join("m.bin").to_str().unwrap()).unwrap();
    let m = new_matrix(2, 2, &[0.5, -1.0, 1e-300, 3.0]);
    unsafe {
        assert_eq!(rnla_matrix_write(m, path.as_ptr()), RnlaStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(rnla_matrix_read(path.as_ptr(), &mut back), RnlaStatus::Ok);
        let mut buf = [0.0; 4];
        rnla_matrix_copy_data(back, buf.as_mut_ptr(), 4);
        assert_eq!(buf, [0.5, -1.0, 1e-300, 3.0]);
        rnla_matrix_free(back);
        rnla_matrix_free(m);
        let missing = CString::new("/nonexistent/m.mtx").unwrap();
        let mut out = ptr::null_mut();
        assert_eq!(rnla_matrix_read(missing.as_ptr(), &mut out), RnlaStatus::Io);
        assert!(last_error().contains("/nonexistent/m.mtx"));
    }
}

#[test]
fn least_squares_consistent_system() {
    // A is 8x2 with b = A [1, -2].
    let a: Vec<f64> = (0..16).map(|i| ((i * 7 % 11) as f64) - 5.0).collect();
    let b: Vec<f64> = a.chunks(2).map(|r| r[0] - 2.0 * r[1]).collect();
    let m = new_matrix(8, 2, &a);
    let mut x = [0.0; 2];
    let mut res = -1.0;
    unsafe {
        let s = rnla_exact_least_squares(m, b.as_ptr(), 8, x.as_mut_ptr(), 2, &mut res);
        assert_eq!(s, RnlaStatus::Ok);
        assert!((x[0] - 1.0).abs() < 1e-10 && (x[1] + 2.0).abs() < 1e-10 && res < 1e-10);
        let s = rnla_rand_least_squares(m, b.as_ptr(), 8, 0.5, 8, 3, x.as_mut_ptr(), 2, &mut res);
        assert_eq!(s, RnlaStatus::Ok);
        assert!((x[0] - 1.0).abs() < 1e-8 && (x[1] + 2.0).abs() < 1e-8);
        let s = rnla_rand_least_squares(m, b.as_ptr(), 7, 0.5, 8, 3, x.as_mut_ptr(), 2, &mut res);
        assert_eq!(s, RnlaStatus::DimensionMismatch);
        rnla_matrix_free(m);
    }
}

#[test]
fn matmul_and_low_rank() {
    let a = new_matrix(2, 3, &[1.0, 0.0, 2.0, -1.0, 3.0, 0.5]);
    let b = new_matrix(3, 2, &[1.0, 2.0, 0.0, 1.0, -1.0, 0.0]);
    unsafe {
        let mut cr = ptr::null_mut();
        let s = rnla_rand_matrix_multiply(a, b, 4, RnlaProbKind::Optimal, 9, &mut cr);
        assert_eq!(s, RnlaStatus::Ok);
        assert_eq!((rnla_matrix_rows(cr), rnla_matrix_cols(cr)), (2, 2));
        rnla_matrix_free(cr);
        let s = rnla_rand_matrix_multiply(a, a, 4, RnlaProbKind::Optimal, 9, &mut cr);
        assert_eq!(s, RnlaStatus::DimensionMismatch);

        let mut basis = ptr::null_mut();
        let mut err = -1.0;
        let s = rnla_rand_low_rank(a, 2, 0.5, 3, 1, &mut basis, &mut err);
        assert_eq!(s, RnlaStatus::Ok);
        assert_eq!((rnla_matrix_rows(basis), rnla_matrix_cols(basis)), (2, 2));
        assert!((0.0..1e-10).contains(&err));
        rnla_matrix_free(basis);
        rnla_matrix_free(a);
        rnla_matrix_free(b);
    }
}

#[test]
fn rank_deficient_is_numerical() {
    let a = new_matrix(4, 2, &[1.0, 2.0, 2.0, 4.0, 3.0, 6.0, 4.0, 8.0]);
    let b = [1.0, 0.0, 0.0, 1.0];
    let mut x = [0.0; 2];
    unsafe {
        let s = rnla_rand_least_squares(a, b.as_ptr(), 4, 0.5, 4, 0, x.as_mut_ptr(), 2, ptr::null_mut());
        assert_eq!(s, RnlaStatus::Numerical);
        rnla_matrix_free(a);
    }
}

#[test]
fn fwht_and_sizes() {
    let mut x = [1.0, 0.0, 0.0, 0.0];
    unsafe {
        assert_eq!(rnla_fwht(x.as_ptr(), x.as_mut_ptr(), 4), RnlaStatus::Ok);
        assert_eq!(x, [0.5; 4]);
        assert_eq!(
            rnla_fwht(x.as_ptr(), x.as_mut_ptr(), 3),
            RnlaStatus::InvalidArgument
        );
        let mut c = 0;
        assert_eq!(rnla_sample_size_frobenius(2, 1.0, 0.5, &mut c), RnlaStatus::Ok);
        assert_eq!(c, 160);
        assert_eq!(rnla_ls_sample_size(1024, 5, 0.5, &mut c), RnlaStatus::Ok);
        assert!(c > 0);
        assert_eq!(
            rnla_lowrank_sample_size(2, 1, 0.5, 1.0, &mut c),
            RnlaStatus::InvalidArgument
        );
    }
    let v = unsafe { CStr::from_ptr(rnla_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_every_entry_point() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/rnla.h")).unwrap();
    let source = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/src/lib.rs")).unwrap();
    let names: Vec<&str> = source
        .split("extern \"C\" fn ")
        .skip(1)
        .map(|s| s.split('(').next().unwrap())
        .collect();
    assert!(names.len() >= 15);
    for name in names {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
    assert!(header.contains("typedef struct RnlaMatrix RnlaMatrix;"));
}
