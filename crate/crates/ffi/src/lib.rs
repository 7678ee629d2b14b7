//! C ABI over `rnla`.
//!
//! Matrices cross the boundary as opaque `RnlaMatrix` handles created by
//! `rnla_matrix_new` or `rnla_matrix_read` and released with
//! `rnla_matrix_free`. Raw data is row-major. Every call returns an
//! `RnlaStatus`; on failure `rnla_last_error_message` describes the error
//! for the calling thread. Panics are caught and reported as
//! `RNLA_STATUS_PANIC`.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use rnla::linalg::DenseMatrix;
use rnla::lowrank::{lowrank_sample_size, rand_low_rank, LowRankOptions};
use rnla::lsq::{exact_least_squares, ls_sample_size, rand_least_squares, LsqOptions};
use rnla::matmul::{rand_matrix_multiply, sample_size_frobenius};
use rnla::sampling::{colnorm_probs, optimal_probs, rownorm_probs, uniform_probs};
use rnla::srht::{fwht, OpCounter};
use rnla::RnlaError;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RnlaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    NonFinite = 4,
    /// Rank deficiency, degenerate distribution and similar.
    Numerical = 5,
    Io = 6,
    Parse = 7,
    BufferTooSmall = 8,
    Panic = 9,
}

/// Sampling distribution for `rnla_rand_matrix_multiply`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RnlaProbKind {
    Optimal = 0,
    Colnorm = 1,
    Rownorm = 2,
    Uniform = 3,
}

/// Opaque dense matrix.
pub struct RnlaMatrix {
    inner: DenseMatrix,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg).unwrap_or_else(|_| CString::new("error message contained NUL").unwrap());
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &RnlaError) -> RnlaStatus {
    match e {
        RnlaError::NonFinite { .. } => RnlaStatus::NonFinite,
        RnlaError::DataLength { .. }
        | RnlaError::DimensionMismatch { .. }
        | RnlaError::IndexOutOfRange { .. } => RnlaStatus::DimensionMismatch,
        RnlaError::Io { .. } => RnlaStatus::Io,
        RnlaError::Parse { .. } => RnlaStatus::Parse,
        e if e.is_numerical() => RnlaStatus::Numerical,
        _ => RnlaStatus::InvalidArgument,
    }
}

enum Failure {
    Lib(RnlaError),
    Null(&'static str),
    Buffer { need: usize, got: usize },
}

impl From<RnlaError> for Failure {
    fn from(e: RnlaError) -> Self {
        Failure::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> RnlaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            RnlaStatus::Ok
        }
        Ok(Err(Failure::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Failure::Null(what))) => {
            set_error(format!("{what} is null"));
            RnlaStatus::NullPointer
        }
        Ok(Err(Failure::Buffer { need, got })) => {
            set_error(format!("buffer holds {got} values, {need} needed"));
            RnlaStatus::BufferTooSmall
        }
        Err(_) => {
            set_error("internal panic".to_string());
            RnlaStatus::Panic
        }
    }
}

unsafe fn matrix<'a>(m: *const RnlaMatrix, what: &'static str) -> Result<&'a DenseMatrix, Failure> {
    m.as_ref().map(|h| &h.inner).ok_or(Failure::Null(what))
}

unsafe fn slice<'a>(p: *const f64, len: usize, what: &'static str) -> Result<&'a [f64], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn write_out(src: &[f64], dst: *mut f64, len: usize, what: &'static str) -> Result<(), Failure> {
    if len < src.len() {
        return Err(Failure::Buffer {
            need: src.len(),
            got: len,
        });
    }
    if dst.is_null() && !src.is_empty() {
        return Err(Failure::Null(what));
    }
    ptr::copy_nonoverlapping(src.as_ptr(), dst, src.len());
    Ok(())
}

unsafe fn put<T>(dst: *mut T, v: T, what: &'static str) -> Result<(), Failure> {
    if dst.is_null() {
        return Err(Failure::Null(what));
    }
    dst.write(v);
    Ok(())
}

unsafe fn path_arg(p: *const c_char) -> Result<std::path::PathBuf, Failure> {
    if p.is_null() {
        return Err(Failure::Null("path"));
    }
    let s = CStr::from_ptr(p).to_str().map_err(|_| {
        Failure::Lib(RnlaError::InvalidParameter {
            name: "path",
            value: "non-UTF-8".to_string(),
            reason: "path must be UTF-8",
        })
    })?;
    Ok(s.into())
}

fn boxed(m: DenseMatrix) -> *mut RnlaMatrix {
    Box::into_raw(Box::new(RnlaMatrix { inner: m }))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn rnla_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread, or NULL after a
/// success. Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn rnla_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Copies `rows * cols` row-major values into a new matrix.
#[no_mangle]
pub unsafe extern "C" fn rnla_matrix_new(
    rows: usize,
    cols: usize,
    data: *const f64,
    out: *mut *mut RnlaMatrix,
) -> RnlaStatus {
    guard(|| {
        let len = rows.checked_mul(cols).ok_or(Failure::Lib(RnlaError::DataLength {
            rows,
            cols,
            len: usize::MAX,
        }))?;
        let values = slice(data, len, "data")?.to_vec();
        let m = DenseMatrix::new(rows, cols, values)?;
        put(out, boxed(m), "out")
    })
}

/// Releases a handle. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn rnla_matrix_free(m: *mut RnlaMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Row count, or 0 for NULL.
#[no_mangle]
pub unsafe extern "C" fn rnla_matrix_rows(m: *const RnlaMatrix) -> usize {
    m.as_ref().map_or(0, |h| h.inner.rows())
}

/// Column count, or 0 for NULL.
#[no_mangle]
pub unsafe extern "C" fn rnla_matrix_cols(m: *const RnlaMatrix) -> usize {
    m.as_ref().map_or(0, |h| h.inner.cols())
}

/// Copies the row-major entries into `buf`, which must hold `rows * cols`.
#[no_mangle]
pub unsafe extern "C" fn rnla_matrix_copy_data(
    m: *const RnlaMatrix,
    buf: *mut f64,
    len: usize,
) -> RnlaStatus {
    guard(|| write_out(matrix(m, "matrix")?.as_slice(), buf, len, "buf"))
}

#[no_mangle]
pub unsafe extern "C" fn rnla_matrix_read(path: *const c_char, out: *mut *mut RnlaMatrix) -> RnlaStatus {
    guard(|| {
        let m = rnla::harness::io::read_matrix(path_arg(path)?)?;
        put(out, boxed(m), "out")
    })
}

/// Writes MatrixMarket text, or the binary format for a `.bin` path.
#[no_mangle]
pub unsafe extern "C" fn rnla_matrix_write(m: *const RnlaMatrix, path: *const c_char) -> RnlaStatus {
    guard(|| {
        Ok(rnla::harness::io::write_matrix(
            path_arg(path)?,
            matrix(m, "matrix")?,
        )?)
    })
}

/// Sampled estimate `CR` of `AB` with `c` draws.
#[no_mangle]
pub unsafe extern "C" fn rnla_rand_matrix_multiply(
    a: *const RnlaMatrix,
    b: *const RnlaMatrix,
    c: usize,
    kind: RnlaProbKind,
    seed: u64,
    out: *mut *mut RnlaMatrix,
) -> RnlaStatus {
    guard(|| {
        let (a, b) = (matrix(a, "a")?, matrix(b, "b")?);
        if a.cols() != b.rows() {
            return Err(Failure::Lib(RnlaError::DimensionMismatch {
                op: "rnla_rand_matrix_multiply",
                detail: format!("A has {} columns, B has {} rows", a.cols(), b.rows()),
            }));
        }
        let probs = match kind {
            RnlaProbKind::Optimal => optimal_probs(a, b)?,
            RnlaProbKind::Colnorm => colnorm_probs(a)?,
            RnlaProbKind::Rownorm => rownorm_probs(b)?,
            RnlaProbKind::Uniform => uniform_probs(a.cols())?,
        };
        let cr = rand_matrix_multiply(a, b, c, &probs, seed)?.product();
        put(out, boxed(cr), "out")
    })
}

/// Exact minimizer of `|Ax - b|`. `x` must hold `cols(A)` values;
/// `residual` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn rnla_exact_least_squares(
    a: *const RnlaMatrix,
    b: *const f64,
    b_len: usize,
    x: *mut f64,
    x_len: usize,
    residual: *mut f64,
) -> RnlaStatus {
    guard(|| {
        let sol = exact_least_squares(matrix(a, "a")?, slice(b, b_len, "b")?)?;
        write_out(&sol.x, x, x_len, "x")?;
        if !residual.is_null() {
            residual.write(sol.residual);
        }
        Ok(())
    })
}

/// Sketch-and-solve least squares. `r = 0` selects the theoretical sketch
/// size. `residual` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn rnla_rand_least_squares(
    a: *const RnlaMatrix,
    b: *const f64,
    b_len: usize,
    eps: f64,
    r: usize,
    seed: u64,
    x: *mut f64,
    x_len: usize,
    residual: *mut f64,
) -> RnlaStatus {
    guard(|| {
        let opts = LsqOptions {
            r: (r > 0).then_some(r),
            diagnostics: false,
        };
        let sol = rand_least_squares(matrix(a, "a")?, slice(b, b_len, "b")?, eps, seed, &opts)?;
        write_out(&sol.x_tilde, x, x_len, "x")?;
        if !residual.is_null() {
            residual.write(sol.residual_norm);
        }
        Ok(())
    })
}

/// Rank-`k` basis `U~_k` (`rows(A) x k`) from a width-`c` sketch; `c = 0`
/// selects the theoretical width. `error_fro` receives `|A - U~U~^T A|_F`
/// and may be NULL.
#[no_mangle]
pub unsafe extern "C" fn rnla_rand_low_rank(
    a: *const RnlaMatrix,
    k: usize,
    eps: f64,
    c: usize,
    seed: u64,
    basis: *mut *mut RnlaMatrix,
    error_fro: *mut f64,
) -> RnlaStatus {
    guard(|| {
        let opts = LowRankOptions {
            c: (c > 0).then_some(c),
            ..LowRankOptions::default()
        };
        let res = rand_low_rank(matrix(a, "a")?, k, eps, seed, &opts)?;
        if !error_fro.is_null() {
            error_fro.write(res.error_fro);
        }
        put(basis, boxed(res.u_tilde_k), "basis")
    })
}

/// Normalized Walsh-Hadamard transform of `n` values (`n` a power of two).
/// `x` and `out` may alias.
#[no_mangle]
pub unsafe extern "C" fn rnla_fwht(x: *const f64, out: *mut f64, n: usize) -> RnlaStatus {
    guard(|| {
        let y = fwht(slice(x, n, "x")?, &mut OpCounter::new())?;
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        ptr::copy(y.as_ptr(), out, n);
        Ok(())
    })
}

/// `ceil(10 d^2 / (beta eps^2))`.
#[no_mangle]
pub unsafe extern "C" fn rnla_sample_size_frobenius(
    d: usize,
    beta: f64,
    eps: f64,
    out: *mut u64,
) -> RnlaStatus {
    guard(|| put(out, sample_size_frobenius(d, beta, eps)?.count, "out"))
}

/// Theoretical sketch size for least squares on an `n x d` system.
#[no_mangle]
pub unsafe extern "C" fn rnla_ls_sample_size(n: usize, d: usize, eps: f64, out: *mut u64) -> RnlaStatus {
    guard(|| put(out, ls_sample_size(n, d, eps)?.size.count, "out"))
}

/// Theoretical sketch width for a rank-`k` approximation with `n` columns.
#[no_mangle]
pub unsafe extern "C" fn rnla_lowrank_sample_size(
    n: usize,
    k: usize,
    eps: f64,
    c0: f64,
    out: *mut u64,
) -> RnlaStatus {
    guard(|| put(out, lowrank_sample_size(n, k, eps, c0)?.count, "out"))
}
