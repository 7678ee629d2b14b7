//! Deterministic dense linear algebra: norms, thin SVD, pseudoinverse,
//! best rank-k truncation and orthonormal range bases.
//!
//! Every randomized result elsewhere in the crate is judged against these.

mod matrix;
mod svd;

pub use matrix::DenseMatrix;
pub use svd::{singular_values, thin_svd, ThinSvd, RANK_ATOL, RANK_RTOL};

use crate::error::{Result, RnlaError};

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm2(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

pub fn frobenius_norm(m: &DenseMatrix) -> f64 {
    norm2(m.as_slice())
}

/// Largest singular value.
pub fn spectral_norm(m: &DenseMatrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Moore-Penrose pseudoinverse `V diag(1/sigma) U^T`.
///
/// The zero matrix maps to the zero matrix of transposed shape.
pub fn pseudoinverse(m: &DenseMatrix) -> Result<DenseMatrix> {
    let (rows, cols) = m.shape();
    if m.is_empty() {
        return Ok(DenseMatrix::zeros(cols, rows));
    }
    let svd = thin_svd(m)?;
    let mut out = DenseMatrix::zeros(cols, rows);
    for t in 0..svd.rank() {
        let inv = 1.0 / svd.sigma[t];
        for i in 0..cols {
            let vi = svd.v[(i, t)] * inv;
            if vi == 0.0 {
                continue;
            }
            for j in 0..rows {
                out[(i, j)] += vi * svd.u[(j, t)];
            }
        }
    }
    Ok(out)
}

/// `A_k = U_k Sigma_k V_k^T`.
pub fn best_rank_k(m: &DenseMatrix, k: usize) -> Result<DenseMatrix> {
    let limit = m.rows().min(m.cols());
    if k == 0 || k > limit {
        return Err(RnlaError::param("k", k, "must satisfy 1 <= k <= min(rows, cols)"));
    }
    Ok(thin_svd(m)?.reconstruct(k))
}

/// Orthonormal basis for the column space, one column per unit of numerical rank.
pub fn orthonormal_basis(m: &DenseMatrix) -> Result<DenseMatrix> {
    let svd = thin_svd(m)?;
    if svd.rank() == 0 {
        return Err(RnlaError::ZeroMatrix);
    }
    Ok(svd.u)
}

/// Largest entry of `|Q^T Q - I|`.
pub fn orthonormality_defect(q: &DenseMatrix) -> f64 {
    let gram = q.tr_matmul(q);
    let mut worst: f64 = 0.0;
    for i in 0..gram.rows() {
        for j in 0..gram.cols() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((gram[(i, j)] - target).abs());
        }
    }
    worst
}

/// Errors unless `Q^T Q = I` to within `tol`.
pub fn require_orthonormal(q: &DenseMatrix, tol: f64) -> Result<()> {
    let deviation = orthonormality_defect(q);
    if deviation > tol {
        return Err(RnlaError::NotOrthonormal { deviation });
    }
    Ok(())
}

/// `A - Q Q^T A` for orthonormal `Q`.
pub fn residual_after_projection(a: &DenseMatrix, q: &DenseMatrix) -> DenseMatrix {
    a.sub(&q.matmul(&q.tr_matmul(a)))
}
