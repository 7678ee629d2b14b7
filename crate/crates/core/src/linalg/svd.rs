//! Thin SVD by one-sided (Hestenes) Jacobi rotations.
//!
//! Columns of the working matrix are rotated pairwise until every pair is
//! orthogonal to within a relative cosine of `ORTHO_TOL`. The column norms are
//! then the singular values, the normalized columns the left singular
//! vectors, and the accumulated rotations the right singular vectors. Because
//! the stopping test is on cosines, the left singular vectors come out
//! orthonormal to working precision regardless of how small the retained
//! singular values are.

use super::{dot, DenseMatrix};
use crate::error::{Result, RnlaError};

const ORTHO_TOL: f64 = 1e-15;
const MAX_SWEEPS: usize = 80;

/// Relative threshold below which a singular value counts as zero.
pub const RANK_RTOL: f64 = 1e-12;
/// Absolute threshold used when the leading singular value is itself zero.
pub const RANK_ATOL: f64 = 1e-300;

/// `A = U diag(sigma) V^T` restricted to the nonzero singular values.
#[derive(Clone, Debug)]
pub struct ThinSvd {
    /// `m x rank`, orthonormal columns.
    pub u: DenseMatrix,
    /// Non-increasing, strictly above the rank cutoff.
    pub sigma: Vec<f64>,
    /// `n x rank`, orthonormal columns.
    pub v: DenseMatrix,
}

impl ThinSvd {
    pub fn rank(&self) -> usize {
        self.sigma.len()
    }

    /// `U_k diag(sigma_k) V_k^T`; `k` is clamped to the rank.
    pub fn reconstruct(&self, k: usize) -> DenseMatrix {
        let k = k.min(self.rank());
        let (m, n) = (self.u.rows(), self.v.rows());
        let mut out = DenseMatrix::zeros(m, n);
        for i in 0..m {
            for t in 0..k {
                let us = self.u[(i, t)] * self.sigma[t];
                if us == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += us * self.v[(j, t)];
                }
            }
        }
        out
    }

    /// `sigma_max / sigma_min` over the retained values; infinite at rank 0.
    pub fn condition_number(&self) -> f64 {
        match (self.sigma.first(), self.sigma.last()) {
            (Some(&hi), Some(&lo)) => hi / lo,
            _ => f64::INFINITY,
        }
    }
}

struct Decomposition {
    sigma: Vec<f64>,
    // Normalized columns; a zero column stays zero.
    left: Vec<Vec<f64>>,
    right: Vec<Vec<f64>>,
}

/// Jacobi sweep on the columns of a tall (`rows >= cols`) matrix.
fn jacobi_tall(mut cols: Vec<Vec<f64>>) -> Decomposition {
    let n = cols.len();
    let mut right: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            e
        })
        .collect();

    let total: f64 = cols.iter().map(|c| dot(c, c)).sum();
    let floor = (f64::EPSILON * 1e-2).powi(2) * total;

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = dot(&cols[p], &cols[p]);
                let beta = dot(&cols[q], &cols[q]);
                if alpha <= floor || beta <= floor {
                    continue;
                }
                let gamma = dot(&cols[p], &cols[q]);
                if gamma.abs() <= ORTHO_TOL * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut cols, p, q, c, s);
                rotate(&mut right, p, q, c, s);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<(f64, usize)> = cols
        .iter()
        .enumerate()
        .map(|(j, c)| (dot(c, c).sqrt(), j))
        .collect();
    // Stable sort keeps the computed order on ties.
    order.sort_by(|a, b| b.0.total_cmp(&a.0));

    let mut sigma = Vec::with_capacity(n);
    let mut left = Vec::with_capacity(n);
    let mut right_sorted = Vec::with_capacity(n);
    for (s, j) in order {
        let col = &cols[j];
        left.push(if s > 0.0 {
            col.iter().map(|v| v / s).collect()
        } else {
            vec![0.0; col.len()]
        });
        sigma.push(s);
        right_sorted.push(right[j].clone());
    }
    Decomposition {
        sigma,
        left,
        right: right_sorted,
    }
}

fn rotate(cols: &mut [Vec<f64>], p: usize, q: usize, c: f64, s: f64) {
    let (head, tail) = cols.split_at_mut(q);
    let (cp, cq) = (&mut head[p], &mut tail[0]);
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let (a, b) = (*x, *y);
        *x = c * a - s * b;
        *y = s * a + c * b;
    }
}

fn decompose(m: &DenseMatrix) -> (Decomposition, bool) {
    if m.rows() >= m.cols() {
        let cols = (0..m.cols()).map(|j| m.column(j)).collect();
        (jacobi_tall(cols), false)
    } else {
        let cols = (0..m.rows()).map(|i| m.row(i).to_vec()).collect();
        (jacobi_tall(cols), true)
    }
}

fn rank_cutoff(sigma1: f64) -> f64 {
    if sigma1 > 0.0 {
        RANK_RTOL * sigma1
    } else {
        RANK_ATOL
    }
}

/// All `min(rows, cols)` singular values in non-increasing order, zeros included.
pub fn singular_values(m: &DenseMatrix) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    decompose(m).0.sigma
}

pub fn thin_svd(m: &DenseMatrix) -> Result<ThinSvd> {
    if m.rows() == 0 || m.cols() == 0 {
        return Err(RnlaError::EmptyMatrix);
    }
    let (dec, transposed) = decompose(m);
    let cutoff = rank_cutoff(dec.sigma[0]);
    let rank = dec.sigma.iter().take_while(|&&s| s > cutoff).count();

    let left = DenseMatrix::from_columns(dec.left[0].len(), &dec.left[..rank])?;
    let right = DenseMatrix::from_columns(dec.right[0].len(), &dec.right[..rank])?;
    let sigma = dec.sigma[..rank].to_vec();
    let (u, v) = if transposed { (right, left) } else { (left, right) };
    Ok(ThinSvd { u, sigma, v })
}
