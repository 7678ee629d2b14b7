//! Randomized rank-k approximation by an SRHT column sketch followed by
//! Rayleigh-Ritz extraction inside the sketched range.
//!
//! `C = A D H S` (m x c), `U_C` an orthonormal basis of `range(C)`,
//! `W = U_C^T A`, and `U~_k = U_C U_{W,k}` with `U_{W,k}` the top-k left
//! singular vectors of `W`. When `sigma_k = sigma_{k+1}` the returned basis
//! is not unique; only its projection error is meaningful.

use serde::{Deserialize, Serialize};

use crate::error::{Result, RnlaError};
use crate::linalg::{
    best_rank_k, frobenius_norm, orthonormal_basis, pseudoinverse, require_orthonormal,
    residual_after_projection, thin_svd, DenseMatrix,
};
use crate::oracle::for_each_outcome;
use crate::rng;
use crate::sampling::{draw_plan, uniform_probs, SamplingPlan};
use crate::size::{positive_count, SampleSize};
use crate::srht::{make_srht, Side};

const ORTHO_TOL: f64 = 1e-8;

fn check_eps_half(eps: f64) -> Result<()> {
    if eps > 0.0 && eps <= 0.5 {
        Ok(())
    } else {
        Err(RnlaError::param("eps", eps, "must lie in (0, 1/2]"))
    }
}

fn check_lowrank_dims(n: usize, k: usize) -> Result<()> {
    positive_count("k", k)?;
    if n < 3 {
        return Err(RnlaError::param(
            "n",
            n,
            "must be at least 3 so that ln ln n is defined",
        ));
    }
    Ok(())
}

/// `c0 (k ln n / eps^2)(ln(k / eps^2) + ln ln n)` for a caller-chosen `c0`.
pub fn lowrank_sample_size(n: usize, k: usize, eps: f64, c0: f64) -> Result<SampleSize> {
    check_lowrank_dims(n, k)?;
    check_eps_half(eps)?;
    if !(c0 > 0.0 && c0.is_finite()) {
        return Err(RnlaError::param("c0", c0, "must be positive"));
    }
    let (ln_n, k) = ((n as f64).ln(), k as f64);
    let eps2 = eps * eps;
    Ok(SampleSize::from_value(
        c0 * (k * ln_n / eps2) * ((k / eps2).ln() + ln_n.ln()),
    ))
}

/// `(192 k ln(40nk) / eps^2) ln(192 sqrt(20) k ln(40nk) / eps^2)`.
pub fn lowrank_sample_size_explicit(n: usize, k: usize, eps: f64) -> Result<SampleSize> {
    check_lowrank_dims(n, k)?;
    check_eps_half(eps)?;
    let (nf, kf) = (n as f64, k as f64);
    let base = kf * (40.0 * nf * kf).ln() / (eps * eps);
    Ok(SampleSize::from_value(
        192.0 * base * (192.0 * 20f64.sqrt() * base).ln(),
    ))
}

#[derive(Clone, Debug)]
pub struct LowRankOptions {
    /// Sketch width; `lowrank_sample_size(n, k, eps, c0)` when `None`.
    pub c: Option<usize>,
    pub c0: f64,
    /// Evaluate the Rayleigh-Ritz identity and the projection decomposition.
    pub diagnostics: bool,
}

impl Default for LowRankOptions {
    fn default() -> Self {
        Self {
            c: None,
            c0: 1.0,
            diagnostics: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LowRankDiagnostics {
    /// `|(A - U~U~^T A) - (A - U_C (U_C^T A)_k)|_F`.
    pub rayleigh_ritz_gap: f64,
    /// `|A - U~U~^T A|_F^2`.
    pub decomposition_lhs: f64,
    /// `|A_k - U_C U_C^T A_k|_F^2 + |A - A_k|_F^2`.
    pub decomposition_rhs: f64,
}

#[derive(Clone, Debug)]
pub struct LowRankResult {
    /// `m x k`, orthonormal columns.
    pub u_tilde_k: DenseMatrix,
    /// `U_C`, the orthonormal basis of the sketch.
    pub range_basis: DenseMatrix,
    pub c_used: usize,
    /// `|A - U~_k U~_k^T A|_F`.
    pub error_fro: f64,
    /// `|A - A_k|_F`.
    pub baseline_fro: f64,
    pub seed: u64,
    pub diagnostics: Option<LowRankDiagnostics>,
}

/// `U_C U_{W,k}` for `W = U_C^T A`.
fn ritz_basis(a: &DenseMatrix, u_c: &DenseMatrix, k: usize, c: usize) -> Result<DenseMatrix> {
    let w = u_c.tr_matmul(a);
    let svd_w = thin_svd(&w)?;
    if svd_w.rank() < k {
        return Err(RnlaError::SketchRankDeficient {
            rank: svd_w.rank(),
            k,
            c,
        });
    }
    Ok(u_c.matmul(&svd_w.u.leading_columns(k)))
}

pub fn rand_low_rank(
    a: &DenseMatrix,
    k: usize,
    eps: f64,
    seed: u64,
    opts: &LowRankOptions,
) -> Result<LowRankResult> {
    let (m, n) = a.shape();
    positive_count("k", k)?;
    if k > m.min(n) {
        return Err(RnlaError::param("k", k, "must not exceed min(rows, cols)"));
    }
    if !(eps > 0.0 && eps <= 0.5) {
        return Err(RnlaError::param("eps", eps, "must lie in (0, 1/2]"));
    }
    let c = match opts.c {
        Some(c) => c,
        None => lowrank_sample_size(n.max(3), k, eps, opts.c0)?.count as usize,
    };
    if c < k {
        return Err(RnlaError::param("c", c, "sketch width must be at least k"));
    }

    let op = make_srht(n, c, seed, Side::Right)?;
    let sketch = op.apply(a)?;
    let u_c = match orthonormal_basis(&sketch) {
        Ok(q) => q,
        Err(RnlaError::ZeroMatrix) => return Err(RnlaError::SketchRankDeficient { rank: 0, k, c }),
        Err(e) => return Err(e),
    };
    let u_tilde = ritz_basis(a, &u_c, k, c)?;

    let svd_a = thin_svd(a)?;
    let baseline_fro = svd_a.sigma.iter().skip(k).map(|s| s * s).sum::<f64>().sqrt();
    let error_fro = frobenius_norm(&residual_after_projection(a, &u_tilde));

    let diagnostics = if opts.diagnostics {
        let gap = rayleigh_ritz_identity_check(a, &u_c, k)?;
        let a_k = svd_a.reconstruct(k);
        let captured = frobenius_norm(&residual_after_projection(&a_k, &u_c)).powi(2);
        Some(LowRankDiagnostics {
            rayleigh_ritz_gap: gap,
            decomposition_lhs: error_fro * error_fro,
            decomposition_rhs: captured + baseline_fro * baseline_fro,
        })
    } else {
        None
    };

    Ok(LowRankResult {
        u_tilde_k: u_tilde,
        range_basis: u_c,
        c_used: c,
        error_fro,
        baseline_fro,
        seed,
        diagnostics,
    })
}

/// `|(A - U~_k U~_k^T A) - (A - U_C (U_C^T A)_k)|_F`; zero in exact arithmetic.
pub fn rayleigh_ritz_identity_check(a: &DenseMatrix, u_c: &DenseMatrix, k: usize) -> Result<f64> {
    require_orthonormal(u_c, ORTHO_TOL)?;
    if u_c.rows() != a.rows() {
        return Err(RnlaError::dims(
            "rayleigh_ritz_identity_check",
            "U_C and A differ in rows",
        ));
    }
    let u_tilde = ritz_basis(a, u_c, k, u_c.cols())?;
    let left = residual_after_projection(a, &u_tilde);
    let w = u_c.tr_matmul(a);
    let right = a.sub(&u_c.matmul(&best_rank_k(&w, k)?));
    Ok(frobenius_norm(&left.sub(&right)))
}

/// `(|A_k - (AZ)(AZ)^+ A_k|_F^2, |(A - A_k) Z (V_k^T Z)^+|_F^2)`.
///
/// Requires `rank(V_k^T Z) = k`.
pub fn structural_inequality_check(a: &DenseMatrix, z: &DenseMatrix, k: usize) -> Result<(f64, f64)> {
    if z.rows() != a.cols() {
        return Err(RnlaError::dims(
            "structural_inequality_check",
            "Z must have n rows",
        ));
    }
    positive_count("k", k)?;
    let svd = thin_svd(a)?;
    if svd.rank() < k {
        return Err(RnlaError::RankDeficient {
            rank: svd.rank(),
            required: k,
        });
    }
    let v_k = svd.v.leading_columns(k);
    let vz = v_k.tr_matmul(z);
    let vz_rank = if vz.is_empty() { 0 } else { thin_svd(&vz)?.rank() };
    if vz_rank < k {
        return Err(RnlaError::RankDeficient {
            rank: vz_rank,
            required: k,
        });
    }
    let a_k = svd.reconstruct(k);
    let az = a.matmul(z);
    let proj = az.matmul(&pseudoinverse(&az)?.matmul(&a_k));
    let lhs = frobenius_norm(&a_k.sub(&proj)).powi(2);
    let tail = a.sub(&a_k);
    let rhs = frobenius_norm(&tail.matmul(z).matmul(&pseudoinverse(&vz)?)).powi(2);
    Ok((lhs, rhs))
}

/// `(E |X S|_F^2, |X|_F^2)` for `c` uniform columns rescaled by
/// `sqrt(n/c)`, with the expectation computed by enumerating all `n^c`
/// plans. Limited to `n <= 6`, `c <= 3`.
pub fn column_sample_fro_check(x: &DenseMatrix, c: usize) -> Result<(f64, f64)> {
    let n = x.cols();
    positive_count("c", c)?;
    if n > 6 || c > 3 {
        return Err(RnlaError::EnumerationTooLarge { n, c });
    }
    let probs = uniform_probs(n)?;
    let mut expected = 0.0;
    for_each_outcome(&probs, c, |tuple, w| {
        let plan = SamplingPlan::from_indices(tuple.to_vec(), &probs, 0)?;
        expected += w * frobenius_norm(&plan.sample_columns(x)).powi(2);
        Ok(())
    })?;
    Ok((expected, frobenius_norm(x).powi(2)))
}

/// `|X S|_F^2` for one seeded uniform column sample.
pub fn column_sample_fro(x: &DenseMatrix, c: usize, seed: u64) -> Result<f64> {
    let plan = draw_plan(&uniform_probs(x.cols())?, c, seed)?;
    Ok(frobenius_norm(&plan.sample_columns(x)).powi(2))
}

/// Mean and standard error of [`column_sample_fro`] over seeds
/// `base, base + 1, ...`.
pub fn column_sample_fro_monte_carlo(
    x: &DenseMatrix,
    c: usize,
    trials: usize,
    base_seed: u64,
) -> Result<(f64, f64)> {
    positive_count("trials", trials)?;
    let samples = (0..trials as u64)
        .map(|t| column_sample_fro(x, c, rng::derive(base_seed, t)))
        .collect::<Result<Vec<_>>>()?;
    Ok(crate::stats::mean_and_stderr(&samples))
}
