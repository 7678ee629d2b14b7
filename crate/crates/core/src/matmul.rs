//! Randomized matrix multiplication by column/row sampling, and the
//! quantities that bound its error.
//!
//! `AB` is approximated by `CR = sum_t A_{*i_t} B_{i_t*} / (c p_{i_t})`
//! with the `i_t` drawn i.i.d. from `{p_k}`. The estimator is unbiased for
//! any distribution that is positive wherever a term is nonzero.

use crate::error::{Result, RnlaError};
use crate::linalg::{frobenius_norm, spectral_norm, DenseMatrix};
use crate::sampling::{draw_plan, ProbVector, SamplingPlan};
use crate::size::{half_open_unit, open_unit, positive_count, SampleSize};

/// `C = A S` and `R = S^T B` for one sampling plan.
#[derive(Clone, Debug)]
pub struct MatMulSketch {
    /// `m x c` sampled, rescaled columns of `A`.
    pub col_sample: DenseMatrix,
    /// `c x p` sampled, rescaled rows of `B`.
    pub row_sample: DenseMatrix,
    pub plan: SamplingPlan,
}

impl MatMulSketch {
    /// The estimate `CR`.
    pub fn product(&self) -> DenseMatrix {
        self.col_sample.matmul(&self.row_sample)
    }
}

fn check_inner(op: &'static str, a: &DenseMatrix, b: &DenseMatrix, n: usize) -> Result<()> {
    if a.cols() != b.rows() || a.cols() != n {
        return Err(RnlaError::dims(
            op,
            format!(
                "A is {}x{}, B is {}x{}, probabilities have length {n}",
                a.rows(),
                a.cols(),
                b.rows(),
                b.cols()
            ),
        ));
    }
    Ok(())
}

pub fn rand_matrix_multiply(
    a: &DenseMatrix,
    b: &DenseMatrix,
    c: usize,
    probs: &ProbVector,
    seed: u64,
) -> Result<MatMulSketch> {
    check_inner("rand_matrix_multiply", a, b, probs.len())?;
    let plan = draw_plan(probs, c, seed)?;
    sketch_with_plan(a, b, plan)
}

/// Builds the sketch for a fixed plan.
pub fn sketch_with_plan(a: &DenseMatrix, b: &DenseMatrix, plan: SamplingPlan) -> Result<MatMulSketch> {
    check_inner("sketch_with_plan", a, b, plan.n)?;
    Ok(MatMulSketch {
        col_sample: plan.sample_columns(a),
        row_sample: plan.sample_rows(b),
        plan,
    })
}

/// `(1/c) sum_k |A_{*k}|^2 |B_{k*}|^2 / p_k`, an upper bound on `E|AB - CR|_F^2`.
pub fn expected_frobenius_error(
    a: &DenseMatrix,
    b: &DenseMatrix,
    c: usize,
    probs: &ProbVector,
) -> Result<f64> {
    check_inner("expected_frobenius_error", a, b, probs.len())?;
    positive_count("c", c)?;
    let col = a.column_norms();
    let row = b.row_norms();
    let mut total = 0.0;
    for (k, &p) in probs.probs().iter().enumerate() {
        let term = (col[k] * row[k]).powi(2);
        if term == 0.0 {
            continue;
        }
        if p <= 0.0 {
            return Err(RnlaError::ZeroProbability { index: k });
        }
        total += term / p;
    }
    Ok(total / c as f64)
}

/// `(1/c) sum_k A_{ik}^2 B_{kj}^2 / p_k`, bounding `Var[(CR)_{ij}]`.
pub fn entry_variance_bound(
    a: &DenseMatrix,
    b: &DenseMatrix,
    probs: &ProbVector,
    c: usize,
    i: usize,
    j: usize,
) -> Result<f64> {
    check_inner("entry_variance_bound", a, b, probs.len())?;
    positive_count("c", c)?;
    if i >= a.rows() || j >= b.cols() {
        return Err(RnlaError::IndexOutOfRange {
            row: i,
            col: j,
            rows: a.rows(),
            cols: b.cols(),
        });
    }
    let mut total = 0.0;
    for (k, &p) in probs.probs().iter().enumerate() {
        let term = (a[(i, k)] * b[(k, j)]).powi(2);
        if term == 0.0 {
            continue;
        }
        if p <= 0.0 {
            return Err(RnlaError::ZeroProbability { index: k });
        }
        total += term / p;
    }
    Ok(total / c as f64)
}

/// `c = 10 d^2 / (beta eps^2)`: Markov's inequality applied to the
/// expected Gram error gives `|I - R^T R|_F <= eps` with probability 9/10.
pub fn sample_size_frobenius(d: usize, beta: f64, eps: f64) -> Result<SampleSize> {
    positive_count("d", d)?;
    half_open_unit("beta", beta)?;
    open_unit("eps", eps)?;
    let d = d as f64;
    Ok(SampleSize::from_value(10.0 * d * d / (beta * eps * eps)))
}

/// `c = (96d / (beta eps^2)) ln(96d / (beta eps^2 sqrt(delta)))`, enough for
/// `|I - R^T R|_2 <= eps` with probability `1 - delta`.
pub fn sample_size_spectral(d: usize, beta: f64, eps: f64, delta: f64) -> Result<SampleSize> {
    positive_count("d", d)?;
    half_open_unit("beta", beta)?;
    open_unit("eps", eps)?;
    open_unit("delta", delta)?;
    let base = 96.0 * d as f64 / (beta * eps * eps);
    Ok(SampleSize::from_value(base * (base / delta.sqrt()).ln()))
}

/// `(|I_d - R^T R|_2, |I_d - R^T R|_F)` for rows `R` sampled from an
/// orthonormal `U` with `d` columns.
pub fn gram_sketch_error(u: &DenseMatrix, r: &DenseMatrix) -> Result<(f64, f64)> {
    if u.cols() != r.cols() {
        return Err(RnlaError::dims(
            "gram_sketch_error",
            format!("U has {} columns, R has {}", u.cols(), r.cols()),
        ));
    }
    let d = u.cols();
    let defect = DenseMatrix::identity(d).sub(&r.tr_matmul(r));
    Ok((spectral_norm(&defect), frobenius_norm(&defect)))
}
