//! Sketch-and-solve overdetermined least squares.
//!
//! The system `min |Ax - b|` is rotated by a randomized Hadamard transform,
//! `r` rows of the rotated system are sampled uniformly, and the small
//! `r x d` problem is solved exactly. When the realized sketch `X` keeps
//! `sigma_min^2(X U_A) >= 1/sqrt(2)` and keeps `X b_perp` nearly orthogonal to
//! `X U_A`, the sketched solution is a `(1 + eps)` approximation
//! deterministically. [`ConditionReport`] records both quantities.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, RnlaError};
use crate::linalg::{norm2, pseudoinverse, singular_values, thin_svd, DenseMatrix, ThinSvd};
use crate::rng;
use crate::size::{open_unit, positive_count, SampleSize};
use crate::srht::{make_srht, OpCounter, Side, SrhtOperator};

/// Minimum-norm least-squares solution and its residual `Z`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactLsq {
    pub x: Vec<f64>,
    pub residual: f64,
}

pub fn exact_least_squares(a: &DenseMatrix, b: &[f64]) -> Result<ExactLsq> {
    if a.rows() == 0 {
        return Err(RnlaError::EmptyMatrix);
    }
    if b.len() != a.rows() {
        return Err(RnlaError::dims(
            "exact_least_squares",
            format!("A has {} rows, b has length {}", a.rows(), b.len()),
        ));
    }
    let x = pseudoinverse(a)?.mul_vec(b);
    let residual = residual_norm(a, &x, b);
    Ok(ExactLsq { x, residual })
}

pub fn residual_norm(a: &DenseMatrix, x: &[f64], b: &[f64]) -> f64 {
    let ax = a.mul_vec(x);
    let diff: Vec<f64> = ax.iter().zip(b).map(|(p, q)| p - q).collect();
    norm2(&diff)
}

/// Both branches of the sketch size together with their maximum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LsSampleSize {
    /// `48^2 d ln(40nd) ln(100^2 d ln(40nd))`, for the subspace embedding.
    pub embedding: f64,
    /// `40 d ln(40nd) / eps`, for the cross-term condition.
    pub accuracy: f64,
    pub size: SampleSize,
}

pub fn ls_sample_size(n: usize, d: usize, eps: f64) -> Result<LsSampleSize> {
    positive_count("d", d)?;
    if n < d {
        return Err(RnlaError::param("n", n, "must be at least d"));
    }
    open_unit("eps", eps)?;
    let (nf, df) = (n as f64, d as f64);
    let l = (40.0 * nf * df).ln();
    let embedding = 48.0f64.powi(2) * df * l * (100.0f64.powi(2) * df * l).ln();
    let accuracy = 40.0 * df * l / eps;
    Ok(LsSampleSize {
        embedding,
        accuracy,
        size: SampleSize::from_value(embedding.max(accuracy)),
    })
}

/// The two sufficient conditions evaluated on a realized sketch `X`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    /// `sigma_min^2(X U_A)`.
    pub sigma_min_sq: f64,
    /// `|(X U_A)^T X b_perp|_2^2`.
    pub cross_term: f64,
    /// Optimal residual `Z = |b_perp|`.
    pub z: f64,
    pub eps: f64,
    /// `sigma_min_sq >= 1/sqrt(2)`.
    pub cond22_pass: bool,
    /// `cross_term <= eps Z^2 / 2`.
    pub cond23_pass: bool,
}

impl ConditionReport {
    pub fn both_pass(&self) -> bool {
        self.cond22_pass && self.cond23_pass
    }
}

fn evaluate_conditions(sketch_u: &DenseMatrix, sketch_bperp: &[f64], z: f64, eps: f64) -> ConditionReport {
    let sigma_min = if sketch_u.rows() < sketch_u.cols() {
        0.0
    } else {
        singular_values(sketch_u).last().copied().unwrap_or(0.0)
    };
    let sigma_min_sq = sigma_min * sigma_min;
    let cross_term = norm2(&sketch_u.tr_mul_vec(sketch_bperp)).powi(2);
    ConditionReport {
        sigma_min_sq,
        cross_term,
        z,
        eps,
        cond22_pass: sigma_min_sq >= std::f64::consts::FRAC_1_SQRT_2,
        cond23_pass: cross_term <= eps * z * z / 2.0,
    }
}

/// Evaluates both conditions for given sketches `X U_A` and `X b_perp`.
pub fn check_conditions(
    a: &DenseMatrix,
    b: &[f64],
    sketch_of_ua: &DenseMatrix,
    sketch_of_bperp: &[f64],
    eps: f64,
) -> Result<ConditionReport> {
    if sketch_of_ua.rows() != sketch_of_bperp.len() {
        return Err(RnlaError::dims(
            "check_conditions",
            format!(
                "X U_A has {} rows, X b_perp has length {}",
                sketch_of_ua.rows(),
                sketch_of_bperp.len()
            ),
        ));
    }
    let z = exact_least_squares(a, b)?.residual;
    Ok(evaluate_conditions(sketch_of_ua, sketch_of_bperp, z, eps))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SizeSource {
    Override,
    Theory,
}

#[derive(Clone, Debug, Default)]
pub struct LsqOptions {
    /// Sketch size; the theoretical value is used when `None`.
    pub r: Option<usize>,
    /// Evaluate the two sketch conditions (needs `U_A`, so costs `O(n d^2)`).
    pub diagnostics: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LsqSolution {
    pub x_tilde: Vec<f64>,
    /// `|A x_tilde - b|` on the original, unpadded system.
    pub residual_norm: f64,
    pub r_used: usize,
    pub r_source: SizeSource,
    /// Additions spent applying the transform to `A` and `b`.
    pub transform_ops: u64,
    pub seed: u64,
    pub diagnostics: Option<ConditionReport>,
}

fn require_full_rank(a: &DenseMatrix) -> Result<ThinSvd> {
    let svd = thin_svd(a)?;
    if svd.rank() < a.cols() {
        return Err(RnlaError::RankDeficient {
            rank: svd.rank(),
            required: a.cols(),
        });
    }
    Ok(svd)
}

pub fn rand_least_squares(
    a: &DenseMatrix,
    b: &[f64],
    eps: f64,
    seed: u64,
    opts: &LsqOptions,
) -> Result<LsqSolution> {
    open_unit("eps", eps)?;
    if b.len() != a.rows() {
        return Err(RnlaError::dims(
            "rand_least_squares",
            format!("A has {} rows, b has length {}", a.rows(), b.len()),
        ));
    }
    let svd = require_full_rank(a)?;
    let (n, d) = a.shape();
    let (r, r_source) = match opts.r {
        Some(r) => (r, SizeSource::Override),
        None => (ls_sample_size(n, d, eps)?.size.count as usize, SizeSource::Theory),
    };
    if r < d {
        return Err(RnlaError::param("r", r, "sketch must keep at least d rows"));
    }
    let op = make_srht(n, r, seed, Side::Left)?;
    let mut sol = solve_sketched(a, b, eps, &op, &svd, opts.diagnostics)?;
    sol.seed = seed;
    sol.r_source = r_source;
    Ok(sol)
}

/// Runs the sketched solve with a caller-built operator.
pub fn rand_least_squares_with_operator(
    a: &DenseMatrix,
    b: &[f64],
    eps: f64,
    op: &SrhtOperator,
    diagnostics: bool,
) -> Result<LsqSolution> {
    open_unit("eps", eps)?;
    if op.side() != Side::Left || op.n() != a.rows() || b.len() != a.rows() {
        return Err(RnlaError::dims(
            "rand_least_squares_with_operator",
            "operator must be left-sided over the rows of A",
        ));
    }
    let svd = require_full_rank(a)?;
    if op.r() < a.cols() {
        return Err(RnlaError::param("r", op.r(), "sketch must keep at least d rows"));
    }
    solve_sketched(a, b, eps, op, &svd, diagnostics)
}

fn solve_sketched(
    a: &DenseMatrix,
    b: &[f64],
    eps: f64,
    op: &SrhtOperator,
    svd: &ThinSvd,
    diagnostics: bool,
) -> Result<LsqSolution> {
    let mut counter = OpCounter::new();
    let sa = op.apply_counted(a, &mut counter)?;
    let sb = op.apply_vec(b, &mut counter)?;
    let x_tilde = exact_least_squares(&sa, &sb)?.x;
    let residual = residual_norm(a, &x_tilde, b);

    let diagnostics = if diagnostics {
        let ua = &svd.u;
        let proj = ua.mul_vec(&ua.tr_mul_vec(b));
        let bperp: Vec<f64> = b.iter().zip(&proj).map(|(x, p)| x - p).collect();
        let z = norm2(&bperp);
        let xu = op.apply(ua)?;
        let xb = op.apply_vec(&bperp, &mut OpCounter::new())?;
        Some(evaluate_conditions(&xu, &xb, z, eps))
    } else {
        None
    };

    Ok(LsqSolution {
        x_tilde,
        residual_norm: residual,
        r_used: op.r(),
        r_source: SizeSource::Override,
        transform_ops: counter.adds_subs,
        seed: op.plan().seed,
        diagnostics,
    })
}

/// Repetitions needed to push the failure probability from 1/5 to `delta`.
pub fn repetitions_for(delta: f64) -> Result<usize> {
    open_unit("delta", delta)?;
    Ok(((1.0 / delta).ln() / 5f64.ln()).ceil().max(1.0) as usize)
}

/// Reruns the sketched solve with seeds `seed, seed + 1, ...` and keeps the
/// smallest residual; ties go to the lower seed.
pub fn rand_least_squares_amplified(
    a: &DenseMatrix,
    b: &[f64],
    eps: f64,
    delta: f64,
    seed: u64,
    opts: &LsqOptions,
) -> Result<LsqSolution> {
    let reps = repetitions_for(delta)?;
    let runs: Vec<Result<LsqSolution>> = (0..reps as u64)
        .into_par_iter()
        .map(|t| rand_least_squares(a, b, eps, rng::derive(seed, t), opts))
        .collect();
    let mut best: Option<LsqSolution> = None;
    for run in runs {
        let sol = run?;
        let better = match &best {
            None => true,
            Some(cur) => sol.residual_norm < cur.residual_norm,
        };
        if better {
            best = Some(sol);
        }
    }
    Ok(best.expect("at least one repetition"))
}

/// `sqrt(eps) kappa(A) sqrt(gamma^-2 - 1) |x_opt|`, the forward-error bound
/// when `|U_A U_A^T b| >= gamma |b|`.
pub fn forward_error_bound(a: &DenseMatrix, b: &[f64], eps: f64, gamma: f64) -> Result<f64> {
    open_unit("eps", eps)?;
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(RnlaError::param("gamma", gamma, "must lie in (0, 1]"));
    }
    let svd = require_full_rank(a)?;
    let x_opt = exact_least_squares(a, b)?.x;
    Ok(eps.sqrt() * svd.condition_number() * (gamma.powi(-2) - 1.0).max(0.0).sqrt() * norm2(&x_opt))
}
