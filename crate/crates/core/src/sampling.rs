//! Sampling distributions over the inner index of a product and seeded
//! sampling-and-rescaling plans.
//!
//! A [`SamplingPlan`] is the sparse `n x c` matrix `S` with one nonzero
//! `1/sqrt(c p_{i_t})` in column `t` at row `i_t`. It is never materialized
//! outside of tests and diagnostics.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, RnlaError};
use crate::linalg::{require_orthonormal, DenseMatrix};
use crate::rng;

const SUM_TOL: f64 = 1e-12;
const ORTHO_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbKind {
    /// Proportional to `|A_{*k}| |B_{k*}|`.
    Optimal,
    ColnormA,
    RownormB,
    Leverage,
    Uniform,
    /// Caller-supplied weights.
    Custom,
}

impl std::str::FromStr for ProbKind {
    type Err = RnlaError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "optimal" => ProbKind::Optimal,
            "colnorm" | "colnorm-a" => ProbKind::ColnormA,
            "rownorm" | "rownorm-b" => ProbKind::RownormB,
            "leverage" => ProbKind::Leverage,
            "uniform" => ProbKind::Uniform,
            _ => return Err(RnlaError::param("probs", s, "unknown probability family")),
        })
    }
}

/// Probability vector `{p_k}` with the family it came from.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbVector {
    p: Vec<f64>,
    kind: ProbKind,
    beta: f64,
}

impl ProbVector {
    /// Normalizes nonnegative weights into a distribution.
    pub fn from_weights(weights: &[f64], kind: ProbKind) -> Result<Self> {
        if let Some(i) = weights.iter().position(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(RnlaError::param(
                "weight",
                weights[i],
                "must be finite and nonnegative",
            ));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(RnlaError::DegenerateDistribution);
        }
        Ok(Self {
            p: weights.iter().map(|w| w / total).collect(),
            kind,
            beta: 1.0,
        })
    }

    /// Wraps an already-normalized vector.
    pub fn new(p: Vec<f64>, kind: ProbKind) -> Result<Self> {
        if p.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(RnlaError::param(
                "p",
                "negative or non-finite",
                "not a distribution",
            ));
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > SUM_TOL {
            return Err(RnlaError::param("p", total, "probabilities must sum to 1"));
        }
        Ok(Self { p, kind, beta: 1.0 })
    }

    pub fn probs(&self) -> &[f64] {
        &self.p
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    pub fn kind(&self) -> ProbKind {
        self.kind
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

/// `p_k ∝ |A_{*k}|_2 |B_{k*}|_2`, the minimizer of the expected Frobenius error.
pub fn optimal_probs(a: &DenseMatrix, b: &DenseMatrix) -> Result<ProbVector> {
    if a.cols() != b.rows() {
        return Err(RnlaError::dims(
            "optimal_probs",
            format!("A has {} columns, B has {} rows", a.cols(), b.rows()),
        ));
    }
    let weights: Vec<f64> = a
        .column_norms()
        .iter()
        .zip(b.row_norms())
        .map(|(ca, rb)| ca * rb)
        .collect();
    ProbVector::from_weights(&weights, ProbKind::Optimal)
}

pub fn colnorm_probs(a: &DenseMatrix) -> Result<ProbVector> {
    let weights: Vec<f64> = a.column_norms().iter().map(|v| v * v).collect();
    ProbVector::from_weights(&weights, ProbKind::ColnormA)
}

pub fn rownorm_probs(b: &DenseMatrix) -> Result<ProbVector> {
    let weights: Vec<f64> = b.row_norms().iter().map(|v| v * v).collect();
    ProbVector::from_weights(&weights, ProbKind::RownormB)
}

/// Leverage-score probabilities `|U_{k*}|^2 / d` of an orthonormal basis.
pub fn leverage_probs(u: &DenseMatrix) -> Result<ProbVector> {
    require_orthonormal(u, ORTHO_TOL)?;
    let d = u.cols() as f64;
    let p = u.row_norms().iter().map(|v| v * v / d).collect();
    Ok(ProbVector {
        p,
        kind: ProbKind::Leverage,
        beta: 1.0,
    })
}

pub fn uniform_probs(n: usize) -> Result<ProbVector> {
    if n == 0 {
        return Err(RnlaError::param("n", n, "must be at least 1"));
    }
    Ok(ProbVector {
        p: vec![1.0 / n as f64; n],
        kind: ProbKind::Uniform,
        beta: 1.0,
    })
}

/// Largest `beta <= 1` with `p_k >= beta * ref_k` for every `k`.
pub fn beta_of(probs: &ProbVector, reference: &ProbVector) -> Result<f64> {
    if probs.len() != reference.len() {
        return Err(RnlaError::dims("beta_of", "vectors differ in length"));
    }
    let ratio = probs
        .p
        .iter()
        .zip(&reference.p)
        .filter(|(_, &r)| r > 0.0)
        .map(|(&p, &r)| p / r)
        .fold(f64::INFINITY, f64::min);
    Ok(ratio.clamp(0.0, 1.0))
}

/// Attaches a `beta` obtained from [`beta_of`] so downstream bounds use it.
pub fn with_beta(mut probs: ProbVector, beta: f64) -> Result<ProbVector> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(RnlaError::param("beta", beta, "must lie in (0, 1]"));
    }
    probs.beta = beta;
    Ok(probs)
}

/// The sampling-and-rescaling matrix `S` in sparse form.
#[derive(Clone, Debug, PartialEq)]
pub struct SamplingPlan {
    /// Zero-based sampled indices, one per draw.
    pub indices: Vec<usize>,
    /// `1/sqrt(c p_{i_t})` for each draw.
    pub scales: Vec<f64>,
    /// Length of the index space.
    pub n: usize,
    pub seed: u64,
}

impl SamplingPlan {
    /// Plan with the given indices and the rescaling implied by `probs`.
    pub fn from_indices(indices: Vec<usize>, probs: &ProbVector, seed: u64) -> Result<Self> {
        let c = indices.len();
        if c == 0 {
            return Err(RnlaError::param("c", 0, "must be at least 1"));
        }
        let mut scales = Vec::with_capacity(c);
        for &i in &indices {
            let p = *probs
                .p
                .get(i)
                .ok_or_else(|| RnlaError::dims("from_indices", format!("index {i} >= n")))?;
            if p <= 0.0 {
                return Err(RnlaError::ZeroProbability { index: i });
            }
            scales.push(1.0 / (c as f64 * p).sqrt());
        }
        Ok(Self {
            indices,
            scales,
            n: probs.len(),
            seed,
        })
    }

    pub fn c(&self) -> usize {
        self.indices.len()
    }

    /// Dense `n x c` form of `S`.
    pub fn to_dense(&self) -> DenseMatrix {
        let mut s = DenseMatrix::zeros(self.n, self.c());
        for (t, (&i, &w)) in self.indices.iter().zip(&self.scales).enumerate() {
            s[(i, t)] = w;
        }
        s
    }

    /// `A S`: sampled and rescaled columns of `a`.
    pub fn sample_columns(&self, a: &DenseMatrix) -> DenseMatrix {
        assert_eq!(a.cols(), self.n, "sample_columns: width differs from plan");
        DenseMatrix::from_fn(a.rows(), self.c(), |i, t| {
            a[(i, self.indices[t])] * self.scales[t]
        })
    }

    /// `S^T B`: sampled and rescaled rows of `b`.
    pub fn sample_rows(&self, b: &DenseMatrix) -> DenseMatrix {
        assert_eq!(b.rows(), self.n, "sample_rows: height differs from plan");
        DenseMatrix::from_fn(self.c(), b.cols(), |t, j| {
            b[(self.indices[t], j)] * self.scales[t]
        })
    }
}

/// Inverse-CDF sampler over the support of a distribution.
struct Categorical {
    support: Vec<usize>,
    cumulative: Vec<f64>,
}

impl Categorical {
    fn new(p: &[f64]) -> Self {
        let mut support = Vec::new();
        let mut cumulative = Vec::new();
        let mut acc = 0.0;
        for (k, &pk) in p.iter().enumerate() {
            if pk > 0.0 {
                acc += pk;
                support.push(k);
                cumulative.push(acc);
            }
        }
        Self { support, cumulative }
    }

    fn draw(&self, u: f64) -> usize {
        // Rounding can leave the final cumulative value a hair below 1.
        let slot = self
            .cumulative
            .partition_point(|&c| c <= u)
            .min(self.support.len() - 1);
        self.support[slot]
    }
}

/// `c` i.i.d. draws with replacement from `probs`, seeded.
pub fn draw_plan(probs: &ProbVector, c: usize, seed: u64) -> Result<SamplingPlan> {
    let mut stream = rng::seeded(seed);
    draw_plan_from(probs, c, &mut stream, seed)
}

/// Same as [`draw_plan`] but consumes an existing stream.
pub fn draw_plan_from(
    probs: &ProbVector,
    c: usize,
    stream: &mut impl Rng,
    seed: u64,
) -> Result<SamplingPlan> {
    if c == 0 {
        return Err(RnlaError::param("c", 0, "must be at least 1"));
    }
    let sampler = Categorical::new(&probs.p);
    if sampler.support.is_empty() {
        return Err(RnlaError::DegenerateDistribution);
    }
    let indices = (0..c).map(|_| sampler.draw(stream.random::<f64>())).collect();
    SamplingPlan::from_indices(indices, probs, seed)
}
