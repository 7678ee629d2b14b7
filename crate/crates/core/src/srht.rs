//! Randomized Hadamard transform and its subsampled application.
//!
//! `H` is the Sylvester Hadamard matrix normalized by `1/sqrt(n)`, so it is
//! symmetric and orthogonal. `D` is a random `±1` diagonal. The subsampled
//! product `S^T H x` is evaluated by splitting the requested index set over
//! the two halves of `H = [[H', H'], [H', -H']]` and recursing only into
//! halves that still hold requested indices. That costs at most
//! `2 n log2(r + 1)` additions and subtractions for `r` requested entries.

use serde::{Deserialize, Serialize};

use crate::error::{Result, RnlaError};
use crate::linalg::{require_orthonormal, DenseMatrix};
use crate::rng;
use crate::sampling::{draw_plan_from, uniform_probs, SamplingPlan};
use rand::Rng;

const ORTHO_TOL: f64 = 1e-8;

/// Additions and subtractions performed by a transform call.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OpCounter {
    pub adds_subs: u64,
}

impl OpCounter {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    fn add(&mut self, n: usize) {
        self.adds_subs += n as u64;
    }
}

/// The `2 n log2(r + 1)` ceiling on additions for `r` sampled outputs.
pub fn subsampled_op_bound(n: usize, r: usize) -> f64 {
    2.0 * n as f64 * ((r + 1) as f64).log2()
}

fn require_pow2(len: usize) -> Result<()> {
    if len.is_power_of_two() {
        Ok(())
    } else {
        Err(RnlaError::NotPowerOfTwo { len })
    }
}

/// Normalized Walsh-Hadamard transform `H_n x`.
pub fn fwht(x: &[f64], counter: &mut OpCounter) -> Result<Vec<f64>> {
    let n = x.len();
    require_pow2(n)?;
    let mut out = x.to_vec();
    let mut half = 1;
    while half < n {
        for block in out.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (u, v) = (*a, *b);
                *a = u + v;
                *b = u - v;
            }
        }
        counter.add(n);
        half *= 2;
    }
    let norm = 1.0 / (n as f64).sqrt();
    out.iter_mut().for_each(|v| *v *= norm);
    Ok(out)
}

// Unnormalized entries `(H~ x)_t` for sorted, distinct `targets`, pushed in
// target order.
fn split_recurse(x: &[f64], targets: &[usize], out: &mut Vec<f64>, counter: &mut OpCounter) {
    let n = x.len();
    if n == 1 {
        out.push(x[0]);
        return;
    }
    let half = n / 2;
    let (x1, x2) = x.split_at(half);
    let split = targets.partition_point(|&t| t < half);
    let (top, bottom) = targets.split_at(split);
    if !top.is_empty() {
        let sum: Vec<f64> = x1.iter().zip(x2).map(|(a, b)| a + b).collect();
        counter.add(half);
        split_recurse(&sum, top, out, counter);
    }
    if !bottom.is_empty() {
        let diff: Vec<f64> = x1.iter().zip(x2).map(|(a, b)| a - b).collect();
        counter.add(half);
        let shifted: Vec<usize> = bottom.iter().map(|t| t - half).collect();
        split_recurse(&diff, &shifted, out, counter);
    }
}

/// The plan's sampled entries of `H x`, each multiplied by its plan scale.
///
/// Repeated indices are computed once and emitted once per draw.
pub fn subsampled_fwht(x: &[f64], plan: &SamplingPlan, counter: &mut OpCounter) -> Result<Vec<f64>> {
    let n = x.len();
    if n != plan.n {
        return Err(RnlaError::dims(
            "subsampled_fwht",
            format!("vector length {n}, plan over {}", plan.n),
        ));
    }
    require_pow2(n)?;
    let mut distinct = plan.indices.clone();
    distinct.sort_unstable();
    distinct.dedup();
    let mut values = Vec::with_capacity(distinct.len());
    split_recurse(x, &distinct, &mut values, counter);
    let norm = 1.0 / (n as f64).sqrt();
    Ok(plan
        .indices
        .iter()
        .zip(&plan.scales)
        .map(|(i, s)| {
            let slot = distinct.binary_search(i).expect("index present");
            values[slot] * norm * s
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    /// `S^T H D M`, mixing the rows of `M`.
    Left,
    /// `M D H S`, mixing the columns of `M`.
    Right,
}

/// `S^T H D` (left) or `D H S` (right) over a zero-padded dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct SrhtOperator {
    n: usize,
    n_pad: usize,
    signs: Vec<f64>,
    plan: SamplingPlan,
    side: Side,
}

/// Draws the signs of `D` and then the `r` uniform samples from one stream
/// seeded with `seed`: `n_pad` booleans first, then `r` uniforms.
pub fn make_srht(n: usize, r: usize, seed: u64, side: Side) -> Result<SrhtOperator> {
    if n == 0 {
        return Err(RnlaError::param("n", n, "must be at least 1"));
    }
    if r == 0 {
        return Err(RnlaError::param("r", r, "must be at least 1"));
    }
    let n_pad = n.next_power_of_two();
    let mut stream = rng::seeded(seed);
    let signs = (0..n_pad)
        .map(|_| if stream.random::<bool>() { 1.0 } else { -1.0 })
        .collect();
    let plan = draw_plan_from(&uniform_probs(n_pad)?, r, &mut stream, seed)?;
    Ok(SrhtOperator {
        n,
        n_pad,
        signs,
        plan,
        side,
    })
}

impl SrhtOperator {
    /// Assembles an operator from explicit parts, e.g. all-`+1` signs and an
    /// in-order plan.
    pub fn from_parts(n: usize, signs: Vec<f64>, plan: SamplingPlan, side: Side) -> Result<Self> {
        let n_pad = n.max(1).next_power_of_two();
        if signs.len() != n_pad || plan.n != n_pad {
            return Err(RnlaError::dims(
                "SrhtOperator::from_parts",
                format!("n_pad = {n_pad}, {} signs, plan over {}", signs.len(), plan.n),
            ));
        }
        if signs.iter().any(|&s| s != 1.0 && s != -1.0) {
            return Err(RnlaError::param(
                "signs",
                "non-unit entry",
                "signs must be +1 or -1",
            ));
        }
        let expected = (n_pad as f64 / plan.c() as f64).sqrt();
        if plan
            .scales
            .iter()
            .any(|s| (s - expected).abs() > 1e-12 * expected)
        {
            return Err(RnlaError::param(
                "plan",
                "non-uniform scale",
                "plan must be uniform over n_pad",
            ));
        }
        Ok(Self {
            n,
            n_pad,
            signs,
            plan,
            side,
        })
    }

    /// Logical (unpadded) dimension.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn n_pad(&self) -> usize {
        self.n_pad
    }

    /// Number of sampled coordinates.
    pub fn r(&self) -> usize {
        self.plan.c()
    }

    pub fn signs(&self) -> &[f64] {
        &self.signs
    }

    pub fn plan(&self) -> &SamplingPlan {
        &self.plan
    }

    pub fn side(&self) -> Side {
        self.side
    }

    fn signed_padded(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n_pad];
        for ((o, &x), &s) in out.iter_mut().zip(v).zip(&self.signs) {
            *o = x * s;
        }
        out
    }

    /// `S^T H D [v; 0]`.
    pub fn apply_vec(&self, v: &[f64], counter: &mut OpCounter) -> Result<Vec<f64>> {
        if v.len() > self.n_pad {
            return Err(RnlaError::dims(
                "srht_apply",
                format!("vector of length {} exceeds n_pad = {}", v.len(), self.n_pad),
            ));
        }
        subsampled_fwht(&self.signed_padded(v), &self.plan, counter)
    }

    /// Left side: `S^T H D [M; 0]` (`r x cols`). Right side: `[M, 0] D H S`
    /// (`rows x r`).
    pub fn apply_counted(&self, m: &DenseMatrix, counter: &mut OpCounter) -> Result<DenseMatrix> {
        match self.side {
            Side::Left => {
                let cols = (0..m.cols())
                    .map(|j| self.apply_vec(&m.column(j), counter))
                    .collect::<Result<Vec<_>>>()?;
                DenseMatrix::from_columns(self.r(), &cols)
            }
            Side::Right => {
                // Row i of M D H S is (S^T H D M_{i*}^T)^T since H and D are symmetric.
                let rows = (0..m.rows())
                    .map(|i| self.apply_vec(m.row(i), counter))
                    .collect::<Result<Vec<_>>>()?;
                DenseMatrix::from_rows(&rows)
            }
        }
    }

    pub fn apply(&self, m: &DenseMatrix) -> Result<DenseMatrix> {
        self.apply_counted(m, &mut OpCounter::new())
    }
}

pub fn srht_apply(op: &SrhtOperator, m: &DenseMatrix) -> Result<DenseMatrix> {
    op.apply(m)
}

/// `(max_i |(H D U)_{i*}|^2, 2 d ln(40 n d) / n)` with `n = n_pad`.
///
/// The first value comes from a full transform of every column; the second
/// is the level below which the rotation is expected to flatten every row
/// norm with probability at least 0.95.
pub fn coherence_check(u: &DenseMatrix, op: &SrhtOperator) -> Result<(f64, f64)> {
    if u.rows() > op.n_pad {
        return Err(RnlaError::dims(
            "coherence_check",
            format!("U has {} rows, operator pads to {}", u.rows(), op.n_pad),
        ));
    }
    require_orthonormal(u, ORTHO_TOL)?;
    let d = u.cols();
    let mut row_sq = vec![0.0; op.n_pad];
    let mut counter = OpCounter::new();
    for j in 0..d {
        let rotated = fwht(&op.signed_padded(&u.column(j)), &mut counter)?;
        for (acc, v) in row_sq.iter_mut().zip(rotated) {
            *acc += v * v;
        }
    }
    let max = row_sq.into_iter().fold(0.0, f64::max);
    let (n, d) = (op.n_pad as f64, d as f64);
    Ok((max, 2.0 * d * (40.0 * n * d).ln() / n))
}
