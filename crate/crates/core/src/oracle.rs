//! Exact enumeration of every sampling outcome.
//!
//! For tiny `n` and `c` the random sketches have a finite outcome space of
//! `n^c` index tuples. Walking all of them, weighted by `prod_t p_{i_t}`,
//! gives exact moments to compare against closed-form bounds.

use crate::error::{Result, RnlaError};
use crate::linalg::{frobenius_norm, DenseMatrix};
use crate::matmul::sketch_with_plan;
use crate::sampling::{ProbVector, SamplingPlan};

/// Cap on `n^c` outcomes.
pub const MAX_OUTCOMES: usize = 1 << 20;

/// Visits every index tuple in `{0..n}^c` with its probability.
pub fn for_each_outcome(
    probs: &ProbVector,
    c: usize,
    mut visit: impl FnMut(&[usize], f64) -> Result<()>,
) -> Result<()> {
    let n = probs.len();
    let total = n
        .checked_pow(c as u32)
        .filter(|&t| t <= MAX_OUTCOMES)
        .ok_or(RnlaError::EnumerationTooLarge { n, c })?;
    let p = probs.probs();
    let mut tuple = vec![0usize; c];
    for _ in 0..total {
        let weight: f64 = tuple.iter().map(|&i| p[i]).product();
        visit(&tuple, weight)?;
        for slot in tuple.iter_mut() {
            *slot += 1;
            if *slot < n {
                break;
            }
            *slot = 0;
        }
    }
    Ok(())
}

/// Exact first and second moments of the sampled product `CR`.
#[derive(Clone, Debug)]
pub struct ProductMoments {
    pub mean: DenseMatrix,
    /// Entrywise variance of `CR`.
    pub variance: DenseMatrix,
    /// `E |AB - CR|_F^2`.
    pub expected_fro_sq: f64,
}

pub fn product_moments(
    a: &DenseMatrix,
    b: &DenseMatrix,
    probs: &ProbVector,
    c: usize,
) -> Result<ProductMoments> {
    let exact = a.matmul(b);
    let (m, p) = exact.shape();
    let mut mean = DenseMatrix::zeros(m, p);
    let mut second = DenseMatrix::zeros(m, p);
    let mut fro = 0.0;
    for_each_outcome(probs, c, |tuple, w| {
        if w == 0.0 {
            return Ok(());
        }
        let plan = SamplingPlan::from_indices(tuple.to_vec(), probs, 0)?;
        let cr = sketch_with_plan(a, b, plan)?.product();
        for i in 0..m {
            for j in 0..p {
                let v = cr[(i, j)];
                mean[(i, j)] += w * v;
                second[(i, j)] += w * v * v;
            }
        }
        fro += w * frobenius_norm(&exact.sub(&cr)).powi(2);
        Ok(())
    })?;
    let variance = DenseMatrix::from_fn(m, p, |i, j| second[(i, j)] - mean[(i, j)].powi(2));
    Ok(ProductMoments {
        mean,
        variance,
        expected_fro_sq: fro,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::uniform_probs;

    #[test]
    fn weights_sum_to_one() {
        let p = ProbVector::from_weights(&[1.0, 2.0, 3.0], crate::sampling::ProbKind::Custom).unwrap();
        let mut total = 0.0;
        let mut count = 0;
        for_each_outcome(&p, 3, |_, w| {
            total += w;
            count += 1;
            Ok(())
        })
        .unwrap();
        assert_eq!(count, 27);
        assert!((total - 1.0).abs() < 1e-14);
    }

    #[test]
    fn cap_enforced() {
        let p = uniform_probs(64).unwrap();
        assert!(matches!(
            for_each_outcome(&p, 8, |_, _| Ok(())),
            Err(RnlaError::EnumerationTooLarge { .. })
        ));
    }
}
