//! Seeded random streams.
//!
//! Every random draw in the crate comes from `ChaCha8Rng::seed_from_u64`.
//! ChaCha is counter based and its output is fixed by its specification, so a
//! seed reproduces the same plan, signs and matrices on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::DenseMatrix;

pub type SketchRng = ChaCha8Rng;

/// Recorded in every report so runs can be matched to their generator.
pub const RNG_ALGORITHM: &str = "ChaCha8Rng/seed_from_u64 (rand_chacha 0.9)";

pub fn seeded(seed: u64) -> SketchRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Seed of the `t`-th trial or repetition derived from a base seed.
pub fn derive(base: u64, t: u64) -> u64 {
    base.wrapping_add(t)
}

pub fn gaussian_vec(rng: &mut impl Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.sample(StandardNormal)).collect()
}

pub fn gaussian_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> DenseMatrix {
    DenseMatrix::new(rows, cols, gaussian_vec(rng, rows * cols)).expect("normals are finite")
}
