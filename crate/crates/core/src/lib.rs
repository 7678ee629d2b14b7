//! Randomized numerical linear algebra by sketching.
//!
//! * [`matmul`]: approximate `AB` by sampling columns of `A` and rows of `B`.
//! * [`lsq`]: sketch-and-solve least squares with a subsampled randomized
//!   Hadamard transform ([`srht`]).
//! * [`lowrank`]: rank-k approximation from an SRHT column sketch.
//!
//! [`linalg`] holds the deterministic kernels every randomized output is
//! checked against, [`oracle`] enumerates sampling outcomes exactly, and
//! [`harness`] turns all of it into seeded, reproducible experiments.

pub mod cli;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod lowrank;
pub mod lsq;
pub mod matmul;
pub mod oracle;
pub mod rng;
pub mod sampling;
pub mod size;
pub mod srht;
pub mod stats;

pub use error::{Result, RnlaError};
pub use linalg::{DenseMatrix, ThinSvd};
pub use sampling::{ProbKind, ProbVector, SamplingPlan};
pub use size::SampleSize;
pub use srht::{OpCounter, Side, SrhtOperator};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
