use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = RnlaError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum RnlaError {
    #[error("matrix has no entries")]
    EmptyMatrix,

    #[error("non-finite value {value} at row {row}, column {col}")]
    NonFinite { row: usize, col: usize, value: f64 },

    #[error("data length {len} does not match {rows}x{cols}")]
    DataLength { rows: usize, cols: usize, len: usize },

    #[error("dimension mismatch in {op}: {detail}")]
    DimensionMismatch { op: &'static str, detail: String },

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: String,
        reason: &'static str,
    },

    #[error("degenerate distribution: every sampling weight is zero")]
    DegenerateDistribution,

    #[error("probability p[{index}] is zero but its term in the bound is nonzero")]
    ZeroProbability { index: usize },

    #[error("columns are not orthonormal (max |U^T U - I| = {deviation:e})")]
    NotOrthonormal { deviation: f64 },

    #[error("zero matrix has no column space")]
    ZeroMatrix,

    #[error("matrix is rank deficient: rank {rank}, need {required}")]
    RankDeficient { rank: usize, required: usize },

    #[error("sketch rank deficient: rank(W) = {rank} < k = {k} with c = {c}")]
    SketchRankDeficient { rank: usize, k: usize, c: usize },

    #[error("index ({row}, {col}) out of range for {rows}x{cols}")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },

    #[error("length {len} is not a power of two")]
    NotPowerOfTwo { len: usize },

    #[error("enumeration of {n}^{c} outcomes exceeds the cap")]
    EnumerationTooLarge { n: usize, c: usize },

    #[error("unknown matrix family {0:?}")]
    InvalidFamily(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {msg}")]
    Parse { path: PathBuf, line: usize, msg: String },

    #[error("report: {0}")]
    Report(String),
}

impl RnlaError {
    pub(crate) fn param(name: &'static str, value: impl ToString, reason: &'static str) -> Self {
        RnlaError::InvalidParameter {
            name,
            value: value.to_string(),
            reason,
        }
    }

    pub(crate) fn dims(op: &'static str, detail: impl Into<String>) -> Self {
        RnlaError::DimensionMismatch {
            op,
            detail: detail.into(),
        }
    }

    /// True for failures that come from the numbers rather than from how the
    /// library was called.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            RnlaError::DegenerateDistribution
                | RnlaError::ZeroProbability { .. }
                | RnlaError::NotOrthonormal { .. }
                | RnlaError::ZeroMatrix
                | RnlaError::RankDeficient { .. }
                | RnlaError::SketchRankDeficient { .. }
        )
    }
}
