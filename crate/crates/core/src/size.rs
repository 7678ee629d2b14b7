use serde::{Deserialize, Serialize};

use crate::error::{Result, RnlaError};

/// A sample-size formula evaluated both exactly and rounded up.
///
/// The theoretical constants are loose, so callers at desk scale usually
/// override the count; `value` keeps the unrounded expression for reporting.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleSize {
    pub value: f64,
    pub count: u64,
}

impl SampleSize {
    pub(crate) fn from_value(value: f64) -> Self {
        Self {
            value,
            count: value.ceil().max(1.0) as u64,
        }
    }
}

pub(crate) fn open_unit(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(RnlaError::param(name, v, "must lie in (0, 1)"))
    }
}

pub(crate) fn half_open_unit(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v <= 1.0 {
        Ok(())
    } else {
        Err(RnlaError::param(name, v, "must lie in (0, 1]"))
    }
}

pub(crate) fn positive_count(name: &'static str, v: usize) -> Result<()> {
    if v >= 1 {
        Ok(())
    } else {
        Err(RnlaError::param(name, v, "must be at least 1"))
    }
}
