//! Experiment reports: per-trial records, their aggregate, and JSON/CSV
//! rendering.
//!
//! JSON numbers are written by `serde_json` in shortest round-trip form, so
//! every `f64` re-reads bit-for-bit.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::experiment::ExperimentConfig;
use crate::error::{Result, RnlaError};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrialStatus {
    Ok,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrialReport {
    pub index: usize,
    pub seed: u64,
    pub status: TrialStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Whether the trial met the algorithm's bound. Failed trials never do.
    pub success: bool,
    pub metrics: BTreeMap<String, f64>,
    /// Theoretical values; present exactly when diagnostics were enabled.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<BTreeMap<String, f64>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub flags: BTreeMap<String, bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub op_count: Option<u64>,
    pub wall_time_s: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricSummary {
    pub count: usize,
    pub mean: f64,
    pub std_err: f64,
    pub min: f64,
    pub max: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AggregateReport {
    pub trials: usize,
    pub completed: usize,
    pub failed: usize,
    pub successes: usize,
    /// `successes / trials`; failed trials count against it.
    pub success_rate: f64,
    pub metrics: BTreeMap<String, MetricSummary>,
    /// How often each flag was true, over the completed trials that set it.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub flag_rates: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Meta {
    pub schema_version: u32,
    pub version: String,
    pub rng: String,
}

impl Meta {
    pub fn current() -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            version: crate::VERSION.to_string(),
            rng: crate::rng::RNG_ALGORITHM.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub config: ExperimentConfig,
    pub trials: Vec<TrialReport>,
    pub aggregate: AggregateReport,
    pub meta: Meta,
}

fn summarize(values: &[f64]) -> MetricSummary {
    let (mean, std_err) = crate::stats::mean_and_stderr(values);
    MetricSummary {
        count: values.len(),
        mean,
        std_err,
        min: values.iter().copied().fold(f64::INFINITY, f64::min),
        max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    }
}

/// Folds trials in index order.
pub fn aggregate(trials: &[TrialReport]) -> AggregateReport {
    let mut columns: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    let mut flags: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    let mut completed = 0;
    let mut successes = 0;
    for t in trials {
        if t.status == TrialStatus::Ok {
            completed += 1;
        }
        if t.success {
            successes += 1;
        }
        for (k, &v) in &t.metrics {
            columns.entry(k).or_default().push(v);
        }
        for (k, &f) in &t.flags {
            let e = flags.entry(k).or_default();
            e.0 += f as usize;
            e.1 += 1;
        }
    }
    AggregateReport {
        trials: trials.len(),
        completed,
        failed: trials.len() - completed,
        successes,
        success_rate: if trials.is_empty() {
            0.0
        } else {
            successes as f64 / trials.len() as f64
        },
        metrics: columns
            .into_iter()
            .map(|(k, v)| (k.to_string(), summarize(&v)))
            .collect(),
        flag_rates: flags
            .into_iter()
            .map(|(k, (yes, n))| (k.to_string(), yes as f64 / n as f64))
            .collect(),
    }
}

impl Report {
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| RnlaError::Report(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let report: Report = serde_json::from_str(text).map_err(|e| RnlaError::Report(e.to_string()))?;
        if report.meta.schema_version != SCHEMA_VERSION {
            return Err(RnlaError::Report(format!(
                "schema version {} is not supported (expected {SCHEMA_VERSION})",
                report.meta.schema_version
            )));
        }
        Ok(report)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| RnlaError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json()?).map_err(|source| RnlaError::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    /// A copy with every wall-time field zeroed, for comparing reruns.
    pub fn without_timing(&self) -> Self {
        let mut out = self.clone();
        for t in &mut out.trials {
            t.wall_time_s = 0.0;
        }
        out
    }

    /// The aggregate flattened to `metric,count,mean,std_err,min,max` rows;
    /// rates go in the `mean` column.
    pub fn aggregate_csv(&self) -> String {
        let a = &self.aggregate;
        let mut out = String::from("metric,count,mean,std_err,min,max\n");
        out.push_str(&format!("success_rate,{},{},,,\n", a.trials, a.success_rate));
        for (name, s) in &a.metrics {
            out.push_str(&format!(
                "{name},{},{},{},{},{}\n",
                s.count, s.mean, s.std_err, s.min, s.max
            ));
        }
        for (name, rate) in &a.flag_rates {
            out.push_str(&format!("{name}_rate,{},{rate},,,\n", a.completed));
        }
        out
    }

    /// Short human-readable digest.
    pub fn summary(&self) -> String {
        let a = &self.aggregate;
        let mut out = format!(
            "trials {}  completed {}  failed {}  success_rate {:.4}\n",
            a.trials, a.completed, a.failed, a.success_rate
        );
        for (name, s) in &a.metrics {
            out.push_str(&format!(
                "  {name:<24} mean {:.6e}  se {:.2e}  min {:.6e}  max {:.6e}\n",
                s.mean, s.std_err, s.min, s.max
            ));
        }
        for (name, rate) in &a.flag_rates {
            out.push_str(&format!("  {name:<24} rate {rate:.4}\n"));
        }
        out
    }
}
