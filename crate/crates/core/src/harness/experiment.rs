//! Seeded multi-trial experiments.
//!
//! Trial `t` runs with seed `base_seed + t`. Trials execute in parallel and
//! are folded in index order, so the report does not depend on scheduling.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::gen::{gen_matrix, MatrixFamily};
use super::io::{read_matrix, read_vector};
use super::report::{aggregate, Meta, Report, TrialReport, TrialStatus};
use crate::error::{Result, RnlaError};
use crate::linalg::{frobenius_norm, norm2, orthonormal_basis, spectral_norm, thin_svd, DenseMatrix};
use crate::lowrank::{rand_low_rank, structural_inequality_check, LowRankOptions};
use crate::lsq::{exact_least_squares, rand_least_squares, rand_least_squares_amplified, LsqOptions};
use crate::matmul::{
    entry_variance_bound, expected_frobenius_error, gram_sketch_error, rand_matrix_multiply,
};
use crate::oracle::product_moments;
use crate::rng::{self, gaussian_matrix, gaussian_vec, seeded};
use crate::sampling::{
    beta_of, colnorm_probs, draw_plan, leverage_probs, optimal_probs, rownorm_probs, uniform_probs, ProbKind,
    ProbVector,
};
use crate::srht::{coherence_check, fwht, make_srht, subsampled_op_bound, OpCounter, Side};

/// Absolute slack, relative to the data scale, when comparing a realized
/// error with its bound.
const BOUND_SLACK: f64 = 1e-10;
/// Tolerance for identities that hold exactly in real arithmetic.
const EXACT_TOL: f64 = 1e-12;
/// Relative tolerance for the Rayleigh-Ritz identity, against `|A|_F`.
const IDENTITY_RTOL: f64 = 1e-9;
/// Absolute slack on the projection decomposition inequality.
const DECOMPOSITION_SLACK: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Matmul,
    Lsq,
    Lowrank,
    Check,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum CheckSuite {
    /// Subsampled transform against the full transform, plus its op count.
    Srht,
    /// Row norms of `H D U` against the flattening threshold.
    Coherence,
    /// `|I - R^T R|` for rows sampled from an orthonormal basis.
    Gram,
    /// Enumerated moments of the sampled product against their bounds.
    Unbiased,
    /// The structural inequality for a random Gaussian `Z`.
    Structural,
}

impl CheckSuite {
    /// Suites whose every trial must pass; the others are probabilistic.
    pub fn is_deterministic(self) -> bool {
        matches!(
            self,
            CheckSuite::Srht | CheckSuite::Unbiased | CheckSuite::Structural
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case", deny_unknown_fields)]
pub enum InstanceSpec {
    Generated {
        generator: MatrixFamily,
        seed: u64,
    },
    /// `b` is the second factor for `matmul` and the right-hand side for `lsq`.
    Files {
        a: PathBuf,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        b: Option<PathBuf>,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probs: Option<ProbKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suite: Option<CheckSuite>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub algorithm: Algorithm,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance: Option<InstanceSpec>,
    #[serde(default)]
    pub params: Params,
    pub trials: usize,
    pub base_seed: u64,
    #[serde(default)]
    pub diagnostics: bool,
}

#[derive(Default)]
struct Outcome {
    success: bool,
    metrics: BTreeMap<String, f64>,
    bounds: BTreeMap<String, f64>,
    flags: BTreeMap<String, bool>,
    op_count: Option<u64>,
}

impl Outcome {
    fn metric(&mut self, name: &str, v: f64) {
        self.metrics.insert(name.to_string(), v);
    }

    fn bound(&mut self, name: &str, v: f64) {
        self.bounds.insert(name.to_string(), v);
    }

    fn flag(&mut self, name: &str, v: bool) {
        self.flags.insert(name.to_string(), v);
    }
}

struct Loaded {
    a: DenseMatrix,
    b_matrix: Option<DenseMatrix>,
    b_vector: Option<Vec<f64>>,
    x_star: Option<Vec<f64>>,
}

fn load(spec: &InstanceSpec) -> Result<Loaded> {
    match spec {
        InstanceSpec::Generated { generator, seed } => {
            let inst = gen_matrix(generator, *seed)?;
            Ok(Loaded {
                a: inst.a,
                b_matrix: None,
                b_vector: inst.b,
                x_star: inst.x_star,
            })
        }
        InstanceSpec::Files { a, b } => {
            let a = read_matrix(a)?;
            let (b_matrix, b_vector) = match b {
                None => (None, None),
                Some(path) => {
                    let m = read_matrix(path)
                        .or_else(|_| read_vector(path).and_then(|v| DenseMatrix::column_vector(&v)))?;
                    let v = (m.cols() == 1).then(|| m.column(0));
                    (Some(m), v)
                }
            };
            Ok(Loaded {
                a,
                b_matrix,
                b_vector,
                x_star: None,
            })
        }
    }
}

fn need<T: Copy>(v: Option<T>, name: &'static str) -> Result<T> {
    v.ok_or_else(|| RnlaError::param(name, "missing", "required by this experiment"))
}

fn need_instance(config: &ExperimentConfig) -> Result<Loaded> {
    let spec = config
        .instance
        .as_ref()
        .ok_or_else(|| RnlaError::param("instance", "missing", "required by this experiment"))?;
    load(spec)
}

enum Prepared {
    Matmul {
        a: DenseMatrix,
        b: DenseMatrix,
        exact: DenseMatrix,
        probs: ProbVector,
        c: usize,
        eps: Option<f64>,
        beta: f64,
        scale: f64,
    },
    Lsq {
        a: DenseMatrix,
        b: Vec<f64>,
        eps: f64,
        delta: Option<f64>,
        opts: LsqOptions,
        z: f64,
        x_opt: Vec<f64>,
        x_star: Option<Vec<f64>>,
        sigma_min: f64,
        b_norm: f64,
    },
    Lowrank {
        a: DenseMatrix,
        k: usize,
        eps: f64,
        opts: LowRankOptions,
        a_norm: f64,
    },
    Srht {
        n: usize,
        r: usize,
    },
    Coherence {
        u: DenseMatrix,
    },
    Gram {
        u: DenseMatrix,
        probs: ProbVector,
        c: usize,
        beta: f64,
    },
    Unbiased {
        n: usize,
        c: usize,
        kind: ProbKind,
    },
    Structural {
        a: DenseMatrix,
        k: usize,
        c: usize,
    },
}

fn matmul_probs(kind: ProbKind, a: &DenseMatrix, b: &DenseMatrix) -> Result<ProbVector> {
    match kind {
        ProbKind::Optimal => optimal_probs(a, b),
        ProbKind::ColnormA => colnorm_probs(a),
        ProbKind::RownormB => rownorm_probs(b),
        ProbKind::Uniform => uniform_probs(a.cols()),
        ProbKind::Leverage | ProbKind::Custom => Err(RnlaError::param(
            "probs",
            format!("{kind:?}"),
            "not available for matrix multiplication",
        )),
    }
}

fn orthonormal_of(a: &DenseMatrix) -> Result<DenseMatrix> {
    let u = orthonormal_basis(a)?;
    if u.cols() < a.cols() {
        return Err(RnlaError::RankDeficient {
            rank: u.cols(),
            required: a.cols(),
        });
    }
    Ok(u)
}

fn prepare(config: &ExperimentConfig) -> Result<Prepared> {
    let p = &config.params;
    Ok(match config.algorithm {
        Algorithm::Matmul => {
            let inst = need_instance(config)?;
            let b = inst.b_matrix.unwrap_or_else(|| inst.a.transpose());
            let a = inst.a;
            if a.cols() != b.rows() {
                return Err(RnlaError::dims(
                    "matmul",
                    format!("A is {}x{}, B is {}x{}", a.rows(), a.cols(), b.rows(), b.cols()),
                ));
            }
            let probs = matmul_probs(p.probs.unwrap_or(ProbKind::Optimal), &a, &b)?;
            let beta_actual = beta_of(&probs, &optimal_probs(&a, &b)?)?;
            let beta = match p.beta {
                Some(beta) if beta > beta_actual * (1.0 + 1e-12) || beta <= 0.0 => {
                    return Err(RnlaError::param(
                        "beta",
                        beta,
                        "probabilities do not dominate beta times the optimal ones",
                    ))
                }
                Some(beta) => beta,
                None => beta_actual,
            };
            let scale = frobenius_norm(&a) * frobenius_norm(&b);
            Prepared::Matmul {
                exact: a.matmul(&b),
                a,
                b,
                probs,
                c: need(p.c, "c")?,
                eps: p.eps,
                beta,
                scale,
            }
        }
        Algorithm::Lsq => {
            let inst = need_instance(config)?;
            let b = inst
                .b_vector
                .ok_or_else(|| RnlaError::param("rhs", "missing", "least squares needs a right-hand side"))?;
            let eps = need(p.eps, "eps")?;
            let exact = exact_least_squares(&inst.a, &b)?;
            let sigma_min = thin_svd(&inst.a)?.sigma.last().copied().unwrap_or(0.0);
            Prepared::Lsq {
                z: exact.residual,
                x_opt: exact.x,
                x_star: inst.x_star,
                sigma_min,
                b_norm: norm2(&b),
                a: inst.a,
                b,
                eps,
                delta: p.delta,
                opts: LsqOptions {
                    r: p.r,
                    diagnostics: config.diagnostics,
                },
            }
        }
        Algorithm::Lowrank => {
            let inst = need_instance(config)?;
            let mut opts = LowRankOptions {
                c: p.c,
                diagnostics: config.diagnostics,
                ..LowRankOptions::default()
            };
            if let Some(c0) = p.c0 {
                opts.c0 = c0;
            }
            Prepared::Lowrank {
                a_norm: frobenius_norm(&inst.a),
                a: inst.a,
                k: need(p.k, "k")?,
                eps: need(p.eps, "eps")?,
                opts,
            }
        }
        Algorithm::Check => match need(p.suite, "suite")? {
            CheckSuite::Srht => Prepared::Srht {
                n: need(p.n, "n")?,
                r: need(p.r, "r")?,
            },
            CheckSuite::Coherence => Prepared::Coherence {
                u: orthonormal_of(&need_instance(config)?.a)?,
            },
            CheckSuite::Gram => {
                let u = orthonormal_of(&need_instance(config)?.a)?;
                let leverage = leverage_probs(&u)?;
                let probs = match p.probs.unwrap_or(ProbKind::Leverage) {
                    ProbKind::Leverage => leverage.clone(),
                    ProbKind::Uniform => uniform_probs(u.rows())?,
                    other => {
                        return Err(RnlaError::param(
                            "probs",
                            format!("{other:?}"),
                            "gram check takes leverage or uniform",
                        ))
                    }
                };
                let beta = beta_of(&probs, &leverage)?;
                if beta <= 0.0 {
                    return Err(RnlaError::DegenerateDistribution);
                }
                Prepared::Gram {
                    u,
                    probs,
                    c: need(p.c, "c")?,
                    beta,
                }
            }
            CheckSuite::Unbiased => Prepared::Unbiased {
                n: need(p.n, "n")?,
                c: need(p.c, "c")?,
                kind: p.probs.unwrap_or(ProbKind::Optimal),
            },
            CheckSuite::Structural => Prepared::Structural {
                a: need_instance(config)?.a,
                k: need(p.k, "k")?,
                c: need(p.c, "c")?,
            },
        },
    })
}

fn within(value: f64, bound: f64, scale: f64) -> bool {
    value <= bound + BOUND_SLACK * scale.max(1.0)
}

impl Prepared {
    fn trial(&self, seed: u64, diagnostics: bool) -> Result<Outcome> {
        let mut out = Outcome::default();
        match self {
            Prepared::Matmul {
                a,
                b,
                exact,
                probs,
                c,
                eps,
                beta,
                scale,
            } => {
                let cr = rand_matrix_multiply(a, b, *c, probs, seed)?.product();
                let diff = exact.sub(&cr);
                let fro = frobenius_norm(&diff);
                let expected = expected_frobenius_error(a, b, *c, probs)?;
                out.metric("err_fro", fro);
                out.metric("err_fro_sq", fro * fro);
                out.metric("err_spec", spectral_norm(&diff));
                if *scale > 0.0 {
                    out.metric("rel_err_fro", fro / scale);
                }
                // Markov: P(err^2 > 10 E[err^2]) < 1/10.
                out.success = within(fro * fro, 10.0 * expected, scale * scale);
                if diagnostics {
                    out.bound("expected_fro_sq", expected);
                    out.bound("markov_fro_sq", 10.0 * expected);
                    out.bound("beta", *beta);
                    out.bound("beta_fro_sq", scale * scale / (beta * *c as f64));
                    if let Some(eps) = eps {
                        out.bound("eps_fro", eps * scale);
                        out.flag("within_eps", fro <= eps * scale);
                    }
                }
            }
            Prepared::Lsq {
                a,
                b,
                eps,
                delta,
                opts,
                z,
                x_opt,
                x_star,
                sigma_min,
                b_norm,
            } => {
                let sol = match delta {
                    Some(delta) => rand_least_squares_amplified(a, b, *eps, *delta, seed, opts)?,
                    None => rand_least_squares(a, b, *eps, seed, opts)?,
                };
                let fwd: Vec<f64> = sol.x_tilde.iter().zip(x_opt).map(|(x, y)| x - y).collect();
                out.metric("residual", sol.residual_norm);
                out.metric("z", *z);
                out.metric("forward_error", norm2(&fwd));
                out.metric("r_used", sol.r_used as f64);
                if *z > 0.0 {
                    out.metric("residual_ratio", sol.residual_norm / z);
                }
                if let Some(xs) = x_star {
                    let e: Vec<f64> = sol.x_tilde.iter().zip(xs).map(|(x, y)| x - y).collect();
                    out.metric("x_star_error", norm2(&e));
                }
                out.op_count = Some(sol.transform_ops);
                out.success = within(sol.residual_norm, (1.0 + eps) * z, *b_norm);
                if diagnostics {
                    out.bound("residual", (1.0 + eps) * z);
                    out.bound("residual_conditional", (1.0 + eps).sqrt() * z);
                    if *sigma_min > 0.0 {
                        out.bound("forward_error_conditional", eps.sqrt() * z / sigma_min);
                    }
                    let cols = (a.cols() + 1) as f64;
                    let n_pad = a.rows().next_power_of_two();
                    out.bound("transform_ops", cols * subsampled_op_bound(n_pad, sol.r_used));
                    if let Some(rep) = sol.diagnostics {
                        out.bound("sigma_min_sq", rep.sigma_min_sq);
                        out.bound("cross_term", rep.cross_term);
                        out.bound("cross_term_limit", eps * z * z / 2.0);
                        out.flag("cond22", rep.cond22_pass);
                        out.flag("cond23", rep.cond23_pass);
                        if rep.both_pass() {
                            out.flag(
                                "conditional_bound_holds",
                                sol.residual_norm <= (1.0 + eps).sqrt() * z + 1e-8,
                            );
                        }
                    }
                }
            }
            Prepared::Lowrank {
                a,
                k,
                eps,
                opts,
                a_norm,
            } => {
                let res = rand_low_rank(a, *k, *eps, seed, opts)?;
                out.metric("error_fro", res.error_fro);
                out.metric("baseline_fro", res.baseline_fro);
                out.metric("c_used", res.c_used as f64);
                if res.baseline_fro > 0.0 {
                    out.metric("error_ratio", res.error_fro / res.baseline_fro);
                }
                out.success = within(res.error_fro, (1.0 + eps) * res.baseline_fro, *a_norm);
                if diagnostics {
                    out.bound("error_fro", (1.0 + eps) * res.baseline_fro);
                    if let Some(d) = res.diagnostics {
                        out.bound("rayleigh_ritz_gap", d.rayleigh_ritz_gap);
                        out.bound("decomposition_lhs", d.decomposition_lhs);
                        out.bound("decomposition_rhs", d.decomposition_rhs);
                        out.flag("rayleigh_ritz", d.rayleigh_ritz_gap <= IDENTITY_RTOL * a_norm);
                        out.flag(
                            "decomposition",
                            d.decomposition_lhs <= d.decomposition_rhs + DECOMPOSITION_SLACK,
                        );
                    }
                }
            }
            Prepared::Srht { n, r } => {
                let x = gaussian_vec(&mut seeded(seed), *n);
                let op = make_srht(*n, *r, seed, Side::Left)?;
                let mut counter = OpCounter::new();
                let sub = op.apply_vec(&x, &mut counter)?;
                let mut signed = vec![0.0; op.n_pad()];
                for ((s, xi), d) in signed.iter_mut().zip(&x).zip(op.signs()) {
                    *s = xi * d;
                }
                let full = fwht(&signed, &mut OpCounter::new())?;
                let plan = op.plan();
                let diff = plan
                    .indices
                    .iter()
                    .zip(&plan.scales)
                    .zip(&sub)
                    .map(|((&i, &s), &v)| (s * full[i] - v).abs())
                    .fold(0.0, f64::max);
                let ops_bound = subsampled_op_bound(op.n_pad(), *r);
                let scale = norm2(&x).max(1.0) * (op.n_pad() as f64 / *r as f64).sqrt();
                out.metric("max_abs_diff", diff);
                out.op_count = Some(counter.adds_subs);
                out.flag("oracle_equal", diff <= EXACT_TOL * scale);
                out.flag("op_count_within_bound", counter.adds_subs as f64 <= ops_bound);
                out.success = out.flags.values().all(|&f| f);
                if diagnostics {
                    out.bound("op_count", ops_bound);
                }
            }
            Prepared::Coherence { u } => {
                let op = make_srht(u.rows(), 1, seed, Side::Left)?;
                let (max, threshold) = coherence_check(u, &op)?;
                out.metric("max_row_norm_sq", max);
                out.success = max <= threshold;
                if diagnostics {
                    out.bound("max_row_norm_sq", threshold);
                }
            }
            Prepared::Gram { u, probs, c, beta } => {
                let plan = draw_plan(probs, *c, seed)?;
                let (spec, fro) = gram_sketch_error(u, &plan.sample_rows(u))?;
                let d = u.cols() as f64;
                let expected = d * d / (beta * *c as f64);
                out.metric("err_fro_sq", fro * fro);
                out.metric("err_spec", spec);
                out.success = within(fro * fro, 10.0 * expected, 1.0);
                if diagnostics {
                    out.bound("expected_fro_sq", expected);
                    out.bound("markov_fro_sq", 10.0 * expected);
                }
            }
            Prepared::Unbiased { n, c, kind } => {
                let mut stream = seeded(seed);
                let a = gaussian_matrix(&mut stream, 3, *n);
                let b = gaussian_matrix(&mut stream, *n, 2);
                let probs = match kind {
                    ProbKind::Custom => {
                        let w: Vec<f64> = (0..*n)
                            .map(|_| rand::Rng::random_range(&mut stream, 0.05..1.0))
                            .collect();
                        ProbVector::from_weights(&w, ProbKind::Custom)?
                    }
                    other => matmul_probs(*other, &a, &b)?,
                };
                let mom = product_moments(&a, &b, &probs, *c)?;
                let exact = a.matmul(&b);
                let mut var_excess = f64::NEG_INFINITY;
                for i in 0..exact.rows() {
                    for j in 0..exact.cols() {
                        let bound = entry_variance_bound(&a, &b, &probs, *c, i, j)?;
                        var_excess = var_excess.max(mom.variance[(i, j)] - bound);
                    }
                }
                let mean_dev = mom.mean.max_abs_diff(&exact);
                let fro_excess = mom.expected_fro_sq - expected_frobenius_error(&a, &b, *c, &probs)?;
                out.metric("mean_dev", mean_dev);
                out.metric("variance_excess", var_excess);
                out.metric("fro_sq_excess", fro_excess);
                out.flag("unbiased", mean_dev <= EXACT_TOL);
                out.flag("variance_bound", var_excess <= EXACT_TOL);
                out.flag("fro_bound", fro_excess <= EXACT_TOL);
                out.success = out.flags.values().all(|&f| f);
            }
            Prepared::Structural { a, k, c } => {
                let z = gaussian_matrix(&mut seeded(seed), a.cols(), *c);
                let (lhs, rhs) = structural_inequality_check(a, &z, *k)?;
                out.metric("lhs", lhs);
                out.metric("rhs", rhs);
                out.success = lhs <= rhs + 1e-9;
                if diagnostics {
                    out.bound("lhs", rhs + 1e-9);
                }
            }
        }
        Ok(out)
    }
}

fn validate(config: &ExperimentConfig) -> Result<()> {
    if config.trials == 0 {
        return Err(RnlaError::param("trials", 0, "must be at least 1"));
    }
    Ok(())
}

/// Runs every trial and collects the report. Errors here are setup
/// failures; per-trial errors are recorded in the report.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Report> {
    validate(config)?;
    let prepared = prepare(config)?;
    let trials: Vec<TrialReport> = (0..config.trials)
        .into_par_iter()
        .map(|t| {
            let seed = rng::derive(config.base_seed, t as u64);
            let start = Instant::now();
            let run = prepared.trial(seed, config.diagnostics);
            let wall_time_s = start.elapsed().as_secs_f64();
            match run {
                Ok(o) if o.metrics.values().chain(o.bounds.values()).all(|v| v.is_finite()) => TrialReport {
                    index: t,
                    seed,
                    status: TrialStatus::Ok,
                    error: None,
                    success: o.success,
                    metrics: o.metrics,
                    bounds: config.diagnostics.then_some(o.bounds),
                    flags: o.flags,
                    op_count: o.op_count,
                    wall_time_s,
                },
                Ok(_) => failed(t, seed, "non-finite metric".to_string(), wall_time_s),
                Err(e) => failed(t, seed, e.to_string(), wall_time_s),
            }
        })
        .collect();
    Ok(Report {
        config: config.clone(),
        aggregate: aggregate(&trials),
        trials,
        meta: Meta::current(),
    })
}

fn failed(index: usize, seed: u64, error: String, wall_time_s: f64) -> TrialReport {
    TrialReport {
        index,
        seed,
        status: TrialStatus::Failed,
        error: Some(error),
        success: false,
        metrics: BTreeMap::new(),
        bounds: None,
        flags: BTreeMap::new(),
        op_count: None,
        wall_time_s,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn generated(generator: MatrixFamily) -> Option<InstanceSpec> {
        Some(InstanceSpec::Generated { generator, seed: 11 })
    }

    #[test]
    fn single_trial_aggregate_equals_trial() {
        let config = ExperimentConfig {
            algorithm: Algorithm::Matmul,
            instance: generated(MatrixFamily::Gaussian { m: 4, n: 6 }),
            params: Params {
                c: Some(3),
                ..Params::default()
            },
            trials: 1,
            base_seed: 5,
            diagnostics: true,
        };
        let report = run_experiment(&config).unwrap();
        let t = &report.trials[0];
        for (k, v) in &t.metrics {
            let s = report.aggregate.metrics[k];
            assert_eq!((s.mean, s.min, s.max), (*v, *v, *v));
        }
        assert!(t.bounds.is_some());
    }

    #[test]
    fn bounds_absent_without_diagnostics() {
        let config = ExperimentConfig {
            algorithm: Algorithm::Check,
            instance: None,
            params: Params {
                suite: Some(CheckSuite::Srht),
                n: Some(64),
                r: Some(8),
                ..Params::default()
            },
            trials: 3,
            base_seed: 0,
            diagnostics: false,
        };
        let report = run_experiment(&config).unwrap();
        assert!(report.trials.iter().all(|t| t.bounds.is_none() && t.success));
    }

    #[test]
    fn consistent_lsq_always_succeeds() {
        let config = ExperimentConfig {
            algorithm: Algorithm::Lsq,
            instance: generated(MatrixFamily::ConsistentLsq { n: 128, d: 3 }),
            params: Params {
                eps: Some(0.5),
                r: Some(40),
                ..Params::default()
            },
            trials: 20,
            base_seed: 1,
            diagnostics: false,
        };
        let a = run_experiment(&config).unwrap().aggregate;
        assert_eq!(a.successes, a.completed);
    }

    #[test]
    fn rank_deficient_trials_are_recorded() {
        let config = ExperimentConfig {
            algorithm: Algorithm::Lowrank,
            instance: generated(MatrixFamily::LowrankPlusNoise {
                m: 16,
                n: 12,
                rank: 1,
                decay: 1.0,
                tail: 0.0,
                noise: 0.0,
            }),
            params: Params {
                k: Some(2),
                c: Some(4),
                eps: Some(0.5),
                ..Params::default()
            },
            trials: 2,
            base_seed: 0,
            diagnostics: false,
        };
        let report = run_experiment(&config).unwrap();
        assert_eq!(report.aggregate.failed, 2);
        assert_eq!(report.aggregate.success_rate, 0.0);
    }

    #[test]
    fn zero_trials_rejected() {
        let config = ExperimentConfig {
            algorithm: Algorithm::Check,
            instance: None,
            params: Params::default(),
            trials: 0,
            base_seed: 0,
            diagnostics: false,
        };
        assert!(run_experiment(&config).is_err());
    }

    #[test]
    fn unknown_config_field_rejected() {
        let text = r#"{"algorithm":"check","trials":1,"base_seed":0,"extra":1}"#;
        assert!(serde_json::from_str::<ExperimentConfig>(text).is_err());
    }
}
