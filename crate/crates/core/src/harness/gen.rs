//! Seeded test-matrix generators.

use serde::{Deserialize, Serialize};

use crate::error::{Result, RnlaError};
use crate::linalg::{orthonormal_basis, DenseMatrix};
use crate::rng::{gaussian_matrix, gaussian_vec, seeded};

fn one() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum MatrixFamily {
    /// i.i.d. standard normal entries.
    Gaussian { m: usize, n: usize },
    /// `U diag(sigma) V^T + noise * G` with `sigma_i = decay^i` for the
    /// leading `rank` values and `tail` for the rest.
    LowrankPlusNoise {
        m: usize,
        n: usize,
        rank: usize,
        #[serde(default = "one")]
        decay: f64,
        #[serde(default)]
        tail: f64,
        #[serde(default)]
        noise: f64,
    },
    /// The first `d` columns of `I_n`: all leverage on `d` rows.
    Coherent { n: usize, d: usize },
    /// Gaussian `A` (`n x d`) with `b = A x*` exactly.
    ConsistentLsq { n: usize, d: usize },
    /// Gaussian `A` with `b = A x* + noise * g`.
    NoisyLsq { n: usize, d: usize, noise: f64 },
}

/// A generated matrix with its right-hand side when the family has one.
#[derive(Clone, Debug)]
pub struct Instance {
    pub a: DenseMatrix,
    pub b: Option<Vec<f64>>,
    pub x_star: Option<Vec<f64>>,
}

impl MatrixFamily {
    pub fn name(&self) -> &'static str {
        match self {
            MatrixFamily::Gaussian { .. } => "gaussian",
            MatrixFamily::LowrankPlusNoise { .. } => "lowrank_plus_noise",
            MatrixFamily::Coherent { .. } => "coherent",
            MatrixFamily::ConsistentLsq { .. } => "consistent_lsq",
            MatrixFamily::NoisyLsq { .. } => "noisy_lsq",
        }
    }

    /// Builds a family from its name and loose dimension parameters, as the
    /// CLI supplies them. `n` is the column count for matrix families and the
    /// row count for least-squares families.
    pub fn from_parts(name: &str, p: &FamilyParams) -> Result<Self> {
        let need = |v: Option<usize>, what: &'static str| {
            v.ok_or_else(|| RnlaError::param(what, "missing", "required by this family"))
        };
        Ok(match name {
            "gaussian" => MatrixFamily::Gaussian {
                m: need(p.m, "m")?,
                n: need(p.n, "n")?,
            },
            "lowrank_plus_noise" => MatrixFamily::LowrankPlusNoise {
                m: need(p.m, "m")?,
                n: need(p.n, "n")?,
                rank: need(p.rank, "rank")?,
                decay: p.decay.unwrap_or(1.0),
                tail: p.tail.unwrap_or(0.0),
                noise: p.noise.unwrap_or(0.0),
            },
            "coherent" => MatrixFamily::Coherent {
                n: need(p.n, "n")?,
                d: need(p.d, "d")?,
            },
            "consistent_lsq" => MatrixFamily::ConsistentLsq {
                n: need(p.n, "n")?,
                d: need(p.d, "d")?,
            },
            "noisy_lsq" => MatrixFamily::NoisyLsq {
                n: need(p.n, "n")?,
                d: need(p.d, "d")?,
                noise: p.noise.unwrap_or(1.0),
            },
            other => return Err(RnlaError::InvalidFamily(other.to_string())),
        })
    }

    /// Singular values requested before noise, for `lowrank_plus_noise`.
    pub fn requested_spectrum(&self) -> Option<Vec<f64>> {
        match *self {
            MatrixFamily::LowrankPlusNoise {
                m,
                n,
                rank,
                decay,
                tail,
                ..
            } => Some(
                (0..m.min(n))
                    .map(|i| if i < rank { decay.powi(i as i32) } else { tail })
                    .collect(),
            ),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct FamilyParams {
    pub m: Option<usize>,
    pub n: Option<usize>,
    pub d: Option<usize>,
    pub rank: Option<usize>,
    pub decay: Option<f64>,
    pub tail: Option<f64>,
    pub noise: Option<f64>,
}

fn nonzero(name: &'static str, v: usize) -> Result<()> {
    if v == 0 {
        Err(RnlaError::param(name, v, "must be at least 1"))
    } else {
        Ok(())
    }
}

/// `rows x cols` matrix with orthonormal columns, from a Gaussian sketch.
pub fn random_orthonormal(rows: usize, cols: usize, seed: u64) -> Result<DenseMatrix> {
    if cols > rows {
        return Err(RnlaError::param(
            "cols",
            cols,
            "cannot exceed rows for orthonormal columns",
        ));
    }
    let mut rng = seeded(seed);
    let q = orthonormal_basis(&gaussian_matrix(&mut rng, rows, cols))?;
    if q.cols() != cols {
        return Err(RnlaError::RankDeficient {
            rank: q.cols(),
            required: cols,
        });
    }
    Ok(q)
}

pub fn gen_matrix(family: &MatrixFamily, seed: u64) -> Result<Instance> {
    let mut rng = seeded(seed);
    match *family {
        MatrixFamily::Gaussian { m, n } => {
            nonzero("m", m)?;
            nonzero("n", n)?;
            Ok(Instance {
                a: gaussian_matrix(&mut rng, m, n),
                b: None,
                x_star: None,
            })
        }
        MatrixFamily::LowrankPlusNoise {
            m, n, rank, noise, ..
        } => {
            nonzero("m", m)?;
            nonzero("n", n)?;
            nonzero("rank", rank)?;
            if rank > m.min(n) {
                return Err(RnlaError::param("rank", rank, "cannot exceed min(m, n)"));
            }
            let sigma = family.requested_spectrum().expect("low-rank family");
            if sigma.iter().any(|s| !(s.is_finite() && *s >= 0.0)) {
                return Err(RnlaError::param(
                    "spectrum",
                    "negative",
                    "decay and tail must be nonnegative",
                ));
            }
            let p = m.min(n);
            let u = random_orthonormal(m, p, seed ^ 0x5eed_0001)?;
            let v = random_orthonormal(n, p, seed ^ 0x5eed_0002)?;
            let scaled = DenseMatrix::from_fn(m, p, |i, j| u[(i, j)] * sigma[j]);
            let mut a = scaled.matmul(&v.transpose());
            if noise != 0.0 {
                a = a.add(&gaussian_matrix(&mut rng, m, n).scale(noise));
            }
            Ok(Instance {
                a,
                b: None,
                x_star: None,
            })
        }
        MatrixFamily::Coherent { n, d } => {
            nonzero("d", d)?;
            if d > n {
                return Err(RnlaError::param("d", d, "cannot exceed n"));
            }
            Ok(Instance {
                a: DenseMatrix::from_fn(n, d, |i, j| if i == j { 1.0 } else { 0.0 }),
                b: None,
                x_star: None,
            })
        }
        MatrixFamily::ConsistentLsq { n, d } | MatrixFamily::NoisyLsq { n, d, .. } => {
            nonzero("d", d)?;
            if d > n {
                return Err(RnlaError::param("d", d, "cannot exceed n"));
            }
            let a = gaussian_matrix(&mut rng, n, d);
            let x = gaussian_vec(&mut rng, d);
            let mut b = a.mul_vec(&x);
            if let MatrixFamily::NoisyLsq { noise, .. } = *family {
                let g = gaussian_vec(&mut rng, n);
                b.iter_mut().zip(g).for_each(|(bi, gi)| *bi += noise * gi);
            }
            Ok(Instance {
                a,
                b: Some(b),
                x_star: Some(x),
            })
        }
    }
}
