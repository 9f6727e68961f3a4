//! Monte Carlo study of width and coverage for per-coefficient regions in
//! a synthetic regression with AR(1)-correlated covariates.
//!
//! Each (grid point, replication) pair draws from its own ChaCha stream,
//! so results do not depend on scheduling. All priors in a replication
//! share the same design, coefficients and noise.

use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use rand::distr::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{FabError, Result};
use crate::exec::Execution;
use crate::priors::PriorKind;
use crate::regression::{fit, Noise};
use crate::specfun::normal;

/// Lag-one correlation between neighbouring covariates.
pub const AR_COEF: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub n: usize,
    pub p: usize,
    pub sigma_y2: f64,
    /// Natural-log prior scales of the true coefficients.
    pub log_sigma_beta_grid: Vec<f64>,
    pub priors: Vec<PriorKind>,
    pub alpha: f64,
    pub reps: usize,
    pub seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            n: 50,
            p: 10,
            sigma_y2: 1.0,
            log_sigma_beta_grid: vec![-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0],
            priors: vec![
                PriorKind::Flat,
                PriorKind::Gaussian { tau: 1.0 },
                PriorKind::Horseshoe,
                PriorKind::Laplace { kappa: 1.0 },
            ],
            alpha: 0.1,
            reps: 100,
            seed: 1,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(FabError::InvalidInput(m));
        if self.reps == 0 {
            return bad("reps must be >= 1".into());
        }
        if self.n <= self.p || self.p == 0 {
            return bad(format!("need n > p >= 1, got n={}, p={}", self.n, self.p));
        }
        if self.log_sigma_beta_grid.is_empty() || self.priors.is_empty() {
            return bad("grid and prior list must be non-empty".into());
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad(format!("alpha={} must lie in (0, 1)", self.alpha));
        }
        if !(self.sigma_y2 > 0.0) {
            return bad(format!("sigma_y2={} must be positive", self.sigma_y2));
        }
        Ok(())
    }

    /// Parses `key = value` lines; `#` starts a comment. Lists are comma
    /// separated, except `priors`, which is separated by `;`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = ExperimentConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                FabError::Parse(format!("line {}: expected key = value", lineno + 1))
            })?;
            let (key, value) = (key.trim(), value.trim());
            let err = |what: &str| FabError::Parse(format!("line {}: bad {what} '{value}'", lineno + 1));
            match key {
                "n" => cfg.n = value.parse().map_err(|_| err("n"))?,
                "p" => cfg.p = value.parse().map_err(|_| err("p"))?,
                "sigma_y2" => cfg.sigma_y2 = value.parse().map_err(|_| err("sigma_y2"))?,
                "alpha" => cfg.alpha = value.parse().map_err(|_| err("alpha"))?,
                "reps" => cfg.reps = value.parse().map_err(|_| err("reps"))?,
                "seed" => cfg.seed = value.parse().map_err(|_| err("seed"))?,
                "log_sigma_beta" | "log_sigma_beta_grid" => {
                    cfg.log_sigma_beta_grid = value
                        .split(',')
                        .map(|v| v.trim().parse().map_err(|_| err("grid value")))
                        .collect::<Result<_>>()?
                }
                "priors" => {
                    cfg.priors = value
                        .split(';')
                        .filter(|s| !s.trim().is_empty())
                        .map(|s| s.parse())
                        .collect::<Result<_>>()?
                }
                other => {
                    return Err(FabError::Parse(format!("line {}: unknown key '{other}'", lineno + 1)))
                }
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Aggregate for one (prior, σ_β) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub prior: String,
    pub log_sigma_beta: f64,
    pub mean_width: f64,
    pub se_width: f64,
    pub coverage: f64,
    pub se_coverage: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub cells: Vec<Cell>,
}

impl ExperimentResult {
    pub fn cell(&self, prior: &str, log_sigma_beta: f64) -> Option<&Cell> {
        self.cells
            .iter()
            .find(|c| c.prior == prior && c.log_sigma_beta == log_sigma_beta)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("prior,log_sigma_beta,mean_width,se_width,coverage,se_coverage\n");
        for c in &self.cells {
            let _ = writeln!(
                out,
                "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                c.prior, c.log_sigma_beta, c.mean_width, c.se_width, c.coverage, c.se_coverage
            );
        }
        out
    }
}

fn std_normal<R: Rng>(rng: &mut R) -> f64 {
    let u: f64 = rng.sample(Open01);
    normal::quantile(u)
}

fn design_from<R: Rng>(rng: &mut R, n: usize, p: usize) -> DMatrix<f64> {
    let innov = (1.0 - AR_COEF * AR_COEF).sqrt();
    let mut x = DMatrix::zeros(n, p);
    for i in 0..n {
        let mut prev = std_normal(rng);
        x[(i, 0)] = prev;
        for k in 1..p {
            prev = AR_COEF * prev + innov * std_normal(rng);
            x[(i, k)] = prev;
        }
    }
    x
}

/// Rows i.i.d. with unit variances and `corr(x_j, x_k) = 0.5^{|j-k|}`.
pub fn gen_design(n: usize, p: usize, seed: u64) -> DMatrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    design_from(&mut rng, n, p)
}

/// Per-replication outcome for each prior: (mean width, coverage rate).
fn replicate(cfg: &ExperimentConfig, grid_index: usize, rep: usize) -> Result<Vec<(f64, f64)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(((grid_index as u64) << 32) | rep as u64);
    let sigma_beta = cfg.log_sigma_beta_grid[grid_index].exp();
    let x = design_from(&mut rng, cfg.n, cfg.p);
    let beta = DVector::from_fn(cfg.p, |_, _| sigma_beta * std_normal(&mut rng));
    let noise_sd = cfg.sigma_y2.sqrt();
    let eps = DVector::from_fn(cfg.n, |_, _| noise_sd * std_normal(&mut rng));
    let y = &x * &beta + eps;
    let prob = fit(x, y, Noise::Known(cfg.sigma_y2))?;
    cfg.priors
        .iter()
        .map(|&kind| {
            let rows = prob
                .all_marginal_regions(kind, cfg.alpha, Execution::Sequential)
                .map_err(|e| FabError::NumericalFailure {
                    theta0: f64::NAN,
                    detail: format!("replication {rep}, grid point {grid_index}, prior {kind}: {e}"),
                })?;
            let p = rows.len() as f64;
            let width = rows.iter().map(|r| r.hi - r.lo).sum::<f64>() / p;
            let covered = rows
                .iter()
                .zip(beta.iter())
                .filter(|(r, &b)| r.lo <= b && b <= r.hi)
                .count() as f64
                / p;
            Ok((width, covered))
        })
        .collect()
}

fn mean_se(values: &[f64]) -> (f64, f64) {
    let m = values.len() as f64;
    let mean = values.iter().sum::<f64>() / m;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1.0);
    (mean, (var / m).sqrt())
}

pub fn run_experiment(cfg: &ExperimentConfig, exec: Execution) -> Result<ExperimentResult> {
    cfg.validate()?;
    let mut cells = Vec::new();
    for (g, &lsb) in cfg.log_sigma_beta_grid.iter().enumerate() {
        let reps: Vec<Vec<(f64, f64)>> = exec
            .map_range(cfg.reps, |r| replicate(cfg, g, r))
            .into_iter()
            .collect::<Result<_>>()?;
        for (k, kind) in cfg.priors.iter().enumerate() {
            let widths: Vec<f64> = reps.iter().map(|r| r[k].0).collect();
            let covers: Vec<f64> = reps.iter().map(|r| r[k].1).collect();
            let (mean_width, se_width) = mean_se(&widths);
            let (coverage, se_coverage) = mean_se(&covers);
            cells.push(Cell {
                prior: kind.to_string(),
                log_sigma_beta: lsb,
                mean_width,
                se_width,
                coverage,
                se_coverage,
            });
        }
    }
    Ok(ExperimentResult { config: cfg.clone(), cells })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn design_is_deterministic() {
        assert_eq!(gen_design(20, 4, 7), gen_design(20, 4, 7));
        assert_ne!(gen_design(20, 4, 7), gen_design(20, 4, 8));
    }

    #[test]
    fn lag_one_correlation() {
        let x = gen_design(100_000, 3, 11);
        let c0 = x.column(0);
        let c1 = x.column(1);
        let n = c0.len() as f64;
        let (m0, m1) = (c0.sum() / n, c1.sum() / n);
        let cov = c0.iter().zip(c1.iter()).map(|(a, b)| (a - m0) * (b - m1)).sum::<f64>() / n;
        let v0 = c0.iter().map(|a| (a - m0).powi(2)).sum::<f64>() / n;
        let v1 = c1.iter().map(|a| (a - m1).powi(2)).sum::<f64>() / n;
        let r = cov / (v0 * v1).sqrt();
        assert!((r - 0.5).abs() < 0.02, "{r}");
    }

    #[test]
    fn config_parsing() {
        let cfg = ExperimentConfig::parse(
            "n = 30\np=3 # small\nlog_sigma_beta = -1, 2\npriors = flat; horseshoe\nreps=5\nseed=9\n",
        )
        .unwrap();
        assert_eq!((cfg.n, cfg.p, cfg.reps, cfg.seed), (30, 3, 5, 9));
        assert_eq!(cfg.log_sigma_beta_grid, vec![-1.0, 2.0]);
        assert_eq!(cfg.priors, vec![PriorKind::Flat, PriorKind::Horseshoe]);
        assert!(ExperimentConfig::parse("bogus = 1").is_err());
        assert!(ExperimentConfig::parse("reps = 0").is_err());
    }

    #[test]
    fn flat_width_is_data_determined() {
        let cfg = ExperimentConfig {
            n: 12,
            p: 2,
            log_sigma_beta_grid: vec![0.0],
            priors: vec![PriorKind::Flat],
            reps: 3,
            ..Default::default()
        };
        let res = run_experiment(&cfg, Execution::Sequential).unwrap();
        let z = normal::upper_quantile(0.05);
        // rebuild the designs to get the expected mean z-width
        let mut expected = 0.0;
        for rep in 0..3 {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(rep as u64);
            let x = design_from(&mut rng, 12, 2);
            let xtx_inv = (x.transpose() * &x).try_inverse().unwrap();
            expected += 2.0 * z * (xtx_inv[(0, 0)].sqrt() + xtx_inv[(1, 1)].sqrt()) / 2.0;
        }
        expected /= 3.0;
        assert!((res.cells[0].mean_width - expected).abs() < 1e-7);
    }

    #[test]
    fn sequential_matches_parallel() {
        let cfg = ExperimentConfig {
            n: 15,
            p: 3,
            log_sigma_beta_grid: vec![1.0],
            priors: vec![PriorKind::Horseshoe],
            reps: 4,
            ..Default::default()
        };
        let a = run_experiment(&cfg, Execution::Sequential).unwrap();
        let b = run_experiment(&cfg, Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }
}
