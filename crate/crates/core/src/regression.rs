//! Linear regression `Y ~ N(Xβ, Σ)` with FAB regions for `xᵀβ`.
//!
//! Each linear combination is a scalar Gaussian problem with
//! `y = xᵀβ̂` and `σ² = xᵀΣ̃x`, and the prior is placed on that scale.

use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{FabError, Result};
use crate::exec::Execution;
use crate::fab_gaussian::{confidence_region, z_interval, ConfidenceRegion};
use crate::priors::{PriorKind, PriorModel};

/// Largest condition number of `X` accepted by [`fit`].
pub const MAX_CONDITION: f64 = 1e12;

/// Noise model for the response.
#[derive(Debug, Clone, PartialEq)]
pub enum Noise {
    /// i.i.d. errors with known variance `σ_Y²`.
    Known(f64),
    /// i.i.d. errors, variance estimated by `RSS / (n - p)`.
    Estimate,
    /// Full `n × n` covariance.
    Covariance(DMatrix<f64>),
}

#[derive(Debug, Clone)]
pub struct RegressionProblem {
    pub x: DMatrix<f64>,
    pub y: DVector<f64>,
    pub beta_hat: DVector<f64>,
    /// Covariance of `β̂`.
    pub sigma_tilde: DMatrix<f64>,
    /// Residual variance used for `Σ̃` when the noise is i.i.d.
    pub sigma2: Option<f64>,
    /// Set when `σ_Y²` was estimated; coverage is then only approximate.
    pub approximate: bool,
    pub condition: f64,
}

/// Least squares through a QR factorization of `X`.
pub fn fit(x: DMatrix<f64>, y: DVector<f64>, noise: Noise) -> Result<RegressionProblem> {
    let (n, p) = x.shape();
    if y.len() != n {
        return Err(FabError::InvalidInput(format!("X has {n} rows but Y has {} entries", y.len())));
    }
    if p == 0 || n < p {
        return Err(FabError::InvalidInput(format!("need n >= p >= 1, got n={n}, p={p}")));
    }
    if matches!(noise, Noise::Estimate) && n <= p {
        return Err(FabError::InvalidInput(format!(
            "estimating the noise variance needs n > p (n={n}, p={p})"
        )));
    }
    let qr = x.clone().qr();
    let q = qr.q();
    let r = qr.r();
    let sv = r.singular_values();
    let smax = sv.max();
    let smin = sv.min();
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if !(condition <= MAX_CONDITION) {
        return Err(FabError::RankDeficient { condition });
    }
    let r_inv = r
        .clone()
        .try_inverse()
        .ok_or(FabError::RankDeficient { condition: f64::INFINITY })?;
    let qty = q.transpose() * &y;
    let beta_hat = &r_inv * qty;
    let residual = &y - &x * &beta_hat;
    let (sigma_tilde, sigma2, approximate) = match noise {
        Noise::Known(s2) => {
            if !(s2.is_finite() && s2 > 0.0) {
                return Err(FabError::InvalidInput(format!("sigma2={s2} must be positive")));
            }
            (&r_inv * r_inv.transpose() * s2, Some(s2), false)
        }
        Noise::Estimate => {
            let s2 = residual.norm_squared() / (n - p) as f64;
            (&r_inv * r_inv.transpose() * s2, Some(s2), true)
        }
        Noise::Covariance(sigma) => {
            if sigma.shape() != (n, n) {
                return Err(FabError::InvalidInput("noise covariance must be n x n".into()));
            }
            let a = &r_inv * q.transpose();
            (&a * sigma * a.transpose(), None, false)
        }
    };
    // symmetrize away rounding
    let sigma_tilde = (&sigma_tilde + sigma_tilde.transpose()) * 0.5;
    Ok(RegressionProblem { x, y, beta_hat, sigma_tilde, sigma2, approximate, condition })
}

/// Region for one linear combination.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComboRegion {
    pub estimate: f64,
    pub sigma: f64,
    pub region: ConfidenceRegion,
    pub z_lo: f64,
    pub z_hi: f64,
}

impl ComboRegion {
    pub fn width_ratio(&self) -> f64 {
        self.region.width() / (self.z_hi - self.z_lo)
    }
}

impl RegressionProblem {
    pub fn p(&self) -> usize {
        self.x.ncols()
    }

    /// FAB region for `xᵀβ` with the prior scale tied to `√(xᵀΣ̃x)`.
    pub fn combo_region(&self, x: &[f64], kind: PriorKind, alpha: f64) -> Result<ComboRegion> {
        if x.len() != self.p() {
            return Err(FabError::InvalidInput(format!(
                "combination has {} entries, expected {}",
                x.len(),
                self.p()
            )));
        }
        let xv = DVector::from_column_slice(x);
        let var = (xv.transpose() * &self.sigma_tilde * &xv)[0];
        if !(var > 0.0) {
            return Err(FabError::InvalidInput(format!("x' Sigma x = {var} must be positive")));
        }
        let sigma = var.sqrt();
        let estimate = xv.dot(&self.beta_hat);
        let model = PriorModel::tied(kind, sigma)?;
        let region = confidence_region(&model, estimate, alpha)?;
        let (z_lo, z_hi) = z_interval(estimate, sigma, alpha);
        Ok(ComboRegion { estimate, sigma, region, z_lo, z_hi })
    }

    /// Regions for every coefficient, in coefficient order.
    pub fn all_marginal_regions(
        &self,
        kind: PriorKind,
        alpha: f64,
        exec: Execution,
    ) -> Result<Vec<MarginalRow>> {
        let p = self.p();
        exec.map_range(p, |j| {
            let mut e = vec![0.0; p];
            e[j] = 1.0;
            let c = self.combo_region(&e, kind, alpha)?;
            Ok(MarginalRow {
                coef: j,
                mle: c.estimate,
                focal: c.region.focal,
                lo: c.region.lo(),
                hi: c.region.hi(),
                z_lo: c.z_lo,
                z_hi: c.z_hi,
                width_ratio: c.width_ratio(),
            })
        })
        .into_iter()
        .collect()
    }
}

/// One row of the per-coefficient comparison table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarginalRow {
    pub coef: usize,
    pub mle: f64,
    pub focal: f64,
    pub lo: f64,
    pub hi: f64,
    pub z_lo: f64,
    pub z_hi: f64,
    /// FAB width over z-interval width.
    pub width_ratio: f64,
}

/// Rows ordered by z-interval width, narrowest first.
pub fn sort_by_z_width(rows: &mut [MarginalRow]) {
    rows.sort_by(|a, b| (a.z_hi - a.z_lo).total_cmp(&(b.z_hi - b.z_lo)).then(a.coef.cmp(&b.coef)));
}

/// Preprocessing applied when reading a CSV.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Preprocess {
    pub impute_median: bool,
    pub standardize: bool,
    pub intercept: bool,
}

/// Design matrix, response and covariate names read from a CSV.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub x: DMatrix<f64>,
    pub y: DVector<f64>,
    pub names: Vec<String>,
}

fn parse_cell(s: &str) -> Option<f64> {
    let t = s.trim();
    if t.is_empty() || t.eq_ignore_ascii_case("na") || t.eq_ignore_ascii_case("nan") {
        None
    } else {
        t.parse().ok().filter(|v: &f64| v.is_finite())
    }
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let m = values.len();
    if m % 2 == 1 {
        values[m / 2]
    } else {
        0.5 * (values[m / 2 - 1] + values[m / 2])
    }
}

/// Reads `response` and the covariates (all other columns when `None`).
pub fn load_csv(
    path: &Path,
    response: &str,
    covariates: Option<&[String]>,
    prep: Preprocess,
) -> Result<Dataset> {
    let mut reader = csv::Reader::from_path(path)
        .map_err(|e| FabError::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    let headers = reader
        .headers()
        .map_err(|e| FabError::Parse(format!("bad CSV header: {e}")))?
        .clone();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| FabError::InvalidInput(format!("column '{name}' not found")))
    };
    let y_col = find(response)?;
    let x_cols: Vec<usize> = match covariates {
        Some(names) => names.iter().map(|n| find(n)).collect::<Result<_>>()?,
        None => (0..headers.len()).filter(|&c| c != y_col).collect(),
    };
    let mut names: Vec<String> = x_cols.iter().map(|&c| headers[c].to_string()).collect();
    let mut ys = Vec::new();
    let mut cols: Vec<Vec<Option<f64>>> = vec![Vec::new(); x_cols.len()];
    for (line, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| FabError::Parse(format!("CSV row {}: {e}", line + 2)))?;
        let yv = parse_cell(rec.get(y_col).unwrap_or("")).ok_or_else(|| {
            FabError::InvalidInput(format!("row {}: response is missing or not a number", line + 2))
        })?;
        ys.push(yv);
        for (k, &c) in x_cols.iter().enumerate() {
            cols[k].push(parse_cell(rec.get(c).unwrap_or("")));
        }
    }
    let n = ys.len();
    let mut filled: Vec<Vec<f64>> = Vec::with_capacity(cols.len());
    for (k, col) in cols.into_iter().enumerate() {
        let mut present: Vec<f64> = col.iter().flatten().copied().collect();
        if present.len() < n {
            if !prep.impute_median {
                return Err(FabError::InvalidInput(format!(
                    "column '{}' has missing values; enable median imputation",
                    names[k]
                )));
            }
            if present.is_empty() {
                return Err(FabError::InvalidInput(format!("column '{}' is entirely missing", names[k])));
            }
        }
        let med = if present.len() < n { median(&mut present) } else { 0.0 };
        let mut v: Vec<f64> = col.into_iter().map(|c| c.unwrap_or(med)).collect();
        if prep.standardize {
            let mean = v.iter().sum::<f64>() / n as f64;
            let var = v.iter().map(|a| (a - mean).powi(2)).sum::<f64>() / (n as f64 - 1.0);
            let sd = var.sqrt();
            if !(sd > 0.0) {
                return Err(FabError::InvalidInput(format!("column '{}' is constant", names[k])));
            }
            v.iter_mut().for_each(|a| *a = (*a - mean) / sd);
        }
        filled.push(v);
    }
    if prep.intercept {
        filled.push(vec![1.0; n]);
        names.push("(intercept)".to_string());
    }
    let p = filled.len();
    let x = DMatrix::from_fn(n, p, |i, j| filled[j][i]);
    Ok(Dataset { x, y: DVector::from_vec(ys), names })
}
