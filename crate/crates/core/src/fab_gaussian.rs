//! FAB regions for a Gaussian observation `Y ~ N(θ, σ²)`.
//!
//! For each null value θ₀ the acceptance interval is
//! `[θ₀ - σ z(αw), θ₀ + σ z(α(1-w))]` with `z(q) = Φ⁻¹(1-q)`, and the
//! spending weight `w` equalizes `λ(y) = ℓ(y) + (y-θ₀)²/(2σ²)` at the two
//! endpoints. The region for an observation `y` collects every θ₀ whose
//! acceptance interval contains `y`.
//!
//! The weight is solved on the logit scale `s = log(w/(1-w))`. Under a
//! Gaussian prior `1-w` drops below `1e-300` for moderate θ₀, and the
//! quantiles are then taken from `log(αw)` and `log(α(1-w))` directly.

use serde::{Deserialize, Serialize};

use crate::error::{FabError, Result};
use crate::exec::Execution;
use crate::priors::{PriorKind, PriorModel, Tail};
use crate::roots::{bisect_predicate, brent_with_values};
use crate::specfun::normal;

/// Largest |logit w| the solver will visit before giving up.
const MAX_LOGIT: f64 = 1e7;

/// Endpoint tolerance for region inversion.
pub const REGION_TOL: f64 = 1e-8;

/// Tolerance on α in the p-value bisection.
pub const PVALUE_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AcceptanceInterval {
    pub theta0: f64,
    pub alpha: f64,
    /// Spending weight: the share of α placed in the lower tail.
    pub w: f64,
    /// `log(w / (1 - w))`; finite even when `w` rounds to 0 or 1.
    pub logit_w: f64,
    pub lo: f64,
    pub hi: f64,
}

impl AcceptanceInterval {
    pub fn contains(&self, y: f64) -> bool {
        self.lo <= y && y <= self.hi
    }

    /// Standardized half-widths `(θ₀ - lo, hi - θ₀) / σ`.
    pub fn z(&self, sigma: f64) -> (f64, f64) {
        ((self.theta0 - self.lo) / sigma, (self.hi - self.theta0) / sigma)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceRegion {
    pub y: f64,
    pub alpha: f64,
    pub focal: f64,
    /// Sorted, disjoint closed intervals.
    pub intervals: Vec<(f64, f64)>,
    /// Set when the diagnostic scan found more than one component.
    pub disconnected: bool,
}

impl ConfidenceRegion {
    pub fn lo(&self) -> f64 {
        self.intervals.first().map_or(f64::NAN, |iv| iv.0)
    }

    pub fn hi(&self) -> f64 {
        self.intervals.last().map_or(f64::NAN, |iv| iv.1)
    }

    /// Total length of the region.
    pub fn width(&self) -> f64 {
        self.intervals.iter().map(|(a, b)| b - a).sum()
    }

    pub fn contains(&self, theta: f64) -> bool {
        self.intervals.iter().any(|&(a, b)| a <= theta && theta <= b)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PValueCurve {
    pub y: f64,
    pub grid: Vec<f64>,
    pub pvals: Vec<f64>,
}

/// Options for [`confidence_region_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionOptions {
    /// Step of the diagnostic membership scan, or `None` to skip it.
    pub scan_step: Option<f64>,
}

impl Default for RegionOptions {
    fn default() -> Self {
        RegionOptions { scan_step: None }
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(FabError::InvalidInput(format!("alpha={alpha} must lie in (0, 1)")))
    }
}

fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// Standardized offsets `(z(αw), z(α(1-w)))` at logit `s`.
fn offsets(log_alpha: f64, s: f64) -> (f64, f64) {
    let z_lo = normal::upper_quantile_from_log(log_alpha - softplus(-s));
    let z_hi = normal::upper_quantile_from_log(log_alpha - softplus(s));
    (z_lo, z_hi)
}

/// `λ(lo) - λ(hi)`; decreasing in `s`.
fn imbalance(model: &PriorModel, theta0: f64, log_alpha: f64, s: f64) -> f64 {
    let sigma = model.sigma;
    let (z_lo, z_hi) = offsets(log_alpha, s);
    let lam_lo = model.log_marginal(theta0 - sigma * z_lo) + 0.5 * z_lo * z_lo;
    let lam_hi = model.log_marginal(theta0 + sigma * z_hi) + 0.5 * z_hi * z_hi;
    lam_lo - lam_hi
}

fn solve_logit(model: &PriorModel, theta0: f64, alpha: f64) -> Result<f64> {
    if matches!(model.kind, PriorKind::Flat) {
        return Ok(0.0);
    }
    let log_alpha = alpha.ln();
    let g = |s: f64| imbalance(model, theta0, log_alpha, s);
    let g0 = g(0.0);
    if g0 == 0.0 {
        return Ok(0.0);
    }
    if !g0.is_finite() {
        return Err(FabError::NumericalFailure {
            theta0,
            detail: format!("non-finite imbalance {g0} at w = 1/2"),
        });
    }
    // G decreases in s: a positive value means the root lies to the right.
    let dir = if g0 > 0.0 { 1.0 } else { -1.0 };
    let (mut inner, mut g_inner) = (0.0, g0);
    let mut step = 1.0;
    loop {
        let outer = inner + dir * step;
        let g_outer = g(outer);
        if g_outer.is_nan() {
            return Err(FabError::NumericalFailure {
                theta0,
                detail: format!("imbalance is NaN at logit {outer}"),
            });
        }
        if g_outer.signum() != g_inner.signum() || g_outer == 0.0 {
            let (a, b, ga, gb) = if dir > 0.0 {
                (inner, outer, g_inner, g_outer)
            } else {
                (outer, inner, g_outer, g_inner)
            };
            let root = brent_with_values(g, a, b, ga, gb, 1e-13, 300).ok_or_else(|| {
                FabError::NumericalFailure { theta0, detail: "bracket lost".into() }
            })?;
            return Ok(root.x);
        }
        if outer.abs() > MAX_LOGIT {
            return Err(FabError::NumericalFailure {
                theta0,
                detail: format!(
                    "spending weight not bracketed for |logit w| <= {MAX_LOGIT:e} (imbalance {g_outer:e})"
                ),
            });
        }
        inner = outer;
        g_inner = g_outer;
        step *= 2.0;
    }
}

fn logistic(s: f64) -> f64 {
    if s >= 0.0 {
        1.0 / (1.0 + (-s).exp())
    } else {
        let e = s.exp();
        e / (1.0 + e)
    }
}

/// Spending weight `w_α(θ₀)`.
pub fn weight(model: &PriorModel, theta0: f64, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(logistic(solve_logit(model, theta0, alpha)?))
}

/// Acceptance interval of the most powerful test of `θ = θ₀`.
pub fn acceptance_interval(
    model: &PriorModel,
    theta0: f64,
    alpha: f64,
) -> Result<AcceptanceInterval> {
    check_alpha(alpha)?;
    if !theta0.is_finite() {
        return Err(FabError::InvalidInput(format!("theta0={theta0} must be finite")));
    }
    let s = solve_logit(model, theta0, alpha)?;
    let (z_lo, z_hi) = offsets(alpha.ln(), s);
    Ok(AcceptanceInterval {
        theta0,
        alpha,
        w: logistic(s),
        logit_w: s,
        lo: theta0 - model.sigma * z_lo,
        hi: theta0 + model.sigma * z_hi,
    })
}

/// `θ₀ ∈ C_α(y)`.
pub fn is_member(model: &PriorModel, y: f64, theta0: f64, alpha: f64) -> Result<bool> {
    Ok(acceptance_interval(model, theta0, alpha)?.contains(y))
}

/// Focal point of the nested regions: the posterior mean.
pub fn focal_point(model: &PriorModel, y: f64) -> f64 {
    model.posterior_mean(y)
}

/// Half-width of the θ₀ window searched around the prior location.
fn search_radius(model: &PriorModel, y: f64) -> f64 {
    let s = model.sigma;
    let dy = (y - model.location).abs();
    match model.tail_profile() {
        Tail::Profile(t) => dy + 50.0 * s * t.kappa.max(1.0),
        Tail::GaussianTail => {
            let tau = match model.kind {
                PriorKind::Gaussian { tau } => tau,
                _ => unreachable!("only the Gaussian prior has a Gaussian tail"),
            };
            let r = s / tau;
            dy * (1.0 + 2.0 * r * r) + 50.0 * s * (1.0 + r)
        }
    }
}

/// Finds the region boundary on one side of `inside`, a member. The edge
/// solves `hi(θ₀) = y` or `lo(θ₀) = y`, whichever condition fails first.
fn boundary(
    model: &PriorModel,
    y: f64,
    alpha: f64,
    inside: f64,
    dir: f64,
    limit: f64,
) -> Result<f64> {
    let mut good = inside;
    let mut step = model.sigma;
    loop {
        let mut probe = good + dir * step;
        let beyond = (probe - limit) * dir >= 0.0;
        if beyond {
            probe = limit;
        }
        let acc = acceptance_interval(model, probe, alpha)?;
        if !acc.contains(y) {
            let use_hi = acc.hi < y;
            let mut err = None;
            let f = |t: f64| match acceptance_interval(model, t, alpha) {
                Ok(a) => {
                    if use_hi {
                        a.hi - y
                    } else {
                        a.lo - y
                    }
                }
                Err(e) => {
                    err.get_or_insert(e);
                    f64::NAN
                }
            };
            let root = crate::roots::brent(f, good, probe, 0.25 * REGION_TOL, 200);
            if let Some(e) = err {
                return Err(e);
            }
            let root = root.filter(|r| r.converged).ok_or_else(|| FabError::NumericalFailure {
                theta0: probe,
                detail: format!("region boundary not resolved between {good} and {probe}"),
            })?;
            return Ok(root.x);
        }
        if beyond {
            return Err(FabError::OpenRegion { limit });
        }
        good = probe;
        step *= 2.0;
    }
}

/// `C_α(y)` located by expanding outward from the focal point.
pub fn confidence_region(model: &PriorModel, y: f64, alpha: f64) -> Result<ConfidenceRegion> {
    confidence_region_with(model, y, alpha, RegionOptions::default())
}

pub fn confidence_region_with(
    model: &PriorModel,
    y: f64,
    alpha: f64,
    opts: RegionOptions,
) -> Result<ConfidenceRegion> {
    check_alpha(alpha)?;
    if !y.is_finite() {
        return Err(FabError::InvalidInput(format!("y={y} must be finite")));
    }
    let focal = focal_point(model, y);
    if !is_member(model, y, focal, alpha)? {
        return Err(FabError::NumericalFailure {
            theta0: focal,
            detail: format!("focal point is not a member of the region at y={y}"),
        });
    }
    let radius = search_radius(model, y);
    let lo = boundary(model, y, alpha, focal, -1.0, model.location - radius)?;
    let hi = boundary(model, y, alpha, focal, 1.0, model.location + radius)?;
    let mut region = ConfidenceRegion {
        y,
        alpha,
        focal,
        intervals: vec![(lo, hi)],
        disconnected: false,
    };
    if let Some(step) = opts.scan_step {
        scan(model, &mut region, step)?;
    }
    Ok(region)
}

/// Dense membership scan over the located hull (padded by 5σ); rebuilds
/// the interval list if the region turns out not to be connected.
fn scan(model: &PriorModel, region: &mut ConfidenceRegion, step: f64) -> Result<()> {
    if !(step > 0.0) {
        return Err(FabError::InvalidInput(format!("scan step {step} must be positive")));
    }
    let (y, alpha) = (region.y, region.alpha);
    let start = region.lo() - 5.0 * model.sigma;
    let stop = region.hi() + 5.0 * model.sigma;
    let n = ((stop - start) / step).ceil() as usize + 1;
    let flags: Vec<Result<bool>> = Execution::preferred()
        .map_range(n, |i| is_member(model, y, start + i as f64 * step, alpha));
    let flags: Vec<bool> = flags.into_iter().collect::<Result<_>>()?;
    let mut intervals = Vec::new();
    let mut i = 0;
    while i < n {
        if !flags[i] {
            i += 1;
            continue;
        }
        let first = i;
        while i + 1 < n && flags[i + 1] {
            i += 1;
        }
        let refine = |inside: f64, outside: f64| {
            bisect_predicate(
                |t| is_member(model, y, t, alpha).unwrap_or(false),
                inside,
                outside,
                REGION_TOL,
            )
        };
        let t_first = start + first as f64 * step;
        let t_last = start + i as f64 * step;
        let a = if first == 0 { t_first } else { refine(t_first, t_first - step) };
        let b = if i + 1 == n { t_last } else { refine(t_last, t_last + step) };
        intervals.push((a, b));
        i += 1;
    }
    if intervals.len() > 1 {
        region.disconnected = true;
        region.intervals = intervals;
    }
    Ok(())
}

/// `p_y(θ₀) = sup{α : θ₀ ∈ C_α(y)}`.
pub fn p_value(model: &PriorModel, y: f64, theta0: f64) -> Result<f64> {
    let mut err = None;
    let mut member = |a: f64| match is_member(model, y, theta0, a) {
        Ok(m) => m,
        Err(e) => {
            err.get_or_insert(e);
            false
        }
    };
    let top = 1.0 - 1e-12;
    let p = if member(top) {
        1.0
    } else if !member(1e-300) {
        0.0
    } else {
        bisect_predicate(&mut member, 1e-300, top, PVALUE_TOL)
    };
    match err {
        Some(e) => Err(e),
        None => Ok(p),
    }
}

/// p-value function over `grid`.
pub fn p_value_curve(
    model: &PriorModel,
    y: f64,
    grid: &[f64],
    exec: Execution,
) -> Result<PValueCurve> {
    let pvals: Result<Vec<f64>> = exec.map(grid, |&t| p_value(model, y, t)).into_iter().collect();
    Ok(PValueCurve { y, grid: grid.to_vec(), pvals: pvals? })
}

/// Classical interval `y ± σ z_{1-α/2}`.
pub fn z_interval(y: f64, sigma: f64, alpha: f64) -> (f64, f64) {
    let z = normal::upper_quantile(0.5 * alpha);
    (y - sigma * z, y + sigma * z)
}
