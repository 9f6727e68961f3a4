//! Large-|y| behaviour of the regions for priors with tails
//! `f(y) ~ γ |y|^{-δ} exp(-κ|y|/σ)`.
//!
//! Far out, the acceptance interval at θ₀ → +∞ spends `α(1-c)` below and
//! `αc` above θ₀, where `c = g_α⁻¹(-2κ)`. Inverting that interval gives the
//! region offsets in [`limit_interval`].

use serde::{Deserialize, Serialize};

use crate::error::{FabError, Result};
use crate::priors::{PriorModel, Tail};
use crate::specfun::normal;

/// `g_α(w) = Φ⁻¹(αw) - Φ⁻¹(α(1-w))`, strictly increasing in `w`.
pub fn g_alpha(alpha: f64, w: f64) -> f64 {
    normal::quantile(alpha * w) - normal::quantile(alpha * (1.0 - w))
}

/// Inverse of [`g_alpha`] in `w`, by bisection on `[1e-16, 1 - 1e-16]`.
pub fn g_alpha_inv(alpha: f64, t: f64) -> f64 {
    let (mut lo, mut hi) = (1e-16, 1.0 - 1e-16);
    if g_alpha(alpha, lo) >= t {
        return lo;
    }
    if g_alpha(alpha, hi) <= t {
        return hi;
    }
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g_alpha(alpha, mid) < t {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // return the endpoint with the smaller residual
    if (g_alpha(alpha, lo) - t).abs() <= (g_alpha(alpha, hi) - t).abs() {
        lo
    } else {
        hi
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    PlusInfinity,
    MinusInfinity,
}

/// Limit of `C_α(y) - y` as `y → ±∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitInterval {
    pub lo_offset: f64,
    pub hi_offset: f64,
    pub c_alpha: f64,
    pub direction: Direction,
}

impl LimitInterval {
    pub fn width(&self) -> f64 {
        self.hi_offset - self.lo_offset
    }
}

fn profile(model: &PriorModel) -> Result<crate::priors::TailProfile> {
    match model.tail_profile() {
        Tail::Profile(p) => Ok(p),
        Tail::GaussianTail => Err(FabError::Unsupported(format!(
            "prior '{}' has a Gaussian marginal; its regions have no bounded limit",
            model.spec()
        ))),
    }
}

/// `c_α = g_α⁻¹(-2κ)` for the model's tail rate κ.
pub fn c_alpha(model: &PriorModel, alpha: f64) -> Result<f64> {
    Ok(g_alpha_inv(alpha, -2.0 * profile(model)?.kappa))
}

pub fn limit_interval(model: &PriorModel, alpha: f64, direction: Direction) -> Result<LimitInterval> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(FabError::InvalidInput(format!("alpha={alpha} must lie in (0, 1)")));
    }
    let kappa = profile(model)?.kappa;
    let c = g_alpha_inv(alpha, -2.0 * kappa);
    let bound = normal::cdf(-kappa);
    if !(c > 0.0 && c <= bound * (1.0 + 1e-12)) {
        return Err(FabError::NumericalFailure {
            theta0: f64::INFINITY,
            detail: format!("c_alpha={c} outside (0, Phi(-kappa)={bound}]"),
        });
    }
    let s = model.sigma;
    // z_{1-αc} is the long side, z_{1-α(1-c)} the short side.
    let long = s * normal::upper_quantile(alpha * c);
    let short = s * normal::upper_quantile(alpha * (1.0 - c));
    let (lo_offset, hi_offset) = match direction {
        Direction::PlusInfinity => (-long, short),
        Direction::MinusInfinity => (-short, long),
    };
    Ok(LimitInterval { lo_offset, hi_offset, c_alpha: c, direction })
}

/// `lim_{y→+∞} y - θ̂(y) = σκ`.
pub fn focal_drift(model: &PriorModel) -> Result<f64> {
    Ok(model.sigma * profile(model)?.kappa)
}
