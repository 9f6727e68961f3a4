//! Prior catalog for the mean of a Gaussian observation `Y | θ ~ N(θ, σ²)`.
//!
//! Every prior is described through its marginal likelihood
//! `f(y) = ∫ N(y; θ, σ²) π(dθ)`. The scale-mixture priors put
//! `θ | τ² ~ N(0, σ²τ²)` with `τ²` beta-prime distributed, density
//! `(τ²)^{b-1} (1+τ²)^{-(a+b)} / B(a, b)`, so their scale is tied to σ.

use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{FabError, Result};
use crate::specfun::{
    dawson_over_x, i0_minus_i1_scaled, log_gamma_unchecked as log_gamma, log_hyp1f1_neg, normal,
};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Prior family, before the likelihood scale σ is attached.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PriorKind {
    /// `θ ~ N(0, τ²)`, with τ in the same units as θ.
    Gaussian { tau: f64 },
    /// Scale mixture of normals with `τ² ~ BP(a, b)`.
    BetaPrime { a: f64, b: f64 },
    /// `BP(½, ½)`: half-Cauchy on τ.
    Horseshoe,
    /// `BP(½, 1)`.
    Gpd,
    /// `BP(1, ½)`.
    Bessel,
    /// Double exponential with scale `σ/κ`.
    Laplace { kappa: f64 },
    /// Lebesgue measure; `f ≡ 1`.
    Flat,
    /// `γ dθ + δ₀`.
    FlatPlusAtom { gamma: f64 },
}

impl PriorKind {
    /// Beta-prime mixing parameters, if this is a scale mixture.
    pub fn beta_prime(&self) -> Option<(f64, f64)> {
        match *self {
            PriorKind::BetaPrime { a, b } => Some((a, b)),
            PriorKind::Horseshoe => Some((0.5, 0.5)),
            PriorKind::Gpd => Some((0.5, 1.0)),
            PriorKind::Bessel => Some((1.0, 0.5)),
            _ => None,
        }
    }

    /// True when the prior's scale is proportional to σ.
    pub fn is_sigma_tied(&self) -> bool {
        !matches!(self, PriorKind::Gaussian { .. } | PriorKind::FlatPlusAtom { .. })
    }

    fn validate(&self) -> Result<()> {
        let check = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(FabError::InvalidInput(format!("prior parameter {name}={v} must be positive")))
            }
        };
        match *self {
            PriorKind::Gaussian { tau } => check("tau", tau),
            PriorKind::BetaPrime { a, b } => check("a", a).and(check("b", b)),
            PriorKind::Laplace { kappa } => check("kappa", kappa),
            PriorKind::FlatPlusAtom { gamma } => check("gamma", gamma),
            _ => Ok(()),
        }
    }

    /// All catalog kinds with default parameters, used by tests and demos.
    pub fn catalog() -> Vec<PriorKind> {
        vec![
            PriorKind::Gaussian { tau: 1.0 },
            PriorKind::BetaPrime { a: 1.0, b: 0.5 },
            PriorKind::Horseshoe,
            PriorKind::Gpd,
            PriorKind::Bessel,
            PriorKind::Laplace { kappa: 1.0 },
            PriorKind::Flat,
            PriorKind::FlatPlusAtom { gamma: 0.1 },
        ]
    }
}

impl fmt::Display for PriorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            PriorKind::Gaussian { tau } => write!(f, "gaussian:tau={tau}"),
            PriorKind::BetaPrime { a, b } => write!(f, "bp:a={a},b={b}"),
            PriorKind::Horseshoe => write!(f, "horseshoe"),
            PriorKind::Gpd => write!(f, "gpd"),
            PriorKind::Bessel => write!(f, "bessel"),
            PriorKind::Laplace { kappa } => write!(f, "laplace:kappa={kappa}"),
            PriorKind::Flat => write!(f, "flat"),
            PriorKind::FlatPlusAtom { gamma } => write!(f, "flat+atom:gamma={gamma}"),
        }
    }
}

/// Parses `key=value,key=value` into a lookup closure.
fn parse_params(body: &str) -> Result<Vec<(String, f64)>> {
    if body.trim().is_empty() {
        return Ok(Vec::new());
    }
    body.split(',')
        .map(|pair| {
            let (k, v) = pair
                .split_once('=')
                .ok_or_else(|| FabError::Parse(format!("expected key=value, got '{pair}'")))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| FabError::Parse(format!("bad number '{v}' for '{k}'")))?;
            Ok((k.trim().to_ascii_lowercase(), v))
        })
        .collect()
}

fn take(params: &[(String, f64)], key: &str, default: Option<f64>) -> Result<f64> {
    match params.iter().find(|(k, _)| k == key) {
        Some(&(_, v)) => Ok(v),
        None => default.ok_or_else(|| FabError::Parse(format!("missing parameter '{key}'"))),
    }
}

fn reject_unknown(params: &[(String, f64)], allowed: &[&str]) -> Result<()> {
    match params.iter().find(|(k, _)| !allowed.contains(&k.as_str())) {
        Some((k, _)) => Err(FabError::Parse(format!("unknown parameter '{k}'"))),
        None => Ok(()),
    }
}

impl FromStr for PriorKind {
    type Err = FabError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, body) = s.split_once(':').unwrap_or((s, ""));
        let params = parse_params(body)?;
        let kind = match name.trim().to_ascii_lowercase().as_str() {
            "gaussian" | "normal" => {
                reject_unknown(&params, &["tau"])?;
                PriorKind::Gaussian { tau: take(&params, "tau", Some(1.0))? }
            }
            "bp" | "betaprime" | "beta-prime" => {
                reject_unknown(&params, &["a", "b"])?;
                PriorKind::BetaPrime { a: take(&params, "a", None)?, b: take(&params, "b", None)? }
            }
            "horseshoe" | "hs" => {
                reject_unknown(&params, &[])?;
                PriorKind::Horseshoe
            }
            "gpd" => {
                reject_unknown(&params, &[])?;
                PriorKind::Gpd
            }
            "bessel" => {
                reject_unknown(&params, &[])?;
                PriorKind::Bessel
            }
            "laplace" | "lp" => {
                reject_unknown(&params, &["kappa"])?;
                PriorKind::Laplace { kappa: take(&params, "kappa", Some(1.0))? }
            }
            "flat" => {
                reject_unknown(&params, &[])?;
                PriorKind::Flat
            }
            "flat+atom" => {
                reject_unknown(&params, &["gamma"])?;
                PriorKind::FlatPlusAtom { gamma: take(&params, "gamma", None)? }
            }
            other => return Err(FabError::Parse(format!("unknown prior '{other}'"))),
        };
        kind.validate().map_err(|e| FabError::Parse(e.to_string()))?;
        Ok(kind)
    }
}

/// Tail classification `f(y) ~ γ |y|^{-δ} exp(-κ|y|/σ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailProfile {
    pub kappa: f64,
    pub delta: f64,
    pub gamma: f64,
}

/// Result of [`PriorModel::tail_profile`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Tail {
    Profile(TailProfile),
    /// Gaussian marginal; the robustness theory does not apply.
    GaussianTail,
}

impl Tail {
    pub fn profile(&self) -> Option<TailProfile> {
        match self {
            Tail::Profile(p) => Some(*p),
            Tail::GaussianTail => None,
        }
    }
}

/// A prior attached to a Gaussian likelihood with standard deviation σ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PriorModel {
    pub kind: PriorKind,
    pub sigma: f64,
    /// Prior location μ; the marginal is evaluated at `y - μ`.
    #[serde(default)]
    pub location: f64,
}

impl PriorModel {
    pub fn new(kind: PriorKind, sigma: f64) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(FabError::InvalidInput(format!("sigma={sigma} must be positive")));
        }
        kind.validate()?;
        Ok(PriorModel { kind, sigma, location: 0.0 })
    }

    /// Parses a spec string such as `"laplace:kappa=2"`.
    pub fn parse(spec: &str, sigma: f64) -> Result<Self> {
        Self::new(spec.parse()?, sigma)
    }

    pub fn with_location(mut self, location: f64) -> Self {
        self.location = location;
        self
    }

    /// The same prior expressed relative to a new likelihood scale: the
    /// Gaussian τ and the flat+atom γ are read in units of `sigma`, so the
    /// model becomes scale-equivariant. Used by the regression layer, where
    /// the prior scale follows each coefficient's standard error.
    pub fn tied(kind: PriorKind, sigma: f64) -> Result<Self> {
        let kind = match kind {
            PriorKind::Gaussian { tau } => PriorKind::Gaussian { tau: tau * sigma },
            PriorKind::FlatPlusAtom { gamma } => PriorKind::FlatPlusAtom { gamma: gamma / sigma },
            k => k,
        };
        Self::new(kind, sigma)
    }

    /// `ℓ(y) = log f(y)`.
    pub fn log_marginal(&self, y: f64) -> f64 {
        let y = y - self.location;
        let s = self.sigma;
        match self.kind {
            PriorKind::Gaussian { tau } => {
                let v = s * s + tau * tau;
                -LN_SQRT_2PI - 0.5 * v.ln() - 0.5 * y * y / v
            }
            PriorKind::Horseshoe => {
                // (2/π) / √(2πσ²) · D(u)/u with u = |y|/√(2σ²)
                let u = y.abs() / (s * std::f64::consts::SQRT_2);
                (2.0 / PI).ln() - LN_SQRT_2PI - s.ln() + dawson_over_x(u).ln()
            }
            PriorKind::Gpd => {
                let x = 0.5 * (y / s).powi(2);
                let shape = if x == 0.0 { 1.0 } else { -(-x).exp_m1() / x };
                -LN_2 - LN_SQRT_2PI - s.ln() + shape.ln()
            }
            PriorKind::Bessel => {
                let q = 0.25 * (y / s).powi(2);
                -LN_SQRT_2PI - s.ln() + (0.25 * PI).ln() + i0_minus_i1_scaled(q).ln()
            }
            PriorKind::BetaPrime { a, b } => log_marginal_beta_prime(a, b, s, y),
            PriorKind::Laplace { kappa } => {
                let (la, lb) = laplace_branches(kappa, s, y);
                (0.5 * kappa / s).ln() + 0.5 * kappa * kappa + log_add(la, lb)
            }
            PriorKind::Flat => 0.0,
            PriorKind::FlatPlusAtom { gamma } => {
                let lphi = normal::log_pdf(y / s) - s.ln();
                log_add(gamma.ln(), lphi)
            }
        }
    }

    /// `ℓ'(y)`.
    pub fn dlog_marginal(&self, y: f64) -> f64 {
        let y = y - self.location;
        let s = self.sigma;
        match self.kind {
            PriorKind::Gaussian { tau } => -y / (s * s + tau * tau),
            PriorKind::Laplace { kappa } => {
                let xi = laplace_xi(kappa, s, y);
                kappa / s * (2.0 * xi - 1.0)
            }
            PriorKind::Flat => 0.0,
            PriorKind::FlatPlusAtom { gamma } => {
                // φ/(γ+φ), evaluated as a logistic in log space
                let lphi = normal::log_pdf(y / s) - s.ln();
                let share = 1.0 / (1.0 + (gamma.ln() - lphi).exp());
                -y / (s * s) * share
            }
            kind => {
                let (a, b) = kind.beta_prime().expect("scale mixture");
                -y / (s * s) * beta_prime_shrinkage(a, b, s, y)
            }
        }
    }

    /// Posterior mean `E[θ | y] = y + σ² ℓ'(y)`.
    pub fn posterior_mean(&self, y: f64) -> f64 {
        let s = self.sigma;
        let yc = y - self.location;
        let centred = match self.kind {
            PriorKind::Laplace { kappa } => {
                let xi = laplace_xi(kappa, s, yc);
                xi * (yc + s * kappa) + (1.0 - xi) * (yc - s * kappa)
            }
            PriorKind::Flat => yc,
            kind => match kind.beta_prime() {
                Some((a, b)) => yc * (1.0 - beta_prime_shrinkage(a, b, s, yc)),
                None => yc + s * s * self.dlog_marginal(y),
            },
        };
        centred + self.location
    }

    pub fn tail_profile(&self) -> Tail {
        let s = self.sigma;
        match self.kind {
            PriorKind::Gaussian { .. } => Tail::GaussianTail,
            PriorKind::Laplace { kappa } => Tail::Profile(TailProfile {
                kappa,
                delta: 0.0,
                gamma: 0.5 * kappa / s * (0.5 * kappa * kappa).exp(),
            }),
            PriorKind::Flat => Tail::Profile(TailProfile { kappa: 0.0, delta: 0.0, gamma: 1.0 }),
            PriorKind::FlatPlusAtom { gamma } => {
                Tail::Profile(TailProfile { kappa: 0.0, delta: 0.0, gamma })
            }
            kind => {
                let (a, b) = kind.beta_prime().expect("scale mixture");
                let log_gamma_const = a * (2.0 * s * s).ln() + log_gamma(a + 0.5)
                    - 0.5 * PI.ln()
                    - crate::specfun::log_beta_unchecked(a, b);
                Tail::Profile(TailProfile {
                    kappa: 0.0,
                    delta: 2.0 * a + 1.0,
                    gamma: log_gamma_const.exp(),
                })
            }
        }
    }

    /// Canonical spec string of the prior kind.
    pub fn spec(&self) -> String {
        self.kind.to_string()
    }
}

fn log_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        hi
    } else {
        hi + (lo - hi).exp().ln_1p()
    }
}

/// General beta-prime marginal through ₁F₁.
pub(crate) fn log_marginal_beta_prime(a: f64, b: f64, s: f64, y: f64) -> f64 {
    let x = 0.5 * (y / s).powi(2);
    -LN_SQRT_2PI - s.ln() + log_gamma(a + 0.5) + log_gamma(a + b)
        - log_gamma(a)
        - log_gamma(a + b + 0.5)
        + log_hyp1f1_neg(a + 0.5, a + b + 0.5, x)
}

/// The shrinkage factor `1 - θ̂/y` under a beta-prime mixture,
/// `(a+½)/(a+b+½) · ₁F₁(a+3/2; a+b+3/2; -x) / ₁F₁(a+½; a+b+½; -x)`.
fn beta_prime_shrinkage(a: f64, b: f64, s: f64, y: f64) -> f64 {
    let x = 0.5 * (y / s).powi(2);
    let ratio = (log_hyp1f1_neg(a + 1.5, a + b + 1.5, x) - log_hyp1f1_neg(a + 0.5, a + b + 0.5, x))
        .exp();
    (a + 0.5) / (a + b + 0.5) * ratio
}

/// Log of the two Laplace branch terms `e^{∓κy/σ} Φ(±y/σ - κ)`.
fn laplace_branches(kappa: f64, s: f64, y: f64) -> (f64, f64) {
    let t = y / s;
    let la = -kappa * t + normal::log_cdf(t - kappa);
    let lb = kappa * t + normal::log_cdf(-t - kappa);
    (la, lb)
}

/// Posterior weight of the `y + σκ` branch.
fn laplace_xi(kappa: f64, s: f64, y: f64) -> f64 {
    let (la, lb) = laplace_branches(kappa, s, y);
    1.0 / (1.0 + (la - lb).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(spec: &str) -> PriorModel {
        PriorModel::parse(spec, 1.0).unwrap()
    }

    #[test]
    fn gpd_at_origin() {
        let m = model("gpd");
        let expected = (1.0 / (2.0 * (2.0 * PI).sqrt())).ln();
        assert!((m.log_marginal(0.0) - expected).abs() < 1e-15);
    }

    #[test]
    fn special_cases_match_general_form() {
        for (spec, a, b) in [("horseshoe", 0.5, 0.5), ("gpd", 0.5, 1.0), ("bessel", 1.0, 0.5)] {
            let m = model(spec);
            for &y in &[0.0, 0.1, -1.0, 5.0, 20.0, 300.0] {
                let special = m.log_marginal(y);
                let general = log_marginal_beta_prime(a, b, 1.0, y);
                assert!(
                    (special - general).abs() < 1e-11 * general.abs().max(1.0),
                    "{spec} y={y}: {special} vs {general}"
                );
            }
        }
    }

    #[test]
    fn laplace_is_finite_far_out() {
        let m = model("laplace:kappa=2");
        let l = m.log_marginal(1e6);
        assert!(l.is_finite());
        assert!((m.posterior_mean(1e6) - (1e6 - 2.0)).abs() < 1e-6);
        assert!((m.posterior_mean(-1e6) - (-1e6 + 2.0)).abs() < 1e-6);
    }

    #[test]
    fn laplace_posterior_mean_at_100() {
        assert!((model("laplace:kappa=1").posterior_mean(100.0) - 99.0).abs() < 1e-6);
    }

    #[test]
    fn gaussian_conjugacy() {
        let m = model("gaussian:tau=1");
        assert!((m.posterior_mean(2.0) - 1.0).abs() < 1e-15);
        assert!((model("gaussian:tau=2").posterior_mean(5.0) - 4.0).abs() < 1e-14);
    }

    #[test]
    fn spec_roundtrip() {
        for kind in PriorKind::catalog() {
            let again: PriorKind = kind.to_string().parse().unwrap();
            assert_eq!(again, kind);
        }
        assert!("laplace:kappa=-1".parse::<PriorKind>().is_err());
        assert!("bp:a=1".parse::<PriorKind>().is_err());
        assert!("laplace:tau=1".parse::<PriorKind>().is_err());
        assert!("cauchy".parse::<PriorKind>().is_err());
    }

    #[test]
    fn tail_exponents() {
        let t = model("horseshoe").tail_profile().profile().unwrap();
        assert_eq!(t.delta, 2.0);
        let t = model("laplace:kappa=2").tail_profile().profile().unwrap();
        assert_eq!((t.kappa, t.delta), (2.0, 0.0));
        assert_eq!(model("gaussian:tau=1").tail_profile(), Tail::GaussianTail);
    }

    #[test]
    fn tail_constant_matches_far_marginal() {
        for spec in ["horseshoe", "bessel", "bp:a=2,b=3", "laplace:kappa=0.5"] {
            let m = model(spec);
            let t = m.tail_profile().profile().unwrap();
            let y: f64 = 1e5;
            let predicted = t.gamma.ln() - t.delta * y.ln() - t.kappa * y;
            assert!((m.log_marginal(y) - predicted).abs() < 1e-4, "{spec}");
        }
    }

    #[test]
    fn location_shift() {
        let m = model("horseshoe").with_location(3.0);
        assert!((m.posterior_mean(3.0) - 3.0).abs() < 1e-15);
        assert_eq!(m.log_marginal(5.0), model("horseshoe").log_marginal(2.0));
    }
}
