//! FAB regions for discrete natural exponential families with conjugate
//! priors: binomial-beta, Poisson-gamma and multinomial-Dirichlet.
//!
//! With `f` the prior marginal and `f_θ` the likelihood, the acceptance set
//! at θ collects outcomes in increasing order of `λ_θ(y) = log f(y)/f_θ(y)`
//! until their `f_θ` mass reaches `1-α`. Points tied with the last one
//! admitted are admitted as well, so coverage may exceed `1-α`.
//!
//! Regions are found by scanning a grid in the mean parameter θ, since
//! their boundaries are step functions of θ.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{FabError, Result};
use crate::exec::Execution;
use crate::specfun::{digamma_unchecked as digamma, log_gamma_unchecked as log_gamma};

/// Default θ resolution for the binomial and multinomial grids.
pub const DEFAULT_RESOLUTION: f64 = 1e-4;

/// Upper-tail mass left out of the Poisson support.
const POISSON_TAIL: f64 = 1e-12;

/// Relative tolerance used to declare two values of λ_θ tied.
const TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum NefModel {
    /// `Y ~ Bin(n, θ)`, `θ ~ Beta(a, b)`.
    BinomialBeta { n: u32, a: f64, b: f64 },
    /// `Y ~ Poisson(θ)`, `θ ~ Gamma(a, rate p/(1-p))`.
    PoissonGamma { a: f64, p: f64 },
    /// `Y ~ Mult(n, θ)`, `θ ~ Dirichlet(a)`, with `k = a.len()` cells.
    MultinomialDirichlet { n: u32, a: Vec<f64> },
}

/// Point and natural-parameter estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    /// `∇λ(y)`: log-odds (binomial), log-rate (Poisson) or log-ratios
    /// against the last cell (multinomial).
    pub eta: Vec<f64>,
    /// Mean-scale value: success probability, rate, or cell probabilities.
    pub theta: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteAcceptanceSet {
    pub theta: Vec<f64>,
    /// Accepted outcomes, in the order they were admitted.
    pub members: Vec<Vec<u32>>,
    pub attained_coverage: f64,
}

impl DiscreteAcceptanceSet {
    pub fn contains(&self, y: &[u32]) -> bool {
        self.members.iter().any(|m| m.as_slice() == y)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NefRegion {
    pub y: Vec<u32>,
    pub alpha: f64,
    /// θ grid points (one coordinate for the scalar families).
    pub grid: Vec<Vec<f64>>,
    pub member: Vec<bool>,
    /// Grid-connected components as closed θ intervals (scalar families).
    pub intervals: Vec<(f64, f64)>,
    /// Number of grid-connected components.
    pub components: usize,
    pub estimate: Estimate,
    /// Whether the estimate itself passes the membership test. Reported,
    /// never forced.
    pub estimate_member: bool,
}

/// θ grid settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    /// Binomial and multinomial: spacing in θ. Poisson: spacing in log θ.
    pub resolution: f64,
    /// Multiplies the Poisson support bound.
    pub truncation_factor: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { resolution: DEFAULT_RESOLUTION, truncation_factor: 1.0 }
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(FabError::InvalidInput(format!("{name}={v} must be positive")))
    }
}

fn ln_one_minus(p: f64) -> f64 {
    (-p).ln_1p()
}

impl NefModel {
    pub fn validate(&self) -> Result<()> {
        match self {
            NefModel::BinomialBeta { n, a, b } => {
                if *n == 0 {
                    return Err(FabError::InvalidInput("binomial n must be >= 1".into()));
                }
                positive("a", *a)?;
                positive("b", *b)
            }
            NefModel::PoissonGamma { a, p } => {
                positive("a", *a)?;
                if !(*p > 0.0 && *p < 1.0) {
                    return Err(FabError::InvalidInput(format!("p={p} must lie in (0, 1)")));
                }
                Ok(())
            }
            NefModel::MultinomialDirichlet { n, a } => {
                if *n == 0 {
                    return Err(FabError::InvalidInput("multinomial n must be >= 1".into()));
                }
                if !(2..=4).contains(&a.len()) {
                    return Err(FabError::Unsupported(format!(
                        "multinomial with k={} cells (supported: 2..=4)",
                        a.len()
                    )));
                }
                a.iter().try_for_each(|&v| positive("a", v))
            }
        }
    }

    /// Dimension of the outcome vector.
    pub fn dim(&self) -> usize {
        match self {
            NefModel::MultinomialDirichlet { a, .. } => a.len(),
            _ => 1,
        }
    }

    fn check_outcome(&self, y: &[u32]) -> Result<()> {
        let ok = match self {
            NefModel::BinomialBeta { n, .. } => y.len() == 1 && y[0] <= *n,
            NefModel::PoissonGamma { .. } => y.len() == 1,
            NefModel::MultinomialDirichlet { n, a } => {
                y.len() == a.len() && y.iter().map(|&v| v as u64).sum::<u64>() == *n as u64
            }
        };
        if ok {
            Ok(())
        } else {
            Err(FabError::InvalidInput(format!("outcome {y:?} is not in the support of {self}")))
        }
    }

    /// `λ(y) = log f(y)/h(y)` on the extended (continuous) domain.
    pub fn lambda(&self, y: &[f64]) -> Result<f64> {
        match self {
            NefModel::BinomialBeta { n, a, b } => {
                let y0 = y[0];
                let n = *n as f64;
                if !(y0 > -a && y0 < b + n) {
                    return Err(FabError::domain("lambda", format!("y={y0} outside (-a, b+n)")));
                }
                Ok(log_gamma(a + y0) + log_gamma(b + n - y0) - log_gamma(a + b + n)
                    - (log_gamma(*a) + log_gamma(*b) - log_gamma(a + b)))
            }
            NefModel::PoissonGamma { a, p } => {
                let y0 = y[0];
                if !(y0 > -a) {
                    return Err(FabError::domain("lambda", format!("y={y0} must exceed -a")));
                }
                Ok(log_gamma(a + y0) - log_gamma(*a) + y0 * ln_one_minus(*p) + a * p.ln())
            }
            NefModel::MultinomialDirichlet { a, .. } => {
                if y.len() != a.len() {
                    return Err(FabError::domain("lambda", "dimension mismatch"));
                }
                let mut total = 0.0;
                let mut a_sum = 0.0;
                let mut acc = 0.0;
                for (&yj, &aj) in y.iter().zip(a) {
                    if !(yj > -aj) {
                        return Err(FabError::domain("lambda", format!("y={yj} must exceed -a")));
                    }
                    acc += log_gamma(aj + yj) - log_gamma(aj);
                    total += yj;
                    a_sum += aj;
                }
                Ok(acc - log_gamma(a_sum + total) + log_gamma(a_sum))
            }
        }
    }

    /// `∇λ(y)` in the natural parameterization (digamma closed forms).
    pub fn grad_lambda(&self, y: &[f64]) -> Vec<f64> {
        match self {
            NefModel::BinomialBeta { n, a, b } => {
                vec![digamma(a + y[0]) - digamma(b + *n as f64 - y[0])]
            }
            NefModel::PoissonGamma { a, p } => vec![digamma(a + y[0]) + ln_one_minus(*p)],
            NefModel::MultinomialDirichlet { a, .. } => {
                let k = a.len();
                let last = digamma(a[k - 1] + y[k - 1]);
                (0..k - 1).map(|j| digamma(a[j] + y[j]) - last).collect()
            }
        }
    }

    /// Mean-scale parameter for a natural parameter.
    pub fn theta_of_eta(&self, eta: &[f64]) -> Vec<f64> {
        match self {
            NefModel::BinomialBeta { .. } => vec![1.0 / (1.0 + (-eta[0]).exp())],
            NefModel::PoissonGamma { .. } => vec![eta[0].exp()],
            NefModel::MultinomialDirichlet { .. } => {
                let m = eta.iter().fold(0.0f64, |acc, &e| acc.max(e));
                let mut w: Vec<f64> = eta.iter().map(|&e| (e - m).exp()).collect();
                w.push((-m).exp());
                let s: f64 = w.iter().sum();
                w.iter().map(|v| v / s).collect()
            }
        }
    }

    pub fn eta_of_theta(&self, theta: &[f64]) -> Vec<f64> {
        match self {
            NefModel::BinomialBeta { .. } => vec![(theta[0] / (1.0 - theta[0])).ln()],
            NefModel::PoissonGamma { .. } => vec![theta[0].ln()],
            NefModel::MultinomialDirichlet { .. } => {
                let last = theta[theta.len() - 1].ln();
                theta[..theta.len() - 1].iter().map(|t| t.ln() - last).collect()
            }
        }
    }

    /// FAB estimate `η̂ = ∇λ(y)` and its mean-scale image.
    pub fn fab_estimator(&self, y: &[u32]) -> Result<Estimate> {
        self.check_outcome(y)?;
        let yf: Vec<f64> = y.iter().map(|&v| v as f64).collect();
        let eta = self.grad_lambda(&yf);
        let theta = self.theta_of_eta(&eta);
        Ok(Estimate { eta, theta })
    }

    /// `log f_θ(y) - log h(y)`, the likelihood without its base measure.
    fn log_lik(&self, theta: &[f64], y: &[u32]) -> f64 {
        match self {
            NefModel::BinomialBeta { n, .. } => {
                let (y, t) = (y[0] as f64, theta[0]);
                xlogy(y, t) + xlogy(*n as f64 - y, 1.0 - t)
            }
            NefModel::PoissonGamma { .. } => xlogy(y[0] as f64, theta[0]) - theta[0],
            NefModel::MultinomialDirichlet { .. } => {
                y.iter().zip(theta).map(|(&v, &t)| xlogy(v as f64, t)).sum()
            }
        }
    }

    fn log_h(&self, y: &[u32]) -> f64 {
        match self {
            NefModel::BinomialBeta { n, .. } => {
                log_gamma(*n as f64 + 1.0) - log_gamma(y[0] as f64 + 1.0)
                    - log_gamma((*n - y[0]) as f64 + 1.0)
            }
            NefModel::PoissonGamma { .. } => -log_gamma(y[0] as f64 + 1.0),
            NefModel::MultinomialDirichlet { n, .. } => {
                log_gamma(*n as f64 + 1.0)
                    - y.iter().map(|&v| log_gamma(v as f64 + 1.0)).sum::<f64>()
            }
        }
    }

    /// Likelihood `f_θ(y)`.
    pub fn pmf(&self, theta: &[f64], y: &[u32]) -> f64 {
        (self.log_h(y) + self.log_lik(theta, y)).exp()
    }

    /// `λ_θ(y) = log f(y) / f_θ(y)`.
    pub fn lambda_theta(&self, theta: &[f64], y: &[u32]) -> f64 {
        let yf: Vec<f64> = y.iter().map(|&v| v as f64).collect();
        self.lambda(&yf).expect("support point lies in the extended domain")
            - self.log_lik(theta, y)
    }

    /// Support enumerated for the acceptance set at θ (Poisson truncated).
    pub fn support(&self, theta: &[f64], truncation_factor: f64) -> Vec<Vec<u32>> {
        match self {
            NefModel::BinomialBeta { n, .. } => (0..=*n).map(|y| vec![y]).collect(),
            NefModel::PoissonGamma { .. } => {
                let top = poisson_bound(theta[0], truncation_factor);
                (0..=top).map(|y| vec![y]).collect()
            }
            NefModel::MultinomialDirichlet { n, a } => compositions(*n, a.len()),
        }
    }

    fn check_theta(&self, theta: &[f64]) -> Result<()> {
        let ok = match self {
            NefModel::BinomialBeta { .. } => theta.len() == 1 && theta[0] > 0.0 && theta[0] < 1.0,
            NefModel::PoissonGamma { .. } => theta.len() == 1 && theta[0] > 0.0 && theta[0].is_finite(),
            NefModel::MultinomialDirichlet { a, .. } => {
                theta.len() == a.len()
                    && theta.iter().all(|&t| t > 0.0)
                    && (theta.iter().sum::<f64>() - 1.0).abs() < 1e-9
            }
        };
        if ok {
            Ok(())
        } else {
            Err(FabError::InvalidInput(format!("theta {theta:?} outside the parameter space")))
        }
    }

    /// Acceptance set at mean parameter θ.
    pub fn acceptance_set_theta(
        &self,
        theta: &[f64],
        alpha: f64,
        truncation_factor: f64,
    ) -> Result<DiscreteAcceptanceSet> {
        check_alpha(alpha)?;
        self.check_theta(theta)?;
        let support = self.support(theta, truncation_factor);
        let mut scored: Vec<(f64, f64, usize)> = support
            .iter()
            .enumerate()
            .map(|(i, y)| (self.lambda_theta(theta, y), self.pmf(theta, y), i))
            .collect();
        let total: f64 = scored.iter().map(|s| s.1).sum();
        if total < 1.0 - alpha {
            return Err(FabError::Truncation { mass: total, required: 1.0 - alpha });
        }
        // ties keep support (ascending y) order
        scored.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.2.cmp(&y.2)));
        let mut mass = 0.0;
        let mut count = 0;
        let target = 1.0 - alpha;
        while count < scored.len() && mass < target {
            mass += scored[count].1;
            count += 1;
        }
        let cutoff = scored[count - 1].0;
        while count < scored.len() && scored[count].0 - cutoff <= TIE_TOL * cutoff.abs().max(1.0) {
            mass += scored[count].1;
            count += 1;
        }
        Ok(DiscreteAcceptanceSet {
            theta: theta.to_vec(),
            members: scored[..count].iter().map(|s| support[s.2].clone()).collect(),
            attained_coverage: mass,
        })
    }

    /// Acceptance set at natural parameter η.
    pub fn acceptance_set(&self, eta: &[f64], alpha: f64) -> Result<DiscreteAcceptanceSet> {
        self.acceptance_set_theta(&self.theta_of_eta(eta), alpha, 1.0)
    }

    /// `θ ∈ C_α(y)`.
    pub fn is_member(&self, y: &[u32], theta: &[f64], alpha: f64, truncation_factor: f64) -> Result<bool> {
        Ok(self.acceptance_set_theta(theta, alpha, truncation_factor)?.contains(y))
    }

    /// θ grid used for the region at outcome `y`.
    pub fn theta_grid(&self, y: &[u32], grid: GridSpec) -> Result<Vec<Vec<f64>>> {
        let res = grid.resolution;
        if !(res > 0.0 && res < 0.5) {
            return Err(FabError::InvalidInput(format!("grid resolution {res} must lie in (0, 0.5)")));
        }
        Ok(match self {
            NefModel::BinomialBeta { .. } => {
                let m = (1.0 / res).round() as usize;
                (1..m).map(|i| vec![i as f64 / m as f64]).collect()
            }
            NefModel::PoissonGamma { a, .. } => {
                let y0 = y[0] as f64;
                let hi = y0 + a + 20.0 * (y0 + a + 1.0).sqrt() + 20.0;
                let lo: f64 = 1e-4;
                let steps = ((hi.ln() - lo.ln()) / res).ceil() as usize;
                (0..=steps).map(|i| vec![(lo.ln() + i as f64 * res).exp()]).collect()
            }
            NefModel::MultinomialDirichlet { a, .. } => {
                let m = (1.0 / res).round() as u32;
                let k = a.len();
                compositions(m - k as u32, k)
                    .into_iter()
                    .map(|c| c.iter().map(|&v| (v + 1) as f64 / m as f64).collect())
                    .collect()
            }
        })
    }

    /// `C_α(y)` by membership scan over the θ grid.
    pub fn confidence_region(
        &self,
        y: &[u32],
        alpha: f64,
        grid: GridSpec,
        exec: Execution,
    ) -> Result<NefRegion> {
        self.validate()?;
        self.check_outcome(y)?;
        check_alpha(alpha)?;
        let points = self.theta_grid(y, grid)?;
        let flags: Result<Vec<bool>> = exec
            .map(&points, |t| self.is_member(y, t, alpha, grid.truncation_factor))
            .into_iter()
            .collect();
        let member = flags?;
        let estimate = self.fab_estimator(y)?;
        let estimate_member = self.is_member(y, &estimate.theta, alpha, grid.truncation_factor)?;
        let (intervals, components) = if self.dim() == 1 {
            let iv = runs(&points, &member);
            let c = iv.len();
            (iv, c)
        } else {
            (Vec::new(), lattice_components(&points, &member, grid.resolution))
        };
        Ok(NefRegion {
            y: y.to_vec(),
            alpha,
            grid: points,
            member,
            intervals,
            components,
            estimate,
            estimate_member,
        })
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(FabError::InvalidInput(format!("alpha={alpha} must lie in (0, 1)")))
    }
}

/// `x log y` with the convention `0 log 0 = 0`.
fn xlogy(x: f64, y: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * y.ln()
    }
}

/// Support bound with Poisson upper-tail mass below [`POISSON_TAIL`],
/// from the Bernstein bound `P(Y ≥ θ+t) ≤ exp(-t²/(2(θ + t/3)))`.
fn poisson_bound(theta: f64, factor: f64) -> u32 {
    let l = -POISSON_TAIL.ln();
    let t = l / 3.0 + (l * l / 9.0 + 2.0 * l * theta).sqrt();
    ((theta + t).ceil() * factor.max(1.0)).ceil() as u32
}

/// All vectors of `k` non-negative integers summing to `n`, in
/// lexicographic order.
fn compositions(n: u32, k: usize) -> Vec<Vec<u32>> {
    fn rec(remaining: u32, slots: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slots == 1 {
            prefix.push(remaining);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for v in 0..=remaining {
            prefix.push(v);
            rec(remaining - v, slots - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Maximal runs of consecutive members as closed intervals.
fn runs(points: &[Vec<f64>], member: &[bool]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for i in 0..member.len() {
        match (member[i], start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                out.push((points[s][0], points[i - 1][0]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((points[s][0], points[member.len() - 1][0]));
    }
    out
}

/// Connected components of member lattice cells; neighbours differ by one
/// grid step moved between two coordinates.
fn lattice_components(points: &[Vec<f64>], member: &[bool], res: f64) -> usize {
    let m = (1.0 / res).round();
    let key = |p: &Vec<f64>| -> Vec<i64> { p.iter().map(|&t| (t * m).round() as i64).collect() };
    let index: HashMap<Vec<i64>, usize> = points
        .iter()
        .enumerate()
        .filter(|(i, _)| member[*i])
        .map(|(i, p)| (key(p), i))
        .collect();
    let mut seen = vec![false; points.len()];
    let mut components = 0;
    for (start_key, &start) in &index {
        if seen[start] {
            continue;
        }
        components += 1;
        seen[start] = true;
        let mut queue = VecDeque::from([start_key.clone()]);
        while let Some(cur) = queue.pop_front() {
            for i in 0..cur.len() {
                for j in 0..cur.len() {
                    if i == j {
                        continue;
                    }
                    let mut next = cur.clone();
                    next[i] += 1;
                    next[j] -= 1;
                    if let Some(&idx) = index.get(&next) {
                        if !seen[idx] {
                            seen[idx] = true;
                            queue.push_back(next);
                        }
                    }
                }
            }
        }
    }
    components
}

impl fmt::Display for NefModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NefModel::BinomialBeta { n, a, b } => write!(f, "binom:n={n},a={a},b={b}"),
            NefModel::PoissonGamma { a, p } => write!(f, "pois:a={a},p={p}"),
            NefModel::MultinomialDirichlet { n, a } => {
                let a: Vec<String> = a.iter().map(|v| v.to_string()).collect();
                write!(f, "multinom:n={n},a={}", a.join(";"))
            }
        }
    }
}

impl FromStr for NefModel {
    type Err = FabError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, body) = s.split_once(':').unwrap_or((s, ""));
        let mut fields: HashMap<String, String> = HashMap::new();
        for pair in body.split(',').filter(|p| !p.trim().is_empty()) {
            let (k, v) = pair
                .split_once('=')
                .ok_or_else(|| FabError::Parse(format!("expected key=value, got '{pair}'")))?;
            fields.insert(k.trim().to_ascii_lowercase(), v.trim().to_string());
        }
        let num = |key: &str, default: Option<f64>| -> Result<f64> {
            match fields.get(key) {
                Some(v) => v.parse().map_err(|_| FabError::Parse(format!("bad value '{v}' for '{key}'"))),
                None => default.ok_or_else(|| FabError::Parse(format!("missing parameter '{key}'"))),
            }
        };
        let count = |key: &str| -> Result<u32> {
            let v = fields
                .get(key)
                .ok_or_else(|| FabError::Parse(format!("missing parameter '{key}'")))?;
            v.parse().map_err(|_| FabError::Parse(format!("bad count '{v}' for '{key}'")))
        };
        let allowed: &[&str] = match name.trim() {
            "binom" | "binomial" => &["n", "a", "b"],
            "pois" | "poisson" => &["a", "p"],
            "multinom" | "multinomial" => &["n", "a", "k"],
            other => return Err(FabError::Parse(format!("unknown family '{other}'"))),
        };
        if let Some(k) = fields.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(FabError::Parse(format!("unknown parameter '{k}'")));
        }
        let model = match name.trim() {
            "binom" | "binomial" => NefModel::BinomialBeta {
                n: count("n")?,
                a: num("a", Some(1.0))?,
                b: num("b", Some(1.0))?,
            },
            "pois" | "poisson" => NefModel::PoissonGamma { a: num("a", Some(1.0))?, p: num("p", Some(0.5))? },
            _ => {
                let n = count("n")?;
                let a: Vec<f64> = match fields.get("a") {
                    Some(v) => v
                        .split(';')
                        .map(|x| x.trim().parse().map_err(|_| FabError::Parse(format!("bad weight '{x}'"))))
                        .collect::<Result<_>>()?,
                    None => vec![1.0; count("k")? as usize],
                };
                NefModel::MultinomialDirichlet { n, a }
            }
        };
        model.validate().map_err(|e| FabError::Parse(e.to_string()))?;
        Ok(model)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom() -> NefModel {
        "binom:n=8,a=1,b=1".parse().unwrap()
    }

    #[test]
    fn lambda_values() {
        let m = binom();
        let exact = (24.0f64 * 24.0 / 362_880.0).ln();
        assert!((m.lambda(&[4.0]).unwrap() - exact).abs() < 1e-13);
        let p: NefModel = "pois:a=1,p=0.5".parse().unwrap();
        assert!((p.lambda(&[0.0]).unwrap() + std::f64::consts::LN_2).abs() < 1e-15);
        assert!(m.lambda(&[-1.5]).is_err());
    }

    #[test]
    fn estimators() {
        let e = binom().fab_estimator(&[4]).unwrap();
        assert!(e.eta[0].abs() < 1e-15 && (e.theta[0] - 0.5).abs() < 1e-15);
        let p: NefModel = "pois:a=1,p=0.5".parse().unwrap();
        let e = p.fab_estimator(&[0]).unwrap();
        assert!((e.eta[0] - (-0.577_215_664_901_532_9 - std::f64::consts::LN_2)).abs() < 1e-13);
        let mm: NefModel = "multinom:n=15,a=1;1;1".parse().unwrap();
        let e = mm.fab_estimator(&[5, 5, 5]).unwrap();
        for t in e.theta {
            assert!((t - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn acceptance_extremes() {
        let m = binom();
        let tight = m.acceptance_set(&[0.0], 0.999_999).unwrap();
        assert_eq!(tight.members[0], vec![4]);
        let loose = m.acceptance_set(&[0.0], 1e-12).unwrap();
        assert_eq!(loose.members.len(), 9);
    }

    #[test]
    fn poisson_truncation_is_reported() {
        let p: NefModel = "pois:a=1,p=0.5".parse().unwrap();
        let s = p.acceptance_set_theta(&[3.0], 0.1, 1.0).unwrap();
        assert!(s.attained_coverage >= 0.9);
        let total: f64 = p.support(&[3.0], 1.0).iter().map(|y| p.pmf(&[3.0], y)).sum();
        assert!(1.0 - total < 1e-11);
    }

    #[test]
    fn binomial_region_symmetric() {
        let r = binom()
            .confidence_region(&[4], 0.1, GridSpec { resolution: 1e-3, truncation_factor: 1.0 }, Execution::Sequential)
            .unwrap();
        assert_eq!(r.intervals.len(), 1);
        let (lo, hi) = r.intervals[0];
        assert!((lo - (1.0 - hi)).abs() < 1.5e-3);
        assert!(r.estimate_member);
    }

    #[test]
    fn compositions_count() {
        assert_eq!(compositions(15, 3).len(), 136);
        assert_eq!(compositions(4, 4).len(), 35);
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["binom:n=8,a=1,b=1", "pois:a=2,p=0.25", "multinom:n=15,a=1;2;0.5"] {
            let m: NefModel = s.parse().unwrap();
            assert_eq!(m.to_string(), s);
        }
        assert!("binom:n=8,c=1".parse::<NefModel>().is_err());
        assert!("multinom:n=3,a=1;1;1;1;1".parse::<NefModel>().is_err());
    }
}
