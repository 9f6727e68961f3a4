//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's numerics except for the quantities under test.
#![allow(dead_code)]

use std::f64::consts::PI;

/// Tanh-sinh quadrature of `f(x, x - a, b - x)` over `[a, b]`, refining the
/// step until two successive levels agree to `rel`. The distances to the
/// endpoints are passed separately so integrands with endpoint
/// singularities can be evaluated without cancellation.
pub fn tanh_sinh<F: Fn(f64, f64, f64) -> f64>(f: F, a: f64, b: f64, rel: f64) -> f64 {
    let half = 0.5 * (b - a);
    let node = |t: f64| -> Option<(f64, f64, f64, f64)> {
        let u = 0.5 * PI * t.sinh();
        let da = (b - a) / (1.0 + (-2.0 * u).exp());
        let db = (b - a) / (1.0 + (2.0 * u).exp());
        if da <= 0.0 || db <= 0.0 {
            return None;
        }
        let w = half * 0.5 * PI * t.cosh() / u.cosh().powi(2);
        Some((a + da, da, db, w))
    };
    let eval = |t: f64| node(t).map_or(0.0, |(x, da, db, w)| {
        let v = f(x, da, db);
        if v.is_finite() { w * v } else { 0.0 }
    });
    let tmax = 6.5;
    let mut h = 0.5;
    let mut sum = eval(0.0);
    let mut k = 1;
    while k as f64 * h <= tmax {
        sum += eval(k as f64 * h) + eval(-(k as f64) * h);
        k += 1;
    }
    let mut prev = sum * h;
    for _ in 0..12 {
        h *= 0.5;
        let mut k = 1;
        while k as f64 * h <= tmax {
            let t = k as f64 * h;
            sum += eval(t) + eval(-t);
            k += 2;
        }
        let est = sum * h;
        if (est - prev).abs() <= rel * est.abs() {
            return est;
        }
        prev = est;
    }
    prev
}

/// Piecewise tanh-sinh over `[a, b]` split at `breaks`, with pieces no
/// longer than `max_len`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, breaks: &[f64], max_len: f64) -> f64 {
    let mut pts: Vec<f64> = std::iter::once(a)
        .chain(breaks.iter().copied().filter(|&x| x > a && x < b))
        .chain(std::iter::once(b))
        .collect();
    pts.sort_by(f64::total_cmp);
    let mut total = 0.0;
    for w in pts.windows(2) {
        let pieces = ((w[1] - w[0]) / max_len).ceil().max(1.0) as usize;
        let step = (w[1] - w[0]) / pieces as f64;
        for i in 0..pieces {
            let lo = w[0] + i as f64 * step;
            total += tanh_sinh(|x, _, _| f(x), lo, lo + step, 1e-13);
        }
    }
    total
}

pub fn normal_pdf(x: f64, mean: f64, sd: f64) -> f64 {
    let z = (x - mean) / sd;
    (-0.5 * z * z).exp() / (sd * (2.0 * PI).sqrt())
}

/// Beta-prime scale-mixture marginal `∫ N(y; 0, σ²(1+u)) BP(u; b, a) du`,
/// written as a Beta(b, a) expectation in `v = u/(1+u)`.
pub fn beta_prime_marginal(a: f64, b: f64, sigma: f64, y: f64) -> f64 {
    let log_b = libm::lgamma(a) + libm::lgamma(b) - libm::lgamma(a + b);
    let z2 = (y / sigma).powi(2);
    let integrand = |_v: f64, v: f64, one_minus_v: f64| {
        ((b - 1.0) * v.ln() + (a - 0.5) * one_minus_v.ln() - 0.5 * z2 * one_minus_v - log_b).exp()
    };
    tanh_sinh(integrand, 0.0, 1.0, 1e-13) / (sigma * (2.0 * PI).sqrt())
}

/// `∫ N(y; θ, σ²) π(θ) dθ` for a prior density with kinks at `breaks`.
pub fn marginal_by_theta(prior: impl Fn(f64) -> f64, sigma: f64, y: f64, breaks: &[f64]) -> f64 {
    let reach = y.abs() + 40.0 * sigma;
    let mut br = breaks.to_vec();
    br.push(y);
    integrate(|t| normal_pdf(y, t, sigma) * prior(t), -reach, reach, &br, sigma)
}

/// Fourth-order central difference.
pub fn derivative(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
}

pub fn binomial_pmf(n: u32, k: u32, theta: f64) -> f64 {
    if theta <= 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if theta >= 1.0 {
        return if k == n { 1.0 } else { 0.0 };
    }
    let lc = libm::lgamma(n as f64 + 1.0) - libm::lgamma(k as f64 + 1.0) - libm::lgamma((n - k) as f64 + 1.0);
    (lc + k as f64 * theta.ln() + (n - k) as f64 * (-theta).ln_1p()).exp()
}

/// Sterne acceptance set at θ: outcomes by decreasing probability until the
/// mass reaches `1-α`, keeping every outcome tied with the last one.
pub fn sterne_accepts(n: u32, theta: f64, alpha: f64) -> Vec<bool> {
    let probs: Vec<f64> = (0..=n).map(|k| binomial_pmf(n, k, theta)).collect();
    let mut order: Vec<usize> = (0..=n as usize).collect();
    order.sort_by(|&i, &j| probs[j].total_cmp(&probs[i]));
    let mut accept = vec![false; n as usize + 1];
    let mut mass = 0.0;
    let mut last = f64::NAN;
    for &k in &order {
        if mass >= 1.0 - alpha && (probs[k] - last).abs() > 1e-12 * last {
            break;
        }
        accept[k] = true;
        mass += probs[k];
        last = probs[k];
    }
    accept
}
