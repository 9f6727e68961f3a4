//! Modified Bessel functions of the first kind, orders 0 and 1.

use std::f64::consts::PI;

const SERIES_LIMIT: f64 = 20.0;

/// Σ (s/2)^{2k+ν} / (k! (k+ν)!) for ν ∈ {0, 1}.
fn series(order: u32, s: f64) -> f64 {
    let half = 0.5 * s;
    let q = half * half;
    let mut term = if order == 0 { 1.0 } else { half };
    let mut sum = term;
    let nu = order as f64;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= q / (k * (k + nu));
        sum += term;
        if term <= 1e-17 * sum {
            break;
        }
    }
    sum
}

/// Hankel coefficient a_k(ν) = Π_{j≤k} (4ν² - (2j-1)²) / (k! 8^k), returned
/// one at a time through the recurrence.
fn asymptotic_scaled(order: u32, s: f64) -> f64 {
    let mu = 4.0 * (order * order) as f64;
    let mut coef = 1.0;
    let mut sum: f64 = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..200 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        coef *= -(mu - odd * odd) / (8.0 * kf * s);
        if coef.abs() >= prev || coef.abs() < 1e-17 * sum.abs() {
            break;
        }
        prev = coef.abs();
        sum += coef;
    }
    sum / (2.0 * PI * s).sqrt()
}

/// `e^{-s} I_ν(s)` for `s >= 0`.
pub(crate) fn bessel_scaled(order: u32, s: f64) -> f64 {
    if s < SERIES_LIMIT {
        (-s).exp() * series(order, s)
    } else {
        asymptotic_scaled(order, s)
    }
}

pub(crate) fn bessel_i(order: u32, s: f64) -> f64 {
    if s < SERIES_LIMIT {
        series(order, s)
    } else {
        s.exp() * asymptotic_scaled(order, s)
    }
}

/// `e^{-s} (I₀(s) - I₁(s))`, with the large-argument branch expanded term by
/// term so the leading cancellation never happens numerically.
pub(crate) fn i0_minus_i1_scaled(s: f64) -> f64 {
    if s < SERIES_LIMIT {
        return (-s).exp() * (series(0, s) - series(1, s));
    }
    // Σ_k (-1)^k [a_k(0) - a_k(1)] / s^k; the k = 0 terms cancel exactly.
    let mut c0 = 1.0; // (-1)^k a_k(0) / s^k
    let mut c1 = 1.0; // (-1)^k a_k(1) / s^k
    let mut sum: f64 = 0.0;
    let mut prev = f64::INFINITY;
    for k in 1..200 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        c0 *= -(0.0 - odd * odd) / (8.0 * kf * s);
        c1 *= -(4.0 - odd * odd) / (8.0 * kf * s);
        let term = c0 - c1;
        if term.abs() >= prev || (k > 1 && term.abs() < 1e-17 * sum.abs()) {
            break;
        }
        prev = term.abs();
        sum += term;
    }
    sum / (2.0 * PI * s).sqrt()
}
