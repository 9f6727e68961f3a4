//! Kummer's confluent hypergeometric function ₁F₁(a; b; z).
//!
//! Positive arguments are summed directly (every term is positive once
//! `n > -a`). Negative arguments go through the Kummer transformation
//! ₁F₁(a; b; -x) = e^{-x} ₁F₁(b - a; b; x), which turns the alternating
//! series into a positive one, and switch to the large-argument asymptotic
//! expansion once `x` exceeds [`ASYMPTOTIC_SWITCH`].

use super::gamma::log_gamma;
use crate::error::{FabError, Result};

/// `x = -z` above which the asymptotic expansion replaces the series.
pub(crate) const ASYMPTOTIC_SWITCH: f64 = 50.0;

const MAX_TERMS: usize = 20_000;

fn is_nonpositive_integer(v: f64) -> bool {
    v <= 0.0 && v.fract() == 0.0
}

/// Power series Σ (c)_n / (b)_n · x^n / n! for `x >= 0`.
fn series(c: f64, b: f64, x: f64) -> Result<f64> {
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        term *= (c + nf) * x / ((b + nf) * (nf + 1.0));
        sum += term;
        if !sum.is_finite() {
            return Err(FabError::range(
                "kummer_1f1",
                format!("series overflow at c={c}, b={b}, x={x}"),
            ));
        }
        if term == 0.0 || (nf > x && (term / sum).abs() < 1e-17) {
            return Ok(sum);
        }
    }
    Err(FabError::range(
        "kummer_1f1",
        format!("series did not converge in {MAX_TERMS} terms (c={c}, b={b}, x={x})"),
    ))
}

/// Asymptotic sum Σ (a)_s (a - b + 1)_s / s! · x^{-s}, truncated at its
/// smallest term.
fn asymptotic_sum(a: f64, b: f64, x: f64) -> f64 {
    let mut term = 1.0_f64;
    let mut sum = 1.0;
    for s in 0..500 {
        let sf = s as f64;
        let next = term * (a + sf) * (a - b + 1.0 + sf) / ((sf + 1.0) * x);
        if next.abs() >= term.abs() && s > 0 {
            break;
        }
        term = next;
        sum += term;
        if term == 0.0 || (term / sum).abs() < 1e-17 {
            break;
        }
    }
    sum
}

/// `log ₁F₁(a; b; -x)` for `x >= 0` and `b > a > 0`, without overflow for
/// any finite `x`.
pub(crate) fn log_hyp1f1_neg(a: f64, b: f64, x: f64) -> f64 {
    debug_assert!(x >= 0.0 && b > a && a > 0.0);
    if x <= ASYMPTOTIC_SWITCH {
        // the series is bounded by e^{x} ≤ e^{50}
        match series(b - a, b, x) {
            Ok(s) => s.ln() - x,
            Err(_) => f64::NAN,
        }
    } else {
        log_gamma(b) - log_gamma(b - a) - a * x.ln() + asymptotic_sum(a, b, x).ln()
    }
}

/// ₁F₁(a; b; z) for `b > 0`.
pub(crate) fn hyp1f1(a: f64, b: f64, z: f64) -> Result<f64> {
    if z == 0.0 || a == 0.0 {
        return Ok(1.0);
    }
    if z > 0.0 {
        return series(a, b, z);
    }
    let x = -z;
    let c = b - a;
    if is_nonpositive_integer(c) || x <= ASYMPTOTIC_SWITCH {
        // Kummer transformation; for c a non-positive integer the series
        // terminates and the identity is exact for every x.
        let s = series(c, b, x)?;
        return Ok((-x).exp() * s);
    }
    let (lg_c, sign_c) = libm::lgamma_r(c);
    let log_mag = log_gamma(b) - lg_c - a * x.ln();
    let value = sign_c as f64 * log_mag.exp() * asymptotic_sum(a, b, x);
    if value.is_finite() {
        Ok(value)
    } else {
        Err(FabError::range(
            "kummer_1f1",
            format!("asymptotic overflow at a={a}, b={b}, z={z}"),
        ))
    }
}
