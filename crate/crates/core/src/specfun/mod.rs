//! Special functions used by the closed-form marginals, quantiles and NEF
//! cumulants.
//!
//! The public functions validate their arguments and return
//! [`FabError::Domain`] for inputs outside the stated domain. The crate uses
//! the unchecked `pub(crate)` versions in its inner loops.

mod bessel;
mod dawson;
mod gamma;
mod kummer;
pub(crate) mod normal;

pub(crate) use bessel::i0_minus_i1_scaled;
pub(crate) use dawson::dawson_over_x;
pub(crate) use gamma::{digamma as digamma_unchecked, log_beta as log_beta_unchecked};
pub(crate) use gamma::log_gamma as log_gamma_unchecked;
pub(crate) use kummer::log_hyp1f1_neg;

use crate::error::{FabError, Result};

fn finite(function: &'static str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(FabError::domain(function, format!("non-finite argument {x}")))
    }
}

fn positive(function: &'static str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(FabError::domain(function, format!("argument {x} must be positive")))
    }
}

/// Standard normal CDF Φ(z).
pub fn std_normal_cdf(z: f64) -> Result<f64> {
    finite("std_normal_cdf", z)?;
    Ok(normal::cdf(z))
}

/// Standard normal density φ(z).
pub fn std_normal_pdf(z: f64) -> Result<f64> {
    finite("std_normal_pdf", z)?;
    Ok(normal::pdf(z))
}

/// `log Φ(z)`, accurate deep into the lower tail.
pub fn std_normal_log_cdf(z: f64) -> Result<f64> {
    finite("std_normal_log_cdf", z)?;
    Ok(normal::log_cdf(z))
}

/// Standard normal quantile Φ⁻¹(p).
pub fn std_normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(FabError::domain(
            "std_normal_quantile",
            format!("probability {p} outside (0, 1)"),
        ));
    }
    Ok(normal::quantile(p))
}

/// Kummer's confluent hypergeometric function ₁F₁(a; b; z).
///
/// Accurate to about 1e-13 relative for `z <= 0` with `a, b > 0`; positive
/// `z` is supported up to the overflow threshold, beyond which a range
/// error is returned.
pub fn kummer_1f1(a: f64, b: f64, z: f64) -> Result<f64> {
    finite("kummer_1f1", a)?;
    finite("kummer_1f1", z)?;
    positive("kummer_1f1", b)?;
    kummer::hyp1f1(a, b, z)
}

/// Dawson's integral.
pub fn dawson(z: f64) -> Result<f64> {
    finite("dawson", z)?;
    Ok(dawson::dawson(z))
}

fn nonnegative(function: &'static str, z: f64) -> Result<()> {
    if z.is_finite() && z >= 0.0 {
        Ok(())
    } else {
        Err(FabError::domain(function, format!("argument {z} must be >= 0")))
    }
}

pub fn bessel_i0(z: f64) -> Result<f64> {
    nonnegative("bessel_i0", z)?;
    Ok(bessel::bessel_i(0, z))
}

pub fn bessel_i1(z: f64) -> Result<f64> {
    nonnegative("bessel_i1", z)?;
    Ok(bessel::bessel_i(1, z))
}

/// `e^{-z} I₀(z)`.
pub fn bessel_i0_scaled(z: f64) -> Result<f64> {
    nonnegative("bessel_i0_scaled", z)?;
    Ok(bessel::bessel_scaled(0, z))
}

/// `e^{-z} I₁(z)`.
pub fn bessel_i1_scaled(z: f64) -> Result<f64> {
    nonnegative("bessel_i1_scaled", z)?;
    Ok(bessel::bessel_scaled(1, z))
}

pub fn digamma(x: f64) -> Result<f64> {
    positive("digamma", x)?;
    Ok(gamma::digamma(x))
}

pub fn log_gamma(x: f64) -> Result<f64> {
    positive("log_gamma", x)?;
    Ok(gamma::log_gamma(x))
}

pub fn log_beta(a: f64, b: f64) -> Result<f64> {
    positive("log_beta", a)?;
    positive("log_beta", b)?;
    Ok(gamma::log_beta(a, b))
}
