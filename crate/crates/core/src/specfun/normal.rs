//! Standard normal density, distribution and quantile functions.
//!
//! The distribution function is built on `erfc` so that lower-tail
//! probabilities keep full relative accuracy down to the underflow limit.
//! Log-space variants extend the usable range far beyond it, which the
//! spending-function solve needs when one tail carries a vanishing share of
//! the error budget.

use std::f64::consts::{FRAC_1_SQRT_2, LN_2};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

/// Below this point `log_cdf` switches to the Mills-ratio continued fraction.
const LOG_CDF_SWITCH: f64 = -37.0;

pub(crate) fn pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / SQRT_2PI
}

pub(crate) fn log_pdf(z: f64) -> f64 {
    -0.5 * z * z - LN_SQRT_2PI
}

pub(crate) fn cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z * FRAC_1_SQRT_2)
}

/// Upper tail `1 - Φ(z)` without cancellation.
pub(crate) fn sf(z: f64) -> f64 {
    cdf(-z)
}

/// Mills ratio `Φ(-x) / φ(x)` for large positive `x`, by continued fraction.
fn mills_ratio(x: f64) -> f64 {
    // R(x) = 1 / (x + 1/(x + 2/(x + 3/(x + ...))))
    const TINY: f64 = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for n in 1..500 {
        let a = n as f64;
        d = x + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = x + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    1.0 / f
}

/// `log Φ(z)`, finite for every finite `z`.
pub(crate) fn log_cdf(z: f64) -> f64 {
    if z >= LOG_CDF_SWITCH {
        if z > 0.0 {
            (-sf(z)).ln_1p()
        } else {
            cdf(z).ln()
        }
    } else {
        log_pdf(z) + mills_ratio(-z).ln()
    }
}

// Rational approximation for the initial quantile guess (P. J. Acklam).
const A: [f64; 6] = [
    -3.969_683_028_665_376e1,
    2.209_460_984_245_205e2,
    -2.759_285_104_469_687e2,
    1.383_577_518_672_690e2,
    -3.066_479_806_614_716e1,
    2.506_628_277_459_239,
];
const B: [f64; 5] = [
    -5.447_609_879_822_406e1,
    1.615_858_368_580_409e2,
    -1.556_989_798_598_866e2,
    6.680_131_188_771_972e1,
    -1.328_068_155_288_572e1,
];
const C: [f64; 6] = [
    -7.784_894_002_430_293e-3,
    -3.223_964_580_411_365e-1,
    -2.400_758_277_161_838,
    -2.549_732_539_343_734,
    4.374_664_141_464_968,
    2.938_163_982_698_783,
];
const D: [f64; 4] = [
    7.784_695_709_041_462e-3,
    3.224_671_290_700_398e-1,
    2.445_134_137_142_996,
    3.754_408_661_907_416,
];

fn acklam_lower(p: f64) -> f64 {
    debug_assert!(p > 0.0 && p <= 0.5);
    if p < 0.024_25 {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    }
}

/// Lower-half quantile, `p` in `(0, 0.5]`.
fn quantile_lower(p: f64) -> f64 {
    if p < 1e-300 {
        return quantile_log_tail(p.ln());
    }
    let mut x = acklam_lower(p);
    // Halley steps against the exact cdf; the second one is nearly free and
    // absorbs the rare case where the first lands a few ulps off.
    for _ in 0..2 {
        let e = cdf(x) - p;
        let u = e * SQRT_2PI * (0.5 * x * x).exp();
        x -= u / (1.0 + 0.5 * x * u);
    }
    x
}

/// Newton iteration on `log Φ(x) = logp` for far-tail probabilities.
fn quantile_log_tail(logp: f64) -> f64 {
    // Leading-order inversion of log Φ(x) ≈ -x²/2 - log(-x) - log √(2π).
    let l = -logp - LN_SQRT_2PI;
    let mut x = -(2.0 * l).sqrt();
    for _ in 0..3 {
        x = -(2.0 * (l - (-x).ln())).sqrt();
    }
    for _ in 0..50 {
        let h = log_cdf(x) - logp;
        // d/dx log Φ(x) = φ(x)/Φ(x) = 1 / R(-x)
        let slope = (log_pdf(x) - log_cdf(x)).exp();
        let step = h / slope;
        x -= step;
        if step.abs() <= 1e-15 * x.abs().max(1.0) {
            break;
        }
    }
    x
}

/// `Φ⁻¹(p)` for `p` in `(0, 1)`.
pub(crate) fn quantile(p: f64) -> f64 {
    if p <= 0.5 {
        quantile_lower(p)
    } else {
        -quantile_lower(1.0 - p)
    }
}

/// `Φ⁻¹(exp(logp))` for `logp < 0`, including probabilities far below the
/// smallest positive double.
pub(crate) fn quantile_from_log(logp: f64) -> f64 {
    if logp > -LN_2 {
        // p > 1/2: work with the complement, which expm1 keeps exact.
        -quantile_lower(-logp.exp_m1())
    } else if logp > -690.0 {
        quantile_lower(logp.exp())
    } else {
        quantile_log_tail(logp)
    }
}

/// Upper quantile `z_{1-q} = Φ⁻¹(1 - q)` computed from `q` directly.
pub(crate) fn upper_quantile(q: f64) -> f64 {
    -quantile(q)
}

/// Upper quantile from `log q`.
pub(crate) fn upper_quantile_from_log(logq: f64) -> f64 {
    -quantile_from_log(logq)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cdf_matches_known_values() {
        assert_eq!(cdf(0.0), 0.5);
        assert!((cdf(1.959_963_984_540_054) - 0.975).abs() < 1e-15);
        assert!((cdf(-1.0) - 0.158_655_253_931_457_05).abs() < 1e-16);
    }

    #[test]
    fn log_cdf_is_continuous_across_switch() {
        let below = log_cdf(LOG_CDF_SWITCH - 1e-9);
        let above = log_cdf(LOG_CDF_SWITCH + 1e-9);
        let slope = 37.0;
        assert!((below - above).abs() < slope * 3e-9 + 1e-11, "{below} {above}");
    }

    #[test]
    fn far_tail_quantile_inverts_log_cdf() {
        for &logp in &[-800.0, -1500.0, -1e4, -5e5] {
            let x = quantile_from_log(logp);
            assert!(((log_cdf(x) - logp) / logp).abs() < 1e-14, "{logp} -> {x}");
        }
    }

    #[test]
    fn quantile_from_log_agrees_with_direct_quantile() {
        for &p in &[1e-200, 1e-20, 0.001, 0.3, 0.5, 0.7, 0.999] {
            let a = quantile(p);
            let b = quantile_from_log(f64::ln(p));
            assert!((a - b).abs() < 1e-12 * a.abs().max(1.0), "{p}: {a} {b}");
        }
    }
}
