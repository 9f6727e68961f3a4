//! Dawson's integral D(x) = e^{-x²} ∫₀ˣ e^{t²} dt.

/// Below this |x| the positive power series is used.
const SERIES_LIMIT: f64 = 7.0;

/// `D(x) / x`, finite and smooth through the origin.
pub(crate) fn dawson_over_x(x: f64) -> f64 {
    let ax = x.abs();
    if ax < SERIES_LIMIT {
        // e^{-x²} Σ x^{2n} / ((2n+1) n!)
        let t = ax * ax;
        let mut power = 1.0; // t^n / n!
        let mut sum = 1.0;
        let mut n = 0.0;
        loop {
            n += 1.0;
            power *= t / n;
            let term = power / (2.0 * n + 1.0);
            sum += term;
            if term < 1e-17 * sum {
                break;
            }
        }
        (-t).exp() * sum
    } else {
        dawson_asymptotic(ax) / ax
    }
}

/// D(x) ~ 1/(2x) Σ (2k-1)!! / (2x²)^k for large x.
fn dawson_asymptotic(x: f64) -> f64 {
    let inv = 1.0 / (2.0 * x * x);
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 0.0;
    loop {
        let next = term * (2.0 * k + 1.0) * inv;
        if next >= term || next < 1e-17 * sum {
            break;
        }
        term = next;
        sum += term;
        k += 1.0;
    }
    sum / (2.0 * x)
}

pub(crate) fn dawson(x: f64) -> f64 {
    x * dawson_over_x(x)
}
