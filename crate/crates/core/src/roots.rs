//! Bracketing root finders.

/// Outcome of a bracketed solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Brent's method on `[a, b]`, where `f(a)` and `f(b)` have opposite signs
/// (or one of them is zero). Stops once the bracket is narrower than
/// `xtol` (plus a relative term of a few ulps) or after `max_iter` steps.
pub fn brent<F>(mut f: F, a: f64, b: f64, xtol: f64, max_iter: usize) -> Option<Root>
where
    F: FnMut(f64) -> f64,
{
    let fa = f(a);
    let fb = f(b);
    brent_with_values(f, a, b, fa, fb, xtol, max_iter)
}

/// Same as [`brent`] with the endpoint values already known.
pub fn brent_with_values<F>(
    mut f: F,
    a: f64,
    b: f64,
    fa: f64,
    fb: f64,
    xtol: f64,
    max_iter: usize,
) -> Option<Root>
where
    F: FnMut(f64) -> f64,
{
    if fa.is_nan() || fb.is_nan() || fa.signum() == fb.signum() && fa != 0.0 && fb != 0.0 {
        return None;
    }
    if fa == 0.0 {
        return Some(Root { x: a, iterations: 0, converged: true });
    }
    if fb == 0.0 {
        return Some(Root { x: b, iterations: 0, converged: true });
    }
    let (mut a, mut b, mut fa, mut fb) = (a, b, fa, fb);
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for it in 0..max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Some(Root { x: b, iterations: it, converged: true });
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                // secant
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                // inverse quadratic interpolation
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b);
        if fb.is_nan() {
            return None;
        }
    }
    Some(Root { x: b, iterations: max_iter, converged: false })
}

/// Plain bisection for a predicate that is `true` at `lo` and `false` at
/// `hi` (either ordering of `lo` and `hi`). Returns the last `true` point.
pub fn bisect_predicate<P>(mut pred: P, lo: f64, hi: f64, xtol: f64) -> f64
where
    P: FnMut(f64) -> bool,
{
    let (mut good, mut bad) = (lo, hi);
    while (bad - good).abs() > xtol {
        let mid = 0.5 * (good + bad);
        if mid == good || mid == bad {
            break;
        }
        if pred(mid) {
            good = mid;
        } else {
            bad = mid;
        }
    }
    good
}
