//! One-dimensional search: golden-section maximisation and the bisection
//! solvers that pick the tangent point `t0`.

use crate::error::{Error, Result};
use crate::linalg::SpectrumBound;

use super::envelope::secant;
use super::function::ScalarFunction;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for a maximum of `f` on `[lo, hi]`, stopping once
/// the bracket is narrower than `width`. Returns `(argmax, max)`.
pub fn golden_section_max(f: impl Fn(f64) -> f64, lo: f64, hi: f64, width: f64) -> (f64, f64) {
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    // A bracket cannot shrink below a few ulps; cap the work accordingly.
    for _ in 0..200 {
        if b - a <= width {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Bisection for a sign change of `g` on `[lo, hi]`; stops when `|g| <= tol`.
fn bisect(
    g: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    tol: f64,
    what: &'static str,
) -> Result<f64> {
    let (mut a, mut b) = (lo, hi);
    let (ga, gb) = (g(a), g(b));
    if ga.abs() <= tol {
        return Ok(a);
    }
    if gb.abs() <= tol {
        return Ok(b);
    }
    if !(ga.signum() != gb.signum()) || ga.is_nan() || gb.is_nan() {
        return Err(Error::NoRoot {
            what,
            lower: lo,
            upper: hi,
        });
    }
    let rising = gb > ga;
    let mut best = (f64::INFINITY, 0.5 * (a + b));
    for _ in 0..400 {
        let mid = 0.5 * (a + b);
        let gm = g(mid);
        if gm.abs() < best.0 {
            best = (gm.abs(), mid);
        }
        if gm.abs() <= tol || mid <= a || mid >= b {
            break;
        }
        if (gm > 0.0) == rising {
            b = mid;
        } else {
            a = mid;
        }
    }
    if best.0 <= tol {
        Ok(best.1)
    } else {
        Err(Error::NoRoot {
            what,
            lower: lo,
            upper: hi,
        })
    }
}

fn search_window(bounds: SpectrumBound) -> (f64, f64) {
    let delta = 1e-9 * bounds.width();
    (bounds.lower() + delta, bounds.upper() - delta)
}

/// Tangent point with `h'(t0) = a_h`, so that `alpha(h, t0) = 1`.
pub fn solve_t0_alpha_one(h: &ScalarFunction, bounds: SpectrumBound) -> Result<f64> {
    let slope = secant(h, bounds)?.slope;
    let tol = 1e-10 * slope.abs().max(1.0);
    let (lo, hi) = search_window(bounds);
    if probe_points(lo, hi).all(|t| (h.deriv(t) - slope).abs() <= tol) {
        return Ok(bounds.midpoint());
    }
    bisect(|t| h.deriv(t) - slope, lo, hi, tol, "h'(t) - a_h")
}

/// Tangent point with `beta(h, t0) = 0`, the multiplicative form.
pub fn solve_t0_beta_zero(h: &ScalarFunction, bounds: SpectrumBound) -> Result<f64> {
    let line = secant(h, bounds)?;
    let tol = 1e-10 * line.intercept.abs().max(1.0);
    let beta = |t: f64| line.slope * t + line.intercept - line.slope * h.eval(t) / h.deriv(t);
    let (lo, hi) = search_window(bounds);
    if probe_points(lo, hi).all(|t| beta(t).abs() <= tol) {
        return Ok(bounds.midpoint());
    }
    bisect(beta, lo, hi, tol, "beta(h, t)")
}

fn probe_points(lo: f64, hi: f64) -> impl Iterator<Item = f64> {
    (0..8).map(move |i| lo + (hi - lo) * i as f64 / 7.0)
}
