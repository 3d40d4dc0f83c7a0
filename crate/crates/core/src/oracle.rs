//! Scalar oracle for the chains.
//!
//! With `n = 1` and the identity map every chain collapses to real
//! inequalities in one variable. This module evaluates those inequalities
//! from closed forms and brute-force constants, independent of the matrix
//! machinery, and compares the step verdicts with the builders.

use crate::chains::{run_instance, ChainReport, Instance, Options, ResultId};
use crate::error::{Error, Result};
use crate::linalg::{HermitianMatrix, SpectrumBound, DEFAULT_RTOL};
use crate::maps::MapSpec;
use crate::scalar::FamilySpec;

pub const ORACLE_POINTS: usize = 256;
const CONSTANT_GRID: usize = 1 << 14;

/// Plain closed-form `f`, `f'` of a family.
#[derive(Debug, Clone, Copy)]
struct Plain(FamilySpec);

impl Plain {
    fn f(&self, x: f64) -> f64 {
        match self.0 {
            FamilySpec::Power(t) => x.powf(t),
            FamilySpec::Exp(r) => (r * x).exp(),
            FamilySpec::Harmonic(t) => x / ((1.0 - t) * x + t),
        }
    }

    fn df(&self, x: f64) -> f64 {
        match self.0 {
            FamilySpec::Power(t) => t * x.powf(t - 1.0),
            FamilySpec::Exp(r) => r * (r * x).exp(),
            FamilySpec::Harmonic(t) => t / ((1.0 - t) * x + t).powi(2),
        }
    }

    fn convex(&self) -> bool {
        match self.0 {
            FamilySpec::Power(t) => !(0.0..1.0).contains(&t),
            FamilySpec::Exp(_) | FamilySpec::Harmonic(_) => true,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Interval {
    m: f64,
    big_m: f64,
}

impl Interval {
    fn w(&self) -> f64 {
        self.big_m - self.m
    }

    fn points(&self, n: usize) -> impl Iterator<Item = f64> + '_ {
        (0..n).map(move |i| self.m + self.w() * i as f64 / (n - 1) as f64)
    }
}

/// Secant `a x + b` of `g` over `[lo, hi]`.
fn chord(g: impl Fn(f64) -> f64, lo: f64, hi: f64) -> (f64, f64) {
    let a = (g(hi) - g(lo)) / (hi - lo);
    (a, g(lo) - a * lo)
}

/// `alpha`, `beta` from the chord and the tangent at `t0`.
fn ab(g: impl Fn(f64) -> f64, dg: impl Fn(f64) -> f64, lo: f64, hi: f64, t0: f64) -> (f64, f64) {
    let (a, b) = chord(&g, lo, hi);
    let d = dg(t0);
    (a / d, a * t0 + b - a * g(t0) / d)
}

fn envelope(f: Plain, iv: Interval, x: f64) -> f64 {
    f.f(iv.m).powf((iv.big_m - x) / iv.w()) * f.f(iv.big_m).powf((x - iv.m) / iv.w())
}

/// `max (a_f x + b_f) / f(x)` over a fine grid.
fn brute_mu(f: Plain, iv: Interval) -> f64 {
    let (a, b) = chord(|y| f.f(y), iv.m, iv.big_m);
    iv.points(CONSTANT_GRID)
        .map(|x| (a * x + b) / f.f(x))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// `alpha_1`, `beta_1` of `x^{1/(M-m)}` on the interval spanned by
/// `f(m)^{M-m}` and `f(M)^{M-m}`, tangent where the derivative equals the
/// chord slope.
fn root_ab(f: Plain, iv: Interval) -> (f64, f64) {
    let w = iv.w();
    let p = 1.0 / w;
    let (u, v) = (f.f(iv.m).powf(w), f.f(iv.big_m).powf(w));
    let (lo, hi) = (u.min(v), u.max(v));
    if hi - lo <= 1e-14 * hi {
        return (1.0, 0.0);
    }
    let slope = (hi.powf(p) - lo.powf(p)) / (hi - lo);
    let t1 = (slope / p).powf(1.0 / (p - 1.0));
    ab(|x| x.powf(p), |x| p * x.powf(p - 1.0), lo, hi, t1)
}

/// One scalar inequality `lhs <= rhs`.
fn leq(lhs: f64, rhs: f64, rtol: f64) -> bool {
    rhs - lhs >= -rtol * lhs.abs().max(rhs.abs()).max(1.0)
}

fn chain(values: &[f64], rtol: f64, out: &mut Vec<bool>) {
    out.extend(values.windows(2).map(|w| leq(w[0], w[1], rtol)));
}

fn default_t0(family: FamilySpec, iv: Interval) -> f64 {
    let reciprocal = matches!(family, FamilySpec::Power(t) if t < 0.0) || matches!(family, FamilySpec::Harmonic(_));
    if reciprocal {
        (iv.m * iv.big_m).sqrt()
    } else {
        0.5 * (iv.m + iv.big_m)
    }
}

/// Step verdicts at `x` in the order the builders emit them: main chains,
/// then side checks.
fn scalar_steps(result: ResultId, family: FamilySpec, iv: Interval, x: f64, rtol: f64) -> Vec<bool> {
    let f = Plain(family);
    let (m, big_m, w) = (iv.m, iv.big_m, iv.w());
    let fx = f.f(x);
    let t0 = default_t0(family, iv);
    let mut out = Vec::new();
    match result {
        ResultId::LogConvexEnvelope
        | ResultId::PowerKantorovich
        | ResultId::PerspectiveMean
        | ResultId::GeometricMean
        | ResultId::HarmonicMean => {
            let mu = brute_mu(f, iv);
            let hx = envelope(f, iv, x);
            chain(&[fx / mu, hx / mu, fx, hx, mu * fx], rtol, &mut out);
            if let (ResultId::GeometricMean, FamilySpec::Power(t)) = (result, family) {
                if t >= -1.0 {
                    chain(&[fx, fx], rtol, &mut out);
                }
            }
        }
        ResultId::MondPecaric => {
            let (alpha, beta) = ab(|y| f.f(y), |y| f.df(y), m, big_m, t0);
            let pair = [fx, alpha * fx + beta];
            let pair = if f.convex() { pair } else { [pair[1], pair[0]] };
            chain(&pair, rtol, &mut out);
            chain(&pair, rtol, &mut out);
        }
        ResultId::InverseReverse => {
            let inv = 1.0 / x;
            let gap = (1.0 / m.sqrt() - 1.0 / big_m.sqrt()).powi(2);
            chain(&[inv, inv + gap], rtol, &mut out);
            chain(&[inv, (m + big_m).powi(2) / (4.0 * m * big_m) * inv], rtol, &mut out);
        }
        ResultId::EnvelopeReverse | ResultId::EnvelopeReverseMu => {
            let h = |y: f64| envelope(f, iv, y);
            let slope = (f.f(big_m).ln() - f.f(m).ln()) / w;
            let (alpha, beta) = ab(h, |y| slope * h(y), m, big_m, t0);
            let hx = h(x);
            let closing = if result == ResultId::EnvelopeReverseMu {
                alpha * brute_mu(f, iv) * fx + beta
            } else {
                let hat = f.f(big_m).powf(x - m) * f.f(m).powf(big_m - x);
                let root = hat.powf(1.0 / w);
                if w >= 1.0 {
                    alpha * root + beta
                } else {
                    let (a1, b1) = root_ab(f, iv);
                    alpha * (a1 * root + b1) + beta
                }
            };
            chain(&[fx, hx, alpha * hx + beta, closing], rtol, &mut out);
        }
        ResultId::EnvelopePower => {
            let hat = |y: f64| f.f(big_m).powf(y - m) * f.f(m).powf(big_m - y);
            let slope = f.f(big_m).ln() - f.f(m).ln();
            let (alpha, beta) = ab(hat, |y| slope * hat(y), m, big_m, t0);
            let p = 1.0 / w;
            let xp = hat(x).powf(p);
            let yp = (alpha * hat(x) + beta).powf(p);
            if w >= 1.0 {
                chain(&[fx, xp, yp], rtol, &mut out);
            } else {
                let (a1, b1) = root_ab(f, iv);
                chain(&[fx, a1 * xp + b1, a1 * yp + b1], rtol, &mut out);
            }
        }
        ResultId::ExponentialLower => {
            let f0 = f.f(t0);
            let r = f.df(t0) / f0;
            let k = |y: f64| (r * (y - t0)).exp();
            let (alpha, beta) = if r == 0.0 {
                (1.0, 0.0)
            } else {
                let (slope, _) = chord(k, m, big_m);
                let t1 = t0 + (slope / r).ln() / r;
                ab(k, |y| r * k(y), m, big_m, t1)
            };
            let lower = f0 / alpha * k(x) - beta / alpha * f0;
            chain(&[lower, fx], rtol, &mut out);
            chain(&[lower, fx], rtol, &mut out);
        }
        ResultId::RefinedMondPecaric => {
            let corner = |g: &dyn Fn(f64) -> f64| {
                let c = 0.5 * (g(m) + g(big_m)) - g(0.5 * (m + big_m));
                2.0 * c / w * (x - m).min(big_m - x)
            };
            let (alpha, beta) = ab(|y| f.f(y), |y| f.df(y), m, big_m, t0);
            let amin = corner(&|y| f.f(y));
            let inv = 1.0 / x;
            let amin_inv = corner(&|y| 1.0 / y);
            let gap = (1.0 / m.sqrt() - 1.0 / big_m.sqrt()).powi(2);
            let kant = (m + big_m).powi(2) / (4.0 * m * big_m);
            chain(&[fx + amin, alpha * fx + beta], rtol, &mut out);
            chain(&[fx + amin, alpha * fx + beta], rtol, &mut out);
            chain(&[inv + amin_inv, inv + gap], rtol, &mut out);
            chain(&[inv + amin_inv, kant * inv], rtol, &mut out);
            chain(&[fx, fx + amin], rtol, &mut out);
            chain(&[fx, fx + amin], rtol, &mut out);
            chain(&[inv, inv + amin_inv], rtol, &mut out);
        }
    }
    out
}

/// The `n = 1`, identity-map instance at `x`: `A = [x]`, or `A = [1]`,
/// `B = [x]` for the means.
pub fn scalar_instance(result: ResultId, family: FamilySpec, bounds: SpectrumBound, x: f64) -> Instance {
    let point = HermitianMatrix::diagonal(&[x]);
    let (a, b) = if result.uses_pair() {
        (HermitianMatrix::identity(1), Some(point))
    } else {
        (point, None)
    };
    Instance {
        result,
        family,
        bounds,
        map: MapSpec::Identity { dim: 1 },
        a,
        b,
        options: Options::default(),
        seed: None,
    }
}

fn step_holds(report: &ChainReport) -> Vec<bool> {
    report
        .chains
        .iter()
        .chain(&report.side_checks)
        .flat_map(|c| c.verdicts.iter().map(|v| v.verdict.holds))
        .collect()
}

/// A point where the oracle and the builders disagree.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Disagreement {
    pub x: f64,
    pub oracle: Vec<bool>,
    pub builder: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct OracleReport {
    pub result: ResultId,
    pub family: FamilySpec,
    pub bounds: SpectrumBound,
    pub points: usize,
    /// Steps the oracle found violated, summed over points.
    pub oracle_violations: usize,
    pub disagreements: Vec<Disagreement>,
}

impl OracleReport {
    pub fn agrees(&self) -> bool {
        self.disagreements.is_empty()
    }
}

/// Compares the builder verdicts with the scalar oracle on `points` evenly
/// spaced points of `[m, M]`.
pub fn compare_with_oracle(
    result: ResultId,
    family: FamilySpec,
    bounds: SpectrumBound,
    points: usize,
) -> Result<OracleReport> {
    if points < 2 {
        return Err(Error::InvalidParams("oracle needs at least 2 points".into()));
    }
    let iv = Interval {
        m: bounds.lower(),
        big_m: bounds.upper(),
    };
    let mut oracle_violations = 0;
    let mut disagreements = Vec::new();
    for x in iv.points(points) {
        let builder = step_holds(&run_instance(&scalar_instance(result, family, bounds, x))?);
        let oracle = scalar_steps(result, family, iv, x, DEFAULT_RTOL);
        oracle_violations += oracle.iter().filter(|ok| !**ok).count();
        if builder != oracle {
            disagreements.push(Disagreement { x, oracle, builder });
        }
    }
    Ok(OracleReport {
        result,
        family,
        bounds,
        points,
        oracle_violations,
        disagreements,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brute_mu_of_reciprocal_is_kantorovich() {
        let f = Plain(FamilySpec::Power(-1.0));
        let iv = Interval { m: 1.0, big_m: 4.0 };
        assert!((brute_mu(f, iv) - 25.0 / 16.0).abs() < 1e-7);
    }

    #[test]
    fn root_constants_of_unit_width_are_trivial() {
        let f = Plain(FamilySpec::Exp(1.0));
        let (a1, b1) = root_ab(f, Interval { m: 1.0, big_m: 1.5 });
        assert!(a1 > 0.0 && b1.is_finite());
    }

    #[test]
    fn oracle_agrees_on_inverse() {
        let b = SpectrumBound::new(1.0, 4.0).unwrap();
        let r = compare_with_oracle(ResultId::InverseReverse, FamilySpec::Power(-1.0), b, 64).unwrap();
        assert!(r.agrees(), "{:?}", r.disagreements.first());
        assert_eq!(r.oracle_violations, 0);
    }
}
