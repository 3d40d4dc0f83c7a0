//! Secant and tangent envelopes of convex functions and the Mond-Pečarić
//! constants `alpha(f, t0)`, `beta(f, t0)` built from them.

use crate::error::{Error, Result};
use crate::linalg::SpectrumBound;

use super::function::{endpoint_value, ScalarFunction};

/// Chord of `f` through `(m, f(m))` and `(M, f(M))`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SecantLine {
    pub slope: f64,
    pub intercept: f64,
    pub bounds: SpectrumBound,
}

impl SecantLine {
    pub fn value(&self, t: f64) -> f64 {
        self.slope * t + self.intercept
    }
}

pub fn secant(f: &ScalarFunction, bounds: SpectrumBound) -> Result<SecantLine> {
    let (m, big_m) = (bounds.lower(), bounds.upper());
    let fm = endpoint_value(f, m)?;
    let fbig = endpoint_value(f, big_m)?;
    Ok(SecantLine {
        slope: (fbig - fm) / (big_m - m),
        intercept: (big_m * fm - m * fbig) / (big_m - m),
        bounds,
    })
}

/// `f(t0) + f'(t0) (t - t0)`.
pub fn tangent_value(f: &ScalarFunction, t0: f64, t: f64) -> Result<f64> {
    Ok(f.value(t0)? + f.derivative(t0)? * (t - t0))
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct AlphaBeta {
    pub alpha: f64,
    pub beta: f64,
    pub t0: f64,
}

const MONOTONE_GRID: usize = 64;

/// `alpha = a_f / f'(t0)` and `beta = a_f t0 + b_f - a_f f(t0) / f'(t0)`.
pub fn alpha_beta(f: &ScalarFunction, bounds: SpectrumBound, t0: f64) -> Result<AlphaBeta> {
    let d0 = f.derivative(t0)?;
    if d0 == 0.0 {
        return Err(Error::ZeroDerivative {
            label: f.label().to_string(),
            t0,
        });
    }
    let not_monotone = || Error::NotMonotone {
        label: f.label().to_string(),
        m: bounds.lower(),
        big_m: bounds.upper(),
    };
    let (mut rising, mut falling) = (false, false);
    for t in bounds.grid(MONOTONE_GRID) {
        let d = f.deriv(t);
        rising |= d > 0.0;
        falling |= d < 0.0;
    }
    if rising && falling {
        return Err(not_monotone());
    }
    let line = secant(f, bounds)?;
    let alpha = line.slope / d0;
    if !(alpha > 0.0) {
        return Err(not_monotone());
    }
    let beta = line.slope * t0 + line.intercept - line.slope * f.value(t0)? / d0;
    Ok(AlphaBeta { alpha, beta, t0 })
}

const LOG_CONVEX_GRID: usize = 256;

/// Grid test for log-convexity on `[m, M]`: midpoint convexity of `log f` on
/// 256 points and `f(t) <= (f^{t-m}(M) f^{M-t}(m))^{1/(M-m)}` at each point.
pub fn is_log_convex(f: &ScalarFunction, bounds: SpectrumBound) -> bool {
    let grid = bounds.grid(LOG_CONVEX_GRID);
    let values: Option<Vec<f64>> = grid
        .iter()
        .map(|&t| endpoint_value(f, t).ok().filter(|v| *v > 0.0))
        .collect();
    let Some(values) = values else {
        return false;
    };
    let logs: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let midpoint_ok = logs.windows(3).all(|w| {
        let slack = 1e-12 * w[1].abs().max(1.0);
        2.0 * w[1] <= w[0] + w[2] + slack
    });
    if !midpoint_ok {
        return false;
    }
    let (log_fm, log_fbig) = (logs[0], logs[LOG_CONVEX_GRID - 1]);
    grid.iter().zip(&values).all(|(&t, &v)| {
        let envelope = ((t - bounds.lower()) * log_fbig + (bounds.upper() - t) * log_fm) / bounds.width();
        let envelope = envelope.exp();
        v <= envelope * (1.0 + 1e-10)
    })
}
