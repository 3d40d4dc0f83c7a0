//! Ratio constants of the reverse inequalities: the generic maximum `mu`,
//! the generalized Kantorovich constant and the harmonic-mean constant.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::SpectrumBound;

use super::calibrate::golden_section_max;
use super::envelope::secant;
use super::function::{endpoint_value, ScalarFunction};

const MU_GRID: usize = 1024;

/// `max_{t in [m, M]} (a_f t + b_f) / f(t)`: a 1024-point scan followed by
/// golden-section refinement around the best grid point.
pub fn mu_constant(f: &ScalarFunction, bounds: SpectrumBound) -> Result<f64> {
    let line = secant(f, bounds)?;
    let grid = bounds.grid(MU_GRID);
    let mut best = (0, f64::NEG_INFINITY);
    for (i, &t) in grid.iter().enumerate() {
        let ft = endpoint_value(f, t)?;
        if !(ft > 0.0) {
            return Err(Error::FunctionDomainError {
                label: f.label().to_string(),
                at: t,
            });
        }
        let q = line.value(t) / ft;
        if q > best.1 {
            best = (i, q);
        }
    }
    let lo = grid[best.0.saturating_sub(1)];
    let hi = grid[(best.0 + 1).min(MU_GRID - 1)];
    let ratio = |t: f64| line.value(t) / f.eval(t);
    let (_, refined) = golden_section_max(ratio, lo, hi, 1e-12 * bounds.width());
    Ok(best.1.max(refined))
}

/// Generalized Kantorovich constant `K(m, M, t)`.
pub fn kantorovich(bounds: SpectrumBound, t: f64) -> Result<f64> {
    if t == 0.0 || t == 1.0 || !t.is_finite() {
        return Err(Error::InvalidParams(format!(
            "Kantorovich constant undefined for t = {t}"
        )));
    }
    bounds.require_positive()?;
    let (m, big_m) = (bounds.lower(), bounds.upper());
    let (mt, big_mt) = (m.powf(t), big_m.powf(t));
    let cross = m * big_mt - big_m * mt;
    let lead = cross / ((t - 1.0) * (big_m - m));
    let inner = (t - 1.0) / t * (big_mt - mt) / cross;
    Ok(lead * inner.powf(t))
}

/// Weighted harmonic mean `1 !_t x = (1 - t + t/x)^{-1}`.
pub fn scalar_harmonic(t: f64, x: f64) -> Result<f64> {
    let d = 1.0 - t + t / x;
    if !(d > 0.0) || !d.is_finite() {
        return Err(Error::PoleError { t, x });
    }
    Ok(1.0 / d)
}

/// `H(m, M, t)` for `m >= 1`, `t <= 0`.
///
/// The bracket `(1-t)^2 + (t/mM)(2(1-t) sqrt(mM) + t)` is the perfect square
/// `(1 - t + t/sqrt(mM))^2`; evaluating the square avoids the cancellation of
/// the expanded form for large `|t|`.
pub fn harmonic_h(bounds: SpectrumBound, t: f64) -> Result<f64> {
    let (m, big_m) = (bounds.lower(), bounds.upper());
    if m < 1.0 {
        return Err(Error::InvalidParams(format!("H(m, M, t) needs m >= 1, got {m}")));
    }
    if !(t <= 0.0) {
        return Err(Error::InvalidParams(format!("H(m, M, t) needs t <= 0, got {t}")));
    }
    let g = (m * big_m).sqrt();
    let root = 1.0 - t + t / g;
    Ok(root * root * scalar_harmonic(t, m)? * scalar_harmonic(t, big_m)?)
}

/// `lim_{t -> -inf} H(m, M, t) = (sqrt(mM) - 1)^2 / ((m - 1)(M - 1))`, for `m > 1`.
pub fn harmonic_h_limit(bounds: SpectrumBound) -> Result<f64> {
    let (m, big_m) = (bounds.lower(), bounds.upper());
    if !(m > 1.0) {
        return Err(Error::InvalidParams(format!(
            "limit of H(m, M, t) needs m > 1, got {m}"
        )));
    }
    let g = (m * big_m).sqrt();
    Ok((g - 1.0).powi(2) / ((m - 1.0) * (big_m - 1.0)))
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Constant {
    pub value: f64,
    /// Operation that produced the value.
    pub source: String,
}

/// Named constants used by one chain instance, with provenance.
#[derive(Debug, Clone, Default, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct ConstantSet {
    entries: BTreeMap<String, Constant>,
}

impl ConstantSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, name: &str, value: f64, source: &str) {
        debug_assert!(value.is_finite(), "{name} = {value}");
        self.entries.insert(
            name.to_string(),
            Constant {
                value,
                source: source.to_string(),
            },
        );
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.entries.get(name).map(|c| c.value)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Constant)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn all_finite(&self) -> bool {
        self.entries.values().all(|c| c.value.is_finite())
    }
}
