//! Operator-inequality chains.
//!
//! Each builder materializes the terms of one chain of inequalities on a
//! concrete instance and certifies every consecutive pair in the Loewner
//! order. Reports keep the terms themselves so a failing or tight step can be
//! inspected and replayed.

mod builders;
mod instance;

use std::fmt;

pub use builders::*;
pub use instance::{check_cell, random_instance, run_instance, Instance};

use crate::error::{Error, Result};
use crate::linalg::{loewner_leq, refined_min_eigenvalue, HermitianMatrix, OrderVerdict, DEFAULT_RTOL};
use crate::maps::MapKind;
use crate::scalar::ConstantSet;

/// Verdicts failing by less than this many tolerances are rechecked.
pub const MARGINAL_FACTOR: f64 = 10.0;

/// The inequality chains this crate certifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResultId {
    /// `(1/mu) phi(f(A)) <= ... <= mu phi(f(A))` through the log-convex envelope.
    LogConvexEnvelope,
    /// The same chain for `x^t`, `t < 0`, with the generalized Kantorovich constant.
    PowerKantorovich,
    /// Perspective means `A σ_f B` under a positive (not necessarily unital) map.
    PerspectiveMean,
    /// Weighted geometric mean `♯_t`, `t < 0`.
    GeometricMean,
    /// Weighted harmonic mean `!_t`, `t < 0`, `m >= 1`.
    HarmonicMean,
    /// `phi(f(A)) <= alpha f(phi(A)) + beta` and its companion.
    MondPecaric,
    /// Additive and multiplicative reverse inequalities for `A^{-1}`.
    InverseReverse,
    /// Reverse chain through the envelope `h`, split on `M - m >= 1`.
    EnvelopeReverse,
    /// Reverse chain through `h` closed with `alpha mu phi(f(A)) + beta`.
    EnvelopeReverseMu,
    /// Chain through the `1/(M-m)` power of the envelope product.
    EnvelopePower,
    /// Exponential lower bounds from the tangent exponential `k`.
    ExponentialLower,
    /// Refined Mond-Pečarić inequalities with the `A_min` term.
    RefinedMondPecaric,
}

impl ResultId {
    pub const ALL: [ResultId; 12] = [
        ResultId::LogConvexEnvelope,
        ResultId::PowerKantorovich,
        ResultId::PerspectiveMean,
        ResultId::GeometricMean,
        ResultId::HarmonicMean,
        ResultId::MondPecaric,
        ResultId::InverseReverse,
        ResultId::EnvelopeReverse,
        ResultId::EnvelopeReverseMu,
        ResultId::EnvelopePower,
        ResultId::ExponentialLower,
        ResultId::RefinedMondPecaric,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ResultId::LogConvexEnvelope => "log_convex_envelope",
            ResultId::PowerKantorovich => "power_kantorovich",
            ResultId::PerspectiveMean => "perspective_mean",
            ResultId::GeometricMean => "geometric_mean",
            ResultId::HarmonicMean => "harmonic_mean",
            ResultId::MondPecaric => "mond_pecaric",
            ResultId::InverseReverse => "inverse_reverse",
            ResultId::EnvelopeReverse => "envelope_reverse",
            ResultId::EnvelopeReverseMu => "envelope_reverse_mu",
            ResultId::EnvelopePower => "envelope_power",
            ResultId::ExponentialLower => "exponential_lower",
            ResultId::RefinedMondPecaric => "refined_mond_pecaric",
        }
    }

    /// Whether the instance is a pair `(A, B)` with `mA <= B <= MA`.
    pub fn uses_pair(&self) -> bool {
        matches!(
            self,
            ResultId::PerspectiveMean | ResultId::GeometricMean | ResultId::HarmonicMean
        )
    }

    /// Whether the chain requires a normalized map.
    pub fn needs_normalized_map(&self) -> bool {
        !self.uses_pair()
    }

    /// Families exercised when a suite does not name any.
    pub fn default_families(&self) -> &'static [&'static str] {
        match self {
            ResultId::PowerKantorovich => &["power:-1", "power:-2"],
            ResultId::GeometricMean => &["power:-1", "power:-0.5"],
            ResultId::HarmonicMean => &["harmonic:-1", "harmonic:-2"],
            ResultId::MondPecaric => &["power:-1", "exp:1", "power:0.5"],
            ResultId::InverseReverse => &["power:-1"],
            ResultId::EnvelopeReverseMu => &["power:-2", "exp:1"],
            _ => &["power:-1", "exp:1"],
        }
    }
}

impl fmt::Display for ResultId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ResultId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ResultId::ALL
            .into_iter()
            .find(|r| r.as_str() == s.trim())
            .ok_or_else(|| Error::InvalidParams(format!("unknown result id `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    /// Failed the tolerance by less than [`MARGINAL_FACTOR`] tolerances and
    /// passed the compensated recheck.
    Marginal,
    Violation,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct StepVerdict {
    #[serde(flatten)]
    pub verdict: OrderVerdict,
    pub status: Status,
    /// Compensated recheck of the gap, present when one was run.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rechecked_gap: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Term {
    pub label: String,
    pub value: HermitianMatrix,
}

impl Term {
    pub fn new(label: impl Into<String>, value: HermitianMatrix) -> Self {
        Self {
            label: label.into(),
            value,
        }
    }
}

/// Ordered terms `T_0 <= T_1 <= ...` and one verdict per consecutive pair.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Chain {
    pub label: String,
    pub terms: Vec<Term>,
    pub verdicts: Vec<StepVerdict>,
}

impl Chain {
    pub fn status(&self) -> Status {
        self.verdicts.iter().map(|v| v.status).max().unwrap_or(Status::Pass)
    }

    pub fn holds(&self) -> bool {
        self.verdicts.iter().all(|v| v.verdict.holds)
    }

    /// Smallest `lambda_min(T_{i+1} - T_i)`; `+inf` for a single term.
    pub fn min_gap(&self) -> f64 {
        self.verdicts
            .iter()
            .map(|v| v.verdict.min_eig_gap)
            .fold(f64::INFINITY, f64::min)
    }
}

/// A scalar identity a chain relies on, such as `K = mu` for powers.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ScalarCheck {
    pub label: String,
    pub value: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub holds: bool,
}

impl ScalarCheck {
    /// `|value - expected| <= rtol * max(1, |expected|)`.
    pub fn new(label: impl Into<String>, value: f64, expected: f64, rtol: f64) -> Self {
        let tolerance = rtol * expected.abs().max(1.0);
        Self {
            label: label.into(),
            value,
            expected,
            tolerance,
            holds: (value - expected).abs() <= tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct InstanceDigest {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    pub dim: usize,
    pub out_dim: usize,
    pub function: String,
    pub map: MapKind,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ChainReport {
    pub result: ResultId,
    pub chains: Vec<Chain>,
    /// Auxiliary inequalities checked alongside the main chains.
    #[serde(default)]
    pub side_checks: Vec<Chain>,
    #[serde(default)]
    pub scalar_checks: Vec<ScalarCheck>,
    pub constants: ConstantSet,
    pub digest: InstanceDigest,
}

impl ChainReport {
    pub fn status(&self) -> Status {
        let scalar = if self.scalar_checks.iter().all(|c| c.holds) {
            Status::Pass
        } else {
            Status::Violation
        };
        self.chains
            .iter()
            .chain(&self.side_checks)
            .map(Chain::status)
            .chain(std::iter::once(scalar))
            .max()
            .unwrap_or(Status::Pass)
    }

    pub fn holds(&self) -> bool {
        self.status() != Status::Violation
    }

    /// Smallest gap over the main chains.
    pub fn min_gap(&self) -> f64 {
        self.chains.iter().map(Chain::min_gap).fold(f64::INFINITY, f64::min)
    }

    /// Smallest gap relative to its tolerance, over the main chains. Values
    /// near zero mark tight steps.
    pub fn tightest_ratio(&self) -> f64 {
        self.chains
            .iter()
            .flat_map(|c| &c.verdicts)
            .map(|v| v.verdict.min_eig_gap / v.verdict.tolerance_used)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Certifies `terms[0] <= terms[1] <= ...`.
pub fn verify_chain(label: impl Into<String>, terms: Vec<Term>, rtol: f64) -> Result<Chain> {
    let mut verdicts = Vec::with_capacity(terms.len().saturating_sub(1));
    for pair in terms.windows(2) {
        verdicts.push(step(&pair[0].value, &pair[1].value, rtol)?);
    }
    Ok(Chain {
        label: label.into(),
        terms,
        verdicts,
    })
}

fn step(a: &HermitianMatrix, b: &HermitianMatrix, rtol: f64) -> Result<StepVerdict> {
    let verdict = loewner_leq(a, b, rtol)?;
    if verdict.holds {
        return Ok(StepVerdict {
            verdict,
            status: Status::Pass,
            rechecked_gap: None,
        });
    }
    let tol = verdict.tolerance_used;
    if verdict.min_eig_gap <= -MARGINAL_FACTOR * tol {
        return Ok(StepVerdict {
            verdict,
            status: Status::Violation,
            rechecked_gap: None,
        });
    }
    let rechecked = refined_min_eigenvalue(&(b - a));
    Ok(StepVerdict {
        verdict,
        status: if rechecked >= -tol {
            Status::Marginal
        } else {
            Status::Violation
        },
        rechecked_gap: Some(rechecked),
    })
}

/// Tangent points and tolerance shared by the builders.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Options {
    /// Tangent point of `alpha(., t0)`, `beta(., t0)`; builders choose a
    /// default when absent.
    pub t0: Option<f64>,
    /// Tangent point for the `x^{1/(M-m)}` or `k` constants.
    pub t1: Option<f64>,
    pub rtol: f64,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            t0: None,
            t1: None,
            rtol: DEFAULT_RTOL,
        }
    }
}

impl Options {
    pub fn with_t0(t0: f64) -> Self {
        Self {
            t0: Some(t0),
            ..Self::default()
        }
    }
}
