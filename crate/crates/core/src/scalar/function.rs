use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::SpectrumBound;

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Curvature {
    Convex,
    Concave,
    /// Both convex and concave.
    Affine,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Monotone {
    Increasing,
    Decreasing,
    Constant,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Tags {
    pub curvature: Curvature,
    pub log_convex: bool,
    pub monotone: Monotone,
    /// Hard-coded knowledge: `t^p` with `0 < p <= 1` is operator concave.
    pub operator_concave: bool,
}

impl Tags {
    pub fn is_convex(&self) -> bool {
        matches!(self.curvature, Curvature::Convex | Curvature::Affine)
    }

    pub fn is_concave(&self) -> bool {
        matches!(self.curvature, Curvature::Concave | Curvature::Affine)
    }
}

/// A real function with an analytic derivative on an open interval.
#[derive(Clone)]
pub struct ScalarFunction {
    label: String,
    eval: RealFn,
    deriv: RealFn,
    domain: (f64, f64),
    tags: Tags,
}

impl fmt::Debug for ScalarFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarFunction")
            .field("label", &self.label)
            .field("domain", &self.domain)
            .field("tags", &self.tags)
            .finish()
    }
}

impl ScalarFunction {
    pub fn new(
        label: impl Into<String>,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
        deriv: impl Fn(f64) -> f64 + Send + Sync + 'static,
        domain: (f64, f64),
        tags: Tags,
    ) -> Self {
        Self {
            label: label.into(),
            eval: Arc::new(eval),
            deriv: Arc::new(deriv),
            domain,
            tags,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn tags(&self) -> Tags {
        self.tags
    }

    pub fn in_domain(&self, x: f64) -> bool {
        self.domain.0 < x && x < self.domain.1
    }

    /// Raw evaluation, no domain check.
    pub fn eval(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    pub fn deriv(&self, x: f64) -> f64 {
        (self.deriv)(x)
    }

    /// Checked evaluation: `x` in the domain and a finite result.
    pub fn value(&self, x: f64) -> Result<f64> {
        let y = if self.in_domain(x) { self.eval(x) } else { f64::NAN };
        if y.is_finite() {
            Ok(y)
        } else {
            Err(Error::FunctionDomainError {
                label: self.label.clone(),
                at: x,
            })
        }
    }

    pub fn derivative(&self, x: f64) -> Result<f64> {
        let y = if self.in_domain(x) { self.deriv(x) } else { f64::NAN };
        if y.is_finite() {
            Ok(y)
        } else {
            Err(Error::FunctionDomainError {
                label: self.label.clone(),
                at: x,
            })
        }
    }

    pub fn identity() -> Self {
        Self::affine(1.0, 0.0)
    }

    pub fn constant(c: f64) -> Self {
        Self::new(
            format!("const:{c}"),
            move |_| c,
            |_| 0.0,
            (f64::NEG_INFINITY, f64::INFINITY),
            Tags {
                curvature: Curvature::Affine,
                log_convex: c > 0.0,
                monotone: Monotone::Constant,
                operator_concave: true,
            },
        )
    }

    /// `a t + b`.
    pub fn affine(a: f64, b: f64) -> Self {
        Self::new(
            format!("affine:{a}:{b}"),
            move |x| a * x + b,
            move |_| a,
            (f64::NEG_INFINITY, f64::INFINITY),
            Tags {
                curvature: Curvature::Affine,
                log_convex: false,
                monotone: direction(a),
                operator_concave: true,
            },
        )
    }

    /// `x^p` on `(0, inf)`.
    pub fn power(p: f64) -> Self {
        let curvature = if p == 0.0 || p == 1.0 {
            Curvature::Affine
        } else if p < 0.0 || p > 1.0 {
            Curvature::Convex
        } else {
            Curvature::Concave
        };
        Self::new(
            format!("power:{p}"),
            move |x| x.powf(p),
            move |x| if p == 0.0 { 0.0 } else { p * x.powf(p - 1.0) },
            (0.0, f64::INFINITY),
            Tags {
                curvature,
                log_convex: p <= 0.0,
                monotone: direction(p),
                operator_concave: (0.0..=1.0).contains(&p),
            },
        )
    }

    /// `exp(rate * x)`.
    pub fn exp_scaled(rate: f64) -> Self {
        Self::new(
            format!("exp:{rate}"),
            move |x| (rate * x).exp(),
            move |x| rate * (rate * x).exp(),
            (f64::NEG_INFINITY, f64::INFINITY),
            Tags {
                curvature: if rate == 0.0 {
                    Curvature::Affine
                } else {
                    Curvature::Convex
                },
                log_convex: true,
                monotone: direction(rate),
                operator_concave: rate == 0.0,
            },
        )
    }

    /// `log(1 + x)`: concave, increasing, and not log-convex.
    pub fn log1p() -> Self {
        Self::new(
            "log1p",
            f64::ln_1p,
            |x| 1.0 / (1.0 + x),
            (-1.0, f64::INFINITY),
            Tags {
                curvature: Curvature::Concave,
                log_convex: false,
                monotone: Monotone::Increasing,
                operator_concave: true,
            },
        )
    }
}

fn direction(slope: f64) -> Monotone {
    if slope > 0.0 {
        Monotone::Increasing
    } else if slope < 0.0 {
        Monotone::Decreasing
    } else {
        Monotone::Constant
    }
}

/// Function families built relative to a spectrum bound `[m, M]`.
#[derive(Debug, Clone, Copy)]
pub enum Family<'a> {
    /// `x^t`.
    Power { exponent: f64 },
    /// `(1 - t + t/x)^{-1}` for `t < 0`, on bounds with `m >= 1`.
    HarmonicResolvent { t: f64 },
    /// `exp(rate x)`.
    ExpScaled { rate: f64 },
    /// `(M^{x-m} m^{M-x})^{t/(M-m)}`, the log-linear envelope of `x^t`.
    GeomEnvelope { t: f64 },
    /// `(f(M)^{x-m} f(m)^{M-x})^{1/(M-m)}`.
    Envelope(&'a ScalarFunction),
    /// `f(M)^{x-m} f(m)^{M-x}`, the envelope raised to `M - m`.
    EnvelopeProduct(&'a ScalarFunction),
    /// `x^{1/(M-m)}`.
    EnvelopeRoot,
    /// `exp[(f'(t0)/f(t0)) (x - t0)]`.
    TangentExponential { f: &'a ScalarFunction, t0: f64 },
}

pub fn make_family(family: Family<'_>, bounds: SpectrumBound) -> Result<ScalarFunction> {
    let (m, big_m) = (bounds.lower(), bounds.upper());
    let width = bounds.width();
    match family {
        Family::Power { exponent } => {
            finite(exponent, "power exponent")?;
            bounds.require_positive()?;
            Ok(ScalarFunction::power(exponent))
        }
        Family::HarmonicResolvent { t } => {
            finite(t, "harmonic weight")?;
            if t >= 0.0 {
                return Err(Error::InvalidParams(format!(
                    "harmonic resolvent needs t < 0, got {t}"
                )));
            }
            if m < 1.0 {
                return Err(Error::InvalidParams(format!(
                    "harmonic resolvent needs m >= 1, got m = {m}"
                )));
            }
            let pole = -t / (1.0 - t);
            Ok(ScalarFunction::new(
                format!("harmonic:{t}"),
                move |x| x / ((1.0 - t) * x + t),
                move |x| {
                    let d = (1.0 - t) * x + t;
                    t / (d * d)
                },
                (pole, f64::INFINITY),
                Tags {
                    curvature: Curvature::Convex,
                    log_convex: true,
                    monotone: Monotone::Decreasing,
                    operator_concave: false,
                },
            ))
        }
        Family::ExpScaled { rate } => {
            finite(rate, "exponential rate")?;
            Ok(ScalarFunction::exp_scaled(rate))
        }
        Family::GeomEnvelope { t } => {
            finite(t, "geometric envelope exponent")?;
            bounds.require_positive()?;
            let slope = t * (big_m.ln() - m.ln()) / width;
            let at_m = t * m.ln();
            Ok(log_affine(format!("geom_envelope:{t}"), at_m, slope, m))
        }
        Family::Envelope(f) => {
            let (log_fm, log_fbig) = endpoint_logs(f, bounds)?;
            let slope = (log_fbig - log_fm) / width;
            Ok(log_affine(format!("envelope[{}]", f.label()), log_fm, slope, m))
        }
        Family::EnvelopeProduct(f) => {
            let (log_fm, log_fbig) = endpoint_logs(f, bounds)?;
            let slope = log_fbig - log_fm;
            Ok(log_affine(
                format!("envelope_product[{}]", f.label()),
                width * log_fm,
                slope,
                m,
            ))
        }
        Family::EnvelopeRoot => {
            let mut root = ScalarFunction::power(1.0 / width);
            root.label = format!("envelope_root:{width}");
            Ok(root)
        }
        Family::TangentExponential { f, t0 } => {
            let f0 = f.value(t0)?;
            let d0 = f.derivative(t0)?;
            if f0 == 0.0 {
                return Err(Error::InvalidParams(format!(
                    "tangent exponential needs f(t0) != 0 at t0 = {t0}"
                )));
            }
            let rate = d0 / f0;
            Ok(log_affine(
                format!("tangent_exp[{}]@{t0}", f.label()),
                0.0,
                rate,
                t0,
            ))
        }
    }
}

/// `exp(intercept + slope (x - anchor))`.
fn log_affine(label: String, intercept: f64, slope: f64, anchor: f64) -> ScalarFunction {
    ScalarFunction::new(
        label,
        move |x| (intercept + slope * (x - anchor)).exp(),
        move |x| slope * (intercept + slope * (x - anchor)).exp(),
        (f64::NEG_INFINITY, f64::INFINITY),
        Tags {
            curvature: if slope == 0.0 {
                Curvature::Affine
            } else {
                Curvature::Convex
            },
            log_convex: true,
            monotone: direction(slope),
            operator_concave: slope == 0.0,
        },
    )
}

fn endpoint_logs(f: &ScalarFunction, bounds: SpectrumBound) -> Result<(f64, f64)> {
    let fm = endpoint_value(f, bounds.lower())?;
    let fbig = endpoint_value(f, bounds.upper())?;
    if fm <= 0.0 || fbig <= 0.0 {
        return Err(Error::InvalidParams(format!(
            "envelope of `{}` needs positive endpoint values, got {fm} and {fbig}",
            f.label()
        )));
    }
    Ok((fm.ln(), fbig.ln()))
}

/// Endpoint evaluation; endpoints may sit on the boundary of an open domain
/// only when the raw formula is still finite there.
pub(crate) fn endpoint_value(f: &ScalarFunction, x: f64) -> Result<f64> {
    let (lo, hi) = f.domain();
    let y = if lo <= x && x <= hi { f.eval(x) } else { f64::NAN };
    if y.is_finite() {
        Ok(y)
    } else {
        Err(Error::FunctionDomainError {
            label: f.label().to_string(),
            at: x,
        })
    }
}

fn finite(x: f64, what: &str) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("{what} must be finite")))
    }
}

/// Named, parameterised function family as used in suite configurations:
/// `power:<t>`, `exp:<rate>`, `harmonic:<t>`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum FamilySpec {
    Power(f64),
    Exp(f64),
    Harmonic(f64),
}

impl FamilySpec {
    pub fn build(&self, bounds: SpectrumBound) -> Result<ScalarFunction> {
        match *self {
            FamilySpec::Power(t) => make_family(Family::Power { exponent: t }, bounds),
            FamilySpec::Exp(rate) => make_family(Family::ExpScaled { rate }, bounds),
            FamilySpec::Harmonic(t) => make_family(Family::HarmonicResolvent { t }, bounds),
        }
    }

    pub fn parameter(&self) -> f64 {
        match *self {
            FamilySpec::Power(t) | FamilySpec::Exp(t) | FamilySpec::Harmonic(t) => t,
        }
    }

    /// `x^t` with `t < 0`, or the harmonic resolvent: the natural tangent
    /// point is the geometric midpoint.
    pub fn is_reciprocal_like(&self) -> bool {
        matches!(*self, FamilySpec::Power(t) if t < 0.0) || matches!(self, FamilySpec::Harmonic(_))
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Power(t) => write!(f, "power:{t}"),
            FamilySpec::Exp(r) => write!(f, "exp:{r}"),
            FamilySpec::Harmonic(t) => write!(f, "harmonic:{t}"),
        }
    }
}

impl std::str::FromStr for FamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, param) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidParams(format!("family `{s}` is not kind:param")))?;
        let p: f64 = param
            .trim()
            .parse()
            .map_err(|e| Error::InvalidParams(format!("family `{s}`: {e}")))?;
        if !p.is_finite() {
            return Err(Error::InvalidParams(format!("family `{s}`: non-finite parameter")));
        }
        match kind.trim() {
            "power" => Ok(FamilySpec::Power(p)),
            "exp" => Ok(FamilySpec::Exp(p)),
            "harmonic" => Ok(FamilySpec::Harmonic(p)),
            other => Err(Error::InvalidParams(format!("unknown family kind `{other}`"))),
        }
    }
}

impl TryFrom<String> for FamilySpec {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<FamilySpec> for String {
    fn from(f: FamilySpec) -> String {
        f.to_string()
    }
}
