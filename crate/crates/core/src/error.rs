use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (asymmetry {asymmetry:e} exceeds {tolerance:e})")]
    NotHermitian { asymmetry: f64, tolerance: f64 },

    #[error("matrix must be square with dimension >= 1, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("eigenvalue {eigenvalue} lies outside [{lower}, {upper}] beyond the clamp window")]
    SpectrumOutOfDomain {
        eigenvalue: f64,
        lower: f64,
        upper: f64,
    },

    #[error("function `{label}` is undefined at {at}")]
    FunctionDomainError { label: String, at: f64 },

    #[error("matrix is not positive definite (minimum eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("invalid spectrum bound [{m}, {big_m}]: need finite m < M")]
    DegenerateBounds { m: f64, big_m: f64 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("derivative of `{label}` vanishes at t0 = {t0}")]
    ZeroDerivative { label: String, t0: f64 },

    #[error("function `{label}` is not monotone on [{m}, {big_m}]")]
    NotMonotone { label: String, m: f64, big_m: f64 },

    #[error("function `{label}` is not log-convex on [{m}, {big_m}]")]
    NotLogConvex { label: String, m: f64, big_m: f64 },

    #[error("no root of {what} bracketed in ({lower}, {upper})")]
    NoRoot {
        what: &'static str,
        lower: f64,
        upper: f64,
    },

    #[error("pole: 1 - t + t/x vanishes or is negative at t = {t}, x = {x}")]
    PoleError { t: f64, x: f64 },

    #[error("invalid map specification: {0}")]
    InvalidSpec(String),

    #[error("positive map must be normalized (phi(I) = I) here")]
    NotNormalized,

    #[error("matrix text encoding: {0}")]
    Parse(String),
}
