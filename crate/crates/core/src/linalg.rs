//! Dense Hermitian linear algebra.
//!
//! Everything here works on small dense complex matrices (n <= 64). The
//! eigensolver is a cyclic complex Jacobi method, which gives reconstruction
//! residuals close to machine precision for the sizes this crate targets.

use std::fmt::Write as _;
use std::ops::{Add, Mul, Sub};

use nalgebra::{Complex, DMatrix};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::scalar::{endpoint_value, ScalarFunction};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;

/// Largest dimension accepted by the random generators and the suite.
pub const MAX_DIM: usize = 64;

/// Relative hermiticity tolerance applied at construction.
pub const HERMITIAN_RTOL: f64 = 1e-12;

/// Default relative tolerance of Loewner-order verdicts.
pub const DEFAULT_RTOL: f64 = 1e-9;

const JACOBI_MAX_SWEEPS: usize = 100;

/// Dense complex square matrix, Hermitian within [`HERMITIAN_RTOL`].
///
/// The stored matrix is exactly Hermitian: construction replaces the input
/// by its Hermitian part after checking the asymmetry is within tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    inner: CMatrix,
}

impl HermitianMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        let scale = m.norm().max(1.0);
        let tolerance = HERMITIAN_RTOL * scale;
        let asymmetry = (&m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if !(asymmetry <= tolerance) {
            return Err(Error::NotHermitian {
                asymmetry,
                tolerance,
            });
        }
        Ok(Self::symmetrized(m))
    }

    /// Hermitian part of `m`, with no tolerance check. Used for matrices that
    /// are Hermitian by construction up to rounding.
    pub(crate) fn symmetrized(m: CMatrix) -> Self {
        let adj = m.adjoint();
        let mut inner = (m + adj) * C64::new(0.5, 0.0);
        for i in 0..inner.nrows() {
            inner[(i, i)].im = 0.0;
        }
        Self { inner }
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        let mut m = CMatrix::zeros(n, n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotSquare {
                    rows: n,
                    cols: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = C64::new(v, 0.0);
            }
        }
        Self::new(m)
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        assert!(n >= 1, "diagonal matrix needs at least one entry");
        let mut m = CMatrix::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = C64::new(v, 0.0);
        }
        Self { inner: m }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, 1.0)
    }

    pub fn scalar(n: usize, c: f64) -> Self {
        Self::diagonal(&vec![c; n])
    }

    pub fn zeros(n: usize) -> Self {
        Self::scalar(n, 0.0)
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    pub fn as_matrix(&self) -> &CMatrix {
        &self.inner
    }

    pub fn into_matrix(self) -> CMatrix {
        self.inner
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.inner.norm()
    }

    /// Value of a 1x1 matrix.
    pub fn scalar_value(&self) -> Option<f64> {
        (self.dim() == 1).then(|| self.inner[(0, 0)].re)
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            inner: &self.inner * C64::new(c, 0.0),
        }
    }

    /// `self + c I`.
    pub fn shift(&self, c: f64) -> Self {
        let mut inner = self.inner.clone();
        for i in 0..inner.nrows() {
            inner[(i, i)].re += c;
        }
        Self { inner }
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.inner[(i, i)].re).sum()
    }

    /// Maximum entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim());
        (&self.inner - &other.inner)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Frobenius norm of `self - other`.
    pub fn distance(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim());
        (&self.inner - &other.inner).norm()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        spectral_decompose(self).eigenvalues
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        *self.eigenvalues().last().expect("dim >= 1")
    }
}

impl Add for &HermitianMatrix {
    type Output = HermitianMatrix;

    fn add(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix {
            inner: &self.inner + &rhs.inner,
        }
    }
}

impl Sub for &HermitianMatrix {
    type Output = HermitianMatrix;

    fn sub(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix {
            inner: &self.inner - &rhs.inner,
        }
    }
}

impl Mul<f64> for &HermitianMatrix {
    type Output = HermitianMatrix;

    fn mul(self, rhs: f64) -> HermitianMatrix {
        self.scale(rhs)
    }
}

/// Spectrum interval `[m, M]` with `m < M`.
///
/// Construction only requires a finite, non-degenerate interval so the same
/// type can drive scalar calibration on intervals touching zero. Operator
/// entry points call [`SpectrumBound::require_positive`].
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SpectrumBound {
    m: f64,
    #[serde(rename = "M")]
    big_m: f64,
}

impl SpectrumBound {
    pub fn new(m: f64, big_m: f64) -> Result<Self> {
        if !(m.is_finite() && big_m.is_finite() && m < big_m) {
            return Err(Error::DegenerateBounds { m, big_m });
        }
        Ok(Self { m, big_m })
    }

    pub fn lower(&self) -> f64 {
        self.m
    }

    pub fn upper(&self) -> f64 {
        self.big_m
    }

    pub fn width(&self) -> f64 {
        self.big_m - self.m
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.m + self.big_m)
    }

    pub fn geometric_midpoint(&self) -> f64 {
        (self.m * self.big_m).sqrt()
    }

    pub fn contains(&self, t: f64) -> bool {
        self.m <= t && t <= self.big_m
    }

    /// Half-width of the window outside `[m, M]` inside which eigenvalues are
    /// clamped rather than rejected.
    pub fn clamp_window(&self) -> f64 {
        1e-9 * self.big_m.abs().max(1.0)
    }

    pub fn require_positive(&self) -> Result<()> {
        if self.m > 0.0 {
            Ok(())
        } else {
            Err(Error::InvalidParams(format!(
                "spectrum bound [{}, {}] must satisfy m > 0",
                self.m, self.big_m
            )))
        }
    }

    /// `n` equally spaced points from `m` to `M` inclusive.
    pub fn grid(&self, n: usize) -> Vec<f64> {
        match n {
            0 => Vec::new(),
            1 => vec![self.midpoint()],
            _ => (0..n)
                .map(|i| {
                    if i == n - 1 {
                        self.big_m
                    } else {
                        self.m + self.width() * i as f64 / (n - 1) as f64
                    }
                })
                .collect(),
        }
    }
}

impl std::fmt::Display for SpectrumBound {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.m, self.big_m)
    }
}

impl std::str::FromStr for SpectrumBound {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidParams(format!("bound `{s}` is not of the form m:M")))?;
        let parse = |x: &str| {
            x.trim()
                .parse::<f64>()
                .map_err(|e| Error::InvalidParams(format!("bound `{s}`: {e}")))
        };
        Self::new(parse(a)?, parse(b)?)
    }
}

#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Columns are the eigenvectors.
    pub eigenvectors: CMatrix,
}

impl SpectralDecomposition {
    /// `U diag(values) U*`.
    pub fn recompose(&self, values: &[f64]) -> HermitianMatrix {
        let u = &self.eigenvectors;
        let n = u.nrows();
        let mut scaled = u.clone();
        for (j, &v) in values.iter().enumerate() {
            for i in 0..n {
                scaled[(i, j)] *= v;
            }
        }
        HermitianMatrix::symmetrized(scaled * u.adjoint())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct OrderVerdict {
    pub holds: bool,
    /// `lambda_min(B - A)`.
    pub min_eig_gap: f64,
    pub tolerance_used: f64,
}

/// Eigendecomposition by cyclic complex Jacobi rotations.
pub fn spectral_decompose(a: &HermitianMatrix) -> SpectralDecomposition {
    let n = a.dim();
    let mut w = a.inner.clone();
    let mut v = CMatrix::identity(n, n);
    let scale = w.norm();

    if n > 1 && scale > 0.0 {
        for _ in 0..JACOBI_MAX_SWEEPS {
            let off: f64 = (0..n)
                .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| w[(i, j)].norm_sqr())
                .sum::<f64>()
                .sqrt();
            if off <= 1e-15 * scale {
                break;
            }
            for p in 0..n - 1 {
                for q in p + 1..n {
                    rotate(&mut w, &mut v, p, q);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| w[(i, i)].re.total_cmp(&w[(j, j)].re));
    let eigenvalues = order.iter().map(|&i| w[(i, i)].re).collect();
    let eigenvectors = CMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    }
}

/// One Jacobi rotation annihilating the (p, q) entry: `w <- J* w J`, `v <- v J`.
fn rotate(w: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = w[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let app = w[(p, p)].re;
    let aqq = w[(q, q)].re;
    // Already negligible relative to both diagonal entries.
    if r <= f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        w[(p, q)] = C64::new(0.0, 0.0);
        w[(q, p)] = C64::new(0.0, 0.0);
        return;
    }
    let phase = apq / r;
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta == 0.0 {
        1.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let j_pq = phase * s;
    let j_qp = -phase.conj() * s;

    let n = w.nrows();
    for k in 0..n {
        let wkp = w[(k, p)];
        let wkq = w[(k, q)];
        w[(k, p)] = wkp * c + wkq * j_qp;
        w[(k, q)] = wkp * j_pq + wkq * c;
    }
    for k in 0..n {
        let wpk = w[(p, k)];
        let wqk = w[(q, k)];
        w[(p, k)] = wpk * c + wqk * j_qp.conj();
        w[(q, k)] = wpk * j_pq.conj() + wqk * c;
    }
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c + vkq * j_qp;
        v[(k, q)] = vkp * j_pq + vkq * c;
    }
    w[(p, q)] = C64::new(0.0, 0.0);
    w[(q, p)] = C64::new(0.0, 0.0);
    w[(p, p)].im = 0.0;
    w[(q, q)].im = 0.0;
}

/// `U diag(g(lambda_i)) U*` for an arbitrary real map `g` of the spectrum.
pub fn map_spectrum(
    a: &HermitianMatrix,
    mut g: impl FnMut(f64) -> Result<f64>,
) -> Result<HermitianMatrix> {
    let dec = spectral_decompose(a);
    let values = dec
        .eigenvalues
        .iter()
        .map(|&l| g(l))
        .collect::<Result<Vec<_>>>()?;
    Ok(dec.recompose(&values))
}

/// Functional calculus `f(A)` for `spec(A)` inside `[m, M]`.
///
/// Eigenvalues within [`SpectrumBound::clamp_window`] outside the interval
/// are clamped to its boundary; anything further out is rejected.
pub fn apply_function(
    f: &ScalarFunction,
    a: &HermitianMatrix,
    bounds: SpectrumBound,
) -> Result<HermitianMatrix> {
    Ok(apply_functions(&[f], a, bounds)?.remove(0))
}

/// [`apply_function`] for several functions sharing one eigendecomposition.
pub fn apply_functions(
    fs: &[&ScalarFunction],
    a: &HermitianMatrix,
    bounds: SpectrumBound,
) -> Result<Vec<HermitianMatrix>> {
    let eps = bounds.clamp_window();
    let (lo, hi) = (bounds.lower(), bounds.upper());
    let dec = spectral_decompose(a);
    let clamped = dec
        .eigenvalues
        .iter()
        .map(|&l| {
            if l < lo - eps || l > hi + eps || l.is_nan() {
                Err(Error::SpectrumOutOfDomain {
                    eigenvalue: l,
                    lower: lo,
                    upper: hi,
                })
            } else {
                Ok(l.clamp(lo, hi))
            }
        })
        .collect::<Result<Vec<f64>>>()?;
    fs.iter()
        .map(|f| {
            let values = clamped
                .iter()
                .map(|&l| endpoint_value(f, l))
                .collect::<Result<Vec<f64>>>()?;
            Ok(dec.recompose(&values))
        })
        .collect()
}

/// Functional calculus checked only against the function's own domain.
pub fn apply_on_domain(f: &ScalarFunction, a: &HermitianMatrix) -> Result<HermitianMatrix> {
    map_spectrum(a, |l| f.value(l))
}

/// Loewner-order test `A <= B`.
pub fn loewner_leq(a: &HermitianMatrix, b: &HermitianMatrix, rtol: f64) -> Result<OrderVerdict> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let tolerance_used = rtol * 1f64.max(a.frobenius_norm()).max(b.frobenius_norm());
    let min_eig_gap = (b - a).min_eigenvalue();
    Ok(OrderVerdict {
        holds: min_eig_gap >= -tolerance_used,
        min_eig_gap,
        tolerance_used,
    })
}

/// `lambda_min(X) >= -tol`, decided by a Cholesky factorization of
/// `X + tol I` instead of a full eigendecomposition.
pub fn psd_within(x: &HermitianMatrix, tol: f64) -> bool {
    let n = x.dim();
    let shifted = x.as_matrix() + CMatrix::identity(n, n) * C64::new(tol.max(f64::MIN_POSITIVE), 0.0);
    nalgebra::Cholesky::new(shifted).is_some()
}

/// Smallest eigenvalue recomputed as a compensated Rayleigh quotient of the
/// Jacobi eigenvector. Used to recheck marginal verdicts.
pub fn refined_min_eigenvalue(x: &HermitianMatrix) -> f64 {
    let dec = spectral_decompose(x);
    let u = dec.eigenvectors.column(0);
    let m = x.as_matrix();
    let n = x.dim();
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    let mut norm = 0.0f64;
    for i in 0..n {
        norm += u[i].norm_sqr();
        for j in 0..n {
            let term = (u[i].conj() * m[(i, j)] * u[j]).re;
            let y = term - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
    }
    sum / norm
}

/// `(A^{1/2}, A^{-1/2})` for positive definite `A`.
pub fn sqrt_and_inv_sqrt(a: &HermitianMatrix) -> Result<(HermitianMatrix, HermitianMatrix)> {
    let dec = spectral_decompose(a);
    let min_eigenvalue = dec.eigenvalues[0];
    if !(min_eigenvalue > 0.0) {
        return Err(Error::NotPositiveDefinite { min_eigenvalue });
    }
    let roots: Vec<f64> = dec.eigenvalues.iter().map(|l| l.sqrt()).collect();
    let inv_roots: Vec<f64> = roots.iter().map(|r| 1.0 / r).collect();
    Ok((dec.recompose(&roots), dec.recompose(&inv_roots)))
}

/// Inverse of a positive definite matrix.
pub fn inverse_pd(a: &HermitianMatrix) -> Result<HermitianMatrix> {
    let dec = spectral_decompose(a);
    let min_eigenvalue = dec.eigenvalues[0];
    if !(min_eigenvalue > 0.0) {
        return Err(Error::NotPositiveDefinite { min_eigenvalue });
    }
    let inv: Vec<f64> = dec.eigenvalues.iter().map(|l| 1.0 / l).collect();
    Ok(dec.recompose(&inv))
}

/// `C* X C`.
pub fn congruence(c: &CMatrix, x: &HermitianMatrix) -> Result<HermitianMatrix> {
    if c.nrows() != x.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            found: c.nrows(),
        });
    }
    Ok(HermitianMatrix::symmetrized(c.adjoint() * x.as_matrix() * c))
}

/// Congruence by a Hermitian matrix, `C X C`.
pub fn sandwich(c: &HermitianMatrix, x: &HermitianMatrix) -> Result<HermitianMatrix> {
    congruence(c.as_matrix(), x)
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the phases
/// of `R`'s diagonal moved into `Q`.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let z = CMatrix::from_fn(n, n, |_, _| complex_gaussian(rng));
    let qr = z.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Random Hermitian matrix with eigenvalues i.i.d. uniform on `[m, M]` and
/// Haar eigenvectors. With `pin_endpoints` and `n >= 2` the spectrum contains
/// `m` and `M` exactly.
pub fn random_hermitian_with_spectrum<R: Rng + ?Sized>(
    n: usize,
    bounds: SpectrumBound,
    pin_endpoints: bool,
    rng: &mut R,
) -> HermitianMatrix {
    assert!((1..=MAX_DIM).contains(&n), "dimension {n} outside 1..={MAX_DIM}");
    let mut values: Vec<f64> = (0..n)
        .map(|_| rng.random_range(bounds.lower()..=bounds.upper()))
        .collect();
    if pin_endpoints && n >= 2 {
        values[0] = bounds.lower();
        values[1] = bounds.upper();
    }
    let u = random_unitary(n, rng);
    SpectralDecomposition {
        eigenvalues: values.clone(),
        eigenvectors: u,
    }
    .recompose(&values)
}

/// Random pair with `mA <= B <= MA`: `A` has spectrum in `[0.5, 2]` and
/// `B = A^{1/2} C A^{1/2}` with `spec(C)` in `[m, M]`.
pub fn random_pair_relative_bounds<R: Rng + ?Sized>(
    n: usize,
    bounds: SpectrumBound,
    rng: &mut R,
) -> (HermitianMatrix, HermitianMatrix) {
    let a_bounds = SpectrumBound::new(0.5, 2.0).expect("static bound");
    let a = random_hermitian_with_spectrum(n, a_bounds, false, rng);
    let c = random_hermitian_with_spectrum(n, bounds, false, rng);
    let (root, _) = sqrt_and_inv_sqrt(&a).expect("spectrum in [0.5, 2]");
    let b = sandwich(&root, &c).expect("same dimension");
    (a, b)
}

/// Portable text form: a header line (`n` for square, `rows cols`
/// otherwise), then one line per row of space-separated `re,im` pairs.
pub fn encode_matrix(m: &CMatrix) -> String {
    let mut out = String::new();
    if m.nrows() == m.ncols() {
        let _ = writeln!(out, "{}", m.nrows());
    } else {
        let _ = writeln!(out, "{} {}", m.nrows(), m.ncols());
    }
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols())
            .map(|j| format!("{},{}", m[(i, j)].re, m[(i, j)].im))
            .collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

pub fn decode_matrix(text: &str) -> Result<CMatrix> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty input".into()))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|x| x.parse().map_err(|e| Error::Parse(format!("header `{header}`: {e}"))))
        .collect::<Result<_>>()?;
    let (rows, cols) = match dims.as_slice() {
        [n] => (*n, *n),
        [r, c] => (*r, *c),
        _ => return Err(Error::Parse(format!("bad header `{header}`"))),
    };
    let mut m = CMatrix::zeros(rows, cols);
    for i in 0..rows {
        let line = lines
            .next()
            .ok_or_else(|| Error::Parse(format!("missing row {i}")))?;
        let entries: Vec<&str> = line.split_whitespace().collect();
        if entries.len() != cols {
            return Err(Error::Parse(format!(
                "row {i} has {} entries, expected {cols}",
                entries.len()
            )));
        }
        for (j, e) in entries.iter().enumerate() {
            let (re, im) = e
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("entry `{e}` is not re,im")))?;
            let re: f64 = re.parse().map_err(|err| Error::Parse(format!("`{e}`: {err}")))?;
            let im: f64 = im.parse().map_err(|err| Error::Parse(format!("`{e}`: {err}")))?;
            m[(i, j)] = C64::new(re, im);
        }
    }
    if lines.next().is_some() {
        return Err(Error::Parse("trailing rows".into()));
    }
    Ok(m)
}

/// Serde adapter storing a matrix in the portable text form.
pub mod text_matrix {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &CMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&encode_matrix(m))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<CMatrix, D::Error> {
        let text = String::deserialize(d)?;
        decode_matrix(&text).map_err(serde::de::Error::custom)
    }
}

impl serde::Serialize for HermitianMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        text_matrix::serialize(&self.inner, s)
    }
}

impl<'de> serde::Deserialize<'de> for HermitianMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let m = text_matrix::deserialize(d)?;
        HermitianMatrix::new(m).map_err(serde::de::Error::custom)
    }
}
