//! Two-variable means of positive definite matrices: the quotient `A δ B`,
//! the perspective `σ_f`, and the weighted geometric and harmonic means for
//! arbitrary real weights (including `t < 0`).

use crate::error::{Error, Result};
use crate::linalg::{
    apply_function, inverse_pd, map_spectrum, sandwich, sqrt_and_inv_sqrt, HermitianMatrix,
    SpectrumBound,
};
use crate::scalar::{scalar_harmonic, ScalarFunction};

/// Weight and relative bounds of a mean inequality.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct MeanParams {
    pub t: f64,
    pub bounds: SpectrumBound,
}

impl MeanParams {
    pub fn new(t: f64, bounds: SpectrumBound) -> Result<Self> {
        if !t.is_finite() {
            return Err(Error::InvalidParams(format!("mean weight must be finite, got {t}")));
        }
        bounds.require_positive()?;
        Ok(Self { t, bounds })
    }

    /// Parameters valid for the harmonic mean with negative weight, which
    /// needs `m >= 1`.
    pub fn harmonic(t: f64, bounds: SpectrumBound) -> Result<Self> {
        let p = Self::new(t, bounds)?;
        if t < 0.0 && bounds.lower() < 1.0 {
            return Err(Error::InvalidParams(format!(
                "harmonic mean with t < 0 needs m >= 1, got m = {}",
                bounds.lower()
            )));
        }
        Ok(p)
    }
}

fn same_dim(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<()> {
    if a.dim() == b.dim() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        })
    }
}

/// `A^{-1/2} B A^{-1/2}`.
pub fn delta(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<HermitianMatrix> {
    same_dim(a, b)?;
    let (_, inv_sqrt) = sqrt_and_inv_sqrt(a)?;
    sandwich(&inv_sqrt, b)
}

/// Applies `g` to `A δ B` and conjugates back with `A^{1/2}` on both sides.
fn perspective(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    g: impl FnOnce(&HermitianMatrix) -> Result<HermitianMatrix>,
) -> Result<HermitianMatrix> {
    same_dim(a, b)?;
    let (sqrt, inv_sqrt) = sqrt_and_inv_sqrt(a)?;
    let inner = g(&sandwich(&inv_sqrt, b)?)?;
    sandwich(&sqrt, &inner)
}

/// `A σ_f B = A^{1/2} f(A δ B) A^{1/2}`, with `spec(A δ B)` inside `bounds`.
pub fn sigma_f(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    f: &ScalarFunction,
    bounds: SpectrumBound,
) -> Result<HermitianMatrix> {
    perspective(a, b, |x| apply_function(f, x, bounds))
}

/// `A ♯_t B = A^{1/2} (A δ B)^t A^{1/2}`.
pub fn geometric_t(a: &HermitianMatrix, b: &HermitianMatrix, t: f64) -> Result<HermitianMatrix> {
    perspective(a, b, |x| {
        map_spectrum(x, |l| {
            if l > 0.0 {
                Ok(l.powf(t))
            } else {
                Err(Error::NotPositiveDefinite { min_eigenvalue: l })
            }
        })
    })
}

/// `A !_t B = ((1-t) A^{-1} + t B^{-1})^{-1}`.
pub fn harmonic_t(a: &HermitianMatrix, b: &HermitianMatrix, t: f64) -> Result<HermitianMatrix> {
    same_dim(a, b)?;
    if t == 0.0 {
        inverse_pd(a)?;
        return Ok(a.clone());
    }
    let resolvent = &inverse_pd(a)?.scale(1.0 - t) + &inverse_pd(b)?.scale(t);
    let min = resolvent.min_eigenvalue();
    if !(min > 0.0) {
        return Err(Error::PoleError { t, x: min });
    }
    inverse_pd(&resolvent)
}

/// `A !_t B` computed as the perspective of `x -> (1 - t + t/x)^{-1}`.
/// Agrees with [`harmonic_t`] wherever both are defined.
pub fn harmonic_t_perspective(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    t: f64,
) -> Result<HermitianMatrix> {
    perspective(a, b, |x| map_spectrum(x, |l| scalar_harmonic(t, l)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{congruence, random_hermitian_with_spectrum, random_pair_relative_bounds, CMatrix, C64};
    use crate::scalar::{make_family, Family};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn b(m: f64, big_m: f64) -> SpectrumBound {
        SpectrumBound::new(m, big_m).unwrap()
    }

    fn close(x: &HermitianMatrix, y: &HermitianMatrix, rel: f64) -> bool {
        x.distance(y) <= rel * x.frobenius_norm().max(y.frobenius_norm()).max(1.0)
    }

    #[test]
    fn delta_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = random_hermitian_with_spectrum(3, b(0.5, 2.0), false, &mut rng);
        assert!(close(&delta(&a, &a).unwrap(), &HermitianMatrix::identity(3), 1e-12));
        let x = random_hermitian_with_spectrum(3, b(1.0, 4.0), false, &mut rng);
        assert!(close(&delta(&HermitianMatrix::identity(3), &x).unwrap(), &x, 1e-15));
        for _ in 0..20 {
            let (a, bb) = random_pair_relative_bounds(4, b(1.0, 4.0), &mut rng);
            let ev = delta(&a, &bb).unwrap().eigenvalues();
            assert!(ev[0] >= 1.0 - 1e-10 && ev[3] <= 4.0 + 1e-10);
        }
        assert!(matches!(
            delta(&HermitianMatrix::diagonal(&[1.0, -1.0]), &HermitianMatrix::identity(2)),
            Err(Error::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn sigma_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let bounds = b(1.0, 4.0);
        let (a, bb) = random_pair_relative_bounds(4, bounds, &mut rng);
        let id = sigma_f(&a, &bb, &ScalarFunction::identity(), bounds).unwrap();
        assert!(close(&id, &bb, 1e-12));
        let one = sigma_f(&a, &bb, &ScalarFunction::constant(1.0), bounds).unwrap();
        assert!(close(&one, &a, 1e-12));

        let s = sigma_f(
            &HermitianMatrix::diagonal(&[2.0]),
            &HermitianMatrix::diagonal(&[3.0]),
            &ScalarFunction::power(-1.0),
            b(1.0, 2.0),
        )
        .unwrap();
        assert!((s.scalar_value().unwrap() - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn geometric_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random_hermitian_with_spectrum(3, b(0.5, 2.0), false, &mut rng);
        assert!(close(&geometric_t(&a, &a, -1.0).unwrap(), &a, 1e-12));
        assert!(close(&geometric_t(&a, &a.scale(2.0), 0.0).unwrap(), &a, 1e-12));
        assert!(close(&geometric_t(&a, &a.scale(2.0), 1.0).unwrap(), &a.scale(2.0), 1e-12));

        let g = geometric_t(&HermitianMatrix::identity(1), &HermitianMatrix::diagonal(&[3.0]), -0.5)
            .unwrap();
        assert!((g.scalar_value().unwrap() - 3f64.powf(-0.5)).abs() < 1e-15);

        let g = geometric_t(
            &HermitianMatrix::diagonal(&[1.0, 2.0]),
            &HermitianMatrix::diagonal(&[4.0, 8.0]),
            -1.0,
        )
        .unwrap();
        assert!(close(&g, &HermitianMatrix::diagonal(&[0.25, 0.5]), 1e-15));
    }

    #[test]
    fn harmonic_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let bounds = b(1.0, 4.0);
        let (a, bb) = random_pair_relative_bounds(4, bounds, &mut rng);
        assert_eq!(harmonic_t(&a, &bb, 0.0).unwrap(), a);
        for m in [1.0, 2.5, 4.0] {
            let h = harmonic_t(&HermitianMatrix::identity(1), &HermitianMatrix::diagonal(&[m]), -1.5)
                .unwrap();
            assert!((h.scalar_value().unwrap() - scalar_harmonic(-1.5, m).unwrap()).abs() < 1e-15);
        }
        for _ in 0..20 {
            let (a, bb) = random_pair_relative_bounds(4, bounds, &mut rng);
            let r = harmonic_t(&a, &bb, -1.0).unwrap();
            let s = harmonic_t_perspective(&a, &bb, -1.0).unwrap();
            assert!(close(&r, &s, 1e-9));
        }
        assert!(MeanParams::harmonic(-1.0, b(0.5, 2.0)).is_err());
        assert!(MeanParams::harmonic(-1.0, b(1.0, 2.0)).is_ok());
    }

    #[test]
    fn perspectives_of_families_match_means() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for bounds in [b(1.0, 4.0), b(1.5, 4.0)] {
            for _ in 0..25 {
                let (a, bb) = random_pair_relative_bounds(4, bounds, &mut rng);
                for t in [-0.5, -1.0, -2.0] {
                    let p = make_family(Family::Power { exponent: t }, bounds).unwrap();
                    let s = sigma_f(&a, &bb, &p, bounds).unwrap();
                    assert!(close(&s, &geometric_t(&a, &bb, t).unwrap(), 1e-9));
                    let h = make_family(Family::HarmonicResolvent { t }, bounds).unwrap();
                    let s = sigma_f(&a, &bb, &h, bounds).unwrap();
                    assert!(close(&s, &harmonic_t(&a, &bb, t).unwrap(), 1e-9));
                }
            }
        }
    }

    #[test]
    fn transformer_property() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let bounds = b(1.0, 4.0);
        let f = ScalarFunction::exp_scaled(-0.7);
        for _ in 0..25 {
            let (a, bb) = random_pair_relative_bounds(3, bounds, &mut rng);
            // A well-conditioned invertible C: unitary times a positive diagonal.
            let u = crate::linalg::random_unitary(3, &mut rng);
            let d = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
                C64::new(0.7, 0.0),
                C64::new(1.0, 0.0),
                C64::new(1.6, 0.0),
            ]));
            let c = u * d;
            let lhs = congruence(&c, &sigma_f(&a, &bb, &f, bounds).unwrap()).unwrap();
            let (ca, cb) = (congruence(&c, &a).unwrap(), congruence(&c, &bb).unwrap());
            let rhs = sigma_f(&ca, &cb, &f, bounds).unwrap();
            assert!(close(&lhs, &rhs, 1e-8));
        }
    }

    #[test]
    fn scalar_reduction() {
        let (a, bb) = (HermitianMatrix::diagonal(&[1.7]), HermitianMatrix::diagonal(&[4.1]));
        let (x, y) = (1.7f64, 4.1f64);
        let g = geometric_t(&a, &bb, -1.3).unwrap().scalar_value().unwrap();
        assert!((g - x.powf(2.3) * y.powf(-1.3)).abs() <= 4.0 * f64::EPSILON * g);
        let h = harmonic_t(&a, &bb, -0.4).unwrap().scalar_value().unwrap();
        let expected = 1.0 / (1.4 / x - 0.4 / y);
        assert!((h - expected).abs() <= 4.0 * f64::EPSILON * h);
    }
}
