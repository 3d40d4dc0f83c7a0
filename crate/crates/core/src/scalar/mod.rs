//! Scalar function families, secant/tangent envelopes and the constants of
//! the reverse inequalities.

mod calibrate;
mod constants;
mod envelope;
mod function;

pub use calibrate::{golden_section_max, solve_t0_alpha_one, solve_t0_beta_zero};
pub use constants::{
    harmonic_h, harmonic_h_limit, kantorovich, mu_constant, scalar_harmonic, Constant, ConstantSet,
};
pub use envelope::{alpha_beta, is_log_convex, secant, tangent_value, AlphaBeta, SecantLine};
pub use function::{make_family, Curvature, Family, FamilySpec, Monotone, ScalarFunction, Tags};

use crate::linalg::SpectrumBound;

/// Default tangent point: `sqrt(mM)` for reciprocal-like families and
/// `(m + M)/2` otherwise.
pub fn default_t0(family: &FamilySpec, bounds: SpectrumBound) -> f64 {
    if family.is_reciprocal_like() {
        bounds.geometric_midpoint()
    } else {
        bounds.midpoint()
    }
}
pub(crate) use function::endpoint_value;
