use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{random_hermitian_with_spectrum, random_pair_relative_bounds, HermitianMatrix, SpectrumBound};
use crate::maps::{make_map, random_map_spec, MapFamily, MapSpec};
use crate::scalar::{default_t0, FamilySpec};

use super::builders::*;
use super::{ChainReport, Options, ResultId};

/// Everything needed to rebuild one report: the matrices, the map and the
/// parameters. Failing instances are dumped in this form and replayed.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Instance {
    pub result: ResultId,
    pub family: FamilySpec,
    pub bounds: SpectrumBound,
    pub map: MapSpec,
    pub a: HermitianMatrix,
    /// Second operand of the mean chains.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub b: Option<HermitianMatrix>,
    #[serde(default)]
    pub options: Options,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
}

fn power_exponent(family: FamilySpec, result: ResultId) -> Result<f64> {
    match family {
        FamilySpec::Power(t) => Ok(t),
        other => Err(Error::InvalidParams(format!("{result} needs a power family, got {other}"))),
    }
}

fn second_operand(inst: &Instance) -> Result<&HermitianMatrix> {
    inst.b
        .as_ref()
        .ok_or_else(|| Error::InvalidParams(format!("{} needs a second operand `b`", inst.result)))
}

pub fn run_instance(inst: &Instance) -> Result<ChainReport> {
    let bounds = inst.bounds;
    let phi = make_map(&inst.map)?;
    let f = inst.family.build(bounds)?;
    let mut opts = inst.options;
    if opts.t0.is_none() {
        opts.t0 = Some(default_t0(&inst.family, bounds));
    }
    let a = &inst.a;
    let mut report = match inst.result {
        ResultId::LogConvexEnvelope => log_convex_envelope(&f, a, &phi, bounds, &opts),
        ResultId::PowerKantorovich => {
            power_kantorovich(a, &phi, bounds, power_exponent(inst.family, inst.result)?, &opts)
        }
        ResultId::PerspectiveMean => perspective_mean(&f, a, second_operand(inst)?, &phi, bounds, &opts),
        ResultId::GeometricMean => geometric_mean(
            a,
            second_operand(inst)?,
            &phi,
            bounds,
            power_exponent(inst.family, inst.result)?,
            &opts,
        ),
        ResultId::HarmonicMean => {
            let FamilySpec::Harmonic(t) = inst.family else {
                return Err(Error::InvalidParams(format!(
                    "harmonic_mean needs a harmonic family, got {}",
                    inst.family
                )));
            };
            harmonic_mean(a, second_operand(inst)?, &phi, bounds, t, &opts)
        }
        ResultId::MondPecaric => mond_pecaric(&f, a, &phi, bounds, &opts),
        ResultId::InverseReverse => {
            if inst.family != FamilySpec::Power(-1.0) {
                return Err(Error::InvalidParams(format!(
                    "inverse_reverse is stated for power:-1, got {}",
                    inst.family
                )));
            }
            inverse_reverse(a, &phi, bounds, &opts)
        }
        ResultId::EnvelopeReverse => envelope_reverse(&f, a, &phi, bounds, &opts),
        ResultId::EnvelopeReverseMu => envelope_reverse_mu(&f, a, &phi, bounds, &opts),
        ResultId::EnvelopePower => envelope_power(&f, a, &phi, bounds, &opts),
        ResultId::ExponentialLower => exponential_lower(&f, a, &phi, bounds, &opts),
        ResultId::RefinedMondPecaric => refined_mond_pecaric(&f, a, &phi, bounds, &opts),
    }?;
    report.digest.seed = inst.seed;
    Ok(report)
}

/// Random instance of one suite cell, fully determined by `seed`.
pub fn random_instance(
    result: ResultId,
    family: FamilySpec,
    bounds: SpectrumBound,
    map_family: MapFamily,
    n: usize,
    seed: u64,
) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (a, b) = if result.uses_pair() {
        let (a, b) = random_pair_relative_bounds(n, bounds, &mut rng);
        (a, Some(b))
    } else {
        let pin = rng.random_bool(0.5);
        (random_hermitian_with_spectrum(n, bounds, pin, &mut rng), None)
    };
    Instance {
        result,
        family,
        bounds,
        map: random_map_spec(map_family, n, &mut rng),
        a,
        b,
        options: Options::default(),
        seed: Some(seed),
    }
}

/// Whether a suite cell satisfies the hypotheses of its chain. The chain is
/// run once on `diag(m, M)` under the identity map; any parameter error
/// rejects the cell.
pub fn check_cell(
    result: ResultId,
    family: FamilySpec,
    bounds: SpectrumBound,
    map_family: MapFamily,
) -> Result<()> {
    if result.needs_normalized_map() && !map_family.is_normalized() {
        return Err(Error::NotNormalized);
    }
    let probe = HermitianMatrix::diagonal(&[bounds.lower(), bounds.upper()]);
    let (a, b) = if result.uses_pair() {
        (HermitianMatrix::identity(2), Some(probe))
    } else {
        (probe, None)
    };
    let inst = Instance {
        result,
        family,
        bounds,
        map: MapSpec::Identity { dim: 2 },
        a,
        b,
        options: Options::default(),
        seed: None,
    };
    run_instance(&inst).map(|_| ())
}
