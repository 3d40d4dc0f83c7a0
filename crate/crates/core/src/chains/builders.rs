use crate::error::{Error, Result};
use crate::linalg::{
    apply_function, apply_functions, apply_on_domain, sandwich, sqrt_and_inv_sqrt, HermitianMatrix,
    SpectrumBound,
};
use crate::maps::{apply_map, induced_psi, PositiveLinearMap};
use crate::means::{delta, geometric_t, harmonic_t, sigma_f, MeanParams};
use crate::scalar::{
    alpha_beta, endpoint_value, harmonic_h, is_log_convex, kantorovich, make_family, mu_constant,
    secant, solve_t0_alpha_one, AlphaBeta, ConstantSet, Curvature, Family, Monotone,
    ScalarFunction, Tags,
};

use super::{verify_chain, Chain, ChainReport, InstanceDigest, Options, ResultId, ScalarCheck, Term};

/// Relative tolerance of the scalar identities recorded next to a chain.
const IDENTITY_RTOL: f64 = 1e-9;

fn require_normalized(phi: &PositiveLinearMap) -> Result<()> {
    if phi.is_normalized() {
        Ok(())
    } else {
        Err(Error::NotNormalized)
    }
}

fn require_log_convex(f: &ScalarFunction, bounds: SpectrumBound) -> Result<()> {
    if is_log_convex(f, bounds) {
        Ok(())
    } else {
        Err(Error::NotLogConvex {
            label: f.label().to_string(),
            m: bounds.lower(),
            big_m: bounds.upper(),
        })
    }
}

fn require_negative(t: f64, what: &str) -> Result<()> {
    if t < 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("{what} needs t < 0, got {t}")))
    }
}

/// `alpha X + beta I`.
fn affine(x: &HermitianMatrix, alpha: f64, beta: f64) -> HermitianMatrix {
    x.scale(alpha).shift(beta)
}

/// `alpha`, `beta` of a derived function that may be constant; a constant
/// equals its own secant and tangent, so `alpha = 1`, `beta = 0`.
fn tangent_constants(h: &ScalarFunction, bounds: SpectrumBound, t0: f64) -> Result<AlphaBeta> {
    if h.tags().monotone == Monotone::Constant {
        return Ok(AlphaBeta {
            alpha: 1.0,
            beta: 0.0,
            t0,
        });
    }
    alpha_beta(h, bounds, t0)
}

fn digest(f: &str, a: &HermitianMatrix, phi: &PositiveLinearMap) -> InstanceDigest {
    InstanceDigest {
        seed: None,
        dim: a.dim(),
        out_dim: phi.out_dim(),
        function: f.to_string(),
        map: phi.kind(),
    }
}

fn report(
    result: ResultId,
    chains: Vec<Chain>,
    constants: ConstantSet,
    digest: InstanceDigest,
) -> ChainReport {
    ChainReport {
        result,
        chains,
        side_checks: Vec::new(),
        scalar_checks: Vec::new(),
        constants,
        digest,
    }
}

fn insert_secant(constants: &mut ConstantSet, f: &ScalarFunction, bounds: SpectrumBound) -> Result<()> {
    let line = secant(f, bounds)?;
    constants.insert("a_f", line.slope, "secant");
    constants.insert("b_f", line.intercept, "secant");
    Ok(())
}

fn insert_alpha_beta(constants: &mut ConstantSet, suffix: &str, ab: &AlphaBeta, source: &str) {
    constants.insert(&format!("alpha{suffix}"), ab.alpha, source);
    constants.insert(&format!("beta{suffix}"), ab.beta, source);
    constants.insert(&format!("t0{suffix}"), ab.t0, source);
}

/// Five terms `(1/c) phi(f(X)) <= (1/c) phi(h(X)) <= f(phi(X)) <= h(phi(X)) <= c phi(f(X))`.
fn envelope_terms(
    f: &ScalarFunction,
    h: &ScalarFunction,
    x: &HermitianMatrix,
    phi: &PositiveLinearMap,
    bounds: SpectrumBound,
    c: f64,
    name: &str,
) -> Result<Vec<Term>> {
    let fx_hx = apply_functions(&[f, h], x, bounds)?;
    let phi_fx = apply_map(phi, &fx_hx[0])?;
    let phi_hx = apply_map(phi, &fx_hx[1])?;
    let px = apply_map(phi, x)?;
    let mut at_px = apply_functions(&[f, h], &px, bounds)?;
    let h_px = at_px.pop().expect("two functions");
    let f_px = at_px.pop().expect("two functions");
    Ok(vec![
        Term::new(format!("(1/{name}) phi(f(A))"), phi_fx.scale(1.0 / c)),
        Term::new(format!("(1/{name}) phi(h(A))"), phi_hx.scale(1.0 / c)),
        Term::new("f(phi(A))", f_px),
        Term::new("h(phi(A))", h_px),
        Term::new(format!("{name} phi(f(A))"), phi_fx.scale(c)),
    ])
}

/// `(1/mu) phi(f(A)) <= (1/mu) phi(h(A)) <= f(phi(A)) <= h(phi(A)) <= mu phi(f(A))`
/// for log-convex `f`, where `h` is the log-linear envelope of `f` on `[m, M]`.
pub fn log_convex_envelope(
    f: &ScalarFunction,
    a: &HermitianMatrix,
    phi: &PositiveLinearMap,
    bounds: SpectrumBound,
    opts: &Options,
) -> Result<ChainReport> {
    require_normalized(phi)?;
    require_log_convex(f, bounds)?;
    let mu = mu_constant(f, bounds)?;
    let h = make_family(Family::Envelope(f), bounds)?;
    let terms = envelope_terms(f, &h, a, phi, bounds, mu, "mu")?;
    let mut constants = ConstantSet::new();
    insert_secant(&mut constants, f, bounds)?;
    constants.insert("mu", mu, "mu_constant");
    let chain = verify_chain("log-convex envelope", terms, opts.rtol)?;
    Ok(report(
        ResultId::LogConvexEnvelope,
        vec![chain],
        constants,
        digest(f.label(), a, phi),
    ))
}

/// The envelope chain for `x^t`, `t < 0`, with the generalized Kantorovich
/// constant in place of `mu`.
pub fn power_kantorovich(
    a: &HermitianMatrix,
    phi: &PositiveLinearMap,
    bounds: SpectrumBound,
    t: f64,
    opts: &Options,
) -> Result<ChainReport> {
    require_negative(t, "power chain")?;
    require_normalized(phi)?;
    let f = make_family(Family::Power { exponent: t }, bounds)?;
    let g = make_family(Family::GeomEnvelope { t }, bounds)?;
    let k = kantorovich(bounds, t)?;
    let mu = mu_constant(&f, bounds)?;
    let terms = envelope_terms(&f, &g, a, phi, bounds, k, "K")?;
    let mut constants = ConstantSet::new();
    insert_secant(&mut constants, &f, bounds)?;
    constants.insert("K", k, "kantorovich");
    constants.insert("mu", mu, "mu_constant");
    let chain = verify_chain("power envelope with K(m, M, t)", terms, opts.rtol)?;
    let mut r = report(ResultId::PowerKantorovich, vec![chain], constants, digest(f.label(), a, phi));
    r.scalar_checks.push(ScalarCheck::new("K(m, M, t) = mu(x^t)", k, mu, IDENTITY_RTOL));
    Ok(r)
}

fn relative_distance(x: &HermitianMatrix, y: &HermitianMatrix) -> f64 {
    x.distance(y) / x.frobenius_norm().max(y.frobenius_norm()).max(1.0)
}

/// Perspective-mean chain for a positive map `phi` (not necessarily
/// normalized) and `mA <= B <= MA`. The terms are obtained from the
/// envelope chain of the induced normalized map
/// `psi(X) = phi(A)^{-1/2} phi(A^{1/2} X A^{1/2}) phi(A)^{-1/2}` at `A δ B`,
/// conjugated by `phi(A)^{1/2}`.
pub fn perspective_mean(
    f: &ScalarFunction,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    phi: &PositiveLinearMap,
    bounds: SpectrumBound,
    opts: &Options,
) -> Result<ChainReport> {
    bounds.require_positive()?;
    require_log_convex(f, bounds)?;
    let mu = mu_constant(f, bounds)?;
    let h = make_family(Family::Envelope(f), bounds)?;
    let psi = induced_psi(phi, a)?;
    let x = delta(a, b)?;
    let inner = envelope_terms(f, &h, &x, &psi, bounds, mu, "mu")?;
    let phi_a = apply_map(phi, a)?;
    let phi_b = apply_map(phi, b)?;
    let (root, _) = sqrt_and_inv_sqrt(&phi_a)?;
    let labels = [
        "(1/mu) phi(A σ_f B)",
        "(1/mu) phi(A^1/2 h(A δ B) A^1/2)",
        "phi(A) σ_f phi(B)",
        "phi(A)^1/2 h(phi(A) δ phi(B)) phi(A)^1/2",
        "mu phi(A σ_f B)",
    ];
    let terms = inner
        .iter()
        .zip(labels)
        .map(|(t, label)| Ok(Term::new(label, sandwich(&root, &t.value)?)))
        .collect::<Result<Vec<_>>>()?;

    let direct_mean = sigma_f(&phi_a, &phi_b, f, bounds)?;
    let direct_image = apply_map(phi, &sigma_f(a, b, f, bounds)?)?.scale(mu);
    let scalar_checks = vec![
        ScalarCheck::new(
            "phi(A) σ_f phi(B): induced-map route vs direct",
            relative_distance(&terms[2].value, &direct_mean),
            0.0,
            1e-8,
        ),
        ScalarCheck::new(
            "mu phi(A σ_f B): induced-map route vs direct",
            relative_distance(&terms[4].value, &direct_image),
            0.0,
            1e-8,
        ),
    ];

    let mut constants = ConstantSet::new();
    insert_secant(&mut constants, f, bounds)?;
    constants.insert("mu", mu, "mu_constant");
    let chain = verify_chain("perspective mean", terms, opts.rtol)?;
    let mut r = report(ResultId::PerspectiveMean, vec![chain], constants, digest(f.label(), a, phi));
    r.scalar_checks = scalar_checks;
    Ok(r)
}

/// Geometric-mean chain, `t < 0`:
/// `(1/K) phi(A ♯_t B) <= (1/K) phi(A σ_g B) <= phi(A) ♯_t phi(B) <= phi(A) σ_g phi(B) <= K phi(A ♯_t B)`.
/// For `t` in `[-1, 0)` also checks `phi(A) ♯_t phi(B) <= phi(A ♯_t B)`.
pub fn geometric_mean(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    phi: &PositiveLinearMap,
    bounds: SpectrumBound,
    t: f64,
    opts: &Options,
) -> Result<ChainReport> {
    require_negative(t, "geometric-mean chain")?;
    MeanParams::new(t, bounds)?;
    let g = make_family(Family::GeomEnvelope { t }, bounds)?;
    let k = kantorovich(bounds, t)?;
    let mu = mu_constant(&ScalarFunction::power(t), bounds)?;
    let phi_a = apply_map(phi, a)?;
    let phi_b = apply_map(phi, b)?;
    let phi_mean = apply_map(phi, &geometric_t(a, b, t)?)?;
    let phi_sigma = apply_map(phi, &sigma_f(a, b, &g, bounds)?)?;
    let mean_of_images = geometric_t(&phi_a, &phi_b, t)?;
    let terms = vec![
        Term::new("(1/K) phi(A ♯_t B)", phi_mean.scale(1.0 / k)),
        Term::new("(1/K) phi(A σ_g B)", phi_sigma.scale(1.0 / k)),
        Term::new("phi(A) ♯_t phi(B)", mean_of_images.clone()),
        Term::new("phi(A) σ_g phi(B)", sigma_f(&phi_a, &phi_b, &g, bounds)?),
        Term::new("K phi(A ♯_t B)", phi_mean.scale(k)),
    ];
    let mut constants = ConstantSet::new();
    constants.insert("K", k, "kantorovich");
    constants.insert("mu", mu, "mu_constant");
    let chain = verify_chain("geometric mean", terms, opts.rtol)?;

    let mut side = Vec::new();
    if t >= -1.0 {
        side.push(verify_chain(
            "phi(A) ♯_t phi(B) <= phi(A ♯_t B)",
            vec![
                Term::new("phi(A) ♯_t phi(B)", mean_of_images),
                Term::new("phi(A ♯_t B)", phi_mean),
            ],
            opts.rtol,
        )?);
    }
    let label = format!("power:{t}");
    let mut r = report(ResultId::GeometricMean, vec![chain], constants, digest(&label, a, phi));
    r.side_checks = side;
    r.scalar_checks.push(ScalarCheck::new("K(m, M, t) = mu(x^t)", k, mu, IDENTITY_RTOL));
    Ok(r)
}

/// Harmonic-mean chain, `t < 0`, `m >= 1`, with the constant `H(m, M, t)`.
pub fn harmonic_mean(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    phi: &PositiveLinearMap,
    bounds: SpectrumBound,
    t: f64,
    opts: &Options,
) -> Result<ChainReport> {
    require_negative(t, "harmonic-mean chain")?;
    MeanParams::harmonic(t, bounds)?;
    let f = make_family(Family::HarmonicResolvent { t }, bounds)?;
    let g = make_family(Family::Envelope(&f), bounds)?;
    let h = harmonic_h(bounds, t)?;
    let mu = mu_constant(&f, bounds)?;
    let phi_a = apply_map(phi, a)?;
    let phi_b = apply_map(phi, b)?;
    let phi_mean = apply_map(phi, &harmonic_t(a, b, t)?)?;
    let phi_sigma = apply_map(phi, &sigma_f(a, b, &g, bounds)?)?;
    let terms = vec![
        Term::new("(1/H) phi(A !_t B)", phi_mean.scale(1.0 / h)),
        Term::new("(1/H) phi(A σ_g B)", phi_sigma.scale(1.0 / h)),
        Term::new("phi(A) !_t phi(B)", harmonic_t(&phi_a, &phi_b, t)?),
        Term::new("phi(A) σ_g phi(B)", sigma_f(&phi_a, &phi_b, &g, bounds)?),
        Term::new("H phi(A !_t B)", phi_mean.scale(h)),
    ];
    let mut constants = ConstantSet::new();
    insert_secant(&mut constants, &f, bounds)?;
    constants.insert("H", h, "harmonic_h");
    constants.insert("mu", mu, "mu_constant");
    let chain = verify_chain("harmonic mean", terms, opts.rtol)?;
    let mut r = report(ResultId::HarmonicMean, vec![chain], constants, digest(f.label(), a, phi));
    r.scalar_checks.push(ScalarCheck::new("H(m, M, t) = mu(resolvent)", h, mu, IDENTITY_RTOL));
    Ok(r)
}

fn curvature_direction(f: &ScalarFunction) -> Result<bool> {
    match f.tags().curvature {
        Curvature::Convex | Curvature::Affine => Ok(true),
        Curvature::Concave => Ok(false),
        Curvature::Unknown => Err(Error::InvalidParams(format!(
            "`{}` must be tagged convex or concave",
            f.label()
        ))),
    }
}

/// `phi(f(A)) <= alpha f(phi(A)) + beta` and `f(phi(A)) <= alpha phi(f(A)) + beta`
/// for convex monotone `f`; both reversed for concave `f`.
pub fn mond_pecaric(
    f: &ScalarFunction,
    a: &HermitianMatrix,
    phi: &PositiveLinearMap,
    bounds: SpectrumBound,
    opts: &Options,
) -> Result<ChainReport> {
    require_normalized(phi)?;
    let convex = curvature_direction(f)?;
    let t0 = opts.t0.unwrap_or(bounds.midpoint());
    let ab = alpha_beta(f, bounds, t0)?;
    let phi_fa = apply_map(phi, &apply_function(f, a, bounds)?)?;
    let f_pa = apply_function(f, &apply_map(phi, a)?, bounds)?;
    let first = [
        Term::new("phi(f(A))", phi_fa.clone()),
        Term::new("alpha f(phi(A)) + beta", affine(&f_pa, ab.alpha, ab.beta)),
    ];
    let second = [
        Term::new("f(phi(A))", f_pa),
        Term::new("alpha phi(f(A)) + beta", affine(&phi_fa, ab.alpha, ab.beta)),
    ];
    let ordered = |pair: [Term; 2]| {
        let mut v = pair.to_vec();
        if !convex {
            v.reverse();
        }
        v
    };
    let suffix = if convex { "" } else { " (reversed, concave f)" };
    let chains = vec![
        verify_chain(format!("phi(f(A)) vs f(phi(A)){suffix}"), ordered(first), opts.rtol)?,
        verify_chain(format!("f(phi(A)) vs phi(f(A)){suffix}"), ordered(second), opts.rtol)?,
    ];
    let mut constants = ConstantSet::new();
    insert_secant(&mut constants, f, bounds)?;
    insert_alpha_beta(&mut constants, "", &ab, "alpha_beta");
    Ok(report(ResultId::MondPecaric, chains, constants, digest(f.label(), a, phi)))
}

/// `phi(A^{-1}) <= phi(A)^{-1} + (1/sqrt(m) - 1/sqrt(M))^2` and
/// `phi(A^{-1}) <= (M+m)^2/(4mM) phi(A)^{-1}`, with the constants produced
/// by `alpha_beta` at `sqrt(mM)` and `(m+M)/2`.
pub fn inverse_reverse(
    a: &HermitianMatrix,
    phi: &PositiveLinearMap,
    bounds: SpectrumBound,
    opts: &Options,
) -> Result<ChainReport> {
    require_normalized(phi)?;
    let f = make_family(Family::Power { exponent: -1.0 }, bounds)?;
    let (m, big_m) = (bounds.lower(), bounds.upper());
    let additive = alpha_beta(&f, bounds, bounds.geometric_midpoint())?;
    let multiplicative = alpha_beta(&f, bounds, bounds.midpoint())?;
    let phi_inv = apply_map(phi, &apply_function(&f, a, bounds)?)?;
    let inv_phi = apply_function(&f, &apply_map(phi, a)?, bounds)?;
    let chains = vec![
        verify_chain(
            "additive",
            vec![
                Term::new("phi(A^-1)", phi_inv.clone()),
                Term::new(
                    "phi(A)^-1 + (1/sqrt(m) - 1/sqrt(M))^2",
                    affine(&inv_phi, additive.alpha, additive.beta),
                ),
            ],
            opts.rtol,
        )?,
        verify_chain(
            "multiplicative",
            vec![
                Term::new("phi(A^-1)", phi_inv),
                Term::new(
                    "(M+m)^2/(4mM) phi(A)^-1",
                    affine(&inv_phi, multiplicative.alpha, multiplicative.beta),
                ),
            ],
            opts.rtol,
        )?,
    ];
    let mut constants = ConstantSet::new();
    insert_alpha_beta(&mut constants, "_add", &additive, "alpha_beta at sqrt(mM)");
    insert_alpha_beta(&mut constants, "_mul", &multiplicative, "alpha_beta at (m+M)/2");
    let mut r = report(ResultId::InverseReverse, chains, constants, digest(f.label(), a, phi));
    let gap = (1.0 / m.sqrt() - 1.0 / big_m.sqrt()).powi(2);
    let kant = (big_m + m).powi(2) / (4.0 * m * big_m);
    r.scalar_checks = vec![
        ScalarCheck::new("alpha at sqrt(mM) = 1", additive.alpha, 1.0, 1e-12),
        ScalarCheck::new("beta at sqrt(mM) = (1/sqrt(m) - 1/sqrt(M))^2", additive.beta, gap, 1e-12),
        ScalarCheck::new("alpha at (m+M)/2 = (M+m)^2/(4mM)", multiplicative.alpha, kant, 1e-12),
        ScalarCheck::new("beta at (m+M)/2 = 0", multiplicative.beta, 0.0, 1e-12),
    ];
    Ok(r)
}

/// Constants `alpha_1`, `beta_1` of `h_1(x) = x^{1/(M-m)}` on the interval
/// spanned by `f(m)^{M-m}` and `f(M)^{M-m}`. A degenerate interval (equal
/// endpoint values) makes `h_1` exact there: `alpha_1 = 1`, `beta_1 = 0`.
fn root_constants(
    f: &ScalarFunction,
    bounds: SpectrumBound,
    t1: Option<f64>,
) -> Result<(AlphaBeta, Option<SpectrumBound>)> {
    let w = bounds.width();
    let lo_val = endpoint_value(f, bounds.lower())?.powf(w);
    let hi_val = endpoint_value(f, bounds.upper())?.powf(w);
    let (lo, hi) = (lo_val.min(hi_val), lo_val.max(hi_val));
    if hi - lo <= 1e-14 * hi {
        let t1 = t1.unwrap_or(lo);
        return Ok((
            AlphaBeta {
                alpha: 1.0,
                beta: 0.0,
                t0: t1,
            },
            None,
        ));
    }
    let root_bounds = SpectrumBound::new(lo, hi)?;
    let h1 = make_family(Family::EnvelopeRoot, bounds)?;
    let t1 = match t1 {
        Some(t) => t,
        None => solve_t0_alpha_one(&h1, root_bounds)?,
    };
    Ok((alpha_beta(&h1, root_bounds, t1)?, Some(root_bounds)))
}

fn root_power(x: &HermitianMatrix, bounds: SpectrumBound) -> Result<HermitianMatrix> {
    apply_on_domain(&ScalarFunction::power(1.0 / bounds.width()), x)
}

/// Shared first three terms of the envelope reverse chains:
/// `f(phi(A)) <= h(phi(A)) <= alpha phi(h(A)) + beta`, plus `phi(f(A))` and
/// `phi(ĥ(A))` for the closing terms.
struct ReverseParts {
    terms: Vec<Term>,
    phi_fa: HermitianMatrix,
    phi_hat: HermitianMatrix,
    ab: AlphaBeta,
}

fn reverse_parts(
    f: &ScalarFunction,
    a: &HermitianMatrix,
    phi: &PositiveLinearMap,
    bounds: SpectrumBound,
    t0: Option<f64>,
) -> Result<ReverseParts> {
    require_normalized(phi)?;
    require_log_convex(f, bounds)?;
    let h = make_family(Family::Envelope(f), bounds)?;
    let hat = make_family(Family::EnvelopeProduct(f), bounds)?;
    let ab = tangent_constants(&h, bounds, t0.unwrap_or(bounds.midpoint()))?;
    let at_a = apply_functions(&[f, &h, &hat], a, bounds)?;
    let pa = apply_map(phi, a)?;
    let at_pa = apply_functions(&[f, &h], &pa, bounds)?;
    let phi_ha = apply_map(phi, &at_a[1])?;
    Ok(ReverseParts {
        terms: vec![
            Term::new("f(phi(A))", at_pa[0].clone()),
            Term::new("h(phi(A))", at_pa[1].clone()),
            Term::new("alpha phi(h(A)) + beta", affine(&phi_ha, ab.alpha, ab.beta)),
        ],
        phi_fa: apply_map(phi, &at_a[0])?,
        phi_hat: apply_map(phi, &at_a[2])?,
        ab,
    })
}

/// `f(phi(A)) <= h(phi(A)) <= alpha phi(h(A)) + beta <= closing term`, where
/// the closing term uses the operator concavity of `x^{1/(M-m)}` when
/// `M - m >= 1` and the constants `alpha_1`, `beta_1` otherwise.
pub fn envelope_reverse(
    f: &ScalarFunction,
    a: &HermitianMatrix,
    phi: &PositiveLinearMap,
    bounds: SpectrumBound,
    opts: &Options,
) -> Result<ChainReport> {
    let parts = reverse_parts(f, a, phi, bounds, opts.t0)?;
    let ReverseParts {
        mut terms, phi_hat, ab, ..
    } = parts;
    let root = root_power(&phi_hat, bounds)?;
    let mut constants = ConstantSet::new();
    insert_alpha_beta(&mut constants, "", &ab, "alpha_beta of h");
    let label = if bounds.width() >= 1.0 {
        terms.push(Term::new(
            "alpha phi(ĥ(A))^(1/(M-m)) + beta",
            affine(&root, ab.alpha, ab.beta),
        ));
        "envelope reverse, M - m >= 1"
    } else {
        let (ab1, _) = root_constants(f, bounds, opts.t1)?;
        insert_alpha_beta(&mut constants, "_1", &ab1, "alpha_beta of x^(1/(M-m))");
        let closing = affine(&affine(&root, ab1.alpha, ab1.beta), ab.alpha, ab.beta);
        terms.push(Term::new(
            "alpha alpha_1 phi(ĥ(A))^(1/(M-m)) + alpha beta_1 + beta",
            closing,
        ));
        "envelope reverse, M - m < 1"
    };
    let chain = verify_chain(label, terms, opts.rtol)?;
    Ok(report(ResultId::EnvelopeReverse, vec![chain], constants, digest(f.label(), a, phi)))
}

/// `f(phi(A)) <= h(phi(A)) <= alpha phi(h(A)) + beta <= alpha mu phi(f(A)) + beta`.
pub fn envelope_reverse_mu(
    f: &ScalarFunction,
    a: &HermitianMatrix,
    phi: &PositiveLinearMap,
    bounds: SpectrumBound,
    opts: &Options,
) -> Result<ChainReport> {
    let ReverseParts {
        mut terms, phi_fa, ab, ..
    } = reverse_parts(f, a, phi, bounds, opts.t0)?;
    let mu = mu_constant(f, bounds)?;
    terms.push(Term::new(
        "alpha mu phi(f(A)) + beta",
        affine(&phi_fa, ab.alpha * mu, ab.beta),
    ));
    let mut constants = ConstantSet::new();
    insert_alpha_beta(&mut constants, "", &ab, "alpha_beta of h");
    constants.insert("mu", mu, "mu_constant");
    let chain = verify_chain("envelope reverse with mu", terms, opts.rtol)?;
    Ok(report(ResultId::EnvelopeReverseMu, vec![chain], constants, digest(f.label(), a, phi)))
}

/// Chain through `ĥ(t) = f(M)^{t-m} f(m)^{M-t}` and the power `1/(M-m)`:
/// `phi(f(A)) <= phi(ĥ(A))^p <= (α̂ ĥ(phi(A)) + β̂)^p` for `M - m >= 1`, and
/// the same with `alpha_1 (.)^p + beta_1` for `M - m < 1`.
pub fn envelope_power(
    f: &ScalarFunction,
    a: &HermitianMatrix,
    phi: &PositiveLinearMap,
    bounds: SpectrumBound,
    opts: &Options,
) -> Result<ChainReport> {
    require_normalized(phi)?;
    require_log_convex(f, bounds)?;
    let hat = make_family(Family::EnvelopeProduct(f), bounds)?;
    let ab = tangent_constants(&hat, bounds, opts.t0.unwrap_or(bounds.midpoint()))?;
    let at_a = apply_functions(&[f, &hat], a, bounds)?;
    let phi_fa = apply_map(phi, &at_a[0])?;
    let phi_hat = apply_map(phi, &at_a[1])?;
    let hat_pa = apply_function(&hat, &apply_map(phi, a)?, bounds)?;
    let root_x = root_power(&phi_hat, bounds)?;
    let root_y = root_power(&affine(&hat_pa, ab.alpha, ab.beta), bounds)?;

    let mut constants = ConstantSet::new();
    insert_alpha_beta(&mut constants, "_hat", &ab, "alpha_beta of ĥ");
    let (label, terms) = if bounds.width() >= 1.0 {
        (
            "envelope power, M - m >= 1",
            vec![
                Term::new("phi(f(A))", phi_fa),
                Term::new("phi(ĥ(A))^(1/(M-m))", root_x),
                Term::new("(α̂ ĥ(phi(A)) + β̂)^(1/(M-m))", root_y),
            ],
        )
    } else {
        let (ab1, _) = root_constants(f, bounds, opts.t1)?;
        insert_alpha_beta(&mut constants, "_1", &ab1, "alpha_beta of x^(1/(M-m))");
        (
            "envelope power, M - m < 1",
            vec![
                Term::new("phi(f(A))", phi_fa),
                Term::new("alpha_1 phi(ĥ(A))^(1/(M-m)) + beta_1", affine(&root_x, ab1.alpha, ab1.beta)),
                Term::new(
                    "alpha_1 (α̂ ĥ(phi(A)) + β̂)^(1/(M-m)) + beta_1",
                    affine(&root_y, ab1.alpha, ab1.beta),
                ),
            ],
        )
    };
    let chain = verify_chain(label, terms, opts.rtol)?;
    Ok(report(ResultId::EnvelopePower, vec![chain], constants, digest(f.label(), a, phi)))
}

/// Lower bounds from `k(t) = exp[(f'(t0)/f(t0)) (t - t0)]`:
/// `phi(f(A)) >= (f(t0)/alpha) k(phi(A)) - (beta/alpha) f(t0)` and
/// `f(phi(A)) >= (f(t0)/alpha) phi(k(A)) - (beta/alpha) f(t0)`, with
/// `alpha = alpha(k, t1)`, `beta = beta(k, t1)`.
pub fn exponential_lower(
    f: &ScalarFunction,
    a: &HermitianMatrix,
    phi: &PositiveLinearMap,
    bounds: SpectrumBound,
    opts: &Options,
) -> Result<ChainReport> {
    require_normalized(phi)?;
    require_log_convex(f, bounds)?;
    let t0 = opts.t0.unwrap_or(bounds.midpoint());
    let f0 = f.value(t0)?;
    let k = make_family(Family::TangentExponential { f, t0 }, bounds)?;
    let t1 = match opts.t1 {
        Some(t) => t,
        None if k.tags().monotone == Monotone::Constant => bounds.midpoint(),
        None => solve_t0_alpha_one(&k, bounds)?,
    };
    let ab = tangent_constants(&k, bounds, t1)?;
    let at_a = apply_functions(&[f, &k], a, bounds)?;
    let pa = apply_map(phi, a)?;
    let at_pa = apply_functions(&[f, &k], &pa, bounds)?;
    let scale = f0 / ab.alpha;
    let shift = -ab.beta / ab.alpha * f0;
    let chains = vec![
        verify_chain(
            "lower bound for phi(f(A))",
            vec![
                Term::new("(f(t0)/alpha) k(phi(A)) - (beta/alpha) f(t0)", affine(&at_pa[1], scale, shift)),
                Term::new("phi(f(A))", apply_map(phi, &at_a[0])?),
            ],
            opts.rtol,
        )?,
        verify_chain(
            "lower bound for f(phi(A))",
            vec![
                Term::new(
                    "(f(t0)/alpha) phi(k(A)) - (beta/alpha) f(t0)",
                    affine(&apply_map(phi, &at_a[1])?, scale, shift),
                ),
                Term::new("f(phi(A))", at_pa[0].clone()),
            ],
            opts.rtol,
        )?,
    ];
    let mut constants = ConstantSet::new();
    constants.insert("t0", t0, "tangent point of k");
    constants.insert("f(t0)", f0, "f");
    insert_alpha_beta(&mut constants, "_k", &ab, "alpha_beta of k");
    Ok(report(ResultId::ExponentialLower, chains, constants, digest(f.label(), a, phi)))
}

/// Refinement constant `C = (f(m) + f(M))/2 - f((m + M)/2)`.
fn refinement_constant(f: &ScalarFunction, bounds: SpectrumBound) -> Result<f64> {
    let fm = endpoint_value(f, bounds.lower())?;
    let fbig = endpoint_value(f, bounds.upper())?;
    Ok(0.5 * (fm + fbig) - f.value(bounds.midpoint())?)
}

/// `A_min = (C/(M-m)) ((M-m) I - |(M+m) I - 2A|)`, the functional calculus of
/// `t -> (2 min{t-m, M-t}/(M-m)) C`.
pub fn a_min_operator(
    f: &ScalarFunction,
    a: &HermitianMatrix,
    bounds: SpectrumBound,
) -> Result<HermitianMatrix> {
    let c = refinement_constant(f, bounds)?;
    let (m, big_m) = (bounds.lower(), bounds.upper());
    let w = bounds.width();
    let weight = ScalarFunction::new(
        format!("min_part[{}]", f.label()),
        move |t| c / w * (w - (big_m + m - 2.0 * t).abs()),
        move |t| 2.0 * c / w * (big_m + m - 2.0 * t).signum(),
        (f64::NEG_INFINITY, f64::INFINITY),
        Tags {
            curvature: Curvature::Concave,
            log_convex: false,
            monotone: Monotone::Unknown,
            operator_concave: false,
        },
    );
    apply_function(&weight, a, bounds)
}

/// Refined Mond-Pečarić inequalities:
/// `phi(f(A)) + phi(A_min) <= alpha f(phi(A)) + beta`,
/// `f(phi(A)) + (phi(A))_min <= alpha phi(f(A)) + beta`,
/// and the two refined reverse inequalities for `A^{-1}`, both with
/// `phi(A_min)` on the left.
pub fn refined_mond_pecaric(
    f: &ScalarFunction,
    a: &HermitianMatrix,
    phi: &PositiveLinearMap,
    bounds: SpectrumBound,
    opts: &Options,
) -> Result<ChainReport> {
    require_normalized(phi)?;
    if !f.tags().is_convex() {
        return Err(Error::InvalidParams(format!(
            "refinement needs convex f, `{}` is not tagged convex",
            f.label()
        )));
    }
    let t0 = opts.t0.unwrap_or(bounds.midpoint());
    let ab = alpha_beta(f, bounds, t0)?;
    let inv = make_family(Family::Power { exponent: -1.0 }, bounds)?;
    let additive = alpha_beta(&inv, bounds, bounds.geometric_midpoint())?;
    let multiplicative = alpha_beta(&inv, bounds, bounds.midpoint())?;

    let at_a = apply_functions(&[f, &inv], a, bounds)?;
    let pa = apply_map(phi, a)?;
    let at_pa = apply_functions(&[f, &inv], &pa, bounds)?;
    let phi_fa = apply_map(phi, &at_a[0])?;
    let phi_inv = apply_map(phi, &at_a[1])?;
    let phi_amin = apply_map(phi, &a_min_operator(f, a, bounds)?)?;
    let pa_min = a_min_operator(f, &pa, bounds)?;
    let phi_inv_amin = apply_map(phi, &a_min_operator(&inv, a, bounds)?)?;

    let lhs1 = &phi_fa + &phi_amin;
    let lhs2 = &at_pa[0] + &pa_min;
    let lhs3 = &phi_inv + &phi_inv_amin;
    let chains = vec![
        verify_chain(
            "refined phi(f(A)) bound",
            vec![
                Term::new("phi(f(A)) + phi(A_min)", lhs1.clone()),
                Term::new("alpha f(phi(A)) + beta", affine(&at_pa[0], ab.alpha, ab.beta)),
            ],
            opts.rtol,
        )?,
        verify_chain(
            "refined f(phi(A)) bound",
            vec![
                Term::new("f(phi(A)) + (phi(A))_min", lhs2.clone()),
                Term::new("alpha phi(f(A)) + beta", affine(&phi_fa, ab.alpha, ab.beta)),
            ],
            opts.rtol,
        )?,
        verify_chain(
            "refined additive inverse bound",
            vec![
                Term::new("phi(A^-1) + phi(A_min)", lhs3.clone()),
                Term::new(
                    "phi(A)^-1 + (1/sqrt(m) - 1/sqrt(M))^2",
                    affine(&at_pa[1], additive.alpha, additive.beta),
                ),
            ],
            opts.rtol,
        )?,
        verify_chain(
            "refined multiplicative inverse bound",
            vec![
                Term::new("phi(A^-1) + phi(A_min)", lhs3.clone()),
                Term::new(
                    "(M+m)^2/(4mM) phi(A)^-1",
                    affine(&at_pa[1], multiplicative.alpha, multiplicative.beta),
                ),
            ],
            opts.rtol,
        )?,
    ];
    let side_checks = vec![
        verify_chain(
            "refinement of phi(f(A))",
            vec![Term::new("phi(f(A))", phi_fa), Term::new("phi(f(A)) + phi(A_min)", lhs1)],
            opts.rtol,
        )?,
        verify_chain(
            "refinement of f(phi(A))",
            vec![
                Term::new("f(phi(A))", at_pa[0].clone()),
                Term::new("f(phi(A)) + (phi(A))_min", lhs2),
            ],
            opts.rtol,
        )?,
        verify_chain(
            "refinement of phi(A^-1)",
            vec![Term::new("phi(A^-1)", phi_inv), Term::new("phi(A^-1) + phi(A_min)", lhs3)],
            opts.rtol,
        )?,
    ];

    let mut constants = ConstantSet::new();
    insert_secant(&mut constants, f, bounds)?;
    insert_alpha_beta(&mut constants, "", &ab, "alpha_beta");
    insert_alpha_beta(&mut constants, "_add", &additive, "alpha_beta of 1/t at sqrt(mM)");
    insert_alpha_beta(&mut constants, "_mul", &multiplicative, "alpha_beta of 1/t at (m+M)/2");
    constants.insert("C", refinement_constant(f, bounds)?, "refinement constant");
    let mut r = report(ResultId::RefinedMondPecaric, chains, constants, digest(f.label(), a, phi));
    r.side_checks = side_checks;
    Ok(r)
}
