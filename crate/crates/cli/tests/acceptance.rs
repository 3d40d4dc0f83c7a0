//! One PASS/FAIL line per acceptance criterion. Runs as a plain binary so
//! the lines are always printed.

use std::collections::BTreeSet;
use std::process::ExitCode;

use loewner_core::chains::a_min_operator;
use loewner_core::linalg::{
    map_spectrum, random_hermitian_with_spectrum, random_pair_relative_bounds, sqrt_and_inv_sqrt,
};
use loewner_core::means::{delta, geometric_t, sigma_f};
use loewner_core::scalar::{harmonic_h, harmonic_h_limit, kantorovich, make_family, mu_constant, Family};
use loewner_core::{spectral_decompose, FamilySpec, HermitianMatrix, ResultId, ScalarFunction, SpectrumBound};
use loewner_lab::report::{parse_csv_rows, tallies_from_rows};
use loewner_lab::{emit_report, run_oracle, run_suite, Format, SuiteConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn b(m: f64, big_m: f64) -> SpectrumBound {
    SpectrumBound::new(m, big_m).unwrap()
}

fn rel(x: f64, y: f64) -> f64 {
    (x - y).abs() / y.abs().max(f64::MIN_POSITIVE)
}

fn chain_suites() -> Outcome {
    let config = SuiteConfig::default();
    let report = run_suite(&config).unwrap();
    let mut problems = Vec::new();
    for agg in &report.results {
        let r = agg.result;
        let t = &agg.tally;
        if t.failures > 0 {
            problems.push(format!("{r}: {} non-marginal violations", t.failures));
        }
        let run: Vec<_> = report.trials.iter().filter(|x| x.result == r).collect();
        let families: BTreeSet<_> = run.iter().map(|x| x.family.as_str()).collect();
        let bounds: BTreeSet<_> = run.iter().map(|x| x.bounds.as_str()).collect();
        let maps: BTreeSet<_> = run.iter().map(|x| format!("{:?}", x.map)).collect();
        let dims: BTreeSet<_> = run.iter().map(|x| x.dim).collect();
        // The inverse inequalities are stated for 1/t alone.
        let need_families = if r == ResultId::InverseReverse { 1 } else { 2 };
        if families.len() < need_families || bounds.len() < 2 || maps.len() < 3 || dims != BTreeSet::from([1, 2, 4, 8]) {
            problems.push(format!(
                "{r}: coverage {} families, {} bounds, {} maps, dims {dims:?}",
                families.len(),
                bounds.len(),
                maps.len()
            ));
        }
        let per_cell = run.len() as f64 / (families.len() * bounds.len() * maps.len() * dims.len()) as f64;
        if per_cell < 200.0 * 0.75 {
            problems.push(format!("{r}: only {per_cell:.0} trials per cell"));
        }
    }
    if report.wall_time_secs >= 300.0 {
        problems.push(format!("wall time {:.1}s", report.wall_time_secs));
    }
    let total = report.total();
    let detail = format!(
        "{} trials over {} results, {} pass, {} marginal, {} failures, {:.1}s",
        total.trials,
        report.results.len(),
        total.passes,
        total.marginal,
        total.failures,
        report.wall_time_secs
    );
    if problems.is_empty() {
        outcome(true, detail)
    } else {
        outcome(false, format!("{detail}; {}", problems.join("; ")))
    }
}

fn closed_forms() -> Outcome {
    let mut checks: Vec<(String, f64)> = Vec::new();
    checks.push(("K(1,4,-1) vs 25/16".into(), rel(kantorovich(b(1.0, 4.0), -1.0).unwrap(), 25.0 / 16.0)));
    for (m, big_m) in [(1.0, 2.0), (1.0, 4.0), (2.0, 5.0)] {
        let exact = (big_m + m) * (big_m + m) / (4.0 * m * big_m);
        checks.push((format!("K({m},{big_m},-1)"), rel(kantorovich(b(m, big_m), -1.0).unwrap(), exact)));
        let mu = mu_constant(&ScalarFunction::power(-1.0), b(m, big_m)).unwrap();
        checks.push((format!("mu(1/t) on [{m},{big_m}]"), rel(mu, exact)));
    }
    for t in [-0.5, -1.0, -2.0, -3.0] {
        let mu = mu_constant(&ScalarFunction::power(t), b(1.0, 4.0)).unwrap();
        checks.push((format!("mu(x^{t}) vs K"), rel(mu, kantorovich(b(1.0, 4.0), t).unwrap())));
    }
    checks.push(("H(1.5,4,0)".into(), rel(harmonic_h(b(1.5, 4.0), 0.0).unwrap(), 1.0)));
    let limit = (6f64.sqrt() - 1.0).powi(2) / 1.5;
    let far = (harmonic_h(b(1.5, 4.0), -1e6).unwrap() - limit).abs();
    let limit_formula = rel(harmonic_h_limit(b(1.5, 4.0)).unwrap(), limit);
    let worst = checks.iter().map(|c| c.1).fold(0.0, f64::max);
    let bad: Vec<_> = checks.iter().filter(|c| c.1 > 1e-9).map(|c| c.0.clone()).collect();
    let pass = bad.is_empty() && far < 1e-4 && limit_formula < 1e-9;
    outcome(
        pass,
        format!(
            "{} identities, worst relative error {worst:.1e}; |H(1.5,4,-1e6) - limit| = {far:.1e}{}",
            checks.len(),
            if bad.is_empty() { String::new() } else { format!("; off: {}", bad.join(", ")) }
        ),
    )
}

fn oracle_equivalence() -> Outcome {
    let families: Vec<FamilySpec> = [
        "power:-0.5", "power:-1", "power:-2", "power:-3", "power:0.5", "power:2", "exp:1", "exp:-1", "exp:2",
        "harmonic:-0.5", "harmonic:-1", "harmonic:-2",
    ]
    .iter()
    .map(|s| s.parse().unwrap())
    .collect();
    let config = SuiteConfig {
        functions: families,
        bounds: vec![b(1.0, 4.0), b(1.5, 4.0), b(1.0, 1.6), b(0.5, 2.0), b(2.0, 2.5)],
        ..SuiteConfig::default()
    };
    let reports = run_oracle(&config, loewner_lab::DEFAULT_ORACLE_POINTS).unwrap();
    let covered: BTreeSet<_> = reports.iter().map(|r| r.result).collect();
    let disagreeing: Vec<_> = reports
        .iter()
        .filter(|r| !r.agrees())
        .map(|r| format!("{} {} [{}]", r.result, r.family, r.bounds))
        .collect();
    let points: usize = reports.iter().map(|r| r.points).sum();
    let pass = disagreeing.is_empty() && covered.len() == ResultId::ALL.len();
    outcome(
        pass,
        format!(
            "{} cells, {points} grid points, {} results covered, {} disagreeing cells{}",
            reports.len(),
            covered.len(),
            disagreeing.len(),
            disagreeing.first().map(|d| format!(" (first: {d})")).unwrap_or_default()
        ),
    )
}

fn sharpness() -> Outcome {
    let mut worst_envelope: f64 = 0.0;
    for (fam, (m, big_m)) in [
        ("power:-1", (1.0, 4.0)),
        ("power:-2", (0.5, 2.0)),
        ("exp:1", (1.0, 1.6)),
        ("exp:-2", (1.5, 4.0)),
        ("harmonic:-1", (1.5, 4.0)),
    ] {
        let bounds = b(m, big_m);
        let f = fam.parse::<FamilySpec>().unwrap().build(bounds).unwrap();
        let h = make_family(Family::Envelope(&f), bounds).unwrap();
        for t in [m, big_m] {
            worst_envelope = worst_envelope.max(rel(h.eval(t), f.eval(t)));
        }
    }
    let f = ScalarFunction::power(-1.0);
    let bounds = b(1.0, 4.0);
    let vanishing = a_min_operator(&f, &HermitianMatrix::diagonal(&[1.0, 4.0]), bounds)
        .unwrap()
        .frobenius_norm();
    let mid = a_min_operator(&f, &HermitianMatrix::diagonal(&[2.5]), bounds)
        .unwrap()
        .scalar_value()
        .unwrap();
    let secant_at_mid = 0.5 * (1.0 + 0.25);
    let midpoint_err = rel(1.0 / 2.5 + mid, secant_at_mid);
    let pass = worst_envelope <= 1e-12 && vanishing == 0.0 && midpoint_err <= 1e-12;
    outcome(
        pass,
        format!(
            "envelope endpoint error {worst_envelope:.1e}; |A_min(diag(1,4))| = {vanishing:e}; f(2.5) + A_min vs L(2.5): {midpoint_err:.1e}"
        ),
    )
}

fn typo_regressions() -> Outcome {
    let (m, big_m, t) = (1.0f64, 3.0f64, 1.5f64);
    let true_min = (t - m).min(big_m - t);
    let corrected = (big_m - m - (big_m + m - 2.0 * t).abs()) / 2.0;
    let printed = (big_m - m + (big_m + m - 2.0 * t).abs()) / 2.0;
    let identity_ok = true_min == 0.5 && corrected == 0.5 && printed == 1.5;

    let bounds = b(1.0, 4.0);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut worst, mut printed_misses) = (0.0f64, 0);
    for i in 0..100 {
        let w = [-0.5, -1.0, -2.0, 0.5][i % 4];
        let (a, bm) = random_pair_relative_bounds(3, bounds, &mut rng);
        let sym = sigma_f(&a, &bm, &ScalarFunction::power(w), bounds).unwrap();
        let geo = geometric_t(&a, &bm, w).unwrap();
        let scale = geo.frobenius_norm().max(1.0);
        // Compared through B ♯_{1-t} A so the roots are taken of the other matrix.
        let swapped = geometric_t(&bm, &a, 1.0 - w).unwrap();
        worst = worst.max(sym.distance(&swapped) / scale);
        let (root, inv_root) = sqrt_and_inv_sqrt(&a).unwrap();
        let inner = map_spectrum(&delta(&a, &bm).unwrap(), |x| Ok(x.powf(w))).unwrap();
        let asym = root.as_matrix() * inner.as_matrix() * inv_root.as_matrix();
        if (asym - geo.as_matrix()).norm() > 1e-6 * scale {
            printed_misses += 1;
        }
    }
    outcome(
        identity_ok && worst <= 1e-9 && printed_misses == 100,
        format!(
            "min(t-m, M-t) at (1,3,1.5): corrected {corrected}, printed {printed}; symmetric σ vs ♯_t worst {worst:.1e} on 100 pairs; printed form off on {printed_misses}/100"
        ),
    )
}

fn hygiene() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut worst_residual: f64 = 0.0;
    for _ in 0..200 {
        let n = rng.random_range(1..=16);
        let lo = rng.random_range(-10.0..10.0);
        let bounds = b(lo, lo + rng.random_range(0.01..100.0));
        let a = random_hermitian_with_spectrum(n, bounds, false, &mut rng);
        let d = spectral_decompose(&a);
        let scale = a.frobenius_norm().max(1.0);
        worst_residual = worst_residual.max(d.recompose(&d.eigenvalues).distance(&a) / scale);
    }

    let mut worst_derivative: f64 = 0.0;
    let bounds = b(1.0, 4.0);
    for _ in 0..200 {
        let x = rng.random_range(1.05..3.95);
        let t = rng.random_range(-3.0..-0.1);
        let r = rng.random_range(-2.0..2.0);
        let base = [
            ScalarFunction::power(t),
            ScalarFunction::exp_scaled(r),
            FamilySpec::Harmonic(t).build(bounds).unwrap(),
        ];
        let mut fs = base.to_vec();
        for f in &base {
            fs.push(make_family(Family::Envelope(f), bounds).unwrap());
            fs.push(make_family(Family::EnvelopeProduct(f), bounds).unwrap());
            fs.push(make_family(Family::TangentExponential { f, t0: 2.5 }, bounds).unwrap());
        }
        fs.push(make_family(Family::EnvelopeRoot, bounds).unwrap());
        for f in &fs {
            let h = 1e-5;
            let fd = (f.eval(x + h) - f.eval(x - h)) / (2.0 * h);
            let d = f.deriv(x);
            worst_derivative = worst_derivative.max((fd - d).abs() / d.abs().max(1.0));
        }
    }

    let config = SuiteConfig {
        dims: vec![1, 3],
        trials_per_result: 4,
        ..SuiteConfig::default()
    };
    let emit = || {
        let mut r = run_suite(&config).unwrap();
        r.wall_time_secs = 0.0;
        (emit_report(&r, Format::Json).unwrap(), emit_report(&r, Format::Csv).unwrap(), r)
    };
    let (json1, csv1, report) = emit();
    let (json2, csv2, _) = emit();
    let deterministic = json1 == json2 && csv1 == csv2;
    let csv_tallies = tallies_from_rows(&parse_csv_rows(&csv1).unwrap());
    let round_trip = csv_tallies.len() == report.results.len()
        && report.results.iter().zip(&csv_tallies).all(|(a, (id, t))| a.result == *id && &a.tally == t);

    outcome(
        worst_residual < 1e-10 && worst_derivative < 1e-6 && deterministic && round_trip,
        format!(
            "reconstruction residual {worst_residual:.1e} (scaled); derivative vs central difference {worst_derivative:.1e}; reports byte-identical per seed: {deterministic}; CSV aggregates round-trip: {round_trip}"
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 6] = [
        ("chain suites, zero non-marginal violations at rtol 1e-9", chain_suites),
        ("closed-form constants within 1e-9", closed_forms),
        ("scalar oracle equivalence at n = 1, phi = id", oracle_equivalence),
        ("envelope and refinement sharpness within 1e-12", sharpness),
        ("corrected-formula regressions", typo_regressions),
        ("numerical hygiene and determinism", hygiene),
    ];
    let mut all = true;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        all &= o.pass;
        println!("{} criterion {}: {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
