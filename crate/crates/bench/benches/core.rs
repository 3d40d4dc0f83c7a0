use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use loewner_core::linalg::random_hermitian_with_spectrum;
use loewner_core::{random_instance, run_instance, spectral_decompose, FamilySpec, MapFamily, ResultId, SpectrumBound};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn decompose(c: &mut Criterion) {
    let bounds = SpectrumBound::new(1.0, 4.0).unwrap();
    let mut group = c.benchmark_group("spectral_decompose");
    for n in [4, 8, 16, 32] {
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
        let a = random_hermitian_with_spectrum(n, bounds, false, &mut rng);
        group.bench_with_input(BenchmarkId::from_parameter(n), &a, |b, a| b.iter(|| spectral_decompose(black_box(a))));
    }
    group.finish();
}

fn chains(c: &mut Criterion) {
    let bounds = SpectrumBound::new(1.0, 4.0).unwrap();
    let mut group = c.benchmark_group("chain");
    for (result, family) in [
        (ResultId::MondPecaric, "power:-1"),
        (ResultId::GeometricMean, "power:-1"),
        (ResultId::RefinedMondPecaric, "exp:1"),
    ] {
        let family: FamilySpec = family.parse().unwrap();
        for n in [2, 8] {
            let inst = random_instance(result, family, bounds, MapFamily::Compression, n, 7);
            group.bench_with_input(BenchmarkId::new(result.as_str(), n), &inst, |b, inst| {
                b.iter(|| run_instance(black_box(inst)).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, decompose, chains);
criterion_main!(benches);
