use std::hint::black_box;

use cliffact::commuting::{verify_bracket_table, CommutingAction};
use cliffact::linalg::{expm, kron};
use cliffact::spectral::{build_pati_salam, check_order_conditions, RealStructureVariant};
use cliffact::{CliffordModule, ComplexMatrix, Signature, C64};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn irreps(c: &mut Criterion) {
    let mut group = c.benchmark_group("build_irrep");
    for (p, q) in [(2, 0), (4, 0), (0, 6), (0, 7), (3, 4)] {
        let sig = Signature::new(p, q);
        group.bench_with_input(BenchmarkId::from_parameter(sig), &sig, |b, &sig| {
            b.iter(|| CliffordModule::build_irrep(black_box(sig), 1))
        });
    }
    group.finish();
}

fn dense_kernels(c: &mut Criterion) {
    let a = ComplexMatrix::from_fn(4, |i, j| {
        C64::new((i + 2 * j) as f64 * 0.1, i as f64 * 0.05)
    });
    let b = ComplexMatrix::from_fn(8, |i, j| C64::new(0.02 * (i * j) as f64, -0.03 * j as f64));
    c.bench_function("kron 4x8", |bench| {
        bench.iter(|| kron(black_box(&a), black_box(&b)))
    });
    let x = kron(&a, &b).scale_re(0.1);
    c.bench_function("expm 32", |bench| {
        bench.iter(|| expm(black_box(&x)).unwrap())
    });
}

fn product_brackets(c: &mut Criterion) {
    let ca = CommutingAction::build(Signature::new(4, 0), 1, Signature::new(0, 6), 1);
    c.bench_function("bracket table (4,0)x(0,6)", |b| {
        b.iter(|| verify_bracket_table(black_box(&ca)))
    });
}

fn spectral(c: &mut Criterion) {
    c.bench_function("build pati-salam", |b| {
        b.iter(|| build_pati_salam(black_box(RealStructureVariant::HattedSecond)))
    });
    let t = build_pati_salam(RealStructureVariant::HattedSecond);
    let diracs = vec![t.dirac([1.0, 0.0, 0.0, 0.0])];
    c.bench_function("order conditions x10", |b| {
        b.iter(|| {
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            check_order_conditions(&t, &diracs, 10, &mut rng)
        })
    });
}

criterion_group!(benches, irreps, dense_kernels, product_brackets, spectral);
criterion_main!(benches);
