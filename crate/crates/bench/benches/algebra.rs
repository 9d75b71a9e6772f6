use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use jordan_entropy::element::{jordan_product, quad_map, AlgebraDescriptor};
use jordan_entropy::harness::sample::{random_element_with, random_positive_with, trial_rng};
use jordan_entropy::spectral::{decompose, power};

fn backends() -> Vec<AlgebraDescriptor> {
    vec![
        AlgebraDescriptor::sym(4),
        AlgebraDescriptor::sym(8),
        AlgebraDescriptor::spin(8),
        AlgebraDescriptor::albert(),
    ]
}

fn products(c: &mut Criterion) {
    let mut group = c.benchmark_group("product");
    for alg in backends() {
        let mut rng = trial_rng(1, "bench", 0);
        let x = random_element_with(&mut rng, alg);
        let y = random_element_with(&mut rng, alg);
        group.bench_with_input(BenchmarkId::new("jordan", alg), &(&x, &y), |b, (x, y)| {
            b.iter(|| jordan_product(black_box(x), black_box(y)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("quad_map", alg), &(&x, &y), |b, (x, y)| {
            b.iter(|| quad_map(black_box(x), black_box(y)).unwrap())
        });
    }
    group.finish();
}

fn spectral(c: &mut Criterion) {
    let mut group = c.benchmark_group("spectral");
    for alg in backends() {
        let x = random_positive_with(&mut trial_rng(2, "bench", 0), alg, 100.0).unwrap();
        group.bench_with_input(BenchmarkId::new("decompose", alg), &x, |b, x| {
            b.iter(|| decompose(black_box(x)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("sqrt", alg), &x, |b, x| {
            b.iter(|| power(black_box(x), 0.5).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, products, spectral);
criterion_main!(benches);
