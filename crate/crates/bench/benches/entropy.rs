use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use jordan_entropy::element::AlgebraDescriptor;
use jordan_entropy::harness::quadrature::{quad_integral_s, QuadratureConfig};
use jordan_entropy::harness::sample::{random_positive_with, trial_rng};
use jordan_entropy::harness::{verify, CampaignConfig};
use jordan_entropy::means::{bound_expr, rel_entropy, tsallis, BoundKind, EntropyParams};

fn formulas(c: &mut Criterion) {
    let mut group = c.benchmark_group("entropy");
    for alg in [AlgebraDescriptor::sym(6), AlgebraDescriptor::spin(4), AlgebraDescriptor::albert()] {
        let mut rng = trial_rng(3, "bench", 0);
        let a = random_positive_with(&mut rng, alg, 100.0).unwrap();
        let b = random_positive_with(&mut rng, alg, 100.0).unwrap();
        let params = EntropyParams::new().with_alpha(0.5).with_beta(1.0);
        group.bench_with_input(BenchmarkId::new("S", alg), &(&a, &b), |bch, (a, b)| {
            bch.iter(|| rel_entropy(black_box(a), black_box(b)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("T_0.5", alg), &(&a, &b), |bch, (a, b)| {
            bch.iter(|| tsallis(black_box(a), black_box(b), 0.5).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("bound_V", alg), &(&a, &b), |bch, (a, b)| {
            bch.iter(|| bound_expr(BoundKind::V, black_box(a), black_box(b), &params).unwrap())
        });
    }
    group.finish();
}

fn quadrature(c: &mut Criterion) {
    let alg = AlgebraDescriptor::sym(4);
    let mut rng = trial_rng(4, "bench", 0);
    let a = random_positive_with(&mut rng, alg, 100.0).unwrap();
    let b = random_positive_with(&mut rng, alg, 100.0).unwrap();
    let mut group = c.benchmark_group("quadrature");
    for nodes in [32, 128] {
        let q = QuadratureConfig::legendre(nodes).unwrap();
        group.bench_with_input(BenchmarkId::new("integral_S", nodes), &q, |bch, q| {
            bch.iter(|| quad_integral_s(black_box(&a), black_box(&b), q).unwrap())
        });
    }
    group.finish();
}

fn campaign(c: &mut Criterion) {
    let mut group = c.benchmark_group("campaign");
    group.sample_size(10);
    let mut config = CampaignConfig::new(AlgebraDescriptor::sym(4));
    config.trials = 50;
    config.threads = Some(0);
    group.bench_function("thm4.9i_sym4_50", |bch| bch.iter(|| verify("thm4.9i", black_box(&config)).unwrap()));
    group.finish();
}

criterion_group!(benches, formulas, quadrature, campaign);
criterion_main!(benches);
