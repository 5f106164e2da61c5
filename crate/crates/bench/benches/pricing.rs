use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use shotnoise::{
    a_shot, a_shot_substituted, common_greeks, jump_greeks, mc_option_price, price, Backend, QuadratureSpec, SimConfig,
};
use shotnoise_bench::{reference_jump_diffusion, reference_option, reference_rates};

fn option_prices(c: &mut Criterion) {
    let quad = QuadratureSpec::default();
    let mut group = c.benchmark_group("price");
    for (label, (terms, model)) in [("pure_jump", reference_option()), ("jump_diffusion", reference_jump_diffusion())] {
        for backend in [Backend::Series, Backend::Fourier] {
            group.bench_with_input(BenchmarkId::new(backend.name(), label), &(terms, model), |b, (t, m)| {
                b.iter(|| price(black_box(t), black_box(m), backend, &quad))
            });
        }
    }
    group.finish();
}

fn greeks(c: &mut Criterion) {
    let quad = QuadratureSpec::default();
    let (terms, model) = reference_jump_diffusion();
    c.bench_function("greeks/common", |b| {
        b.iter(|| common_greeks(black_box(&terms), black_box(&model), Backend::Series, &quad))
    });
    c.bench_function("greeks/jump", |b| b.iter(|| jump_greeks(black_box(&terms), black_box(&model), &quad)));
}

fn bond_coefficients(c: &mut Criterion) {
    let quad = QuadratureSpec::default();
    let model = reference_rates();
    let mut group = c.benchmark_group("a_shot");
    for tenor in [1.0, 10.0] {
        group.bench_with_input(BenchmarkId::new("direct", tenor), &tenor, |b, &t| {
            b.iter(|| a_shot(black_box(&model), 0.0, t, &quad))
        });
        group.bench_with_input(BenchmarkId::new("substituted", tenor), &tenor, |b, &t| {
            b.iter(|| a_shot_substituted(black_box(&model), 0.0, t, &quad))
        });
    }
    group.finish();
}

fn monte_carlo(c: &mut Criterion) {
    let (terms, model) = reference_jump_diffusion();
    let sim = SimConfig::new(100_000, 1, true).expect("valid simulation");
    let mut group = c.benchmark_group("monte_carlo");
    group.sample_size(10);
    group.bench_function("option_1e5", |b| b.iter(|| mc_option_price(black_box(&terms), black_box(&model), &sim)));
    group.finish();
}

criterion_group!(benches, option_prices, greeks, bond_coefficients, monte_carlo);
criterion_main!(benches);
