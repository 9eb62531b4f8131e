use std::hint::black_box;

use bingham_core::inference::{run_exchange, ChainConfig, PriorSpec};
use bingham_core::model::{LambdaVector, SufficientStats};
use bingham_core::samplers::{tune_b, BinghamSampler, RngState};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};

fn lam(v: &[f64]) -> LambdaVector {
    LambdaVector::new(v.to_vec()).unwrap()
}

fn rejection_sampler(c: &mut Criterion) {
    let mut group = c.benchmark_group("bingham_sample");
    let n = 1000;
    group.throughput(Throughput::Elements(n as u64));
    for l in [[0.0, 0.0], [0.588, 0.421], [25.31, 0.762]] {
        let l = lam(&l);
        let mut sampler = BinghamSampler::with_b(&l, 1.0).unwrap();
        let mut rng = RngState::new(1, 0);
        group.bench_with_input(BenchmarkId::from_parameter(format!("{:?}", l.as_slice())), &n, |b, &n| {
            b.iter(|| sampler.sample_stats(black_box(n), &mut rng).unwrap())
        });
    }
    group.finish();
}

fn exchange_iterations(c: &mut Criterion) {
    let mut group = c.benchmark_group("exchange_chain");
    group.sample_size(10);
    let iters = 10_000;
    group.throughput(Throughput::Elements(iters as u64));
    let prior = PriorSpec::new(vec![0.01, 0.01]).unwrap();
    for (name, taus) in [("dataset1", [0.30, 0.32]), ("dataset2", [0.02, 0.40])] {
        let stats = SufficientStats::new(100, taus.to_vec()).unwrap();
        let cfg = ChainConfig::new(iters, 1);
        group.bench_function(name, |b| b.iter(|| run_exchange(&stats, &prior, black_box(&cfg)).unwrap()));
    }
    group.finish();
}

fn envelope_tuning(c: &mut Criterion) {
    let l = lam(&[25.31, 0.762]);
    c.bench_function("tune_b", |b| b.iter(|| tune_b(black_box(&l))));
}

criterion_group!(benches, rejection_sampler, exchange_iterations, envelope_tuning);
criterion_main!(benches);
