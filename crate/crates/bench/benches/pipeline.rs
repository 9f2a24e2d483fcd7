use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use intensity_core::estimator::{estimate, estimation_window, ThresholdParams};
use intensity_core::experiments::{default_j0, replicate_sample};
use intensity_core::risk::{average_curves, risk_curve};
use intensity_core::{BasisSpec, SignalKind, SignalSpec, Variant};

fn bench_estimate(c: &mut Criterion) {
    let mut group = c.benchmark_group("estimate");
    for (name, basis) in [("haar", BasisSpec::haar()), ("spline15", BasisSpec::spline15())] {
        let signal = SignalSpec::new(SignalKind::Bumps);
        for n in [1024u64, 4096] {
            let sample = replicate_sample(&signal, n, 1, 0).unwrap();
            let window = estimation_window(signal.support(), &sample).unwrap();
            let params = ThresholdParams::new(1.0, n, default_j0(n), Variant::Simulation, window).unwrap();
            group.bench_with_input(BenchmarkId::new(name, n), &sample, |b, s| {
                b.iter(|| estimate(black_box(s), &basis, &params).unwrap())
            });
        }
    }
    group.finish();
}

fn bench_risk_curve(c: &mut Criterion) {
    let basis = BasisSpec::haar();
    let signal = SignalSpec::new(SignalKind::Haar1);
    let mut group = c.benchmark_group("risk_curve");
    for n in [1024u64, 4096] {
        let sample = replicate_sample(&signal, n, 2, 0).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &sample, |b, s| {
            b.iter(|| risk_curve(black_box(s), &signal, &basis, n, default_j0(n)).unwrap())
        });
    }
    group.finish();
}

fn bench_average(c: &mut Criterion) {
    let basis = BasisSpec::haar();
    let signal = SignalSpec::new(SignalKind::Blocks);
    let curves: Vec<_> = (0..100)
        .map(|r| {
            let s = replicate_sample(&signal, 1024, 3, r).unwrap();
            risk_curve(&s, &signal, &basis, 1024, 10).unwrap()
        })
        .collect();
    c.bench_function("average_curves/100x1024", |b| b.iter(|| average_curves(black_box(&curves)).unwrap()));
}

fn bench_sampling(c: &mut Criterion) {
    let mut group = c.benchmark_group("sample_points");
    for kind in [SignalKind::Haar2, SignalKind::Gauss2, SignalKind::Bumps] {
        let signal = SignalSpec::new(kind);
        group.bench_function(signal.name(), |b| {
            let mut r = 0;
            b.iter(|| {
                r += 1;
                replicate_sample(&signal, 4096, 4, r).unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, bench_estimate, bench_risk_curve, bench_average, bench_sampling);
criterion_main!(benches);
