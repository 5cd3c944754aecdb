//! Rayon-vs-sequential comparison for the batch entry points.
//!
//! With the default `parallel` feature the plain functions fan out over the
//! rayon pool; the `_seq` twins always stay on one thread. Building with
//! `--no-default-features` makes the two bars coincide.

use criterion::{criterion_group, criterion_main, Criterion};
use volsmile::arbitrage::{diagnose, diagnose_seq, DEFAULT_GRID};
use volsmile::pricing::{theta_sweep, theta_sweep_seq, QuadratureConfig};
use volsmile::shorttime::{arithmetic_mean_limit_residual, arithmetic_mean_limit_residual_seq};
use volsmile::smile::{ssvi_surface, Smile, SsviParams};

fn bench_diagnose(c: &mut Criterion) {
    let smile = Smile::ssvi(SsviParams::new(0.25, 3.0, 0.7).unwrap());
    let mut group = c.benchmark_group("diagnose_2001pt_grid");
    group.bench_function("parallel", |b| {
        b.iter(|| diagnose(&smile, &DEFAULT_GRID).unwrap())
    });
    group.bench_function("sequential", |b| {
        b.iter(|| diagnose_seq(&smile, &DEFAULT_GRID).unwrap())
    });
    group.finish();
}

fn bench_theta_sweep(c: &mut Criterion) {
    let thetas: Vec<f64> = (0..32).map(|i| 0.01 * 1.16f64.powi(i)).collect();
    let config = QuadratureConfig::default();
    let mut group = c.benchmark_group("volswap_theta_sweep_32");
    group.bench_function("parallel", |b| {
        b.iter(|| theta_sweep(&thetas, 3.0, 0.7, &config).unwrap())
    });
    group.bench_function("sequential", |b| {
        b.iter(|| theta_sweep_seq(&thetas, 3.0, 0.7, &config).unwrap())
    });
    group.finish();
}

fn bench_shorttime_residuals(c: &mut Criterion) {
    let surface = ssvi_surface(0.09, 4.0, -0.8).unwrap();
    let ts = [0.25, 0.1, 0.04, 0.01];
    let mut group = c.benchmark_group("shorttime_residuals_4maturities");
    group.sample_size(20);
    group.bench_function("parallel", |b| {
        b.iter(|| arithmetic_mean_limit_residual(0.5, &surface, &ts).unwrap())
    });
    group.bench_function("sequential", |b| {
        b.iter(|| arithmetic_mean_limit_residual_seq(0.5, &surface, &ts).unwrap())
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_diagnose,
    bench_theta_sweep,
    bench_shorttime_residuals
);
criterion_main!(benches);
