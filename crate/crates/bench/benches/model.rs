use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ehcrn_core::{
    battery_steady_state, battery_transition_matrix, db_to_linear, q_tail, q_tail_inverse,
    run_replication, steady_state_numeric, BatteryModel, DetectorConfig, Scenario, SimConfig,
    TwoStateChain,
};

fn gaussian_tail(c: &mut Criterion) {
    let xs: Vec<f64> = (0..64).map(|i| -8.0 + 0.25 * i as f64).collect();
    c.bench_function("q_tail/64 points", |b| {
        b.iter(|| xs.iter().map(|&x| q_tail(black_box(x))).sum::<f64>())
    });
    c.bench_function("q_tail_inverse/0.01", |b| b.iter(|| q_tail_inverse(black_box(0.01))));
}

fn stationary(c: &mut Criterion) {
    let mut group = c.benchmark_group("battery stationary");
    for levels in [10usize, 100, 200] {
        let model = BatteryModel::new(levels, 0.8, 0.6).unwrap();
        group.bench_with_input(BenchmarkId::new("closed form", levels), &model, |b, m| {
            b.iter(|| battery_steady_state(black_box(m)))
        });
        let p = battery_transition_matrix(&model);
        group.bench_with_input(BenchmarkId::new("linear solve", levels), &p, |b, p| {
            b.iter(|| steady_state_numeric(black_box(p)).unwrap())
        });
    }
    group.finish();
}

fn simulation(c: &mut Criterion) {
    let det = DetectorConfig::new(2e-3, 1e6, 1.0, 1.05, db_to_linear(-15.0)).unwrap();
    let scenario = Scenario::new(
        TwoStateChain::spectrum(0.5, 0.7).unwrap(),
        TwoStateChain::energy(0.7, 0.5).unwrap(),
        det,
        100,
        0.1,
    )
    .unwrap();
    let sim = SimConfig::new(100_000, 1, 1);
    let mut group = c.benchmark_group("replication");
    group.sample_size(20);
    group.bench_function("100k slots", |b| {
        b.iter(|| run_replication(black_box(&scenario), &sim, 0).unwrap())
    });
    group.finish();
}

criterion_group!(benches, gaussian_tail, stationary, simulation);
criterion_main!(benches);
