use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use omm_bench::{baseline_model, detuning_sweep};
use omm_core::gaussian::{check_stability, entanglement_report, steady_state};
use omm_core::{run_sweep, LinearModel, PhysicalParams};

fn single_point(c: &mut Criterion) {
    let params = PhysicalParams::baseline();
    let model = baseline_model();
    c.bench_function("assemble", |b| {
        b.iter(|| LinearModel::assemble(black_box(&params)).unwrap())
    });
    c.bench_function("stability", |b| {
        b.iter(|| check_stability(black_box(&model.drift)).unwrap())
    });
    c.bench_function("steady_state", |b| {
        b.iter(|| steady_state(black_box(&model)).unwrap())
    });
    c.bench_function("entanglement_report", |b| {
        b.iter(|| entanglement_report(black_box(&params)).unwrap())
    });
}

fn sweeps(c: &mut Criterion) {
    let mut group = c.benchmark_group("sweep_64");
    group.sample_size(10);
    for (label, workers) in [("serial", Some(1)), ("pool", None)] {
        let spec = detuning_sweep(64, workers);
        group.bench_function(label, |b| b.iter(|| run_sweep(black_box(&spec)).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, single_point, sweeps);
criterion_main!(benches);
