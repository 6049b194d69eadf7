//! Parallel vs sequential throughput of the sweep-style experiments, plus
//! the scaling of the designated performance scenario. Both execution
//! paths produce bitwise-identical reports; these benches measure what the
//! rayon fan-out buys on the machine at hand.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use trotter_lab::lab::{
    convergence_sweep, convergence_sweep_seq, resolvent_metric, resolvent_metric_seq,
    weak_integral, weak_integral_seq, PhiProfile, Quadrature, WeightedMeasure,
};
use trotter_lab::{builtin, form_sum, Builtin, CVec, FormSum, ProductScheme};
use trotter_lab_cli::config::GridSpec;
use trotter_lab_cli::instance::gen_random_instance;
use trotter_lab_cli::scenario::{build_instance, default_config};

fn degenerate_setup() -> (ProductScheme, FormSum, Vec<CVec>) {
    let inst = gen_random_instance(7, (4, 3, 3), 2.0, 2).unwrap();
    let f = builtin(Builtin::ExpNeg).unwrap();
    let scheme = ProductScheme::new(inst.a.clone(), inst.b.clone(), f.clone(), f).unwrap();
    let fs = form_sum(&inst.a, &inst.b).unwrap();
    let vectors = inst.probes.iter().map(|p| p.vector.clone()).collect();
    (scheme, fs, vectors)
}

fn bench_strong_sweep(c: &mut Criterion) {
    let (scheme, fs, vectors) = degenerate_setup();
    let t_grid = [0.5, 1.0, 2.0];
    let n_grid: Vec<u64> = (0..=10).map(|k| 1u64 << k).collect();
    let mut group = c.benchmark_group("strong_sweep_degenerate_c4");
    group.bench_function("parallel", |b| {
        b.iter(|| convergence_sweep(&scheme, &fs, &t_grid, &n_grid, &vectors).unwrap())
    });
    group.bench_function("sequential", |b| {
        b.iter(|| convergence_sweep_seq(&scheme, &fs, &t_grid, &n_grid, &vectors).unwrap())
    });
    group.finish();
}

fn bench_resolvent_metric(c: &mut Criterion) {
    let (scheme, fs, vectors) = degenerate_setup();
    let u = &vectors[0];
    let wm = WeightedMeasure::new(50.0, 8001).unwrap();
    let tau = 2f64.powi(-6);
    let mut group = c.benchmark_group("resolvent_metric_16k_nodes");
    group.sample_size(10);
    group.bench_function("parallel", |b| {
        b.iter(|| resolvent_metric(&scheme, &fs, tau, u, &wm).unwrap())
    });
    group.bench_function("sequential", |b| {
        b.iter(|| resolvent_metric_seq(&scheme, &fs, tau, u, &wm).unwrap())
    });
    group.finish();
}

fn bench_weak_integral(c: &mut Criterion) {
    let (scheme, fs, vectors) = degenerate_setup();
    let u = &vectors[0];
    let phi = PhiProfile::Gaussian(1.0);
    let (lo, hi) = phi.default_quadrature().interval();
    let q = Quadrature::new(trotter_lab::lab::QuadRule::CompositeSimpson, lo, hi, 641).unwrap();
    let mut group = c.benchmark_group("weak_integral_n4096");
    group.sample_size(10);
    group.bench_function("parallel", |b| {
        b.iter(|| weak_integral(&scheme, &fs, &phi, u, 1 << 12, &q).unwrap())
    });
    group.bench_function("sequential", |b| {
        b.iter(|| weak_integral_seq(&scheme, &fs, &phi, u, 1 << 12, &q).unwrap())
    });
    group.finish();
}

fn bench_schrodinger_power(c: &mut Criterion) {
    let mut group = c.benchmark_group("schrodinger_1d_power_n4096");
    group.sample_size(10);
    for d in [32usize, 64, 128] {
        let mut cfg = default_config("schrodinger-1d").unwrap();
        cfg.dims.d = d;
        cfg.dims.ka = d;
        cfg.dims.kb = d;
        cfg.t_grid = GridSpec::Values { values: vec![1.0] };
        let inst = build_instance(&cfg).unwrap();
        let f = builtin(Builtin::ExpNeg).unwrap();
        let scheme = ProductScheme::new(inst.a.clone(), inst.b.clone(), f.clone(), f).unwrap();
        let u = inst.probes[0].vector.clone();
        group.bench_with_input(BenchmarkId::from_parameter(d), &d, |b, _| {
            b.iter(|| scheme.apply_power(1.0, 1 << 12, &u).unwrap())
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_strong_sweep,
    bench_resolvent_metric,
    bench_weak_integral,
    bench_schrodinger_power
);
criterion_main!(benches);
