use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mhbesov::coeffs::{c_pq, CoeffRequest};
use mhbesov::parallel::ExecutionMode;
use mhbesov::sweep::{stabilization, sweep_coefficients, SweepConfig};
use mhbesov::verify::mean_value_triples;

const MODES: [(&str, ExecutionMode); 2] = [("parallel", ExecutionMode::Parallel), ("sequential", ExecutionMode::Sequential)];

fn coefficient_sweep(c: &mut Criterion) {
    let mut g = c.benchmark_group("coefficient_sweep");
    g.sample_size(10);
    for (name, mode) in MODES {
        let cfg = SweepConfig::new(2, vec![-0.5, 0.0, 1.0, 2.5], 16, 16).with_mode(mode);
        g.bench_with_input(BenchmarkId::from_parameter(name), &cfg, |b, cfg| {
            b.iter(|| sweep_coefficients(cfg).unwrap())
        });
    }
    g.finish();
}

fn stabilization_grid(c: &mut Criterion) {
    let mut g = c.benchmark_group("stabilization_grid");
    g.sample_size(10);
    for (name, mode) in MODES {
        g.bench_function(name, |b| {
            b.iter(|| {
                stabilization(mode, 16, |p, q| {
                    let v = c_pq(&CoeffRequest::new(2, p, q, 0.0))?.value;
                    Ok(((p + 1) * (q + 1)) as f64 * v)
                })
                .unwrap()
            })
        });
    }
    g.finish();
}

fn mean_value(c: &mut Criterion) {
    let mut g = c.benchmark_group("mean_value");
    g.sample_size(10);
    for (name, mode) in MODES {
        g.bench_function(name, |b| b.iter(|| mean_value_triples(mode, 2, 100_000, 7, 4.0).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, coefficient_sweep, stabilization_grid, mean_value);
criterion_main!(benches);
