//! Sequential against rayon execution for the data-parallel workloads.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fabcr::fab_gaussian::{acceptance_interval, p_value_curve};
use fabcr::fab_nef::{GridSpec, NefModel};
use fabcr::priors::{PriorKind, PriorModel};
use fabcr::simulate::{run_experiment, ExperimentConfig};
use fabcr::Execution;
use std::hint::black_box;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn pvalue_curve(c: &mut Criterion) {
    let model = PriorModel::parse("horseshoe", 1.0).unwrap();
    let grid: Vec<f64> = (0..200).map(|i| -2.0 + i as f64 * 0.04).collect();
    let mut g = c.benchmark_group("pvalue_curve");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| p_value_curve(&model, black_box(2.5), &grid, exec).unwrap())
        });
    }
    g.finish();
}

fn acceptance_grid(c: &mut Criterion) {
    // the per-θ₀ solve that drives Monte Carlo coverage checks
    let model = PriorModel::parse("laplace:kappa=1", 1.0).unwrap();
    let thetas: Vec<f64> = (0..2000).map(|i| -50.0 + i as f64 * 0.05).collect();
    let mut g = c.benchmark_group("acceptance_grid");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| exec.map(&thetas, |&t| acceptance_interval(&model, t, 0.1).unwrap().hi))
        });
    }
    g.finish();
}

fn nef_grid(c: &mut Criterion) {
    let model = NefModel::BinomialBeta { n: 40, a: 1.0, b: 1.0 };
    let grid = GridSpec { resolution: 1e-3, ..Default::default() };
    let mut g = c.benchmark_group("nef_grid");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| model.confidence_region(black_box(&[17]), 0.1, grid, exec).unwrap())
        });
    }
    g.finish();
}

fn simulation(c: &mut Criterion) {
    let cfg = ExperimentConfig {
        n: 30,
        p: 5,
        log_sigma_beta_grid: vec![0.0],
        priors: vec![PriorKind::Horseshoe],
        reps: 16,
        ..Default::default()
    };
    let mut g = c.benchmark_group("simulation");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| run_experiment(&cfg, exec).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, pvalue_curve, acceptance_grid, nef_grid, simulation);
criterion_main!(benches);
