use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_complex::Complex64;
use std::hint::black_box;
use trigzeta::asymptotics::{region_table, DEFAULT_A, DEFAULT_B};
use trigzeta::optimizer::{optimize, OptimizeOptions};
use trigzeta::trigpoly::{
    expand_product, verify_nonneg, CosinePolynomial, NonnegOptions, ProductForm,
};
use trigzeta::zetanum::dirichlet::dirichlet_sum;
use trigzeta::zetanum::shared_table;
use trigzeta::Execution;

const MODES: [(&str, Execution); 2] = [
    ("parallel", Execution::Parallel),
    ("sequential", Execution::Sequential),
];

fn nonneg(c: &mut Criterion) {
    let form = ProductForm::new(1.0, true, vec![0.865_255_9, 0.197_447_6]).unwrap();
    let p = expand_product(&form).unwrap();
    let mut group = c.benchmark_group("verify_nonneg");
    for (name, exec) in MODES {
        let opts = NonnegOptions {
            exec,
            ..Default::default()
        };
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| verify_nonneg(black_box(&p), opts))
        });
    }
    group.finish();
}

fn multistart(c: &mut Criterion) {
    let mut group = c.benchmark_group("optimize_d6_16_starts");
    group.sample_size(10);
    for (name, exec) in MODES {
        let mut o = OptimizeOptions::new(6, false);
        o.starts = 16;
        o.exec = exec;
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| optimize(black_box(&o)).unwrap())
        });
    }
    group.finish();
}

fn dirichlet(c: &mut Criterion) {
    let n = 2_000_000;
    let table = shared_table(n).unwrap();
    let s = Complex64::new(1.3, 14.13);
    let mut group = c.benchmark_group("dirichlet_sum_2e6");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| dirichlet_sum(&table, black_box(s), n, exec))
        });
    }
    group.finish();
}

fn region(c: &mut Criterion) {
    let p = CosinePolynomial::new(vec![3.0, 4.0, 1.0]).unwrap();
    let heights: Vec<f64> = (0..5000).map(|k| 1e4 * 1.01f64.powi(k)).collect();
    let mut group = c.benchmark_group("region_table_5000");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| region_table(&p, DEFAULT_A, DEFAULT_B, black_box(&heights), exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, nonneg, multistart, dirichlet, region);
criterion_main!(benches);
