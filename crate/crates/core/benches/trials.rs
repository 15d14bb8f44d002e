//! Sequential vs rayon execution of the trial loops.

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use scalefree::adversaries::khinchin_monte_carlo_with;
use scalefree::par::Execution;
use scalefree::verify::{run_suite, Suite, VerifyOptions};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn suites(c: &mut Criterion) {
    let mut g = c.benchmark_group("suite");
    g.sample_size(10);
    for (suite, trials) in [(Suite::Inequalities, 2000), (Suite::Bounds, 100), (Suite::LowerBound, 5000)] {
        for (label, exec) in MODES {
            let opts = VerifyOptions { trials, seed: 1, exec };
            g.bench_with_input(BenchmarkId::new(suite.name(), label), &opts, |b, o| {
                b.iter(|| run_suite(black_box(suite), o).unwrap())
            });
        }
    }
    g.finish();
}

fn khinchin(c: &mut Criterion) {
    let a: Vec<f64> = (1..=64).map(|i| 1.0 / i as f64).collect();
    let mut g = c.benchmark_group("khinchin");
    for (label, exec) in MODES {
        g.bench_function(label, |b| b.iter(|| khinchin_monte_carlo_with(black_box(&a), 20_000, 3, exec).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, suites, khinchin);
criterion_main!(benches);
