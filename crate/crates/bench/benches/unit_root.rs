use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lfcurve::diagnostics::{RejectionStudy, SimulatedProcess};
use lfcurve::{adf, phillips_perron, AnnualSeries, Deterministic, Level, Unit, UnitRootTest};

fn walk(n: usize) -> AnnualSeries {
    let mut acc = 0.0;
    let v = (0..n)
        .map(|i| {
            acc += (i as f64 * 12.9898).sin() * 43758.5453 % 1.0;
            acc
        })
        .collect();
    AnnualSeries::new(1900, v, Unit::Index, "walk").unwrap()
}

fn single_tests(c: &mut Criterion) {
    let mut group = c.benchmark_group("unit_root");
    for n in [50usize, 200, 1000] {
        let s = walk(n);
        group.bench_with_input(BenchmarkId::new("adf", n), &s, |b, s| {
            b.iter(|| adf(s, 4, Deterministic::Constant).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("pp", n), &s, |b, s| {
            b.iter(|| phillips_perron(s, 4, Deterministic::Constant).unwrap())
        });
    }
    group.finish();
}

fn monte_carlo(c: &mut Criterion) {
    let mut group = c.benchmark_group("rejection_study");
    group.sample_size(10);
    for test in [
        UnitRootTest::AugmentedDickeyFuller,
        UnitRootTest::PhillipsPerron,
    ] {
        let study = RejectionStudy {
            test,
            process: SimulatedProcess::RandomWalk,
            n: 200,
            max_lag: 4,
            deterministic: Deterministic::Constant,
            level: Level::Five,
            replications: 1000,
            seed: 1,
        };
        group.bench_function(test.as_str(), |b| {
            b.iter(|| study.rejection_rate().unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, single_tests, monte_carlo);
criterion_main!(benches);
