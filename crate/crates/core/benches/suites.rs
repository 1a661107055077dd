use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use godex::cosimplicial::{check_descent_axioms, AxiomParams};
use godex::exec::Exec;
use godex::godement::{localeq_suite, skyscraper_suite, theorem_suite, TheoremParams};
use godex::site::SheafBounds;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn theorem(c: &mut Criterion) {
    let mut g = c.benchmark_group("theorem_suite");
    g.sample_size(10);
    let params = TheoremParams { per_poset: 4, ..TheoremParams::default() };
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| black_box(theorem_suite(7, &params, exec).unwrap()))
        });
    }
    g.finish();
}

fn axioms(c: &mut Criterion) {
    let mut g = c.benchmark_group("descent_axioms");
    g.sample_size(10);
    let params = AxiomParams { trials: 8, ..AxiomParams::default() };
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| black_box(check_descent_axioms(7, &params, exec)))
        });
    }
    g.finish();
}

fn local_and_skyscraper(c: &mut Criterion) {
    let mut g = c.benchmark_group("localeq_and_skyscraper");
    g.sample_size(10);
    let bounds = SheafBounds::default();
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| {
                black_box(localeq_suite(7, 12, 6, exec).unwrap());
                black_box(skyscraper_suite(7, &bounds, 6, exec).unwrap())
            })
        });
    }
    g.finish();
}

criterion_group!(benches, theorem, axioms, local_and_skyscraper);
criterion_main!(benches);
