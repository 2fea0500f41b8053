//! Sequential vs rayon paths of the three hot loops: all-roots counting,
//! per-vertex copy counts and exhaustive exact laws.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use extcount::exact::{exact_laws, ExactTarget};
use extcount::random::{sample_gnp, SamplerConfig};
use extcount::{builtin_fixture, per_vertex_copy_counts, Execution, ExtensionCounter, PatternGraph};
use num_bigint::BigInt;
use num_rational::BigRational;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn all_roots(c: &mut Criterion) {
    let mut group = c.benchmark_group("all_roots");
    group.sample_size(10);
    for (name, n, p) in [("fig1c", 1024, 0.05), ("fig2e", 512, 0.2), ("fig2e", 8192, 0.01)] {
        let rg = builtin_fixture(name).unwrap();
        let counter = ExtensionCounter::new(&rg);
        let host = sample_gnp(SamplerConfig { n, p, seed: 7 });
        for (mode, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(format!("{name}/n={n}"), mode), &exec, |b, &exec| {
                b.iter(|| counter.all_roots(black_box(&host), exec).unwrap().max_count)
            });
        }
    }
    group.finish();
}

fn copy_counts(c: &mut Criterion) {
    let mut group = c.benchmark_group("per_vertex_copy_counts");
    group.sample_size(10);
    let k4 = PatternGraph::complete(4).unwrap();
    let host = sample_gnp(SamplerConfig { n: 2048, p: 0.06, seed: 11 });
    for (mode, exec) in MODES {
        group.bench_function(BenchmarkId::new("K4/n=2048", mode), |b| {
            b.iter(|| per_vertex_copy_counts(black_box(&host), &k4, exec).unwrap())
        });
    }
    group.finish();
}

fn exact(c: &mut Criterion) {
    let mut group = c.benchmark_group("exact_laws");
    group.sample_size(10);
    let rg = builtin_fixture("fig1c").unwrap();
    let p = BigRational::new(BigInt::from(1), BigInt::from(3));
    let targets = [ExactTarget::MaxCount, ExactTarget::MinCount];
    for (mode, exec) in MODES {
        group.bench_function(BenchmarkId::new("fig1c/n=6", mode), |b| {
            b.iter(|| exact_laws(&rg, 6, &p, &targets, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, all_roots, copy_counts, exact);
criterion_main!(benches);
