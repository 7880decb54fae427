use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use etube::shapes;
use etube::verify::{verify_c_convexity, verify_duality_identity, verify_homeomorphism, verify_metric_consistency};
use etube::{Execution, ProjectiveMap, Tube};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn c_convexity(c: &mut Criterion) {
    let tube = Tube::new(shapes::triangle_h()).unwrap();
    let mut g = c.benchmark_group("c_convexity_16x256");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, exec| {
            b.iter(|| verify_c_convexity(black_box(&tube), 16, 256, 1, *exec).unwrap())
        });
    }
    g.finish();
}

fn sampled_suites(c: &mut Criterion) {
    let square = shapes::square();
    let simplex = shapes::simplex();
    let tube = Tube::new(shapes::simplex()).unwrap();
    let group = [ProjectiveMap::identity(2)];
    let mut g = c.benchmark_group("sampled_suites");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::new("metric_2000", name), &exec, |b, exec| {
            b.iter(|| verify_metric_consistency(black_box(&square), 2000, 1, *exec).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("duality_2000", name), &exec, |b, exec| {
            b.iter(|| verify_duality_identity(black_box(&simplex), 2000, 1, *exec).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("homeomorphism_2000", name), &exec, |b, exec| {
            b.iter(|| verify_homeomorphism(black_box(&tube), 2000, &group, 1, *exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, c_convexity, sampled_suites);
criterion_main!(benches);
