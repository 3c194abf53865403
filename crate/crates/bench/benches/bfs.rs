use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use nilcayley_bench::fixture;
use nilcayley_core::harness::trial_rng;
use nilcayley_core::lattice::{sample_haar_proxy, torus_diameter_l1};
use nilcayley_core::metrics::{bfs_distance_map, sphere_profile, BfsConfig};

fn distance_map(c: &mut Criterion) {
    let mut group = c.benchmark_group("distance_map");
    group.sample_size(10);
    for (spec, k) in [("ut:31,3", 3), ("ut:5,4", 4), ("abelian:211,211", 3)] {
        let (g, s) = fixture(spec, k, 1);
        group.throughput(Throughput::Elements(g.order() * 2 * k as u64));
        group.bench_with_input(BenchmarkId::from_parameter(spec), &(g, s), |b, (g, s)| {
            b.iter(|| bfs_distance_map(g, s).unwrap())
        });
    }
    group.finish();
}

fn profile(c: &mut Criterion) {
    let mut group = c.benchmark_group("sphere_profile");
    group.sample_size(10);
    for (spec, k) in [("ut:101,3", 4), ("ut:8,4", 4)] {
        let (g, s) = fixture(spec, k, 2);
        group.throughput(Throughput::Elements(g.order() * 2 * k as u64));
        group.bench_with_input(BenchmarkId::from_parameter(spec), &(g, s), |b, (g, s)| {
            b.iter(|| sphere_profile(g, s, &BfsConfig::default()).unwrap())
        });
    }
    group.finish();
}

fn torus(c: &mut Criterion) {
    let mut group = c.benchmark_group("torus_diameter_l1");
    group.sample_size(10);
    for k in [2, 3, 4] {
        let l = sample_haar_proxy(k, 1_000_003, &mut trial_rng(3, k as u64)).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(k), &l, |b, l| {
            b.iter(|| torus_diameter_l1(l, 1e-2).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, distance_map, profile, torus);
criterion_main!(benches);
