//! Rounds on a single worker against rounds on the default rayon pool.
//!
//! Build with `--no-default-features` to benchmark the crate compiled
//! without rayon at all; both groups then run sequentially.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hashcount::baselines::klm_count;
use hashcount::formula::gen_random;
use hashcount::{approx_count, par, CounterParams};
use std::hint::black_box;

fn pools() -> [(&'static str, Option<usize>); 2] {
    [("sequential", Some(1)), ("parallel", None)]
}

fn symbolic(c: &mut Criterion) {
    let mut group = c.benchmark_group("symbolic");
    group.sample_size(10);
    for (n, m) in [(32, 32), (40, 128)] {
        let phi = gen_random(n, m, 3, 8, 1).unwrap();
        let params = CounterParams::new(0.8, 0.2, 0).unwrap();
        for (name, threads) in pools() {
            group.bench_with_input(BenchmarkId::new(name, format!("n{n}_m{m}")), &phi, |b, phi| {
                b.iter(|| par::with_threads(threads, || approx_count(black_box(phi), &params).unwrap()))
            });
        }
    }
    group.finish();
}

fn klm(c: &mut Criterion) {
    let mut group = c.benchmark_group("klm");
    group.sample_size(10);
    let phi = gen_random(64, 256, 3, 8, 2).unwrap();
    for (name, threads) in pools() {
        group.bench_function(BenchmarkId::new(name, "n64_m256_eps0.1"), |b| {
            b.iter(|| par::with_threads(threads, || klm_count(black_box(&phi), 0.1, 0.2, 0).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, symbolic, klm);
criterion_main!(benches);
