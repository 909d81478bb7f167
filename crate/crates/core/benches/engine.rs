//! Throughput comparison of the enumeration engines. Build with
//! `--no-default-features` for the sequential baseline and compare.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use dioph_core::psi::{self, EngineConfig, Variant};
use dioph_core::theta::{GeneratorKind, ThetaPair};
use dioph_core::{constants, maxmin, rat};

fn bench_records(c: &mut Criterion) {
    let pair = ThetaPair::forge(GeneratorKind::Quadratic { d1: 2, d2: 3 }, 256).unwrap();
    let cfg = EngineConfig::default();
    let mut group = c.benchmark_group("records");
    for t_max in [200u64, 800] {
        group.bench_with_input(BenchmarkId::new("oracle", t_max), &t_max, |b, &t| {
            b.iter(|| psi::records(&pair, t, Variant::Plus, true, &cfg).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("accelerated", t_max), &t_max, |b, &t| {
            b.iter(|| psi::accelerated_records(&pair, t, Variant::Plus, true, &cfg).unwrap())
        });
    }
    group.finish();
}

fn bench_sigma_root(c: &mut Criterion) {
    c.bench_function("sigma_root_1e-30", |b| {
        b.iter(|| constants::sigma_root(1e-30).unwrap())
    });
}

fn bench_feasibility(c: &mut Criterion) {
    let inst = maxmin::MaxMinInstance::new(
        rat::big(4),
        rat::big(2),
        num_rational::BigRational::new(7.into(), 4.into()),
    )
    .unwrap();
    c.bench_function("lp_feasibility", |b| b.iter(|| maxmin::feasibility(&inst).unwrap()));
}

criterion_group!(benches, bench_records, bench_sigma_root, bench_feasibility);
criterion_main!(benches);
