use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use std::hint::black_box;
use swell_bench::{sea, smarty};
use swell_core::experiment::WAVE_COUNT_GRID;

fn net_force(c: &mut Criterion) {
    let mut group = c.benchmark_group("net_force");
    for (h, f) in WAVE_COUNT_GRID {
        let field = sea(h, f);
        let (asv, table) = smarty(&field);
        group.throughput(Throughput::Elements((h * f) as u64));
        group.bench_with_input(BenchmarkId::from_parameter(h * f), &table, |b, table| {
            b.iter(|| black_box(table.net_force(asv.state(), black_box(12.5))))
        });
    }
    group.finish();
}

fn step(c: &mut Criterion) {
    let mut group = c.benchmark_group("asv_step");
    for (h, f) in WAVE_COUNT_GRID {
        let field = sea(h, f);
        let (asv, table) = smarty(&field);
        group.bench_with_input(BenchmarkId::from_parameter(h * f), &table, |b, table| {
            b.iter_batched_ref(
                || asv.clone(),
                |asv| {
                    for _ in 0..100 {
                        asv.step(&field, table, 0.04).unwrap();
                    }
                },
                criterion::BatchSize::SmallInput,
            )
        });
    }
    group.finish();
}

fn phase_one(c: &mut Criterion) {
    c.bench_function("generate_and_precompute_75", |b| {
        b.iter(|| {
            let field = sea(5, 15);
            black_box(smarty(&field).1)
        })
    });
}

criterion_group!(benches, net_force, step, phase_one);
criterion_main!(benches);
