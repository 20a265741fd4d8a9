use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use swell_core::experiment::PerfScenario;
use swell_core::swarm::run_swarm;
use swell_core::ExecutionMode;

fn swarm_modes(c: &mut Criterion) {
    let mut group = c.benchmark_group("swarm_10s");
    group.sample_size(10);
    for n in [10, 50] {
        for mode in ExecutionMode::ALL {
            let scenario = PerfScenario {
                duration: 10.0,
                ..PerfScenario::new(n, 5, 15, mode)
            };
            group.bench_with_input(BenchmarkId::new(mode.to_string(), n), &scenario, |b, s| {
                b.iter_batched(
                    || s.build().unwrap(),
                    |run| run_swarm(run).unwrap(),
                    criterion::BatchSize::LargeInput,
                )
            });
        }
    }
    group.finish();
}

criterion_group!(benches, swarm_modes);
criterion_main!(benches);
