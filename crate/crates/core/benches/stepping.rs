use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use helmray::integrator::{run_batch, RunJob};
use helmray::{build_launch, make_scenario, step_front, Execution, LaunchConfig, RunConfig};

fn policies() -> [(&'static str, Execution); 2] {
    [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)]
}

fn single_step(c: &mut Criterion) {
    let s = make_scenario("gaussian_slit").unwrap();
    let mut group = c.benchmark_group("step_front");
    for n_rays in [201, 1601] {
        let launch = build_launch(
            &LaunchConfig {
                n_rays,
                ..s.launch.clone()
            },
            &s.medium,
        )
        .unwrap();
        for (name, execution) in policies() {
            let cfg = RunConfig {
                execution,
                ..s.run.clone()
            };
            group.bench_with_input(BenchmarkId::new(name, n_rays), &launch, |b, f| {
                b.iter(|| step_front(black_box(f), &s.medium, &cfg).unwrap())
            });
        }
    }
    group.finish();
}

fn batch(c: &mut Criterion) {
    let s = make_scenario("gaussian_slit").unwrap();
    let launch = build_launch(&s.launch, &s.medium).unwrap();
    let jobs: Vec<RunJob> = (0..8)
        .map(|k| RunJob {
            launch: launch.clone(),
            medium: s.medium.clone(),
            config: RunConfig {
                max_tau: Some(1.0 + 0.1 * k as f64),
                max_z: None,
                execution: Execution::Sequential,
                ..s.run.clone()
            },
        })
        .collect();
    let mut group = c.benchmark_group("run_batch");
    group.sample_size(10);
    for (name, execution) in policies() {
        group.bench_function(name, |b| b.iter(|| run_batch(black_box(&jobs), execution)));
    }
    group.finish();
}

criterion_group!(benches, single_step, batch);
criterion_main!(benches);
