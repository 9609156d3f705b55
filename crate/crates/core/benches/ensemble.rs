use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use specgame::experiments::{run_ensemble, Execution};
use specgame::GameConfig;

fn ensemble(c: &mut Criterion) {
    let config = GameConfig {
        n_players: 100,
        horizon: 2_000,
        perturbation: 0.25,
        ..GameConfig::default()
    };
    let mut group = c.benchmark_group("ensemble");
    group.sample_size(10);
    for trials in [4, 16] {
        for (name, exec) in [
            ("sequential", Execution::Sequential),
            ("parallel", Execution::Parallel),
        ] {
            group.bench_with_input(BenchmarkId::new(name, trials), &trials, |b, &n| {
                b.iter(|| run_ensemble(&config, n, 1, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn single_game(c: &mut Criterion) {
    let config = GameConfig::default().with_horizon(2_000);
    c.bench_function("game/n1000_2000_steps", |b| {
        b.iter(|| specgame::engine::run(&config).unwrap())
    });
}

criterion_group!(benches, ensemble, single_game);
criterion_main!(benches);
