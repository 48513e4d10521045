//! Engine benchmarks: the sequential run loop against the rayon worker
//! pool on the same workload, plus the hot selection path.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use moc_bandit::config::{resolve, ExperimentConfig};
use moc_bandit::core::{Context, HyperParams, RewardVector};
use moc_bandit::environments::{Environment, GaussianSurface};
use moc_bandit::evaluation::{checkpoint_grid, execute_runs_sequential, EnvFactory};
use moc_bandit::policies::{MocMab, Policy};

fn batch_config(runs: u32) -> moc_bandit::config::ResolvedConfig {
    let raw: ExperimentConfig = serde_json::from_str(&format!(
        "{{\"experiment\": \"synthetic_gaussian\", \"horizon\": 2000, \"runs\": {runs}, \
         \"base_seed\": 3, \"hyperparams\": {{\"m\": 5, \"scale\": 0.1}}}}"
    ))
    .unwrap();
    resolve(raw).unwrap()
}

/// All six policies over 2000 rounds x 8 runs: sequential loop vs the
/// worker pool. With `--no-default-features` only the sequential side runs.
fn bench_run_batch(c: &mut Criterion) {
    let cfg = batch_config(8);
    let factory = EnvFactory::from_config(&cfg).unwrap();
    let checkpoints = checkpoint_grid(cfg.horizon, cfg.checkpoints);
    let mut group = c.benchmark_group("run_batch");
    group.sample_size(10);
    group.bench_function(BenchmarkId::new("sequential", 8), |b| {
        b.iter(|| black_box(execute_runs_sequential(&cfg, &factory, &checkpoints, None).unwrap()))
    });
    #[cfg(feature = "parallel")]
    group.bench_function(BenchmarkId::new("parallel", 8), |b| {
        use moc_bandit::evaluation::execute_runs_parallel;
        let jobs = std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(4);
        b.iter(|| {
            black_box(execute_runs_parallel(&cfg, &factory, &checkpoints, None, jobs).unwrap())
        })
    });
    group.finish();
}

/// Selection cost on a warmed-up state (the per-round hot path).
fn bench_select(c: &mut Criterion) {
    let params = HyperParams {
        holder_l: 1.0,
        alpha: 1.0,
        m: 10,
        beta: 1.0,
        horizon: 100_000,
        num_arms: 4,
        scale: 0.1,
    };
    let mut policy = MocMab::new(params, 2, 1).unwrap();
    let mut env = GaussianSurface::new(2);
    let mut noise = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(5);
    for t in 1..=20_000u64 {
        let x = env.next_context(t);
        let a = policy.select(&x, t);
        let r = env.sample_reward(&x, a, &mut noise);
        policy.update(&x, a, r).unwrap();
    }
    let x = Context::new(vec![0.42, 0.58]).unwrap();
    c.bench_function("moc_select_warm", |b| {
        let mut t = 20_000u64;
        b.iter(|| {
            t += 1;
            black_box(policy.select(black_box(&x), t))
        })
    });
    // keep update in the picture too
    c.bench_function("moc_update", |b| {
        let r = RewardVector::new(1.0, 0.0).unwrap();
        b.iter(|| policy.update(black_box(&x), 2, black_box(r)).unwrap())
    });
}

criterion_group!(benches, bench_run_batch, bench_select);
criterion_main!(benches);
