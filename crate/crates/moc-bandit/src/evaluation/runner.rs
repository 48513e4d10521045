//! Seeded multi-run experiment engine. Runs are independent and
//! embarrassingly parallel; within a run, execution is strictly sequential
//! in the round index.
//!
//! Randomness layout per run `r` (seed `base_seed + r`):
//! - the context stream and any environment-internal noise draw from one
//!   env sub-stream, shared by every policy (common contexts cut variance);
//! - reward noise draws from a fresh stream keyed by
//!   (run, algorithm, round, arm), so adding or removing a policy never
//!   perturbs another policy's trace;
//! - each policy's tie-breaking draws from its own (run, algorithm) stream.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{ExperimentKind, ReplaySource, ResolvedConfig};
use crate::environments::{Environment, GaussianSurface, Multichannel, Periodic, ReplayEnv};
use crate::error::{Error, Result};
use crate::evaluation::{
    checkpoint_grid, envelope, optimality_gaps_on_grid, EnvelopeParams, RegretAccumulator,
    RegretTrace, RoundOracle,
};
use crate::policies::{build_policy, Algorithm};
use crate::seeding::derive_seed;

const ENV_STREAM: u64 = 0xE17;
const POLICY_STREAM: u64 = 0x9019;
const REWARD_STREAM: u64 = 0x4e1a;

/// Builds one independent environment instance per run.
pub struct EnvFactory {
    cfg: ResolvedConfig,
}

impl EnvFactory {
    pub fn from_config(cfg: &ResolvedConfig) -> Result<Self> {
        if cfg.experiment == ExperimentKind::Replay && cfg.replay.is_none() {
            return Err(Error::Config(
                "replay experiment without a replay source".into(),
            ));
        }
        Ok(Self { cfg: cfg.clone() })
    }

    pub fn build(&self, seed: u64) -> Result<Box<dyn Environment>> {
        let cfg = &self.cfg;
        Ok(match cfg.experiment {
            ExperimentKind::SyntheticGaussian => Box::new(GaussianSurface::new(seed)),
            ExperimentKind::Multichannel => Box::new(Multichannel::new(seed)),
            ExperimentKind::Periodic => {
                let period = cfg.period.expect("resolved period");
                Box::new(Periodic::new(GaussianSurface::new(seed), period)?)
            }
            ExperimentKind::Replay => match cfg.replay.as_ref().expect("resolved source") {
                ReplaySource::File { .. } => {
                    let records = cfg
                        .replay_records
                        .clone()
                        .ok_or_else(|| Error::Config("replay records not loaded".into()))?;
                    let rate =
                        records.iter().filter(|r| r.click).count() as f64 / records.len() as f64;
                    Box::new(ReplayEnv::new(
                        records,
                        crate::environments::ClickModel::Constant(rate),
                        cfg.horizon,
                    )?)
                }
                ReplaySource::Surrogate { click_rate, dims } => {
                    Box::new(ReplayEnv::surrogate(cfg.horizon, *dims, *click_rate, seed)?)
                }
            },
        })
    }
}

/// One policy's outcome on one run.
#[derive(Debug, Clone)]
pub struct PolicyRunResult {
    pub algorithm: Algorithm,
    pub trace: RegretTrace,
    /// Checkpoints at which a cumulative regret met or exceeded its
    /// high-probability envelope (tracked for the two-objective learner).
    pub envelope_violations: u64,
    /// Per-round cumulative (reg1, reg2, pareto); populated only when the
    /// config asks for round dumps.
    pub rounds: Option<Vec<[f64; 3]>>,
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub run_index: u32,
    pub policies: Vec<PolicyRunResult>,
}

/// Across-run aggregate for one algorithm, one entry per checkpoint.
#[derive(Debug, Clone)]
pub struct AlgorithmAggregate {
    pub algorithm: Algorithm,
    pub reg1_mean: Vec<f64>,
    pub reg1_std: Vec<f64>,
    pub reg2_mean: Vec<f64>,
    pub reg2_std: Vec<f64>,
    pub pareto_mean: Vec<f64>,
    pub pareto_std: Vec<f64>,
    pub cum_reward1_mean: Vec<f64>,
    pub cum_reward2_mean: Vec<f64>,
    /// Fitted growth exponents of (reg1, reg2, pareto) on the mean traces.
    pub sublinearity: [f64; 3],
    pub envelope_violations: u64,
}

impl AlgorithmAggregate {
    pub fn final_reg1(&self) -> f64 {
        *self.reg1_mean.last().expect("non-empty trace")
    }

    pub fn final_reg2(&self) -> f64 {
        *self.reg2_mean.last().expect("non-empty trace")
    }

    pub fn final_pareto(&self) -> f64 {
        *self.pareto_mean.last().expect("non-empty trace")
    }

    pub fn final_cum_reward1(&self) -> f64 {
        *self.cum_reward1_mean.last().expect("non-empty trace")
    }

    pub fn final_cum_reward2(&self) -> f64 {
        *self.cum_reward2_mean.last().expect("non-empty trace")
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentResults {
    pub checkpoints: Vec<u64>,
    pub aggregates: Vec<AlgorithmAggregate>,
    pub runs: Vec<RunResult>,
    /// Envelope constants used for the violation counts, when the
    /// two-objective learner was configured.
    pub envelope: Option<EnvelopeParams>,
    pub wall_clock_seconds: f64,
}

impl ExperimentResults {
    pub fn aggregate(&self, alg: Algorithm) -> Option<&AlgorithmAggregate> {
        self.aggregates.iter().find(|a| a.algorithm == alg)
    }
}

fn run_one(
    cfg: &ResolvedConfig,
    factory: &EnvFactory,
    checkpoints: &[u64],
    envelope_params: Option<&EnvelopeParams>,
    run_index: u32,
) -> Result<RunResult> {
    let run_seed = cfg.base_seed.wrapping_add(u64::from(run_index));
    let mut env = factory.build(derive_seed(&[run_seed, ENV_STREAM]))?;
    let params = cfg.hyperparams();
    let mut policies = Vec::with_capacity(cfg.algorithms.len());
    for alg in &cfg.algorithms {
        policies.push(build_policy(
            *alg,
            &params,
            cfg.context_dims,
            cfg.scalarized_schedule,
            derive_seed(&[run_seed, POLICY_STREAM, alg.id()]),
        )?);
    }
    let mut accumulators: Vec<RegretAccumulator> = cfg
        .algorithms
        .iter()
        .map(|_| RegretAccumulator::new(checkpoints.to_vec()))
        .collect();
    let mut violations = vec![0u64; cfg.algorithms.len()];
    let mut rounds: Vec<Option<Vec<[f64; 3]>>> = cfg
        .algorithms
        .iter()
        .map(|_| {
            cfg.dump_rounds
                .then(|| Vec::with_capacity(cfg.horizon as usize))
        })
        .collect();

    let tie_tol = env.tie_tolerance();
    for t in 1..=cfg.horizon {
        let x = env.next_context(t);
        let oracle = RoundOracle::compute(env.true_means(&x), tie_tol)?;
        for (i, alg) in cfg.algorithms.iter().enumerate() {
            let arm = policies[i].select(&x, t);
            let mut reward_rng = ChaCha8Rng::seed_from_u64(derive_seed(&[
                run_seed,
                REWARD_STREAM,
                alg.id(),
                t,
                arm as u64,
            ]));
            let r = env.sample_reward(&x, arm, &mut reward_rng);
            policies[i].update(&x, arm, r)?;
            accumulators[i].regret_step(&oracle, arm);
            if let Some(buf) = rounds[i].as_mut() {
                buf.push([
                    accumulators[i].reg1(),
                    accumulators[i].reg2(),
                    accumulators[i].pareto(),
                ]);
            }
            if accumulators[i].checkpoint(t) {
                if let (Algorithm::Mocmab, Some(p)) = (alg, envelope_params) {
                    let (eps1, eps2) = envelope(t, p);
                    if accumulators[i].reg1() >= eps1 {
                        violations[i] += 1;
                    }
                    if accumulators[i].reg2() >= eps2 {
                        violations[i] += 1;
                    }
                }
            }
        }
    }

    let policies = cfg
        .algorithms
        .iter()
        .zip(accumulators)
        .zip(violations)
        .zip(rounds)
        .map(
            |(((alg, acc), envelope_violations), rounds)| PolicyRunResult {
                algorithm: *alg,
                trace: acc.into_trace(),
                envelope_violations,
                rounds,
            },
        )
        .collect();
    Ok(RunResult {
        run_index,
        policies,
    })
}

/// Executes all runs on the calling thread.
pub fn execute_runs_sequential(
    cfg: &ResolvedConfig,
    factory: &EnvFactory,
    checkpoints: &[u64],
    envelope_params: Option<&EnvelopeParams>,
) -> Result<Vec<RunResult>> {
    (0..cfg.runs)
        .map(|r| run_one(cfg, factory, checkpoints, envelope_params, r))
        .collect()
}

/// Executes runs on a worker pool of `jobs` threads; results keep run order.
#[cfg(feature = "parallel")]
pub fn execute_runs_parallel(
    cfg: &ResolvedConfig,
    factory: &EnvFactory,
    checkpoints: &[u64],
    envelope_params: Option<&EnvelopeParams>,
    jobs: usize,
) -> Result<Vec<RunResult>> {
    use rayon::prelude::*;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Config(format!("cannot build worker pool: {e}")))?;
    pool.install(|| {
        (0..cfg.runs)
            .into_par_iter()
            .map(|r| run_one(cfg, factory, checkpoints, envelope_params, r))
            .collect()
    })
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

fn aggregate(
    cfg: &ResolvedConfig,
    checkpoints: &[u64],
    runs: &[RunResult],
) -> Vec<AlgorithmAggregate> {
    let n_cp = checkpoints.len();
    cfg.algorithms
        .iter()
        .enumerate()
        .map(|(i, alg)| {
            let series = |f: &dyn Fn(&RegretTrace) -> &Vec<f64>, j: usize| -> Vec<f64> {
                runs.iter().map(|r| f(&r.policies[i].trace)[j]).collect()
            };
            let mut agg = AlgorithmAggregate {
                algorithm: *alg,
                reg1_mean: Vec::with_capacity(n_cp),
                reg1_std: Vec::with_capacity(n_cp),
                reg2_mean: Vec::with_capacity(n_cp),
                reg2_std: Vec::with_capacity(n_cp),
                pareto_mean: Vec::with_capacity(n_cp),
                pareto_std: Vec::with_capacity(n_cp),
                cum_reward1_mean: Vec::with_capacity(n_cp),
                cum_reward2_mean: Vec::with_capacity(n_cp),
                sublinearity: [0.0; 3],
                envelope_violations: runs.iter().map(|r| r.policies[i].envelope_violations).sum(),
            };
            for j in 0..n_cp {
                let (m, s) = mean_std(&series(&|t| &t.reg1, j));
                agg.reg1_mean.push(m);
                agg.reg1_std.push(s);
                let (m, s) = mean_std(&series(&|t| &t.reg2, j));
                agg.reg2_mean.push(m);
                agg.reg2_std.push(s);
                let (m, s) = mean_std(&series(&|t| &t.pareto, j));
                agg.pareto_mean.push(m);
                agg.pareto_std.push(s);
                let (m, _) = mean_std(&series(&|t| &t.cum_reward1, j));
                agg.cum_reward1_mean.push(m);
                let (m, _) = mean_std(&series(&|t| &t.cum_reward2, j));
                agg.cum_reward2_mean.push(m);
            }
            agg.sublinearity = [
                crate::evaluation::sublinearity_fit(checkpoints, &agg.reg1_mean),
                crate::evaluation::sublinearity_fit(checkpoints, &agg.reg2_mean),
                crate::evaluation::sublinearity_fit(checkpoints, &agg.pareto_mean),
            ];
            agg
        })
        .collect()
}

/// Runs every configured policy over `runs` seeded replications and
/// aggregates the traces. `jobs = 1` forces the sequential path; with the
/// `parallel` feature disabled every call is sequential.
pub fn run_experiment(cfg: &ResolvedConfig, jobs: usize) -> Result<ExperimentResults> {
    let started = Instant::now();
    let factory = EnvFactory::from_config(cfg)?;
    let checkpoints = checkpoint_grid(cfg.horizon, cfg.checkpoints);

    let envelope_params = if cfg.algorithms.contains(&Algorithm::Mocmab) {
        // gap constants come from the environment itself, not any run
        let probe = factory.build(derive_seed(&[cfg.base_seed, ENV_STREAM]))?;
        let grid = if cfg.context_dims <= 2 { 101 } else { 41 };
        let (c1, c2) = optimality_gaps_on_grid(probe.as_ref(), grid);
        Some(EnvelopeParams::new(
            &cfg.hyperparams(),
            cfg.context_dims,
            c1,
            c2,
        ))
    } else {
        None
    };

    #[cfg(feature = "parallel")]
    let runs = if jobs > 1 {
        execute_runs_parallel(cfg, &factory, &checkpoints, envelope_params.as_ref(), jobs)?
    } else {
        execute_runs_sequential(cfg, &factory, &checkpoints, envelope_params.as_ref())?
    };
    #[cfg(not(feature = "parallel"))]
    let runs = {
        let _ = jobs;
        execute_runs_sequential(cfg, &factory, &checkpoints, envelope_params.as_ref())?
    };

    let aggregates = aggregate(cfg, &checkpoints, &runs);
    Ok(ExperimentResults {
        checkpoints,
        aggregates,
        runs,
        envelope: envelope_params,
        wall_clock_seconds: started.elapsed().as_secs_f64(),
    })
}
