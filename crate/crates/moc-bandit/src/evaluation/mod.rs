//! Oracle computation, regret accounting, high-probability envelope checks,
//! and the seeded multi-run experiment engine.

use crate::core::{ExpectedRewards, HyperParams};
use crate::error::Result;
use crate::pareto::{lex_optimal, pareto_front, psg_with_front, LexOptimal, ParetoFront};

mod runner;

#[cfg(feature = "parallel")]
pub use runner::execute_runs_parallel;
pub use runner::{
    execute_runs_sequential, run_experiment, AlgorithmAggregate, EnvFactory, ExperimentResults,
    PolicyRunResult, RunResult,
};

/// Geometrically spaced round indices at which cumulative series are
/// snapshotted: `n` points from 1 to the horizon plus the final round,
/// deduplicated.
pub fn checkpoint_grid(horizon: u64, n: usize) -> Vec<u64> {
    assert!(horizon >= 1 && n >= 1);
    let mut grid: Vec<u64> = (1..=n)
        .map(|k| {
            let t = (horizon as f64).powf(k as f64 / n as f64).round() as u64;
            t.clamp(1, horizon)
        })
        .collect();
    grid.push(horizon);
    grid.sort_unstable();
    grid.dedup();
    grid
}

/// Per-checkpoint cumulative series for one policy on one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RegretTrace {
    pub checkpoints: Vec<u64>,
    pub reg1: Vec<f64>,
    pub reg2: Vec<f64>,
    pub pareto: Vec<f64>,
    pub cum_reward1: Vec<f64>,
    pub cum_reward2: Vec<f64>,
}

impl RegretTrace {
    fn with_capacity(n: usize) -> Self {
        Self {
            checkpoints: Vec::with_capacity(n),
            reg1: Vec::with_capacity(n),
            reg2: Vec::with_capacity(n),
            pareto: Vec::with_capacity(n),
            cum_reward1: Vec::with_capacity(n),
            cum_reward2: Vec::with_capacity(n),
        }
    }

    pub fn len(&self) -> usize {
        self.checkpoints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.checkpoints.is_empty()
    }
}

/// Ground truth for one round, shared by every policy's accounting.
pub struct RoundOracle {
    pub means: ExpectedRewards,
    pub lex: LexOptimal,
    pub front: ParetoFront,
}

impl RoundOracle {
    pub fn compute(means: ExpectedRewards, tie_tol: f64) -> Result<Self> {
        let lex = lex_optimal(&means, tie_tol)?;
        let front = pareto_front(&means)?;
        Ok(Self { means, lex, front })
    }
}

/// Running cumulative regrets and rewards for one policy, snapshotted on a
/// checkpoint grid.
#[derive(Debug, Clone)]
pub struct RegretAccumulator {
    checkpoints: Vec<u64>,
    next_checkpoint: usize,
    reg1: f64,
    reg2: f64,
    pareto: f64,
    cum_reward1: f64,
    cum_reward2: f64,
    trace: RegretTrace,
}

impl RegretAccumulator {
    pub fn new(checkpoints: Vec<u64>) -> Self {
        let n = checkpoints.len();
        Self {
            checkpoints,
            next_checkpoint: 0,
            reg1: 0.0,
            reg2: 0.0,
            pareto: 0.0,
            cum_reward1: 0.0,
            cum_reward2: 0.0,
            trace: RegretTrace::with_capacity(n),
        }
    }

    /// Adds one round: gaps against the lexicographic oracle, the Pareto
    /// suboptimality gap of the chosen arm, and the chosen arm's expected
    /// rewards.
    pub fn regret_step(&mut self, oracle: &RoundOracle, chosen: usize) {
        let mu = oracle.means.arm(chosen);
        self.reg1 += oracle.lex.mu1_star - mu[0];
        self.reg2 += oracle.lex.mu2_star - mu[1];
        self.pareto +=
            psg_with_front(chosen, &oracle.means, &oracle.front).expect("chosen arm is in range");
        self.cum_reward1 += mu[0];
        self.cum_reward2 += mu[1];
    }

    /// Snapshots the cumulative series if `t` sits on the grid; reports
    /// whether it did.
    pub fn checkpoint(&mut self, t: u64) -> bool {
        if self.next_checkpoint < self.checkpoints.len()
            && self.checkpoints[self.next_checkpoint] == t
        {
            self.trace.checkpoints.push(t);
            self.trace.reg1.push(self.reg1);
            self.trace.reg2.push(self.reg2);
            self.trace.pareto.push(self.pareto);
            self.trace.cum_reward1.push(self.cum_reward1);
            self.trace.cum_reward2.push(self.cum_reward2);
            self.next_checkpoint += 1;
            true
        } else {
            false
        }
    }

    pub fn reg1(&self) -> f64 {
        self.reg1
    }

    pub fn reg2(&self) -> f64 {
        self.reg2
    }

    pub fn pareto(&self) -> f64 {
        self.pareto
    }

    pub fn into_trace(self) -> RegretTrace {
        self.trace
    }
}

/// Constants of the high-probability regret envelopes.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct EnvelopeParams {
    pub c1_max: f64,
    pub c2_max: f64,
    pub m: usize,
    pub d: usize,
    pub num_arms: usize,
    pub horizon: u64,
    pub beta: f64,
    pub v: f64,
    pub a_mt: f64,
    pub b_mt: f64,
}

impl EnvelopeParams {
    /// `c1_max` / `c2_max` are the largest per-round optimality gaps of the
    /// environment; estimates come from grid maximization capped at 1 for
    /// `[0,1]`-bounded rewards.
    pub fn new(params: &HyperParams, d: usize, c1_max: f64, c2_max: f64) -> Self {
        let a_mt = params.confidence_constant(d);
        Self {
            c1_max,
            c2_max,
            m: params.m,
            d,
            num_arms: params.num_arms,
            horizon: params.horizon,
            beta: params.beta,
            v: params.margin_of_tolerance(d),
            a_mt,
            b_mt: 2.0 * (2.0 * a_mt).sqrt(),
        }
    }
}

/// High-probability envelopes: with probability at least `1 - 1/T` the
/// cumulative regrets stay below
///
/// `eps1(t) = m^d K C1 + 2 B sqrt(K m^d t) + 2 (beta + 2) v t`
/// `eps2(t) = m^d K C2 + m^d C2 K (2A / (beta^2 v^2)) + 2 B sqrt(K m^d t) + 2 v t`
pub fn envelope(t: u64, p: &EnvelopeParams) -> (f64, f64) {
    let md = (p.m as f64).powi(p.d as i32);
    let k = p.num_arms as f64;
    let tf = t as f64;
    let shared = 2.0 * p.b_mt * (k * md * tf).sqrt();
    let eps1 = md * k * p.c1_max + shared + 2.0 * (p.beta + 2.0) * p.v * tf;
    let eps2 = md * k * p.c2_max
        + md * p.c2_max * k * (2.0 * p.a_mt / (p.beta * p.beta * p.v * p.v))
        + shared
        + 2.0 * p.v * tf;
    (eps1, eps2)
}

/// Least-squares slope of `log reg` against `log t` over the second half of
/// the checkpoints; 0 when no positive regret values are available. An
/// exponent below 1 is the operational reading of sublinear growth.
pub fn sublinearity_fit(checkpoints: &[u64], reg: &[f64]) -> f64 {
    assert_eq!(checkpoints.len(), reg.len());
    let start = checkpoints.len() / 2;
    let pts: Vec<(f64, f64)> = checkpoints[start..]
        .iter()
        .zip(&reg[start..])
        .filter(|&(_, &r)| r > 0.0)
        .map(|(&t, &r)| ((t as f64).ln(), r.ln()))
        .collect();
    if pts.len() < 2 {
        return 0.0;
    }
    let n = pts.len() as f64;
    let mean_x = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    if sxx == 0.0 {
        return 0.0;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    sxy / sxx
}

/// Grid-maximized per-round optimality gaps `max_x (mu_i^*(x) - min_a
/// mu_i_a(x))`, capped at 1 for `[0,1]`-bounded environments. An upper
/// estimate keeps the envelope check valid; the cap is itself an upper bound
/// here.
pub fn optimality_gaps_on_grid(
    env: &dyn crate::environments::Environment,
    points_per_axis: usize,
) -> (f64, f64) {
    let d = env.dims();
    let n = points_per_axis.max(2);
    let total = n.pow(d as u32);
    let (mut c1, mut c2) = (0.0f64, 0.0f64);
    let tie_tol = env.tie_tolerance();
    for idx in 0..total {
        let mut rest = idx;
        let mut coords = Vec::with_capacity(d);
        for _ in 0..d {
            coords.push((rest % n) as f64 / (n - 1) as f64);
            rest /= n;
        }
        let x = crate::core::Context::new(coords).expect("grid point in range");
        let mu = env.true_means(&x);
        let lex = lex_optimal(&mu, tie_tol).expect("valid means");
        let min1 = mu.iter().map(|v| v[0]).fold(f64::INFINITY, f64::min);
        let min2 = mu.iter().map(|v| v[1]).fold(f64::INFINITY, f64::min);
        c1 = c1.max(lex.mu1_star - min1);
        c2 = c2.max(lex.mu2_star - min2);
    }
    (c1.min(1.0), c2.min(1.0))
}
