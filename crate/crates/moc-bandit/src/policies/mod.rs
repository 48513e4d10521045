//! The partition-based two-objective learner and the five UCB-family
//! baselines, all behind one [`Policy`] contract.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::core::{Context, HyperParams, PartitionSpec, RewardVector};
use crate::error::Result;
use crate::seeding::derive_seed;

mod contextual;
mod mocmab;
mod oracle;
mod pareto_ucb1;
mod scalarized;
mod ucb1;

pub use contextual::Contextual;
pub use mocmab::{uncertainty, MocMab};
pub use oracle::OraclePolicy;
pub use pareto_ucb1::{pareto_ucb1_select, ParetoUcb1};
pub use scalarized::{
    scalarized_ucb1_select, ScalarizedUcb1, WeightSchedule, SCALARIZATION_WEIGHTS,
};
pub use ucb1::{ucb1_select, Ucb1};

/// Common contract for all learners.
///
/// A policy's behavior depends only on its constructor parameters, its seed,
/// and the history fed through [`Policy::update`]; identical seeds and input
/// streams reproduce identical arm sequences.
pub trait Policy {
    /// Chooses an arm for context `x` in round `t` (1-based).
    ///
    /// Panics if `x` does not match the dimension the policy was built for;
    /// the returned id is always `< K`.
    fn select(&mut self, x: &Context, t: u64) -> usize;

    /// Feeds back the observed reward for `arm` under context `x`.
    fn update(&mut self, x: &Context, arm: usize, r: RewardVector) -> Result<()>;

    /// Restores the freshly-constructed state, including the seed.
    fn reset(&mut self);
}

/// Uniform draw over the exact argmax set of `values`. Consumes randomness
/// only when the argmax is not unique, so unambiguous rounds do not disturb
/// the policy's stream.
pub(crate) fn random_argmax<R: Rng>(values: &[f64], rng: &mut R) -> usize {
    debug_assert!(!values.is_empty());
    let mut best = f64::NEG_INFINITY;
    let mut ties: Vec<usize> = Vec::new();
    for (i, &v) in values.iter().enumerate() {
        debug_assert!(!v.is_nan());
        if v > best {
            best = v;
            ties.clear();
            ties.push(i);
        } else if v == best {
            ties.push(i);
        }
    }
    if ties.len() == 1 {
        ties[0]
    } else {
        ties[rng.random_range(0..ties.len())]
    }
}

/// The six shipped algorithms, keyed by their config names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    /// The two-objective partition learner.
    Mocmab,
    /// Pareto-UCB1 on global statistics, context-blind.
    PUcb1,
    /// Scalarized UCB1 on global statistics, context-blind.
    SUcb1,
    /// One Pareto-UCB1 instance per partition cell.
    CpUcb1,
    /// One scalarized UCB1 instance per partition cell.
    CsUcb1,
    /// One dominant-objective UCB1 instance per partition cell.
    CdUcb1,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::Mocmab,
        Algorithm::PUcb1,
        Algorithm::SUcb1,
        Algorithm::CpUcb1,
        Algorithm::CsUcb1,
        Algorithm::CdUcb1,
    ];

    /// Stable identifier used for seed derivation; never reorder.
    pub fn id(&self) -> u64 {
        match self {
            Algorithm::Mocmab => 0,
            Algorithm::PUcb1 => 1,
            Algorithm::SUcb1 => 2,
            Algorithm::CpUcb1 => 3,
            Algorithm::CsUcb1 => 4,
            Algorithm::CdUcb1 => 5,
        }
    }

    /// Config / output-file name.
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Mocmab => "mocmab",
            Algorithm::PUcb1 => "p_ucb1",
            Algorithm::SUcb1 => "s_ucb1",
            Algorithm::CpUcb1 => "cp_ucb1",
            Algorithm::CsUcb1 => "cs_ucb1",
            Algorithm::CdUcb1 => "cd_ucb1",
        }
    }
}

/// Builds a ready-to-run policy instance.
///
/// The contextual baselines partition the context set exactly like the
/// two-objective learner (same `m`) and run an independent inner instance
/// per cell with a cell-derived sub-seed.
pub fn build_policy(
    alg: Algorithm,
    params: &HyperParams,
    d: usize,
    schedule: WeightSchedule,
    seed: u64,
) -> Result<Box<dyn Policy>> {
    let params = params.validated()?;
    let k = params.num_arms;
    let scale = params.scale;
    Ok(match alg {
        Algorithm::Mocmab => Box::new(MocMab::new(params, d, seed)?),
        Algorithm::PUcb1 => Box::new(ParetoUcb1::new(k, scale, seed)),
        Algorithm::SUcb1 => Box::new(ScalarizedUcb1::new(k, scale, schedule, seed)),
        Algorithm::CpUcb1 => {
            let spec = PartitionSpec::new(d, params.m)?;
            Box::new(Contextual::new(
                spec,
                move |s| ParetoUcb1::new(k, scale, s),
                seed,
            ))
        }
        Algorithm::CsUcb1 => {
            let spec = PartitionSpec::new(d, params.m)?;
            Box::new(Contextual::new(
                spec,
                move |s| ScalarizedUcb1::new(k, scale, schedule, s),
                seed,
            ))
        }
        Algorithm::CdUcb1 => {
            let spec = PartitionSpec::new(d, params.m)?;
            Box::new(Contextual::new(spec, move |s| Ucb1::new(k, scale, s), seed))
        }
    })
}

pub(crate) fn cell_seed(policy_seed: u64, cell: usize) -> u64 {
    derive_seed(&[policy_seed, 0x5e11, cell as u64])
}
