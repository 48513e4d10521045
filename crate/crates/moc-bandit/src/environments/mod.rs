//! Simulated context/reward generators with queryable ground-truth expected
//! rewards. Learners only ever see `next_context` and sampled rewards; the
//! ground truth feeds the regret oracle.

use rand::RngCore;

use crate::core::{Context, ExpectedRewards, RewardVector};

mod fixed;
mod gaussian;
mod multichannel;
mod periodic;
mod replay;

pub use fixed::FixedMeansEnv;
pub use gaussian::{gaussian_surface_means, GaussianSurface};
pub use multichannel::{multichannel_true_means, Multichannel, CHANNEL_RATES, NUM_CHANNELS};
pub use periodic::{phase_profile, Periodic};
pub use replay::{load_replay_csv, ClickModel, ReplayEnv, ReplayRecord};

/// Contract every simulated environment satisfies.
///
/// Context generation owns an internal seeded stream (`&mut self`); reward
/// sampling draws all noise from the RNG handed in, so the runner can key
/// noise sub-streams by (run, policy, round, arm) and keep policies from
/// perturbing each other's randomness. In every shipped environment the
/// reward noise is bounded in `[-1, 1]` around the mean.
pub trait Environment {
    /// Context for round `t` (1-based).
    fn next_context(&mut self, t: u64) -> Context;

    /// One stochastic reward draw for `(x, arm)`; its expectation equals the
    /// corresponding entry of [`Environment::true_means`].
    fn sample_reward(&self, x: &Context, arm: usize, rng: &mut dyn RngCore) -> RewardVector;

    /// Ground-truth expected rewards at `x`, for the oracle only.
    fn true_means(&self, x: &Context) -> ExpectedRewards;

    fn dims(&self) -> usize;

    fn num_arms(&self) -> usize;

    /// Tolerance the lexicographic oracle uses when testing dominant-mean
    /// ties; zero where the environment constructs exact ties analytically.
    fn tie_tolerance(&self) -> f64;

    /// Documented smoothness constants `(L, alpha)` satisfied by the mean
    /// surfaces; exercised by the sampled-pair smoothness test.
    fn holder_constants(&self) -> (f64, f64);
}
