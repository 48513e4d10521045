//! Deterministic fixture environment: constant context, rewards equal to
//! the configured means exactly (no noise). Used by tests and benchmarks,
//! e.g. the tied-dominant two-arm instance.

use rand::RngCore;

use crate::core::{Context, ExpectedRewards, RewardVector};
use crate::environments::Environment;
use crate::error::Result;

pub struct FixedMeansEnv {
    means: ExpectedRewards,
    d: usize,
}

impl FixedMeansEnv {
    pub fn new(per_arm: Vec<[f64; 2]>, d: usize) -> Result<Self> {
        Ok(Self {
            means: ExpectedRewards::new(per_arm)?,
            d,
        })
    }
}

impl Environment for FixedMeansEnv {
    fn next_context(&mut self, _t: u64) -> Context {
        Context::new(vec![0.5; self.d]).expect("in range")
    }

    fn sample_reward(&self, _x: &Context, arm: usize, _rng: &mut dyn RngCore) -> RewardVector {
        let mu = self.means.arm(arm);
        RewardVector::new(mu[0], mu[1]).expect("finite")
    }

    fn true_means(&self, _x: &Context) -> ExpectedRewards {
        self.means.clone()
    }

    fn dims(&self) -> usize {
        self.d
    }

    fn num_arms(&self) -> usize {
        self.means.num_arms()
    }

    fn tie_tolerance(&self) -> f64 {
        0.0
    }

    fn holder_constants(&self) -> (f64, f64) {
        (1.0, 1.0) // constant in x
    }
}
