//! Clairvoyant lexicographic policy: selects the optimal arm from the true
//! means. A regret-accounting aid for tests and benchmarks, not a learner.

use crate::core::{Context, ExpectedRewards, RewardVector};
use crate::error::Result;
use crate::pareto::lex_optimal;
use crate::policies::Policy;

pub struct OraclePolicy {
    means: Box<dyn Fn(&Context) -> ExpectedRewards + Send + Sync>,
    tie_tol: f64,
}

impl OraclePolicy {
    pub fn new(
        means: impl Fn(&Context) -> ExpectedRewards + Send + Sync + 'static,
        tie_tol: f64,
    ) -> Self {
        Self {
            means: Box::new(means),
            tie_tol,
        }
    }
}

impl Policy for OraclePolicy {
    fn select(&mut self, x: &Context, _t: u64) -> usize {
        lex_optimal(&(self.means)(x), self.tie_tol)
            .expect("oracle means must be valid")
            .best
    }

    fn update(&mut self, _x: &Context, _arm: usize, _r: RewardVector) -> Result<()> {
        Ok(())
    }

    fn reset(&mut self) {}
}
