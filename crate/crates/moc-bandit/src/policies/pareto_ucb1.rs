//! Empirical Pareto-UCB1 with two objectives: inflate each objective's
//! sample mean by `scale * sqrt((2/n) ln(t * (2K)^(1/4)))`, extract the
//! Pareto front of the inflated vectors and play a uniformly random front
//! member. Unexplored arms are swept first in index order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::core::{Context, ExpectedRewards, RewardVector};
use crate::error::{Error, Result};
use crate::pareto::pareto_front;
use crate::policies::Policy;

/// One Pareto-UCB1 selection step over per-arm `(count, mean1, mean2)`.
pub fn pareto_ucb1_select<R: Rng>(
    stats: &[(u64, f64, f64)],
    t: u64,
    scale: f64,
    rng: &mut R,
) -> usize {
    debug_assert!(t >= 1);
    let k = stats.len();
    if let Some(unexplored) = stats.iter().position(|&(c, _, _)| c == 0) {
        return unexplored;
    }
    let log_term = ((t as f64) * (2.0 * k as f64).powf(0.25)).ln();
    let vectors: Vec<[f64; 2]> = stats
        .iter()
        .map(|&(count, m1, m2)| {
            let w = scale * (2.0 * log_term / count as f64).sqrt();
            [m1 + w, m2 + w]
        })
        .collect();
    let mu = ExpectedRewards::new(vectors).expect("finite indices");
    let front = pareto_front(&mu).expect("non-empty arm set");
    let arms = front.arms();
    arms[rng.random_range(0..arms.len())]
}

#[derive(Debug, Clone)]
pub struct ParetoUcb1 {
    counts: Vec<u64>,
    means: Vec<[f64; 2]>,
    scale: f64,
    rng: ChaCha8Rng,
    seed: u64,
}

impl ParetoUcb1 {
    pub fn new(num_arms: usize, scale: f64, seed: u64) -> Self {
        Self {
            counts: vec![0; num_arms],
            means: vec![[0.0, 0.0]; num_arms],
            scale,
            rng: ChaCha8Rng::seed_from_u64(seed),
            seed,
        }
    }
}

impl Policy for ParetoUcb1 {
    fn select(&mut self, _x: &Context, t: u64) -> usize {
        let stats: Vec<(u64, f64, f64)> = self
            .counts
            .iter()
            .zip(&self.means)
            .map(|(&c, m)| (c, m[0], m[1]))
            .collect();
        pareto_ucb1_select(&stats, t, self.scale, &mut self.rng)
    }

    fn update(&mut self, _x: &Context, arm: usize, r: RewardVector) -> Result<()> {
        if arm >= self.counts.len() {
            return Err(Error::InvalidInput(format!(
                "arm {arm} out of range for {} arms",
                self.counts.len()
            )));
        }
        let n = self.counts[arm] as f64;
        self.means[arm][0] = (self.means[arm][0] * n + r.dominant) / (n + 1.0);
        self.means[arm][1] = (self.means[arm][1] * n + r.nondominant) / (n + 1.0);
        self.counts[arm] += 1;
        Ok(())
    }

    fn reset(&mut self) {
        self.counts.fill(0);
        self.means = vec![[0.0, 0.0]; self.counts.len()];
        self.rng = ChaCha8Rng::seed_from_u64(self.seed);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initialization_sweep_starts_at_arm_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(
            pareto_ucb1_select(&[(0, 0.0, 0.0), (0, 0.0, 0.0)], 1, 1.0, &mut rng),
            0
        );
        assert_eq!(
            pareto_ucb1_select(&[(1, 0.5, 0.5), (0, 0.0, 0.0)], 2, 1.0, &mut rng),
            1
        );
    }

    #[test]
    fn dominated_arm_is_never_chosen() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        // huge counts shrink the widths, indices ~ means
        let stats = [(1_000_000, 0.9, 0.9), (1_000_000, 0.1, 0.1)];
        for t in 2..200 {
            assert_eq!(pareto_ucb1_select(&stats, t, 1.0, &mut rng), 0);
        }
    }

    #[test]
    fn front_sampling_is_uniform() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let stats = [(1_000_000_000, 0.9, 0.1), (1_000_000_000, 0.1, 0.9)];
        let mut hits = [0u32; 2];
        let draws = 10_000;
        for _ in 0..draws {
            hits[pareto_ucb1_select(&stats, 100, 1.0, &mut rng)] += 1;
        }
        let f0 = f64::from(hits[0]) / f64::from(draws);
        assert!((f0 - 0.5).abs() < 0.02, "front frequency {f0}");
    }
}
