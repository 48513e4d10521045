//! Single-objective UCB1. On its own it ignores the second reward component
//! entirely; wrapped per partition cell it becomes the dominant-only
//! contextual baseline.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::core::{Context, RewardVector};
use crate::error::{Error, Result};
use crate::policies::{random_argmax, Policy};

/// Index selection `argmax mean_a + scale * sqrt(2 ln t / count_a)`, with
/// unvisited arms scored infinite and exact ties broken uniformly.
pub fn ucb1_select<R: rand::Rng>(stats: &[(u64, f64)], t: u64, scale: f64, rng: &mut R) -> usize {
    debug_assert!(t >= 1);
    let log_t = (t as f64).ln();
    let indices: Vec<f64> = stats
        .iter()
        .map(|&(count, mean)| {
            if count == 0 {
                f64::INFINITY
            } else {
                mean + scale * (2.0 * log_t / count as f64).sqrt()
            }
        })
        .collect();
    random_argmax(&indices, rng)
}

#[derive(Debug, Clone)]
pub struct Ucb1 {
    counts: Vec<u64>,
    means: Vec<f64>,
    scale: f64,
    rng: ChaCha8Rng,
    seed: u64,
}

impl Ucb1 {
    pub fn new(num_arms: usize, scale: f64, seed: u64) -> Self {
        Self {
            counts: vec![0; num_arms],
            means: vec![0.0; num_arms],
            scale,
            rng: ChaCha8Rng::seed_from_u64(seed),
            seed,
        }
    }
}

impl Policy for Ucb1 {
    fn select(&mut self, _x: &Context, t: u64) -> usize {
        let stats: Vec<(u64, f64)> = self
            .counts
            .iter()
            .zip(&self.means)
            .map(|(&c, &m)| (c, m))
            .collect();
        ucb1_select(&stats, t, self.scale, &mut self.rng)
    }

    fn update(&mut self, _x: &Context, arm: usize, r: RewardVector) -> Result<()> {
        if arm >= self.counts.len() {
            return Err(Error::InvalidInput(format!(
                "arm {arm} out of range for {} arms",
                self.counts.len()
            )));
        }
        // dominant objective only
        let n = self.counts[arm] as f64;
        self.means[arm] = (self.means[arm] * n + r.dominant) / (n + 1.0);
        self.counts[arm] += 1;
        Ok(())
    }

    fn reset(&mut self) {
        self.counts.fill(0);
        self.means.fill(0.0);
        self.rng = ChaCha8Rng::seed_from_u64(self.seed);
    }
}
