//! Scalarized UCB1: three fixed weight functions turn the reward vector into
//! a scalar; each keeps its own per-arm statistics. A round first picks a
//! weight function (uniformly at random by default, round-robin as a config
//! option), then runs UCB1 on that function's own statistics.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::core::{Context, RewardVector};
use crate::error::{Error, Result};
use crate::policies::{ucb1_select, Policy};

/// The three shipped linear scalarizations.
pub const SCALARIZATION_WEIGHTS: [[f64; 2]; 3] = [[1.0, 0.0], [0.5, 0.5], [0.0, 1.0]];

/// How the per-round weight function is picked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightSchedule {
    #[default]
    Uniform,
    RoundRobin,
}

/// One scalarized selection step: draws weight function `j`, then UCB1 over
/// that function's `(count, scalarized mean)` table. Returns `(arm, j)`.
pub fn scalarized_ucb1_select<R: Rng>(
    stats: &[Vec<(u64, f64)>],
    t: u64,
    scale: f64,
    schedule: WeightSchedule,
    round_robin_next: usize,
    rng: &mut R,
) -> (usize, usize) {
    let j = match schedule {
        WeightSchedule::Uniform => rng.random_range(0..stats.len()),
        WeightSchedule::RoundRobin => round_robin_next % stats.len(),
    };
    let arm = ucb1_select(&stats[j], t, scale, rng);
    (arm, j)
}

#[derive(Debug, Clone)]
pub struct ScalarizedUcb1 {
    /// `[weight function][arm] -> (count, scalarized mean)`
    stats: Vec<Vec<(u64, f64)>>,
    scale: f64,
    schedule: WeightSchedule,
    rng: ChaCha8Rng,
    seed: u64,
    last_weight: usize,
    rounds: u64,
}

impl ScalarizedUcb1 {
    pub fn new(num_arms: usize, scale: f64, schedule: WeightSchedule, seed: u64) -> Self {
        Self {
            stats: vec![vec![(0, 0.0); num_arms]; SCALARIZATION_WEIGHTS.len()],
            scale,
            schedule,
            rng: ChaCha8Rng::seed_from_u64(seed),
            seed,
            last_weight: 0,
            rounds: 0,
        }
    }

    pub fn last_weight(&self) -> usize {
        self.last_weight
    }
}

impl Policy for ScalarizedUcb1 {
    fn select(&mut self, _x: &Context, t: u64) -> usize {
        let (arm, j) = scalarized_ucb1_select(
            &self.stats,
            t,
            self.scale,
            self.schedule,
            self.rounds as usize,
            &mut self.rng,
        );
        self.last_weight = j;
        self.rounds += 1;
        arm
    }

    fn update(&mut self, _x: &Context, arm: usize, r: RewardVector) -> Result<()> {
        let k = self.stats[0].len();
        if arm >= k {
            return Err(Error::InvalidInput(format!(
                "arm {arm} out of range for {k} arms"
            )));
        }
        // credit w_j . r to the drawn function's statistics only
        let w = SCALARIZATION_WEIGHTS[self.last_weight];
        let scalar = w[0] * r.dominant + w[1] * r.nondominant;
        let (count, mean) = &mut self.stats[self.last_weight][arm];
        let n = *count as f64;
        *mean = (*mean * n + scalar) / (n + 1.0);
        *count += 1;
        Ok(())
    }

    fn reset(&mut self) {
        let k = self.stats[0].len();
        self.stats = vec![vec![(0, 0.0); k]; SCALARIZATION_WEIGHTS.len()];
        self.rng = ChaCha8Rng::seed_from_u64(self.seed);
        self.last_weight = 0;
        self.rounds = 0;
    }
}
