//! Two-objective partition learner.
//!
//! The context set is split into `m^d` hypercubes; per (arm, cell) the
//! learner tracks a counter and a sample mean per objective. Each round it
//! inflates both means by the uncertainty level `u = scale * sqrt(2A/N)` and
//! takes the dominant-objective index leader. When the leader's uncertainty
//! is still above `beta * v` (v the margin of tolerance) it plays the leader
//! to shrink that uncertainty. Otherwise it keeps every arm whose dominant
//! sample mean is within the joint uncertainty plus `2v` of the leader's and
//! plays the one with the best non-dominant index, which is what protects
//! the second objective from coin-flip tie-breaking on the first.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::core::{locate, Context, HyperParams, PartitionSpec, RewardVector, StatsTable};
use crate::error::{Error, Result};
use crate::policies::{random_argmax, Policy};

/// Confidence half-width for a cell visited `count` times:
/// `scale * sqrt(2 * a_mt / count)`, infinite while the pair is unvisited so
/// unexplored arms win every index comparison.
pub fn uncertainty(count: u64, a_mt: f64, scale: f64) -> f64 {
    if count == 0 {
        f64::INFINITY
    } else {
        scale * (2.0 * a_mt / count as f64).sqrt()
    }
}

#[derive(Debug, Clone)]
pub struct MocMab {
    params: HyperParams,
    spec: PartitionSpec,
    stats: StatsTable,
    /// Margin of tolerance `v`; fixed by (L, alpha, m, d).
    v: f64,
    /// Log confidence constant `A`; fixed by (K, m, d, T).
    a_mt: f64,
    rng: ChaCha8Rng,
    seed: u64,
}

impl MocMab {
    pub fn new(params: HyperParams, d: usize, seed: u64) -> Result<Self> {
        let params = params.validated()?;
        let spec = PartitionSpec::new(d, params.m)?;
        let stats = StatsTable::new(&spec, params.num_arms)?;
        let v = params.margin_of_tolerance(d);
        let a_mt = params.confidence_constant(d);
        Ok(Self {
            params,
            spec,
            stats,
            v,
            a_mt,
            rng: ChaCha8Rng::seed_from_u64(seed),
            seed,
        })
    }

    pub fn margin(&self) -> f64 {
        self.v
    }

    pub fn confidence_constant(&self) -> f64 {
        self.a_mt
    }

    pub fn partition(&self) -> &PartitionSpec {
        &self.spec
    }

    /// Total update count across the whole table (one per `update` call).
    pub fn observations(&self) -> u64 {
        self.stats.total_count()
    }
}

/// Snapshot of one arm's statistics in the current cell.
#[derive(Debug, Clone, Copy)]
struct ArmView {
    mean1: f64,
    mean2: f64,
    width: f64,
    count: u64,
}

/// One selection step over the current cell's arm views. Factored out of
/// the trait impl so the branch logic is testable with hand-picked widths.
fn select_in_cell(
    arms: &[ArmView],
    v: f64,
    beta: f64,
    a_mt: f64,
    scale: f64,
    rng: &mut ChaCha8Rng,
) -> usize {
    let g1: Vec<f64> = arms.iter().map(|a| a.mean1 + a.width).collect();
    let leader = random_argmax(&g1, rng);

    if arms[leader].width > beta * v {
        // Confidence in the dominant leader is still low; play it.
        return leader;
    }

    // u <= beta*v inverts to N >= 2*A*scale^2 / (beta*v)^2.
    debug_assert!(
        arms[leader].count as f64 >= 2.0 * a_mt * scale * scale / (beta * v).powi(2) - 1e-9,
        "exploit branch fired below the count threshold"
    );

    // Candidate arms: dominant sample mean within the joint uncertainty plus
    // 2v of the leader's.
    let threshold = |a: &ArmView| arms[leader].mean1 - arms[leader].width - a.width - 2.0 * v;
    let g2: Vec<f64> = arms
        .iter()
        .map(|a| {
            if a.mean1 >= threshold(a) {
                a.mean2 + a.width
            } else {
                f64::NEG_INFINITY
            }
        })
        .collect();
    let chosen = random_argmax(&g2, rng);
    debug_assert!(
        arms[chosen].mean1 >= threshold(&arms[chosen]),
        "selected arm left the candidate set"
    );
    chosen
}

impl Policy for MocMab {
    fn select(&mut self, x: &Context, _t: u64) -> usize {
        let cell = locate(x, &self.spec).expect("context does not match the learner's partition");
        let arms: Vec<ArmView> = (0..self.params.num_arms)
            .map(|a| {
                let s = self.stats.get(cell, a);
                ArmView {
                    mean1: s.mean_dominant,
                    mean2: s.mean_nondominant,
                    width: uncertainty(s.count, self.a_mt, self.params.scale),
                    count: s.count,
                }
            })
            .collect();
        select_in_cell(
            &arms,
            self.v,
            self.params.beta,
            self.a_mt,
            self.params.scale,
            &mut self.rng,
        )
    }

    fn update(&mut self, x: &Context, arm: usize, r: RewardVector) -> Result<()> {
        if arm >= self.params.num_arms {
            return Err(Error::InvalidInput(format!(
                "arm {arm} out of range for {} arms",
                self.params.num_arms
            )));
        }
        let cell = locate(x, &self.spec)?;
        self.stats.update(cell, arm, r);
        Ok(())
    }

    fn reset(&mut self) {
        self.stats = StatsTable::new(&self.spec, self.params.num_arms).expect("valid spec");
        self.rng = ChaCha8Rng::seed_from_u64(self.seed);
    }
}
