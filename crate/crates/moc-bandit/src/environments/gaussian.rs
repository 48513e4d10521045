//! Synthetic two-dimensional surface: four arms whose expected rewards are
//! peak-normalized Gaussian bumps `exp(-||x - c||^2 / (2 * 0.3))` (so the
//! maximum value is exactly 1), except the fourth arm's dominant mean which
//! is identically 0. Rewards are independent Bernoulli draws per objective.
//!
//! Arms 0 and 1 share the dominant center, giving bit-identical dominant
//! means everywhere: the exact-tie structure that makes coin-flip
//! tie-breaking costly in the second objective.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::core::{Context, ExpectedRewards, RewardVector};
use crate::environments::Environment;
use crate::error::{Error, Result};

const VARIANCE: f64 = 0.3;

/// Dominant-objective bump centers; `None` is the constant-zero arm.
const DOMINANT_CENTERS: [Option<[f64; 2]>; 4] =
    [Some([0.3, 0.5]), Some([0.3, 0.5]), Some([0.7, 0.5]), None];

/// Non-dominant-objective bump centers.
const NONDOMINANT_CENTERS: [[f64; 2]; 4] = [[0.3, 0.7], [0.3, 0.3], [0.7, 0.5], [0.7, 0.5]];

fn bump(x: &[f64], c: [f64; 2]) -> f64 {
    let d2 = (x[0] - c[0]).powi(2) + (x[1] - c[1]).powi(2);
    (-d2 / (2.0 * VARIANCE)).exp()
}

/// Expected rewards of the four arms at `x`.
pub fn gaussian_surface_means(x: &Context) -> Result<ExpectedRewards> {
    if x.dim() != 2 {
        return Err(Error::InvalidInput(format!(
            "the synthetic surface is two-dimensional, got d={}",
            x.dim()
        )));
    }
    let c = x.coords();
    let per_arm = (0..4)
        .map(|a| {
            let dominant = DOMINANT_CENTERS[a].map_or(0.0, |center| bump(c, center));
            [dominant, bump(c, NONDOMINANT_CENTERS[a])]
        })
        .collect();
    ExpectedRewards::new(per_arm)
}

pub struct GaussianSurface {
    ctx_rng: ChaCha8Rng,
}

impl GaussianSurface {
    pub fn new(seed: u64) -> Self {
        Self {
            ctx_rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl Environment for GaussianSurface {
    fn next_context(&mut self, _t: u64) -> Context {
        // contexts arrive uniformly at random over [0,1]^2
        Context::new(vec![self.ctx_rng.random(), self.ctx_rng.random()]).expect("in range")
    }

    fn sample_reward(&self, x: &Context, arm: usize, rng: &mut dyn RngCore) -> RewardVector {
        let mu = self.true_means(x).arm(arm);
        let r1 = f64::from(u8::from(rng.random::<f64>() < mu[0]));
        let r2 = f64::from(u8::from(rng.random::<f64>() < mu[1]));
        RewardVector::new(r1, r2).expect("finite")
    }

    fn true_means(&self, x: &Context) -> ExpectedRewards {
        gaussian_surface_means(x).expect("valid context")
    }

    fn dims(&self) -> usize {
        2
    }

    fn num_arms(&self) -> usize {
        4
    }

    fn tie_tolerance(&self) -> f64 {
        0.0 // arms 0 and 1 tie bit-exactly by construction
    }

    fn holder_constants(&self) -> (f64, f64) {
        // max gradient norm of exp(-r^2/0.6) is sqrt(2/(0.6 e)) ~= 1.11
        (2.0, 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn ctx(a: f64, b: f64) -> Context {
        Context::new(vec![a, b]).unwrap()
    }

    #[test]
    fn peak_normalization_hits_one_at_the_center() {
        let mu = gaussian_surface_means(&ctx(0.3, 0.5)).unwrap();
        assert_eq!(mu.arm(0)[0], 1.0);
        assert_eq!(mu.arm(1)[0], 1.0);
    }

    #[test]
    fn density_values_match_high_precision_oracle() {
        // frozen from a 40-digit evaluation of exp(-||x-c||^2/0.6)
        let mu = gaussian_surface_means(&ctx(0.3, 0.5)).unwrap();
        assert!((mu.arm(2)[0] - 0.765_928_338_364_648_7).abs() < 1e-15);
        assert_eq!(mu.arm(3)[0], 0.0);

        let mu = gaussian_surface_means(&ctx(0.3, 0.6)).unwrap();
        assert!((mu.arm(0)[1] - 0.983_471_453_821_617_5).abs() < 1e-15);
        assert!((mu.arm(1)[1] - 0.860_707_976_425_057_8).abs() < 1e-15);
        assert!((mu.arm(2)[1] - 0.753_268_656_454_656_9).abs() < 1e-15);
    }

    #[test]
    fn dominant_means_of_arms_zero_and_one_are_bit_identical() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..10_000 {
            let x = ctx(rng.random(), rng.random());
            let mu = gaussian_surface_means(&x).unwrap();
            assert!(mu.arm(0)[0].to_bits() == mu.arm(1)[0].to_bits());
        }
    }

    #[test]
    fn rejects_wrong_dimension() {
        assert!(gaussian_surface_means(&Context::new(vec![0.5]).unwrap()).is_err());
    }

    #[test]
    fn degenerate_bernoulli_draws() {
        let env = GaussianSurface::new(0);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let center = ctx(0.3, 0.5);
        for _ in 0..100 {
            let r = env.sample_reward(&center, 0, &mut rng);
            assert_eq!(r.dominant, 1.0); // mean exactly 1
        }
        for _ in 0..100 {
            let r = env.sample_reward(&center, 3, &mut rng);
            assert_eq!(r.dominant, 0.0); // mean exactly 0
        }
    }

    #[test]
    fn bernoulli_frequency_matches_mean() {
        let env = GaussianSurface::new(0);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        // arm 2 dominant mean at (0.3,0.5) is ~0.7659
        let x = ctx(0.3, 0.5);
        let n = 100_000;
        let mut hits = 0u32;
        for _ in 0..n {
            hits += env.sample_reward(&x, 2, &mut rng).dominant as u32;
        }
        let freq = f64::from(hits) / f64::from(n);
        assert!((freq - 0.765_928).abs() < 0.01, "freq={freq}");
    }
}
