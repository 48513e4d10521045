//! Periodic extension: appends the time context `(t mod T_s) / T_s` and
//! modulates the inner environment's expected rewards by a smooth phase
//! profile, so the reward distributions drift periodically while remaining
//! learnable from the extended context.

use rand::RngCore;

use crate::core::{Context, ExpectedRewards, RewardVector};
use crate::environments::Environment;
use crate::error::{Error, Result};

/// Shipped modulation profile `g(s) = 0.75 + 0.25 sin(2 pi s)`, range
/// `[0.5, 1]`, peak at `s = 1/4`.
pub fn phase_profile(s: f64) -> f64 {
    0.75 + 0.25 * (2.0 * std::f64::consts::PI * s).sin()
}

pub struct Periodic<E: Environment> {
    inner: E,
    period: u64,
}

impl<E: Environment> Periodic<E> {
    pub fn new(inner: E, period: u64) -> Result<Self> {
        if period < 2 {
            return Err(Error::InvalidInput(format!(
                "period must be >= 2, got {period}"
            )));
        }
        Ok(Self { inner, period })
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    fn split(&self, x: &Context) -> (Context, f64) {
        let d = self.inner.dims();
        assert_eq!(x.dim(), d + 1, "extended context has one extra coordinate");
        let inner_x = x.truncated(d).expect("prefix of a valid context");
        (inner_x, x.coords()[d])
    }
}

impl<E: Environment> Environment for Periodic<E> {
    fn next_context(&mut self, t: u64) -> Context {
        let s = (t % self.period) as f64 / self.period as f64;
        let x = self.inner.next_context(t);
        x.extended(s).expect("s lies in [0,1)")
    }

    fn sample_reward(&self, x: &Context, arm: usize, rng: &mut dyn RngCore) -> RewardVector {
        let (inner_x, s) = self.split(x);
        let g = phase_profile(s);
        let r = self.inner.sample_reward(&inner_x, arm, rng);
        // scaling the realized reward by g keeps the mean at g * mu and the
        // noise inside [-1, 1]
        RewardVector::new(g * r.dominant, g * r.nondominant).expect("finite")
    }

    fn true_means(&self, x: &Context) -> ExpectedRewards {
        let (inner_x, s) = self.split(x);
        let g = phase_profile(s);
        let inner = self.inner.true_means(&inner_x);
        ExpectedRewards::new(inner.iter().map(|v| [g * v[0], g * v[1]]).collect()).expect("finite")
    }

    fn dims(&self) -> usize {
        self.inner.dims() + 1
    }

    fn num_arms(&self) -> usize {
        self.inner.num_arms()
    }

    fn tie_tolerance(&self) -> f64 {
        // a common factor preserves exact ties bit-for-bit
        self.inner.tie_tolerance()
    }

    fn holder_constants(&self) -> (f64, f64) {
        // |g| <= 1, |g'| <= pi/2 and means lie in [0,1], so the extended
        // gradient norm is bounded by sqrt(L^2 + (pi/2)^2) when alpha = 1
        let (l, alpha) = self.inner.holder_constants();
        if alpha == 1.0 {
            ((l * l + std::f64::consts::PI.powi(2) / 4.0).sqrt(), 1.0)
        } else {
            (l + std::f64::consts::PI / 2.0, alpha)
        }
    }
}
