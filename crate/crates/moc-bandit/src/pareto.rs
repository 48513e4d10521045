//! Dominance relations, Pareto-front extraction, the Pareto suboptimality
//! gap, and the lexicographic-optimal-arm oracle over expected reward
//! vectors. Pure functions; the learners never see them.

use crate::core::ExpectedRewards;
use crate::error::{Error, Result};

/// How two reward vectors relate under componentwise order.
///
/// `compare` returns `Dominates` whenever `u >= v` componentwise with at
/// least one strict component, so for exact real comparisons the weak-only
/// variants are never produced; they complete the vocabulary of the relation
/// and are kept for callers that classify with a tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DominanceRelation {
    Dominates,
    WeaklyDominatesOnly,
    DominatedBy,
    WeaklyDominatedOnly,
    Incomparable,
    Equal,
}

fn check_finite(v: [f64; 2]) -> Result<()> {
    if !v[0].is_finite() || !v[1].is_finite() {
        return Err(Error::InvalidInput(format!(
            "reward vector must be finite, got ({}, {})",
            v[0], v[1]
        )));
    }
    Ok(())
}

/// Exact componentwise comparison, no tolerance.
///
/// `Equal` iff componentwise equal; `Dominates` iff `u >= v` componentwise
/// with strict inequality somewhere; `Incomparable` iff each vector is
/// strictly larger in exactly one component.
pub fn compare(u: [f64; 2], v: [f64; 2]) -> Result<DominanceRelation> {
    check_finite(u)?;
    check_finite(v)?;
    Ok(if u == v {
        DominanceRelation::Equal
    } else if u[0] >= v[0] && u[1] >= v[1] {
        DominanceRelation::Dominates
    } else if v[0] >= u[0] && v[1] >= u[1] {
        DominanceRelation::DominatedBy
    } else {
        DominanceRelation::Incomparable
    })
}

/// `u` dominates `v`: weakly better everywhere, strictly better somewhere.
#[inline]
pub(crate) fn dominates(u: [f64; 2], v: [f64; 2]) -> bool {
    u[0] >= v[0] && u[1] >= v[1] && (u[0] > v[0] || u[1] > v[1])
}

/// Arms whose expected reward vector no other arm dominates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParetoFront {
    arms: Vec<usize>,
}

impl ParetoFront {
    pub fn arms(&self) -> &[usize] {
        &self.arms
    }

    pub fn contains(&self, arm: usize) -> bool {
        self.arms.binary_search(&arm).is_ok()
    }

    pub fn len(&self) -> usize {
        self.arms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arms.is_empty()
    }
}

/// Extracts the Pareto front by pairwise dominance. Arms with equal vectors
/// do not dominate each other, so all of them stay in the front. Non-empty
/// for any non-empty arm set.
pub fn pareto_front(mu: &ExpectedRewards) -> Result<ParetoFront> {
    let k = mu.num_arms();
    let mut arms = Vec::new();
    for a in 0..k {
        let va = mu.arm(a);
        let dominated = (0..k).any(|b| b != a && dominates(mu.arm(b), va));
        if !dominated {
            arms.push(a);
        }
    }
    debug_assert!(!arms.is_empty());
    Ok(ParetoFront { arms })
}

/// Pareto suboptimality gap of `arm`: the smallest uniform additive shift
/// after which no Pareto-front member dominates the shifted vector,
///
/// `max(0, max_{a' in front} min_i (mu_i(a') - mu_i(arm)))`.
///
/// Zero exactly on the front. The closed form is certified against a
/// brute-force epsilon search in the test suite before anything relies on it.
pub fn psg(arm: usize, mu: &ExpectedRewards) -> Result<f64> {
    let front = pareto_front(mu)?;
    psg_with_front(arm, mu, &front)
}

/// [`psg`] with a precomputed front, for callers scoring several arms per
/// round.
pub fn psg_with_front(arm: usize, mu: &ExpectedRewards, front: &ParetoFront) -> Result<f64> {
    if arm >= mu.num_arms() {
        return Err(Error::InvalidInput(format!(
            "arm {arm} out of range for {} arms",
            mu.num_arms()
        )));
    }
    let v = mu.arm(arm);
    let mut gap: f64 = 0.0;
    for &a in front.arms() {
        let w = mu.arm(a);
        gap = gap.max((w[0] - v[0]).min(w[1] - v[1]));
    }
    Ok(gap)
}

/// Result of the lexicographic oracle: the set of dominant-objective
/// maximizers, the chosen arm, and both objective optima.
#[derive(Debug, Clone, PartialEq)]
pub struct LexOptimal {
    /// Arms within `tie_tol` of the best dominant mean, ascending.
    pub tied_arms: Vec<usize>,
    /// Member of `tied_arms` with the largest non-dominant mean (lowest
    /// index on exact ties, so the oracle is reproducible).
    pub best: usize,
    /// Largest dominant mean over all arms.
    pub mu1_star: f64,
    /// Largest non-dominant mean over `tied_arms`.
    pub mu2_star: f64,
}

/// Arm maximizing the non-dominant mean among the arms that maximize the
/// dominant mean. With `tie_tol = 0` the tie set is the exact argmax;
/// a small positive tolerance is for environments whose dominant-objective
/// ties only hold up to floating point.
pub fn lex_optimal(mu: &ExpectedRewards, tie_tol: f64) -> Result<LexOptimal> {
    if !(tie_tol.is_finite() && tie_tol >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "tie tolerance must be >= 0, got {tie_tol}"
        )));
    }
    let mu1_star = mu.iter().map(|v| v[0]).fold(f64::NEG_INFINITY, f64::max);
    let mut tied_arms = Vec::new();
    let mut best = usize::MAX;
    let mut mu2_star = f64::NEG_INFINITY;
    for (a, v) in mu.iter().enumerate() {
        if v[0] >= mu1_star - tie_tol {
            tied_arms.push(a);
            if v[1] > mu2_star {
                mu2_star = v[1];
                best = a;
            }
        }
    }
    debug_assert!(!tied_arms.is_empty());
    Ok(LexOptimal {
        tied_arms,
        best,
        mu1_star,
        mu2_star,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rewards(arms: &[[f64; 2]]) -> ExpectedRewards {
        ExpectedRewards::new(arms.to_vec()).unwrap()
    }

    /// Brute-force epsilon search from the gap definition: smallest shift on
    /// a 1e-6 grid after which no front member dominates the shifted vector.
    /// Independent of the closed form above.
    fn psg_eps_search(arm: usize, mu: &ExpectedRewards) -> f64 {
        let k = mu.num_arms();
        let front: Vec<usize> = (0..k)
            .filter(|&a| {
                !(0..k).any(|b| {
                    let (u, v) = (mu.arm(b), mu.arm(a));
                    b != a && u[0] >= v[0] && u[1] >= v[1] && (u[0] > v[0] || u[1] > v[1])
                })
            })
            .collect();
        let v = mu.arm(arm);
        let step = 1e-6;
        let mut eps = 0.0f64;
        loop {
            let shifted = [v[0] + eps, v[1] + eps];
            let dominated = front.iter().any(|&b| {
                let w = mu.arm(b);
                w[0] >= shifted[0] && w[1] >= shifted[1] && (w[0] > shifted[0] || w[1] > shifted[1])
            });
            if !dominated {
                return eps;
            }
            eps += step;
            assert!(eps <= 1.5, "epsilon search ran away");
        }
    }

    fn random_instance(rng: &mut ChaCha8Rng) -> ExpectedRewards {
        let k = rng.random_range(1..=8usize);
        rewards(
            &(0..k)
                .map(|_| [rng.random::<f64>(), rng.random::<f64>()])
                .collect::<Vec<_>>(),
        )
    }

    #[test]
    fn compare_examples() {
        assert_eq!(
            compare([0.7, 0.5], [0.3, 0.3]).unwrap(),
            DominanceRelation::Dominates
        );
        // the two mutually non-dominating synthetic-surface mean vectors
        assert_eq!(
            compare([0.7, 0.5], [0.3, 0.7]).unwrap(),
            DominanceRelation::Incomparable
        );
        assert_eq!(
            compare([0.5, 0.5], [0.5, 0.5]).unwrap(),
            DominanceRelation::Equal
        );
        assert_eq!(
            compare([0.3, 0.3], [0.7, 0.5]).unwrap(),
            DominanceRelation::DominatedBy
        );
        // mixed equal/strict counts as dominance
        assert_eq!(
            compare([0.7, 0.5], [0.7, 0.3]).unwrap(),
            DominanceRelation::Dominates
        );
        assert!(compare([f64::NAN, 0.0], [0.0, 0.0]).is_err());
    }

    #[test]
    fn front_examples() {
        let mu = rewards(&[[0.7, 0.5], [0.3, 0.7], [0.2, 0.2]]);
        assert_eq!(pareto_front(&mu).unwrap().arms(), &[0, 1]);

        let equal = rewards(&[[1.0, 0.0], [1.0, 0.0]]);
        assert_eq!(pareto_front(&equal).unwrap().arms(), &[0, 1]);

        let single = rewards(&[[0.0, 0.0]]);
        assert_eq!(pareto_front(&single).unwrap().arms(), &[0]);
    }

    #[test]
    fn psg_examples() {
        let mu = rewards(&[[0.7, 0.5], [0.3, 0.7], [0.2, 0.2]]);
        assert!((psg(2, &mu).unwrap() - 0.3).abs() < 1e-12);
        assert_eq!(psg(0, &mu).unwrap(), 0.0);
        assert_eq!(psg(1, &mu).unwrap(), 0.0);

        let mu = rewards(&[[1.0, 1.0], [0.4, 0.9]]);
        assert!((psg(1, &mu).unwrap() - 0.1).abs() < 1e-12);

        assert!(psg(5, &mu).is_err());
    }

    #[test]
    fn lex_optimal_two_arm_tie() {
        let mu = rewards(&[[0.5, 1.0], [0.5, 0.0]]);
        let lex = lex_optimal(&mu, 0.0).unwrap();
        assert_eq!(lex.tied_arms, vec![0, 1]);
        assert_eq!(lex.best, 0);
        assert_eq!(lex.mu1_star, 0.5);
        assert_eq!(lex.mu2_star, 1.0);
    }

    #[test]
    fn lex_optimal_synthetic_surface_point() {
        // Experiment-1 surface at x = (0.3, 0.6), recomputed with the
        // 40-digit density oracle used to freeze the environment tests.
        let mu = rewards(&[
            [0.983_471_453_821_617_5, 0.983_471_453_821_617_5],
            [0.983_471_453_821_617_5, 0.860_707_976_425_057_8],
            [0.753_268_656_454_656_9, 0.753_268_656_454_656_9],
            [0.0, 0.753_268_656_454_656_9],
        ]);
        let lex = lex_optimal(&mu, 0.0).unwrap();
        assert_eq!(lex.tied_arms, vec![0, 1]);
        assert_eq!(lex.best, 0);
    }

    #[test]
    fn lex_optimal_single_arm() {
        let mu = rewards(&[[0.2, 0.9]]);
        let lex = lex_optimal(&mu, 0.0).unwrap();
        assert_eq!(lex.best, 0);
        assert_eq!(lex.tied_arms, vec![0]);
    }

    #[test]
    fn lex_optimal_rejects_bad_tolerance() {
        let mu = rewards(&[[0.2, 0.9]]);
        assert!(lex_optimal(&mu, -1e-9).is_err());
        assert!(lex_optimal(&mu, f64::NAN).is_err());
    }

    #[test]
    fn lex_breaks_exact_ties_by_lowest_index() {
        let mu = rewards(&[[0.5, 0.8], [0.5, 0.8], [0.5, 0.1]]);
        assert_eq!(lex_optimal(&mu, 0.0).unwrap().best, 0);
    }

    #[test]
    fn psg_closed_form_matches_eps_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x9a17);
        for _ in 0..10_000 {
            let mu = random_instance(&mut rng);
            let arm = rng.random_range(0..mu.num_arms());
            let closed = psg(arm, &mu).unwrap();
            let searched = psg_eps_search(arm, &mu);
            assert!(
                (closed - searched).abs() <= 2e-6,
                "closed={closed} searched={searched} mu={mu:?} arm={arm}"
            );
        }
    }

    #[test]
    fn lex_arm_always_in_front() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x51ee);
        for _ in 0..10_000 {
            let mu = random_instance(&mut rng);
            let lex = lex_optimal(&mu, 0.0).unwrap();
            let front = pareto_front(&mu).unwrap();
            assert!(front.contains(lex.best), "mu={mu:?} lex={lex:?}");
        }
    }

    #[test]
    fn front_is_exactly_the_zero_psg_set() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xf00d);
        for _ in 0..2_000 {
            let mu = random_instance(&mut rng);
            let front = pareto_front(&mu).unwrap();
            for a in 0..mu.num_arms() {
                let zero = psg_with_front(a, &mu, &front).unwrap() == 0.0;
                assert_eq!(zero, front.contains(a), "mu={mu:?} arm={a}");
            }
        }
    }

    #[test]
    fn psg_bounded_by_dominant_gap_on_dyadic_grids() {
        // Exact dyadic inputs keep every arithmetic step representable, so
        // the bound psg(a) <= mu1* - mu1_a is checked without tolerance.
        let mut rng = ChaCha8Rng::seed_from_u64(0xdab5);
        for _ in 0..5_000 {
            let k = rng.random_range(1..=6usize);
            let mu = rewards(
                &(0..k)
                    .map(|_| {
                        [
                            rng.random_range(0..=64) as f64 / 64.0,
                            rng.random_range(0..=64) as f64 / 64.0,
                        ]
                    })
                    .collect::<Vec<_>>(),
            );
            let lex = lex_optimal(&mu, 0.0).unwrap();
            for a in 0..k {
                assert!(psg(a, &mu).unwrap() <= lex.mu1_star - mu.arm(a)[0]);
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn compare_is_antisymmetric(
                u0 in 0.0f64..1.0, u1 in 0.0f64..1.0,
                v0 in 0.0f64..1.0, v1 in 0.0f64..1.0,
            ) {
                let ab = compare([u0, u1], [v0, v1]).unwrap();
                let ba = compare([v0, v1], [u0, u1]).unwrap();
                prop_assert_eq!(ab == DominanceRelation::Dominates, ba == DominanceRelation::DominatedBy);
                prop_assert_eq!(ab == DominanceRelation::Equal, ba == DominanceRelation::Equal);
                prop_assert_eq!(ab == DominanceRelation::Incomparable, ba == DominanceRelation::Incomparable);
            }

            #[test]
            fn compare_self_is_equal(u0 in 0.0f64..1.0, u1 in 0.0f64..1.0) {
                prop_assert_eq!(compare([u0, u1], [u0, u1]).unwrap(), DominanceRelation::Equal);
            }

            #[test]
            fn front_members_are_undominated(
                vecs in proptest::collection::vec([0.0f64..1.0, 0.0f64..1.0], 1..8)
            ) {
                let mu = rewards(&vecs.iter().map(|v| [v[0], v[1]]).collect::<Vec<_>>());
                let front = pareto_front(&mu).unwrap();
                prop_assert!(!front.is_empty());
                for &a in front.arms() {
                    for b in 0..mu.num_arms() {
                        prop_assert!(!dominates(mu.arm(b), mu.arm(a)));
                    }
                }
            }
        }
    }
}
