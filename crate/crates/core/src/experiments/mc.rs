use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::exact::{spaces, PI_BOUND};
use super::mixture::{MixtureFamily, Target};
use crate::f2linalg::RankTracker;
use crate::markov::{l1_distance, pi_cl_vector, ProbVector, DEFAULT_PRECISION};
use crate::rules::{RuleId, StepSpace};

/// Samples per shard. Shards are the unit of parallel work and of seeding,
/// so results do not depend on the thread count.
pub const SHARD_SIZE: u64 = 2048;

pub(crate) fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Seed of shard `index` derived from the run seed.
pub fn shard_seed(seed: u64, index: u64) -> u64 {
    splitmix64(splitmix64(seed) ^ index)
}

/// Runs `job(rng, count)` on each shard in parallel and returns the results
/// in shard order.
pub(crate) fn run_sharded<T, F>(samples: u64, seed: u64, job: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng, u64) -> T + Sync,
{
    let shards = samples.div_ceil(SHARD_SIZE);
    (0..shards)
        .into_par_iter()
        .map(|k| {
            let count = SHARD_SIZE.min(samples - k * SHARD_SIZE);
            let mut rng = ChaCha8Rng::seed_from_u64(shard_seed(seed, k));
            job(&mut rng, count)
        })
        .collect()
}

/// Popcount of `n` fair bits: an exact `Binom(n, 1/2)` draw.
pub(crate) fn binomial_half<R: RngCore + ?Sized>(rng: &mut R, n: usize) -> usize {
    let mut left = n;
    let mut k = 0;
    while left > 0 {
        let take = left.min(64);
        let word = rng.next_u64();
        let masked = if take == 64 { word } else { word & ((1u64 << take) - 1) };
        k += masked.count_ones() as usize;
        left -= take;
    }
    k
}

/// Precomputed step spaces for drawing `omega_r` under a target.
pub(crate) enum Plan {
    Single(Vec<StepSpace>),
    Mixture { trials: usize, tables: Vec<Vec<StepSpace>> },
}

impl Plan {
    pub fn new(target: Target, r: usize) -> Self {
        match target {
            Target::Rule(rule) => Plan::Single(spaces(rule, r)),
            Target::Mixture(f) => Plan::mixture(f, r),
        }
    }

    fn mixture(f: MixtureFamily, r: usize) -> Self {
        let trials = f.trials(r);
        Plan::Mixture {
            trials,
            tables: (0..=trials).map(|k| spaces(f.rule(k), r)).collect(),
        }
    }

    /// Draws `kappa` (for mixtures) and returns the spaces of the chosen rule.
    pub fn pick<R: RngCore + ?Sized>(&self, rng: &mut R) -> &[StepSpace] {
        match self {
            Plan::Single(s) => s,
            Plan::Mixture { trials, tables } => &tables[binomial_half(rng, *trials)],
        }
    }

    pub fn sample_corank<R: RngCore + ?Sized>(&self, rng: &mut R) -> usize {
        let spaces = self.pick(rng);
        let mut t = RankTracker::with_capacity(spaces.len());
        for s in spaces {
            let step = s.sample(rng);
            t.extend(&step.v, &step.w, step.c).expect("sampled lengths match");
        }
        t.corank()
    }
}

/// Sampled corank counts, reproducible from `(target, r, total, seed)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmpiricalDistribution {
    pub r: usize,
    pub counts: Vec<u64>,
    pub total: u64,
    pub seed: u64,
}

impl EmpiricalDistribution {
    pub fn masses(&self) -> ProbVector<f64> {
        ProbVector::new(
            self.counts
                .iter()
                .map(|&c| c as f64 / self.total as f64)
                .collect(),
        )
    }

    /// `sum_j sqrt(p_j (1 - p_j) / n)`: the scale of the l1 sampling error.
    pub fn stderr(&self) -> f64 {
        let n = self.total as f64;
        self.counts
            .iter()
            .map(|&c| {
                let p = c as f64 / n;
                (p * (1.0 - p) / n).sqrt()
            })
            .sum()
    }

    pub fn distance_to_pi(&self) -> f64 {
        l1_distance(&self.masses(), &pi_cl_vector(PI_BOUND, DEFAULT_PRECISION))
    }
}

/// Monte Carlo corank distribution of `omega_r` for a rule or mixture.
pub fn mc_target(target: Target, r: usize, samples: u64, seed: u64) -> EmpiricalDistribution {
    assert!(samples >= 1, "at least one sample");
    let plan = Plan::new(target, r);
    let shards = run_sharded(samples, seed, |rng, count| {
        let mut counts = vec![0u64; r + 1];
        for _ in 0..count {
            counts[plan.sample_corank(rng)] += 1;
        }
        counts
    });
    let mut counts = vec![0u64; r + 1];
    for c in shards {
        counts.iter_mut().zip(c).for_each(|(a, b)| *a += b);
    }
    EmpiricalDistribution {
        r,
        counts,
        total: samples,
        seed,
    }
}

pub fn mc_distribution(rule: RuleId, r: usize, samples: u64, seed: u64) -> EmpiricalDistribution {
    mc_target(Target::Rule(rule), r, samples, seed)
}

pub fn mixture_mc(family: MixtureFamily, r: usize, samples: u64, seed: u64) -> EmpiricalDistribution {
    mc_target(Target::Mixture(family), r, samples, seed)
}
