use rand::RngCore;
use rayon::prelude::*;

use crate::rng::substream;

/// Trials per substream.
const SHARD: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    /// `hits[D]` counts walks that first reached 0 at step `D`.
    pub hits: Vec<u64>,
    /// Walks still above 0 after `cap` steps.
    pub censored: u64,
    pub trials: u64,
}

impl Histogram {
    fn empty(cap: u64) -> Self {
        Self { hits: vec![0; cap as usize + 1], censored: 0, trials: 0 }
    }

    fn merge(mut self, other: Self) -> Self {
        for (a, b) in self.hits.iter_mut().zip(other.hits) {
            *a += b;
        }
        self.censored += other.censored;
        self.trials += other.trials;
        self
    }

    pub fn fraction(&self, steps: u64) -> f64 {
        self.hits.get(steps as usize).map_or(0.0, |&h| h as f64 / self.trials as f64)
    }

    /// Fraction of walks that hit 0 by step `steps`.
    pub fn cdf(&self, steps: u64) -> f64 {
        let end = (steps as usize + 1).min(self.hits.len());
        self.hits[..end].iter().sum::<u64>() as f64 / self.trials as f64
    }
}

/// `trials` independent fair walks from `d`, each stopped at 0 or after `cap`
/// steps. Trials are split into fixed shards, each on its own substream, so
/// the result does not depend on the thread count.
pub fn simulate(d: u64, cap: u64, trials: u64, seed: u64) -> Histogram {
    let shards = trials.div_ceil(SHARD);
    (0..shards)
        .into_par_iter()
        .map(|s| {
            let mut rng = substream(seed, s);
            let mut h = Histogram::empty(cap);
            let count = SHARD.min(trials - s * SHARD);
            for _ in 0..count {
                let mut pos = d as i64;
                let mut t = 0u64;
                let (mut bits, mut left) = (0u64, 0u32);
                while pos > 0 && t < cap {
                    if left == 0 {
                        bits = rng.next_u64();
                        left = 64;
                    }
                    pos += if bits & 1 == 1 { 1 } else { -1 };
                    bits >>= 1;
                    left -= 1;
                    t += 1;
                }
                if pos == 0 {
                    h.hits[t as usize] += 1;
                } else {
                    h.censored += 1;
                }
            }
            h.trials = count;
            h
        })
        .reduce(|| Histogram::empty(cap), Histogram::merge)
}
