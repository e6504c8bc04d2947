//! Seeded, splittable randomness.
//!
//! A substream is ChaCha8 keyed by the 64-bit seed with the ChaCha stream
//! id set to the substream index, so `substream(seed, i)` and
//! `substream(seed, j)` are independent for `i != j` and every run is
//! reproducible from `(seed, i)` alone.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

pub fn substream(seed: u64, stream: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Substream index for a pair of coordinates, e.g. (block, restart).
pub fn stream_id(major: u64, minor: u64) -> u64 {
    (major << 32) | (minor & 0xffff_ffff)
}

/// A child seed for row `index` of a batch driven by `master`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    substream(master, index).next_u64()
}
