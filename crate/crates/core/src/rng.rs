//! Seeding. Every stochastic routine takes a `u64` seed and builds its own
//! ChaCha8 stream, so results are a pure function of the seed on every
//! platform.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent sub-streams of one trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    Hypergraph = 1,
    Noise = 2,
    Null = 3,
    Posterior = 4,
    Replica = 5,
}

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Folds `words` into a 64-bit seed. Sensitive to word order.
pub fn hash_words(words: &[u64]) -> u64 {
    words
        .iter()
        .fold(GOLDEN, |acc, &w| mix64(acc.wrapping_add(GOLDEN) ^ mix64(w)))
}

/// Seed for one stream of one trial: `hash(master, cell, trial, stream)`.
pub fn trial_seed(master: u64, cell: u64, trial: u64, stream: Stream) -> u64 {
    hash_words(&[master, cell, trial, stream as u64])
}

/// Seed for a named stream derived from a single trial seed.
pub fn stream_seed(seed: u64, stream: Stream) -> u64 {
    hash_words(&[seed, stream as u64])
}
