//! Seed derivation for independent random streams.
//!
//! Every stream in a simulation is keyed by a path of integers, for example
//! `(base_seed, repetition, LANDSCAPE)` or `(run_seed, step, agent)`. The key
//! is folded with the SplitMix64 finalizer:
//!
//! ```text
//! h_0     = mix64(base)
//! h_{i+1} = mix64(h_i ^ mix64(k_i + GOLDEN))
//! ```
//!
//! The result seeds a `Xoshiro256PlusPlus` generator. Because a stream depends
//! only on its key and never on execution order, repetitions and agents may be
//! evaluated in any order (or concurrently) without changing results.

use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;

/// The generator used for every random stream in the crate.
pub type SimRng = Xoshiro256PlusPlus;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// Stream tags for per-repetition sub-streams.
pub const TAG_LANDSCAPE: u64 = 1;
pub const TAG_POPULATION: u64 = 2;
pub const TAG_DYNAMICS: u64 = 3;
pub const TAG_GRAPH: u64 = 4;

/// SplitMix64 output function.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Folds `keys` into `base`.
#[inline]
pub fn derive(base: u64, keys: &[u64]) -> u64 {
    keys.iter().fold(mix64(base), |h, &k| {
        mix64(h ^ mix64(k.wrapping_add(GOLDEN)))
    })
}

pub fn rng_from_seed(seed: u64) -> SimRng {
    SimRng::seed_from_u64(seed)
}

pub fn derive_rng(base: u64, keys: &[u64]) -> SimRng {
    rng_from_seed(derive(base, keys))
}
