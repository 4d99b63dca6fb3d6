//! Seeding conventions.
//!
//! Every stochastic routine takes its generator from the caller. Parallel
//! replica loops derive replica `i`'s generator from `base_seed + i`, so the
//! merged result does not depend on the number of worker threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator used throughout the crate.
pub type SimRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SimRng {
    SimRng::seed_from_u64(seed)
}

/// Generator for replica `index` of a run seeded with `base_seed`.
pub fn replica_rng(base_seed: u64, index: u64) -> SimRng {
    seeded(base_seed.wrapping_add(index))
}
