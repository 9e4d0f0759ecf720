//! Deterministic randomness for experiments.
//!
//! Every experiment takes a 64-bit master seed. The generator is ChaCha8
//! (a counter-based stream cipher): the seed is expanded into a 256-bit key
//! and trial `t` reads from stream `t` of that key, so trial streams are
//! independent of scheduling and thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type ExperimentRng = ChaCha8Rng;

/// Generator for sequential (single-stream) use.
pub fn seeded(seed: u64) -> ExperimentRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Generator for trial `trial` of an experiment with master seed `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ExperimentRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}
