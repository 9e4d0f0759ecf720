//! Fixtures shared by the benchmarks.

use minionlab_core::rng::seeded;
use minionlab_core::BooleanFunction;
use rand::Rng;

/// A reproducible random function.
pub fn random_function(arity: usize, seed: u64) -> BooleanFunction {
    BooleanFunction::random(arity, &mut seeded(seed)).expect("arity within cap")
}

/// Upward closure of `generators` random points.
pub fn random_monotone(arity: usize, generators: usize, seed: u64) -> BooleanFunction {
    let mut rng = seeded(seed);
    let points: Vec<usize> = (0..generators).map(|_| rng.random_range(0..1usize << arity)).collect();
    BooleanFunction::from_fn(arity, |x| points.iter().any(|&g| x & g == g)).expect("arity within cap")
}
