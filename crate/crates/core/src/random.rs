//! Seeded random generation of distributions, responses, and models.
//!
//! Context rows are drawn independently and uniformly from the probability
//! simplex; response probabilities are uniform on [0, 1]. All generators are
//! driven by an explicit RNG so sweeps are reproducible from a single seed.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::model::{ContextDistribution, LocalModel, LocalResponses};

/// The deterministic generator used throughout the crate for seeded sweeps.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A point drawn uniformly from the probability simplex over n outcomes
/// (normalized unit-exponential draws).
pub fn simplex_row<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    assert!(n >= 1, "simplex dimension must be positive");
    let mut row: Vec<f64> = (0..n)
        .map(|_| {
            let u: f64 = rng.random();
            -(1.0 - u).ln()
        })
        .collect();
    let total: f64 = row.iter().sum();
    for v in row.iter_mut() {
        *v /= total;
    }
    row
}

/// Random context-conditional distribution over n hidden values.
pub fn random_distribution<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ContextDistribution {
    let rows = [
        simplex_row(rng, n),
        simplex_row(rng, n),
        simplex_row(rng, n),
        simplex_row(rng, n),
    ];
    ContextDistribution::new(rows).expect("simplex rows are normalized")
}

/// Random response tables over n hidden values, entries uniform on [0, 1].
pub fn random_responses<R: Rng + ?Sized>(rng: &mut R, n: usize) -> LocalResponses {
    let mut table = || -> Vec<f64> { (0..n).map(|_| rng.random()).collect() };
    let a = [table(), table()];
    let b = [table(), table()];
    LocalResponses::new(a, b).expect("uniform draws lie in [0,1]")
}

/// Random local model over n hidden values.
pub fn random_model<R: Rng + ?Sized>(rng: &mut R, n: usize) -> LocalModel {
    let dist = random_distribution(rng, n);
    let responses = random_responses(rng, n);
    LocalModel::new(dist, responses).expect("matching cardinalities by construction")
}
