#![allow(dead_code)]

use extdisc_core::{PointSet, WeightSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random instances with d in {1,2}, n <= 8 and non-negative weights.
pub fn random_instances(count: usize, seed: u64) -> Vec<(PointSet, WeightSet)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let d = rng.random_range(1..=2usize);
            let n = rng.random_range(0..=8usize);
            let coords: Vec<f64> = (0..n * d).map(|_| rng.random::<f64>()).collect();
            let weights: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * 2.0 / n.max(1) as f64).collect();
            (
                PointSet::new(d, coords).unwrap(),
                WeightSet::nonneg(weights).unwrap(),
            )
        })
        .collect()
}
