//! Shared fixtures for benchmarks.

use hypstab_core::simplex::is_degenerate;
use hypstab_core::volume::random_simplex;
use hypstab_core::{rng, GeodesicSimplex};

/// A nondegenerate random simplex in `H^n`, reproducible from `seed`.
pub fn sample_simplex(n: usize, seed: u64) -> GeodesicSimplex {
    let mut r = rng::stream(seed, &[n as u64]);
    loop {
        let k = random_simplex(n, &mut r);
        if !is_degenerate(&k) {
            return k;
        }
    }
}
