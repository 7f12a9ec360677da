//! Seeded random sparse states.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use sqsp_core::sqsp::SparseStateSpec;
use sqsp_core::{BasisString, Complex64};

use crate::error::CliError;

/// `d` distinct uniformly random `n`-bit strings with amplitudes uniform on
/// the unit sphere of `ℂ^d`. Identical `(n, d, seed)` give identical specs.
pub fn random_spec(n: usize, d: usize, seed: u64) -> Result<SparseStateSpec, CliError> {
    if n == 0 || d == 0 || (n < usize::BITS as usize && d > 1usize << n) {
        return Err(CliError::Spec(format!("cannot draw d = {d} distinct strings of {n} bits")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::with_capacity(d);
    let mut bases = Vec::with_capacity(d);
    while bases.len() < d {
        let bits: Vec<bool> = (0..n).map(|_| rng.random()).collect();
        let b = BasisString::from_bits(&bits);
        if seen.insert(b.clone()) {
            bases.push(b);
        }
    }
    let amps = loop {
        let raw: Vec<Complex64> = (0..d)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let norm = raw.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.0 && raw.iter().all(|a| a.norm() > 0.0) {
            break raw.into_iter().map(|a| a / norm).collect::<Vec<_>>();
        }
    };
    Ok(SparseStateSpec::new(n, bases.into_iter().zip(amps).collect())?)
}

/// Seed for the spec of bench cell `(n, d)`, shared by every `m`.
pub fn cell_seed(seed: u64, n: usize, d: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((n as u64) << 32) | d as u64);
    rng.random()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_spec() {
        assert_eq!(random_spec(8, 4, 7).unwrap(), random_spec(8, 4, 7).unwrap());
        assert_ne!(random_spec(8, 4, 7).unwrap(), random_spec(8, 4, 8).unwrap());
    }

    #[test]
    fn full_support_is_allowed() {
        let spec = random_spec(3, 8, 1).unwrap();
        assert_eq!(spec.d(), 8);
        assert!(matches!(random_spec(3, 9, 1), Err(CliError::Spec(_))));
    }

    #[test]
    fn cell_seeds_differ() {
        assert_ne!(cell_seed(1, 8, 4), cell_seed(1, 8, 8));
        assert_ne!(cell_seed(1, 8, 4), cell_seed(2, 8, 4));
    }
}
