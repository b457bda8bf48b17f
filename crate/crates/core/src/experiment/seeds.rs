//! Deterministic seed derivation.
//!
//! A child seed is one ChaCha8 output word pair keyed by
//! `(parent seed, domain, index)`, so replicate `r` of a run never depends on
//! how many replicates there are or on the order they are evaluated in.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seeds of ensemble replicates.
pub const REPLICATE_DOMAIN: u64 = 1;
/// Seeds of sweep cells; each cell seed is then the parent of its replicates.
pub const CELL_DOMAIN: u64 = 2;

pub fn derive_seed(parent: u64, domain: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(parent);
    rng.set_stream(domain);
    rng.set_word_pos(2 * u128::from(index));
    rng.next_u64()
}

pub fn replicate_seeds(master: u64, n: usize) -> Vec<u64> {
    (0..n as u64).map(|r| derive_seed(master, REPLICATE_DOMAIN, r)).collect()
}

pub fn cell_seed(master: u64, cell: usize) -> u64 {
    derive_seed(master, CELL_DOMAIN, cell as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn replicate_seeds_are_pairwise_distinct() {
        let seeds = replicate_seeds(17, 10_000);
        assert_eq!(seeds.iter().collect::<HashSet<_>>().len(), seeds.len());
    }

    #[test]
    fn replicate_seed_does_not_depend_on_ensemble_size() {
        assert_eq!(replicate_seeds(5, 3), replicate_seeds(5, 10)[..3]);
        assert_ne!(replicate_seeds(5, 3), replicate_seeds(6, 3));
    }

    #[test]
    fn domains_are_separate() {
        assert_ne!(derive_seed(5, REPLICATE_DOMAIN, 0), derive_seed(5, CELL_DOMAIN, 0));
        assert_ne!(cell_seed(5, 0), cell_seed(5, 1));
    }
}
