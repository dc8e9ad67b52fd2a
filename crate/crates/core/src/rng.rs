//! Reproducible random streams.
//!
//! Every unit of simulated work (a design cell, a repetition inside it, a
//! bootstrap replicate inside that) gets its own generator seeded from the
//! root seed and an index path:
//!
//! ```text
//! key = splitmix(root)
//! for i in path: key = splitmix(key ^ splitmix(i + GOLDEN))
//! stream = ChaCha8Rng::seed_from_u64(key)
//! ```
//!
//! Draws therefore depend only on `(root, path)` and not on which thread
//! picks up the work or in which order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator used for all simulation work.
pub type SimRng = ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for the stream at `path` below `root`.
pub fn derive_seed(root: u64, path: &[u64]) -> u64 {
    path.iter().fold(splitmix64(root), |key, &i| {
        splitmix64(key ^ splitmix64(i.wrapping_add(GOLDEN)))
    })
}

/// Generator for the stream at `path` below `root`.
pub fn stream(root: u64, path: &[u64]) -> SimRng {
    SimRng::seed_from_u64(derive_seed(root, path))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn paths_are_distinct() {
        let seeds = [
            derive_seed(7, &[]),
            derive_seed(7, &[0]),
            derive_seed(7, &[1]),
            derive_seed(7, &[0, 1]),
            derive_seed(7, &[1, 0]),
            derive_seed(8, &[0, 1]),
        ];
        for (i, a) in seeds.iter().enumerate() {
            for b in &seeds[i + 1..] {
                assert_ne!(a, b);
            }
        }
    }

    #[test]
    fn streams_replay() {
        let a: Vec<u64> = stream(11, &[4, 2]).random_iter().take(16).collect();
        let b: Vec<u64> = stream(11, &[4, 2]).random_iter().take(16).collect();
        assert_eq!(a, b);
    }
}
