//! Seeded randomness. Every sampled check draws from ChaCha8 seeded through
//! `SeedableRng::seed_from_u64`, so results are reproducible from the seed and
//! the sample counts alone.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}
