//! Seeded, splittable randomness. Every randomized routine takes an
//! explicit generator derived from a caller-supplied seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// Generator for a given seed and stream index. Distinct streams of the
/// same seed are independent.
pub fn stream(seed: u64, stream: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
