//! Seeded, splittable randomness. Every random choice in the crate draws from
//! a ChaCha8 stream addressed by `(seed, stream)`, so identical seeds give
//! identical output regardless of evaluation order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use rand_chacha::ChaCha8Rng as Rng;

/// Generator for substream `stream` of `seed`.
pub fn substream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
