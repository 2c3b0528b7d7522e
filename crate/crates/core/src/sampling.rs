//! Seeded randomness. ChaCha8 is used so that streams are stable across
//! platforms and library versions.

use rand::SeedableRng;

pub type Rng = rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> Rng {
    Rng::seed_from_u64(seed)
}

/// Independent stream for worker `index` under a run seed.
pub fn substream(seed: u64, index: u64) -> Rng {
    let mut r = Rng::seed_from_u64(seed);
    r.set_stream(index.wrapping_add(1));
    r
}
