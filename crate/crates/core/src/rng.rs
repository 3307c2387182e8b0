//! Seeded randomness. Every randomized routine takes a `u64` seed and
//! derives independent streams from it with SplitMix64.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Recorded in JSON output so runs can be replayed on another platform.
pub const RNG_ALGORITHM: &str = "chacha8/rand_chacha-0.3+splitmix64-streams";

pub type Rng = ChaCha8Rng;

pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for stream `index` of a run seeded with `seed`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(index.wrapping_add(1)))
}

pub fn rng_from(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn stream(seed: u64, index: u64) -> Rng {
    rng_from(derive_seed(seed, index))
}
