//! Seeded randomness. Every randomized entry point takes a `u64` seed and
//! expands it into a [`SessionRng`], so runs are reproducible bit for bit.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SessionRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SessionRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives an independent child seed for sub-stream `stream` (SplitMix64 finalizer).
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed.wrapping_add(stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
