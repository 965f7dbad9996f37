//! Seeded RNG substreams.
//!
//! A run carries one `seed`; every consumer of randomness (weight init,
//! shuffling, synthetic data) draws from a named substream so that adding a
//! consumer never perturbs the others.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Derive a deterministic RNG for the named substream of `seed`.
pub fn substream(seed: u64, name: &str) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(fnv1a(name.as_bytes()));
    rng
}

// 64-bit FNV-1a; stable across platforms, unlike `DefaultHasher`.
fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}
