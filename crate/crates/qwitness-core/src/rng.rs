//! Seeded randomness helpers.
//!
//! Every sampling operation in this crate derives its randomness from a
//! `(master seed, stream index)` pair. Streams are independent ChaCha8
//! counters, so a parallel loop that assigns stream `i` to sample `i`
//! produces identical results regardless of thread count or schedule.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// RNG for stream `stream` of master seed `seed`.
pub fn substream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Derives an independent master seed, for nesting substream families
/// (e.g. one family per Hamiltonian, each with per-sample streams).
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    // splitmix64 step; decorrelates consecutive indices.
    let mut z = seed ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
