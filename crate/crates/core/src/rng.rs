//! Deterministic seeding.
//!
//! Every random choice in the pipeline flows from a single `u64` seed through
//! [`derive_seed`], so sub-computations (restarts, per-k sweeps, stages) get
//! independent streams whose identity depends only on (seed, stream id) and
//! never on evaluation order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream ids for the pipeline stages. Keeping them in one place guarantees
/// stages never collide on a derived seed.
pub mod stream {
    pub const LDA: u64 = 0x01;
    pub const KMEANS: u64 = 0x02;
    pub const TSNE: u64 = 0x03;
    pub const FIXTURE: u64 = 0x04;
}

/// splitmix64 finalizer; decorrelates nearby (seed, stream) pairs.
fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Derive a child seed from a base seed and a stream index.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    splitmix64(seed ^ splitmix64(stream))
}

/// Deterministic RNG for a given seed.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
