//! Seed derivation. Every random stream in the crate is a ChaCha8 generator
//! keyed by a master seed and an integer path, so that work items can run in
//! any order (or concurrently) and still see the same randomness.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// Stream tags keep unrelated consumers of one master seed apart.
pub mod stream {
    pub const BOOTSTRAP_POOL: u64 = 1;
    pub const TRAIN: u64 = 2;
    pub const DATA: u64 = 3;
    pub const METHOD: u64 = 4;
    pub const TREE: u64 = 5;
    pub const PERMUTATION: u64 = 6;
    pub const SPLIT: u64 = 7;
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a child seed from `seed`, a stream tag and an index.
pub fn derive_seed(seed: u64, stream: u64, index: u64) -> u64 {
    splitmix64(splitmix64(seed ^ splitmix64(stream)) ^ index)
}

pub fn rng_from_seed(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn derived_rng(seed: u64, stream: u64, index: u64) -> Rng {
    rng_from_seed(derive_seed(seed, stream, index))
}
