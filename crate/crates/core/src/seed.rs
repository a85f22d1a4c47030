//! Seed derivation.
//!
//! Every random stream in the workbench is derived from a root seed and a
//! task label. The label is hashed with 64-bit FNV-1a, combined with the root
//! and any numeric indices, and finished with the SplitMix64 mixer. The
//! result seeds a ChaCha8 generator, whose output is stable across platforms.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes
        .iter()
        .fold(FNV_OFFSET, |h, &b| (h ^ b as u64).wrapping_mul(FNV_PRIME))
}

/// SplitMix64 finaliser.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derive a child seed from `root`, a task label and a list of indices.
pub fn derive(root: u64, label: &str, indices: &[u64]) -> u64 {
    let mut h = mix64(root ^ fnv1a(label.as_bytes()));
    for &i in indices {
        h = mix64(h ^ i.wrapping_mul(FNV_PRIME));
    }
    h
}

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
