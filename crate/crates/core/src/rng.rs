// SPDX-License-Identifier: Apache-2.0

//! Random stream derivation.
//!
//! Every random stream in the toolkit is derived from one base seed, a
//! purpose tag and a list of indices. The derivation folds each component
//! through the SplitMix64 finalizer, so streams for different
//! `(tag, indices)` are statistically independent and reproducible.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator used for all simulation work.
pub type SimRng = ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn tag_hash(tag: &str) -> u64 {
    // FNV-1a, stable across platforms and releases.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in tag.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Derive a 64-bit seed from `(base, tag, indices...)`.
pub fn derive_seed(base: u64, tag: &str, indices: &[u64]) -> u64 {
    let mut state = splitmix64(base ^ splitmix64(tag_hash(tag)));
    for &i in indices {
        state = splitmix64(state ^ splitmix64(i.wrapping_add(0x5851_F42D_4C95_7F2D)));
    }
    state
}

/// Build a generator for `(base, tag, indices...)`.
pub fn stream(base: u64, tag: &str, indices: &[u64]) -> SimRng {
    SimRng::seed_from_u64(derive_seed(base, tag, indices))
}
