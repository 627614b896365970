//! Seed derivation and the portable generator used throughout the crate.
//!
//! Every random stream is a [`Pcg64`] (PCG XSL-RR 128/64) seeded through
//! [`Pcg64::seed_from_u64`] with a value produced by [`derive`]. `derive`
//! is a SplitMix64 finalizer applied to `base + (index + 1) * 0x9E3779B97F4A7C15`,
//! so neighbouring run indices land on unrelated streams.

use rand::SeedableRng;
pub use rand_pcg::Pcg64;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output function.
pub fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the `index`-th child stream of `base`.
pub fn derive(base: u64, index: u64) -> u64 {
    splitmix64(base.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN)))
}

/// Purpose tags for streams derived from one run seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    Split,
    Init,
    Shuffle,
    Synth,
}

impl Stream {
    fn tag(self) -> u64 {
        match self {
            Stream::Split => 0x0053_504C_4954,
            Stream::Init => 0x494E_4954,
            Stream::Shuffle => 0x5348_5546,
            Stream::Synth => 0x5359_4E54,
        }
    }
}

/// Generator for `purpose` under `seed`, optionally specialised by `index`
/// (the epoch for shuffles, the family for synthetic generation).
pub fn rng(seed: u64, purpose: Stream, index: u64) -> Pcg64 {
    Pcg64::seed_from_u64(derive(derive(seed, purpose.tag()), index))
}
