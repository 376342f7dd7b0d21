//! Seeded generators.
//!
//! All randomness comes from xoshiro256++ (Blackman & Vigna) seeded with
//! `Xoshiro256PlusPlus::seed_from_u64`, which expands the 64-bit seed into the
//! 256-bit state with SplitMix64. Uniform doubles take the top 53 bits of a
//! 64-bit output: `(x >> 11) * 2^-53`, giving a value in `[0, 1)`.

use rand::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

pub type Generator = Xoshiro256PlusPlus;

pub fn generator(seed: u64) -> Generator {
    Xoshiro256PlusPlus::seed_from_u64(seed)
}

pub fn uniform_unit(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// SplitMix64 output function.
pub fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the `index`-th independent stream derived from `seed`:
/// `splitmix64(seed + 0x9E3779B97F4A7C15 * (index + 1))`.
pub fn stream_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed.wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(index.wrapping_add(1))))
}
