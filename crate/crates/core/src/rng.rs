//! Deterministic random primitives shared by the samplers and the
//! subsampled depth engine.
//!
//! Everything is built from the ChaCha8 stream cipher keyed through
//! `SeedableRng::seed_from_u64` (SplitMix64 key expansion), so a `u64` seed
//! fully determines every draw on every platform. Uniform doubles use the
//! standard 53-bit construction `(word >> 11) * 2^-53`, normal pairs come
//! from the Box-Muller transform.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform draw from [0, 1) with 53 random mantissa bits.
pub fn uniform_f64(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Unbiased uniform draw from 0..bound via modulo rejection.
pub fn uniform_below(rng: &mut ChaCha8Rng, bound: u64) -> u64 {
    debug_assert!(bound > 0);
    let threshold = bound.wrapping_neg() % bound;
    loop {
        let word = rng.next_u64();
        if word >= threshold {
            return word % bound;
        }
    }
}

/// One Box-Muller pair of independent standard normal variates.
///
/// Consumes exactly two uniform draws: the radius uses `1 - u` so the
/// logarithm never sees zero.
pub fn normal_pair(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let u1 = 1.0 - uniform_f64(rng);
    let u2 = uniform_f64(rng);
    let radius = (-2.0 * u1.ln()).sqrt();
    let angle = 2.0 * std::f64::consts::PI * u2;
    (radius * angle.cos(), radius * angle.sin())
}
