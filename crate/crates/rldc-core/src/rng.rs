//! Deterministic seed derivation.
//!
//! All randomness in the crate flows from explicit `u64` seeds through
//! ChaCha streams. Derived seeds are split hierarchically (campaign seed →
//! per-trial seed → per-probe stream) so that adding trials or probes never
//! perturbs earlier ones.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream tag for the outer decoder session inside a decode invocation.
pub const LANE_OUTER: u64 = 0x01;
/// Base tag for block-probe streams; probe `p` uses `LANE_PROBE + p`.
pub const LANE_PROBE: u64 = 0x1000;
/// Tag for message sampling inside a trial.
pub const LANE_MESSAGE: u64 = 0x02;
/// Tag for the corruption channel inside a trial.
pub const LANE_CHANNEL: u64 = 0x03;
/// Tag for the decoder inside a trial.
pub const LANE_DECODE: u64 = 0x04;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive a child seed from `seed` for an independent lane.
pub fn split_seed(seed: u64, lane: u64) -> u64 {
    splitmix64(seed ^ splitmix64(lane))
}

/// A ChaCha stream for the given seed.
pub fn stream(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Stream for a derived lane, shorthand for `stream(split_seed(seed, lane))`.
pub fn substream(seed: u64, lane: u64) -> ChaCha8Rng {
    stream(split_seed(seed, lane))
}
