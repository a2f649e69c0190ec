//! Reproducible random streams.
//!
//! Every stream is a ChaCha8 generator (a counter-based cipher RNG) keyed by
//! a 64-bit seed and selected by a 64-bit stream id. A single series is
//! `stream(seed, 0)`. Monte Carlo replicate `i` at sample size `n` uses
//! `stream(replicate_key(master_seed, n), i)`, so its draws depend only on
//! `(master_seed, n, i)` and never on scheduling or thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Key for the replicate streams of one sample size.
pub fn replicate_key(master_seed: u64, n: u64) -> u64 {
    splitmix64(master_seed ^ splitmix64(n))
}

pub fn stream(seed: u64, stream_id: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream_id);
    rng
}
