//! Seeded random streams.
//!
//! Every consumer of randomness in a run draws from its own ChaCha stream,
//! keyed by the master seed plus a fixed stream id, so adding draws to one
//! component never perturbs another.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

pub const TOPOLOGY_STREAM: u64 = 1;
pub const PLACEMENT_STREAM: u64 = 2;
pub const STRATEGY_STREAM: u64 = 3;
/// Consumer `i` uses stream `CONSUMER_STREAM_BASE + i`.
pub const CONSUMER_STREAM_BASE: u64 = 1_000;

pub fn stream_rng(seed: u64, stream: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
