//! Seeded random streams.
//!
//! Every replication owns one [`Stream`]; sub-components (oracle sessions)
//! fork child streams from it so a run is a pure function of its seed.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The random stream type threaded through every simulation.
pub type Stream = ChaCha8Rng;

/// Stream seeded from a 64-bit value.
pub fn stream(seed: u64) -> Stream {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Child stream drawn from `parent`; advances the parent by one seed draw.
pub fn fork(parent: &mut Stream) -> Stream {
    ChaCha8Rng::seed_from_u64(parent.next_u64())
}

/// One splitmix64 output step.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for replication `rep` under `base_seed`.
///
/// `splitmix64(base_seed ^ splitmix64(rep))`: depends only on the pair, so
/// adding replications never changes the seeds of earlier ones.
pub fn replication_seed(base_seed: u64, rep: u64) -> u64 {
    splitmix64(base_seed ^ splitmix64(rep))
}
