//! Deterministic random stream derivation.
//!
//! Every random decision in a run is drawn from a ChaCha8 stream keyed by
//! the run seed, so trials can execute in any order or in parallel.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Stream numbers used inside one protocol run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    Engine = 1,
    Alice = 2,
    Bob = 3,
    ThirdParty = 4,
    Amplification = 5,
}

pub fn stream(seed: u64, stream: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream as u64);
    rng
}

/// Seed of trial `index` under `master`: the first word of ChaCha8 stream
/// `index` keyed by the master seed.
pub fn trial_seed(master: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(index);
    rng.next_u64()
}
