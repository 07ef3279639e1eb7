//! Seeded random substreams.
//!
//! Every random quantity in a trial is drawn from its own named stream,
//! derived from a master seed by counter-based splitting. Two runs with the
//! same master seed see identical streams regardless of scheduling order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

/// Named purposes for derived random streams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u64)]
pub enum Stream {
    Trial = 1,
    Geometry = 2,
    Shadowing = 3,
    SmallScale = 4,
    PilotNoise = 5,
    Messages = 6,
    DataNoise = 7,
    Code = 8,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a child seed from `(master, stream, index)`.
pub fn split_seed(master: u64, stream: Stream, index: u64) -> u64 {
    let a = splitmix64(master);
    let b = splitmix64(a ^ (stream as u64).wrapping_mul(0xD6E8_FEB8_6659_FD93));
    splitmix64(b ^ index.wrapping_mul(0xA076_1D64_78BD_642F))
}

pub fn substream(master: u64, stream: Stream, index: u64) -> SimRng {
    SimRng::seed_from_u64(split_seed(master, stream, index))
}
