//! Counter-based random substreams.
//!
//! Every stream is a ChaCha8 keystream whose key packs `(master_seed,
//! point, purpose)` and whose stream id is the trial index, so a draw is a
//! pure function of those coordinates and of its position in the stream.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Stream = ChaCha8Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u8)]
pub enum Purpose {
    Noise = 0,
    Decoder = 1,
    TieBreak = 2,
}

pub fn substream(master_seed: u64, point: u64, trial: u64, purpose: Purpose) -> Stream {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&master_seed.to_le_bytes());
    key[8..16].copy_from_slice(&point.to_le_bytes());
    key[16] = purpose as u8;
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(trial);
    rng
}

/// Uniform `[0, 1)` with 53 random bits.
#[inline]
pub fn unit_f64(bits: u64) -> f64 {
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}
