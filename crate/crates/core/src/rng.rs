//! Seeded, addressable random streams.
//!
//! A stream is a `(seed, stream_id)` pair backed by ChaCha8. Work is split
//! into tasks by deriving child stream ids, and each bootstrap replicate reads
//! from its own fixed window of the keystream, so output never depends on how
//! replicates are scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Keystream words reserved per replicate (2^36 words, far more than any
/// resample consumes).
const REPLICATE_WINDOW_BITS: u32 = 36;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngStream {
    pub seed: u64,
    pub stream_id: u64,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    /// Child stream for a sub-task identified by `tag`.
    pub fn derive(&self, tag: u64) -> Self {
        Self {
            seed: self.seed,
            stream_id: splitmix64(self.stream_id ^ splitmix64(tag)),
        }
    }

    /// Sequential generator positioned at the start of this stream.
    pub fn generator(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }

    /// Generator positioned at the keystream window reserved for replicate `k`.
    pub fn replicate_generator(&self, k: usize) -> ChaCha8Rng {
        let mut rng = self.generator();
        rng.set_word_pos((k as u128) << REPLICATE_WINDOW_BITS);
        rng
    }
}
