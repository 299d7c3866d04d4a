//! Seed derivation for reproducible, order-independent random streams.
//!
//! Every random quantity in a simulation is drawn from a [`SimRng`] obtained
//! from a [`StreamSeed`]. Seeds form a tree: a child seed is a hash of its
//! parent and an index, so a replication or a block of work can be seeded
//! without knowing how many draws any other unit consumed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub type SimRng = ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StreamSeed(u64);

impl StreamSeed {
    pub const fn new(seed: u64) -> Self {
        StreamSeed(seed)
    }

    pub const fn value(self) -> u64 {
        self.0
    }

    /// Derives the seed of the `index`-th child stream.
    pub fn child(self, index: u64) -> StreamSeed {
        let salt = mix64(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA));
        StreamSeed(mix64(self.0.wrapping_add(GOLDEN_GAMMA) ^ salt))
    }

    pub fn rng(self) -> SimRng {
        ChaCha8Rng::seed_from_u64(self.0)
    }
}

impl From<u64> for StreamSeed {
    fn from(seed: u64) -> Self {
        StreamSeed(seed)
    }
}
