use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::Result;
use crate::estimators::Sample;

/// Shards per sample size are addressed with this many low bits of the stream id.
pub const SHARD_BITS: u32 = 24;

/// Independent N(0, 1) substream identified by `(seed, n, shard)`.
///
/// The seed selects the ChaCha key and `(n, shard)` the 64-bit stream
/// number, so every substream is a disjoint slice of the cipher's output and
/// none depends on how work is distributed across threads.
#[derive(Debug, Clone)]
pub struct NormalStream {
    rng: ChaCha8Rng,
}

impl NormalStream {
    pub fn new(seed: u64, n: usize, shard: u64) -> Self {
        assert!(shard < 1 << SHARD_BITS, "shard index out of range");
        let mut rng = ChaCha8Rng::from_seed(expand_seed(seed));
        rng.set_stream(((n as u64) << SHARD_BITS) | shard);
        Self { rng }
    }

    pub fn next_normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.rng)
    }

    pub fn fill(&mut self, out: &mut [f64]) {
        for v in out {
            *v = self.next_normal();
        }
    }
}

/// Draws `n` standard normal deviates from `stream`.
pub fn sample_normal(n: usize, stream: &mut NormalStream) -> Result<Sample> {
    let mut values = vec![0.0; n];
    stream.fill(&mut values);
    Sample::new(values)
}

fn expand_seed(seed: u64) -> [u8; 32] {
    let mut state = seed;
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        chunk.copy_from_slice(&(z ^ (z >> 31)).to_le_bytes());
    }
    key
}
