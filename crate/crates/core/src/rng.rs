//! Deterministic counter-based random streams.
//!
//! Every draw in the crate goes through [`RngStream`], a ChaCha8 generator
//! keyed by a 64-bit seed and a 64-bit stream id. ChaCha output is fully
//! specified, so a `(seed, stream, position)` triple produces the same numbers
//! on every platform.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Words reserved per [`RngStream::block`]; one block is far larger than any
/// single round can consume.
const BLOCK_WORDS: u128 = 1 << 32;

#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { seed, stream, rng }
    }

    /// Fresh stream sharing this seed, positioned at its start.
    pub fn substream(&self, stream: u64) -> Self {
        Self::with_stream(self.seed, stream)
    }

    /// Independent generator for block `index` of this stream. The result is
    /// a pure function of `(seed, stream, index)` and does not depend on how
    /// many values were drawn from `self`.
    pub fn block(&self, index: u64) -> Self {
        let mut out = Self::with_stream(self.seed, self.stream);
        out.rng.set_word_pos(u128::from(index) * BLOCK_WORDS);
        out
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Uniform draw in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// Uniform integer in `[0, n)`. Sampled through `u64` so the result does
    /// not depend on the platform's pointer width.
    pub fn below(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        self.rng.random_range(0..n as u64) as usize
    }

    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.uniform() < p
    }

    pub fn standard_normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    pub fn normal(&mut self, mean: f64, std_dev: f64) -> f64 {
        mean + std_dev * self.standard_normal()
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}
