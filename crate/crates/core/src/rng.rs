//! Seeded per-trial random streams.
//!
//! Every trial owns one ChaCha8 stream keyed by the run seed and selected by
//! the trial index through the cipher's 64-bit stream id, so the draws of
//! trial `i` never depend on which worker ran it or in what order.

use crate::error::{Result, WarError};
use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Name and version of the generator, recorded in output metadata.
pub const RNG_ALGORITHM: &str = "ChaCha8 (rand_chacha 0.9); key = seed_from_u64(seed), stream = trial index";

#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream_id);
        Self { seed, stream_id, inner }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Uniform index in `0..n`. `n` must be positive.
    #[inline]
    pub fn index(&mut self, n: usize) -> usize {
        self.inner.random_range(0..n)
    }

    /// Uniform real in `[0, 1)`.
    #[inline]
    pub fn unit(&mut self) -> f64 {
        self.inner.random::<f64>()
    }

    /// Fair coin.
    #[inline]
    pub fn coin(&mut self) -> bool {
        self.unit() < 0.5
    }

    /// One uniform draw compared against `p`. `U < p` with `U` in `[0, 1)` is
    /// the half-open form of `U <= p`: `p = 0` never fires and `p = 1`
    /// always does.
    #[inline]
    pub fn bernoulli_unchecked(&mut self, p: f64) -> bool {
        self.unit() < p
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        items.shuffle(&mut self.inner);
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

/// Returns `true` with probability `p`.
pub fn bernoulli_flag(p: f64, rng: &mut RngStream) -> Result<bool> {
    if !(0.0..=1.0).contains(&p) {
        return Err(WarError::InvalidProbability(p));
    }
    Ok(rng.bernoulli_unchecked(p))
}

/// SplitMix64 finaliser, used to derive independent run seeds for the
/// sub-experiments of one reproduction from a single user seed.
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    let mut z = seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
