//! Deterministic, splittable random number generation.
//!
//! Every Monte-Carlo trial owns one [`SeededRng`] identified by a `(seed, stream)`
//! pair. The generator is ChaCha8 with the stream index mapped onto the cipher's
//! 64-bit stream word, so distinct streams are independent by construction and a
//! given pair reproduces the same sequence bit-for-bit on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Counter-based generator: `seed` picks the key, `stream` picks the ChaCha stream.
#[derive(Debug, Clone)]
pub struct SeededRng {
    seed: u64,
    stream: u64,
    inner: ChaCha8Rng,
}

impl SeededRng {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        Self {
            seed,
            stream,
            inner,
        }
    }

    /// Fresh generator on stream `self.stream + offset`, same seed.
    ///
    /// Callers hand disjoint offset blocks to independent experiments so that
    /// per-trial streams never collide.
    pub fn substream(&self, offset: u64) -> Self {
        Self::new(self.seed, self.stream.wrapping_add(offset))
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// One standard normal draw.
    #[inline]
    pub fn standard_normal(&mut self) -> f64 {
        self.inner.sample(StandardNormal)
    }

    /// Normal draw with the given standard deviation.
    #[inline]
    pub fn normal(&mut self, sd: f64) -> f64 {
        sd * self.standard_normal()
    }

    /// Uniform angle in `[0, 2*pi)`.
    #[inline]
    pub fn uniform_angle(&mut self) -> f64 {
        self.inner.random::<f64>() * std::f64::consts::TAU
    }

    /// Uniform draw in `[0, 1)`.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        self.inner.random::<f64>()
    }
}
