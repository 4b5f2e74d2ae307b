//! Seeded random number generation.
//!
//! Every random draw in the crate flows through [`SeededRng`] so that
//! instances, sparse matrices, and whole benchmark tables are reproducible
//! bit-for-bit from a `u64` seed. The distributions are implemented directly
//! on top of the ChaCha8 stream (uniform via the 53-bit mantissa trick,
//! normal via Box-Muller) to keep outputs independent of third-party
//! distribution algorithm changes.

use num_complex::Complex64;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct SeededRng {
    inner: ChaCha8Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self {
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Derive an independent stream for a sub-task (e.g. trial `k` of an
    /// ensemble) without consuming this stream.
    pub fn derive(base_seed: u64, index: u64) -> u64 {
        // splitmix64 finalizer on the pair
        let mut z = base_seed
            .wrapping_mul(0x9e3779b97f4a7c15)
            .wrapping_add(index)
            .wrapping_add(0x9e3779b97f4a7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0)
    }

    /// Uniform in `(0, 1]`.
    pub fn uniform_open_low(&mut self) -> f64 {
        1.0 - self.uniform()
    }

    /// Uniform in `[-1, 1)`.
    pub fn uniform_sym(&mut self) -> f64 {
        2.0 * self.uniform() - 1.0
    }

    /// Standard normal pair (Box-Muller).
    pub fn normal_pair(&mut self) -> (f64, f64) {
        let u1 = self.uniform_open_low();
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let t = 2.0 * std::f64::consts::PI * u2;
        (r * t.cos(), r * t.sin())
    }

    /// Complex value with independent standard-normal parts.
    pub fn normal_complex(&mut self) -> Complex64 {
        let (re, im) = self.normal_pair();
        Complex64::new(re, im)
    }

    /// Uniform integer in `[0, bound)` by rejection (unbiased).
    pub fn below(&mut self, bound: usize) -> usize {
        assert!(bound > 0);
        let bound = bound as u64;
        let zone = u64::MAX - u64::MAX % bound;
        loop {
            let v = self.inner.next_u64();
            if v < zone {
                return (v % bound) as usize;
            }
        }
    }

    /// Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i + 1);
            items.swap(i, j);
        }
    }
}
