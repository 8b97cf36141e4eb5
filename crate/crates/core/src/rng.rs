//! Deterministic randomness.
//!
//! Sampling decisions are derived by hashing `(seed, stream, k, item)` with a
//! SplitMix64-style finalizer, so each decision is independent of evaluation
//! order and the same seed always reproduces the same sets. A small sequential
//! generator is provided for consumers that just need a stream.

/// SplitMix64 finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Hash a `(seed, stream, a, b)` tuple into one word.
#[inline]
pub fn mix_words(seed: u64, stream: u64, a: u64, b: u64) -> u64 {
    let mut h = mix64(seed ^ stream);
    h = mix64(h ^ a.wrapping_mul(0x9e3779b97f4a7c15));
    mix64(h ^ b.wrapping_mul(0xc2b2ae3d27d4eb4f))
}

/// Map a word to a uniform double in `[0, 1)`.
#[inline]
pub fn unit_f64(x: u64) -> f64 {
    (x >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Counter-based Bernoulli trial: independent per `(seed, stream, a, b)`.
#[inline]
pub fn bernoulli(seed: u64, stream: u64, a: u64, b: u64, p: f64) -> bool {
    unit_f64(mix_words(seed, stream, a, b)) < p
}

/// Sequential SplitMix64 stream, used by the graph generators.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        mix64(self.state)
    }

    pub fn next_f64(&mut self) -> f64 {
        unit_f64(self.next_u64())
    }

    /// Uniform integer in `[0, bound)`; `bound` must be nonzero.
    pub fn next_below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        // Rejection-free multiply-shift; bias is negligible for graph sizes.
        ((self.next_u64() as u128 * bound as u128) >> 64) as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counter_prf_is_order_independent() {
        let a = bernoulli(7, 1, 3, 20, 0.5);
        let _ = bernoulli(7, 1, 9, 9, 0.5);
        let b = bernoulli(7, 1, 3, 20, 0.5);
        assert_eq!(a, b);
    }

    #[test]
    fn unit_range() {
        let mut rng = SplitMix64::new(42);
        for _ in 0..1000 {
            let x = rng.next_f64();
            assert!((0.0..1.0).contains(&x));
        }
    }

    #[test]
    fn next_below_in_range() {
        let mut rng = SplitMix64::new(1);
        for _ in 0..1000 {
            assert!(rng.next_below(7) < 7);
        }
    }
}
