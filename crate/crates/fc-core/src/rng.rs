//! Minimal deterministic RNG for sampling in property checks.
//!
//! SplitMix64: tiny, seedable, good enough for test-vector generation.
//! Not for cryptography.

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform-ish value in `0..n` (n > 0).
    pub fn below(&mut self, n: usize) -> usize {
        (self.next() % n as u64) as usize
    }

    /// Integer in `[-bound, bound]`.
    pub fn int_in(&mut self, bound: i64) -> i64 {
        let span = 2 * bound as u64 + 1;
        (self.next() % span) as i64 - bound
    }
}
