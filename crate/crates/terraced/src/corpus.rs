//! Seeded random corpus generation.
//!
//! The generator is pinned down exactly so any implementation can reproduce
//! the verification corpus:
//!
//! * `SplitMix64`: state advances by `0x9E3779B97F4A7C15`; output mixes the
//!   advanced state with `z ^= z >> 30; z *= 0xBF58476D1CE4E5B9;
//!   z ^= z >> 27; z *= 0x94D049BB133111EB; z ^= z >> 31`.
//! * Uniform doubles take the top 53 bits: `(next_u64() >> 11) * 2^-53`.
//! * Gaussians come from Box-Muller on two uniforms:
//!   `r = sqrt(-2 ln(1-u1))`, `theta = 2 pi u2`, yielding
//!   `(r cos theta, r sin theta)`.
//! * A standard complex Gaussian uses that pair as real and imaginary parts.
//! * Corpus sequences have length `2 + next_u64() % 63` (so 2..=64) and
//!   independent standard complex Gaussian entries drawn in index order.

use num_complex::Complex64;

use crate::interval::NaturalInterval;
use crate::sequences::SequenceSpec;

/// SplitMix64 pseudo-random generator.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal via Box-Muller (cosine branch).
    pub fn unit_gaussian(&mut self) -> f64 {
        self.gaussian_pair().0
    }

    pub fn gaussian_pair(&mut self) -> (f64, f64) {
        let u1 = self.uniform();
        let u2 = self.uniform();
        let r = (-2.0 * (1.0 - u1).ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * u2;
        (r * theta.cos(), r * theta.sin())
    }

    /// Standard complex Gaussian: independent N(0,1) real and imaginary
    /// parts.
    pub fn complex_gaussian(&mut self) -> Complex64 {
        let (re, im) = self.gaussian_pair();
        Complex64::new(re, im)
    }
}

/// One finite-support corpus sequence: length in `[2, 64]`, standard complex
/// Gaussian entries.
pub fn corpus_sequence(rng: &mut SplitMix64) -> SequenceSpec {
    let len = 2 + (rng.next_u64() % 63) as usize;
    let values: Vec<Complex64> = (0..len).map(|_| rng.complex_gaussian()).collect();
    SequenceSpec::finite_support(values)
}

/// Random subinterval of `[0, len-1]` with cardinality at most 64.
pub fn corpus_interval(rng: &mut SplitMix64, len: usize) -> NaturalInterval {
    debug_assert!(len >= 1);
    let a = rng.next_u64() % len as u64;
    let room = (len as u64 - a).min(64);
    let width = 1 + rng.next_u64() % room;
    NaturalInterval::new(a, a + width - 1).expect("corpus interval within bounds")
}
