//! Counter-based deterministic random streams.
//!
//! Monte Carlo results in this crate must be reproducible across runs and
//! across worker partitions, so all randomness flows through a splitmix-style
//! generator: `SplitMix64::stream(seed, index)` yields the same stream no
//! matter which worker consumes it or in which order streams are created.

/// SplitMix64: a tiny, well-mixed 64-bit generator.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    /// Independent stream derived from `(seed, index)`.
    ///
    /// The index is mixed through one splitmix round before being folded into
    /// the seed, so neighboring indices give unrelated streams.
    pub fn stream(seed: u64, index: u64) -> Self {
        let mixed = mix(index.wrapping_add(0x9e37_79b9_7f4a_7c15));
        Self::new(seed ^ mixed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        mix(self.state)
    }

    /// Uniform in `[0, 1)` with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal via Box-Muller.
    pub fn next_gaussian(&mut self) -> f64 {
        let u1 = loop {
            let u = self.next_f64();
            if u > 0.0 {
                break u;
            }
        };
        let u2 = self.next_f64();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }

    /// Index into `weights` (nonnegative, summing to ~1) by inverse CDF in
    /// slice order; the last positive entry absorbs any rounding remainder.
    pub fn next_categorical(&mut self, weights: &[f64]) -> usize {
        let u = self.next_f64();
        let mut acc = 0.0;
        let mut last_positive = 0;
        for (i, &w) in weights.iter().enumerate() {
            if w > 0.0 {
                last_positive = i;
                acc += w;
                if u < acc {
                    return i;
                }
            }
        }
        last_positive
    }
}

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
