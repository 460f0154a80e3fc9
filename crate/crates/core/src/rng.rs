//! Seeded random stream used by every sampler in the crate.
//!
//! The generator is SplitMix64 (Steele, Lea & Flood 2014) with the standard
//! increment `0x9E3779B97F4A7C15` and the Stafford "mix13" finalizer.
//! Uniform doubles take the top 53 bits; Gaussian variates use the basic
//! Box-Muller transform `sqrt(-2 ln u1) * cos(2 pi u2)` with `u1` drawn from
//! `(0, 1]`, one variate per pair of uniforms. Any other language can
//! reproduce the exact same point sets from a seed with these three rules.

use std::f64::consts::TAU;

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    /// Derive an independent stream, e.g. one per seed index in a sweep.
    pub fn derive(seed: u64, stream: u64) -> Self {
        let mut base = Self::new(seed ^ stream.wrapping_mul(0xD1B5_4A32_D192_ED03));
        Self::new(base.next_u64())
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    pub fn gaussian(&mut self) -> f64 {
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        (-2.0 * u1.ln()).sqrt() * (TAU * u2).cos()
    }

    /// Uniform point on the unit sphere in `R^dim`.
    pub fn unit_vector(&mut self, dim: usize) -> Vec<f64> {
        loop {
            let v: Vec<f64> = (0..dim).map(|_| self.gaussian()).collect();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1e-300 {
                return v.into_iter().map(|x| x / norm).collect();
            }
        }
    }

    /// Uniform point in the closed unit ball of `R^dim`.
    pub fn ball_point(&mut self, dim: usize) -> Vec<f64> {
        if dim == 0 {
            return Vec::new();
        }
        let dir = self.unit_vector(dim);
        let radius = self.uniform().powf(1.0 / dim as f64);
        dir.into_iter().map(|x| x * radius).collect()
    }

    pub fn below(&mut self, bound: usize) -> usize {
        (self.uniform() * bound as f64) as usize % bound.max(1)
    }
}
