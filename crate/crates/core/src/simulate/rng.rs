use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Deterministic uniform and Gaussian draws for one parallel stream.
///
/// Stream `s` of seed `x` is ChaCha8 keyed by `seed_from_u64(x)` with stream
/// id `s`, so streams never overlap and results do not depend on thread
/// scheduling. Gaussians use the Box-Muller transform with `libm` so the
/// arithmetic is the same on every platform.
#[derive(Debug, Clone)]
pub struct SampleStream {
    rng: ChaCha8Rng,
}

impl SampleStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        SampleStream { rng }
    }

    /// Uniform on `(0, 1]` with 53 random bits.
    pub fn open_uniform(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal from two uniforms.
    pub fn normal(&mut self) -> f64 {
        let u1 = self.open_uniform();
        let u2 = self.open_uniform();
        libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(2.0 * std::f64::consts::PI * u2)
    }

    /// Index drawn from the cumulative distribution `cdf` (last entry 1).
    pub fn categorical(&mut self, cdf: &[f64]) -> usize {
        let u = self.open_uniform();
        cdf.iter().position(|&c| u <= c).unwrap_or(cdf.len() - 1)
    }
}
