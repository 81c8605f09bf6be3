//! Seeded measurement noise, one sample per integration step.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct NoiseStream {
    rng: ChaCha8Rng,
    normal: Option<Normal<f64>>,
}

impl NoiseStream {
    /// Zero-mean Gaussian samples of the given variance; `variance = 0` yields zeros.
    pub fn new(seed: u64, variance: f64) -> Result<Self> {
        if !(variance >= 0.0 && variance.is_finite()) {
            return Err(Error::config(
                "noise.variance",
                format!("must be non-negative, got {variance}"),
            ));
        }
        let normal = if variance > 0.0 {
            Some(Normal::new(0.0, variance.sqrt()).expect("finite positive std dev"))
        } else {
            None
        };
        Ok(NoiseStream {
            rng: ChaCha8Rng::seed_from_u64(seed),
            normal,
        })
    }

    pub fn next_sample(&mut self) -> f64 {
        match &self.normal {
            Some(n) => n.sample(&mut self.rng),
            None => 0.0,
        }
    }
}

impl Iterator for NoiseStream {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        Some(self.next_sample())
    }
}

/// Convenience constructor matching the stream-of-samples view.
pub fn noise_stream(seed: u64, variance: f64) -> Result<NoiseStream> {
    NoiseStream::new(seed, variance)
}
