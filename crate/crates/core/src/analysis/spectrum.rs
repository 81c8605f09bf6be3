//! Hann-windowed periodogram of a uniformly sampled signal.

use std::f64::consts::PI;
use std::path::Path;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

pub const MIN_SAMPLES: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectrumBin {
    /// Angular frequency in rad/s.
    pub omega: f64,
    pub magnitude: f64,
}

/// One-sided magnitude spectrum of the mean-removed, Hann-windowed signal.
///
/// Magnitudes are scaled so that their squares sum to the energy
/// `Σ (w_k x_k)²` of the windowed signal.
pub fn error_spectrum(x: &[f64], dt: f64) -> Result<Vec<SpectrumBin>> {
    let n = x.len();
    if n < MIN_SAMPLES {
        return Err(Error::SeriesTooShort {
            needed: MIN_SAMPLES,
            found: n,
        });
    }
    if !(dt > 0.0) {
        return Err(Error::config("dt", format!("must be positive, got {dt}")));
    }
    let windowed = windowed(x);
    let mut buf: Vec<Complex<f64>> = windowed.iter().map(|&v| Complex::new(v, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let norm = (n as f64).sqrt();
    let half = n / 2;
    let d_omega = 2.0 * PI / (n as f64 * dt);
    Ok((0..=half)
        .map(|k| {
            let two_sided = k != 0 && !(n % 2 == 0 && k == half);
            let scale = if two_sided { 2f64.sqrt() } else { 1.0 };
            SpectrumBin {
                omega: k as f64 * d_omega,
                magnitude: scale * buf[k].norm() / norm,
            }
        })
        .collect())
}

/// Mean-removed signal multiplied by the periodic Hann window.
pub fn windowed(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mean = x.iter().sum::<f64>() / n as f64;
    x.iter()
        .enumerate()
        .map(|(k, &v)| {
            let w = 0.5 - 0.5 * (2.0 * PI * k as f64 / n as f64).cos();
            w * (v - mean)
        })
        .collect()
}

/// Bin spacing in rad/s.
pub fn bin_width(n: usize, dt: f64) -> f64 {
    2.0 * PI / (n as f64 * dt)
}

/// Index of the largest local maximum, ignoring the DC bin.
pub fn dominant_peak(bins: &[SpectrumBin]) -> Option<usize> {
    let m = |i: usize| bins[i].magnitude;
    (1..bins.len())
        .filter(|&i| m(i) >= m(i - 1) && (i + 1 == bins.len() || m(i) >= m(i + 1)))
        .max_by(|&a, &b| m(a).total_cmp(&m(b)))
}

/// Index of the bin nearest to `omega`.
pub fn nearest_bin(bins: &[SpectrumBin], omega: f64) -> Option<usize> {
    (0..bins.len()).min_by(|&a, &b| {
        (bins[a].omega - omega)
            .abs()
            .total_cmp(&(bins[b].omega - omega).abs())
    })
}

/// `omega_rad_s,magnitude`.
pub fn write_spectrum_csv(bins: &[SpectrumBin], path: impl AsRef<Path>) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["omega_rad_s", "magnitude"])?;
    for b in bins {
        w.write_record([b.omega.to_string(), b.magnitude.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sampled(n: usize, dt: f64, f: impl Fn(f64) -> f64) -> Vec<f64> {
        (0..n).map(|k| f(k as f64 * dt)).collect()
    }

    #[test]
    fn single_tone_peak() {
        let dt = 1e-3;
        let x = sampled(20_000, dt, |t| (15.0 * t).sin());
        let bins = error_spectrum(&x, dt).unwrap();
        let k = dominant_peak(&bins).unwrap();
        assert!((bins[k].omega - 15.0).abs() <= bin_width(x.len(), dt));
    }

    #[test]
    fn constant_has_no_content() {
        let bins = error_spectrum(&vec![3.25; 1000], 1e-3).unwrap();
        assert!(bins.iter().all(|b| b.magnitude < 1e-12));
    }

    #[test]
    fn parseval() {
        for n in [1000, 1001] {
            let x = sampled(n, 1e-2, |t| (3.0 * t).sin() + 0.3 * (17.0 * t).cos() + 0.1 * t);
            let energy: f64 = windowed(&x).iter().map(|v| v * v).sum();
            let bins = error_spectrum(&x, 1e-2).unwrap();
            let total: f64 = bins.iter().map(|b| b.magnitude * b.magnitude).sum();
            assert!((total - energy).abs() <= 1e-9 * energy, "n={n}");
        }
    }

    #[test]
    fn too_short() {
        assert!(matches!(
            error_spectrum(&[1.0; 15], 1e-3),
            Err(Error::SeriesTooShort { needed: 16, found: 15 })
        ));
    }

    #[test]
    fn axis_in_radians_per_second() {
        let bins = error_spectrum(&[0.0; 100], 0.01).unwrap();
        assert_eq!(bins.len(), 51);
        assert!((bins[1].omega - 2.0 * PI).abs() < 1e-12);
        assert_eq!(nearest_bin(&bins, 6.0), Some(1));
    }
}
