use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

use super::check_scale;
use crate::error::{Error, Result};

/// Magnitudes of a windowed discrete Fourier transform.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    /// Angular frequency of each bin, in `(-pi / l, pi / l]`.
    pub omegas: Vec<f64>,
    pub magnitudes: Vec<f64>,
    /// Bin spacing `2 pi / (N l)`.
    pub resolution: f64,
}

/// Hann-windowed spectrum of a series sampled at spacing `l`.
///
/// Uses the kernel `exp(+i omega t)`, so a series `exp(-i E t_n)` peaks at
/// `omega = E`.
pub fn spectrum(series: &[Complex64], l: f64) -> Result<Spectrum> {
    check_scale(l)?;
    let n = series.len();
    if n < 4 {
        return Err(Error::InsufficientResolution {
            len: n,
            achievable: f64::INFINITY,
            required: 0.0,
        });
    }
    let mut buf: Vec<Complex64> = series
        .iter()
        .enumerate()
        .map(|(k, v)| v * (0.5 - 0.5 * (2.0 * PI * k as f64 / n as f64).cos()))
        .collect();
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    let resolution = 2.0 * PI / (n as f64 * l);
    let omegas = (0..n)
        .map(|k| {
            let k = if k > n / 2 { k as f64 - n as f64 } else { k as f64 };
            k * resolution
        })
        .collect();
    Ok(Spectrum {
        omegas,
        magnitudes: buf.iter().map(|v| v.norm()).collect(),
        resolution,
    })
}

/// Frequencies of local maxima reaching `threshold` times the largest
/// magnitude, strongest first.
pub fn find_peaks(spec: &Spectrum, threshold: f64) -> Vec<f64> {
    let n = spec.magnitudes.len();
    let max = spec.magnitudes.iter().copied().fold(0.0, f64::max);
    if max == 0.0 {
        return Vec::new();
    }
    let mut peaks: Vec<(f64, f64)> = (0..n)
        .filter_map(|k| {
            let m = spec.magnitudes[k];
            let left = spec.magnitudes[(k + n - 1) % n];
            let right = spec.magnitudes[(k + 1) % n];
            (m >= threshold * max && m >= left && m > right).then_some((m, spec.omegas[k]))
        })
        .collect();
    peaks.sort_by(|a, b| b.0.total_cmp(&a.0));
    peaks.into_iter().map(|(_, w)| w).collect()
}
