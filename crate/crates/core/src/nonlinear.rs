//! Nonlinear stepping and the diagnostics showing why a quadratic term in the
//! update has no consistent band-limited continuum counterpart.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::FftPlanner;
use serde::Serialize;
use std::f64::consts::PI;

use crate::dynamics::{step_forward, AutomatonState, HamiltonianSpec};
use crate::error::{Error, Result};
use crate::sampling::{check_scale, grid_index, kernel_integral, reconstruct, sinc, sinc_kernel, Quadrature, SampledSignal};

/// `psi[n+1] = psi[n-1] - i c H psi[n] + c M (2x)(2x)`.
pub fn nonlinear_step(prev: &AutomatonState, curr: &AutomatonState, spec: &HamiltonianSpec) -> Result<AutomatonState> {
    if spec.coupling().is_none() {
        return Err(Error::MissingCoupling);
    }
    step_forward(prev, curr, spec)
}

/// `sum_n f_n^2 s_n(t)`: the band-limited interpolant of the squared samples.
pub fn psi2_interpolant(sig: &SampledSignal, t: f64) -> Result<Complex64> {
    reconstruct(&sig.map(|v| v * v), t)
}

/// `(l^-1 int sinc(pi (t - t') / l) psi(t') dt')^2`, by quadrature.
pub fn psi2_closed_form(sig: &SampledSignal, t: f64, quad: &Quadrature) -> Result<Complex64> {
    reconstruct(sig, t)?;
    let inner = kernel_integral(sig, t / sig.scale(), quad)?;
    Ok(inner * inner)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Deviations {
    pub interpolant_vs_closed_form: f64,
    pub interpolant_vs_square: f64,
    pub closed_form_vs_square: f64,
}

/// Side-by-side values of the two squared-signal evaluators at one time.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NonlocalityReport {
    pub t: f64,
    pub interpolant_value: Complex64,
    pub closed_form_value: Complex64,
    /// `reconstruct(t)^2`.
    pub pointwise_square: Complex64,
    pub deviations: Deviations,
    /// Sample radius `(last - first) / 2`.
    pub window: f64,
}

pub fn nonlocality_report(sig: &SampledSignal, t: f64, quad: &Quadrature) -> Result<NonlocalityReport> {
    let interpolant_value = psi2_interpolant(sig, t)?;
    let closed_form_value = psi2_closed_form(sig, t, quad)?;
    let psi = reconstruct(sig, t)?;
    let pointwise_square = psi * psi;
    Ok(NonlocalityReport {
        t,
        interpolant_value,
        closed_form_value,
        pointwise_square,
        deviations: Deviations {
            interpolant_vs_closed_form: (interpolant_value - closed_form_value).norm(),
            interpolant_vs_square: (interpolant_value - pointwise_square).norm(),
            closed_form_vs_square: (closed_form_value - pointwise_square).norm(),
        },
        window: (sig.last() - sig.first()) as f64 / 2.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TripleSumAudit {
    /// `sum_{|n| <= N} s_n(t) s_n(t') s_n(t'')`.
    pub lhs: f64,
    /// `sinc(pi (t - t') / l) sinc(pi (t - t'') / l)`.
    pub rhs: f64,
    pub gap: f64,
    /// Bound on the neglected part of the sum.
    pub tail_bound: f64,
}

/// Compares the truncated triple sum with the two-sinc product. The two agree
/// when one argument is a grid point and differ in general.
pub fn triple_sum_audit(t: f64, t1: f64, t2: f64, l: f64, truncation: u64) -> Result<TripleSumAudit> {
    check_scale(l)?;
    let n_max = truncation as i64;
    let lhs: f64 = (-n_max..=n_max)
        .map(|n| sinc_kernel(n, l, t) * sinc_kernel(n, l, t1) * sinc_kernel(n, l, t2))
        .sum();
    let rhs = sinc(PI * (t - t1) / l) * sinc(PI * (t - t2) / l);
    let x_max = [t, t1, t2].iter().map(|v| (v / l).abs()).fold(0.0, f64::max);
    let room = truncation as f64 - x_max;
    let tail_bound = if room > 1.0 { 2.0 / (PI.powi(3) * (room - 1.0).powi(2)) } else { f64::INFINITY };
    Ok(TripleSumAudit {
        lhs,
        rhs,
        gap: (lhs - rhs).abs(),
        tail_bound,
    })
}

/// Energy split of a spectrum at the band limit `pi / l`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BandSplit {
    /// `|omega| <= omega_max`.
    pub in_band: f64,
    /// `omega_max < |omega| <= 2 omega_max`.
    pub out_of_band: f64,
}

impl BandSplit {
    pub fn out_of_band_fraction(&self) -> f64 {
        let total = self.in_band + self.out_of_band;
        if total == 0.0 {
            0.0
        } else {
            self.out_of_band / total
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BandwidthReport {
    pub signal: BandSplit,
    pub square: BandSplit,
    /// `(omega, |W(omega)|)` of the squared signal at spacing `l / 2`.
    pub square_spectrum: Vec<(f64, f64)>,
}

/// Spectral content of the signal and of its pointwise square up to
/// `2 omega_max`.
///
/// The window of samples is treated as one period of a trigonometric
/// interpolant, refined to spacing `l / 2` by spectral zero padding; the
/// squared refinement is then transformed again.
pub fn product_bandwidth(sig: &SampledSignal) -> Result<BandwidthReport> {
    let n = sig.len();
    let l = sig.scale();
    let mut planner = FftPlanner::new();
    let mut spec: Vec<Complex64> = sig.values().to_vec();
    planner.plan_fft_forward(n).process(&mut spec);

    let m = 2 * n;
    let mut padded = vec![Complex64::new(0.0, 0.0); m];
    for (k, v) in spec.iter().enumerate() {
        let j = if 2 * k < n {
            k as i64
        } else if 2 * k > n {
            k as i64 - n as i64
        } else {
            // Nyquist bin of an even-length window is split between +-n/2
            padded[n / 2] += v * 0.5;
            padded[m - n / 2] += v * 0.5;
            continue;
        };
        padded[j.rem_euclid(m as i64) as usize] += v;
    }
    planner.plan_fft_inverse(m).process(&mut padded);
    // ifft(m) of the zero-padded spectrum gives 2 x the refined samples
    let refined: Vec<Complex64> = padded.iter().map(|v| v / n as f64).collect();

    let split = |values: &[Complex64], planner: &mut FftPlanner<f64>| {
        let mut buf = values.to_vec();
        planner.plan_fft_forward(m).process(&mut buf);
        let mut out = BandSplit {
            in_band: 0.0,
            out_of_band: 0.0,
        };
        for (k, v) in buf.iter().enumerate() {
            let j = if k <= m / 2 { k } else { m - k };
            let e = v.norm_sqr();
            if 2 * j <= n {
                out.in_band += e;
            } else {
                out.out_of_band += e;
            }
        }
        (out, buf)
    };
    let (signal, _) = split(&refined, &mut planner);
    let squared: Vec<Complex64> = refined.iter().map(|v| v * v).collect();
    let (square, buf) = split(&squared, &mut planner);
    let resolution = 2.0 * PI / (n as f64 * l);
    let square_spectrum = buf
        .iter()
        .enumerate()
        .map(|(k, v)| {
            let k = if k > m / 2 { k as f64 - m as f64 } else { k as f64 };
            (k * resolution, v.norm() / m as f64)
        })
        .collect();
    Ok(BandwidthReport {
        signal,
        square,
        square_spectrum,
    })
}

/// Smooth band-limited test functions for the locality sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum BandLimitedFunction {
    Zero,
    /// `amplitude * sinc(bandwidth (t - center))`, band-limited to `bandwidth`.
    SingleSinc { amplitude: f64, bandwidth: f64, center: f64 },
}

impl BandLimitedFunction {
    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            BandLimitedFunction::Zero => 0.0,
            BandLimitedFunction::SingleSinc {
                amplitude,
                bandwidth,
                center,
            } => amplitude * sinc(bandwidth * (t - center)),
        }
    }

    pub fn bandwidth(&self) -> f64 {
        match *self {
            BandLimitedFunction::Zero => 0.0,
            BandLimitedFunction::SingleSinc { bandwidth, .. } => bandwidth.abs(),
        }
    }

    /// Samples at `n l` for `|n l| <= half_window`.
    pub fn sample(&self, l: f64, half_window: f64) -> Result<SampledSignal> {
        check_scale(l)?;
        let radius = (half_window / l).ceil() as usize;
        SampledSignal::centered(l, radius, |n| Complex64::new(self.eval(n as f64 * l), 0.0))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    /// Physical half-width of the sampled interval, the same for every `l`.
    pub half_window: f64,
    /// Physical test times; grid points of a given `l` are skipped.
    pub test_points: Vec<f64>,
    /// Required relative distance of the bandwidth below `pi / max(l)`.
    pub margin: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            half_window: 256.0,
            test_points: (0..16).map(|k| -3.9 + 0.517 * k as f64).collect(),
            margin: 0.05,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub scale: f64,
    /// Max over off-grid test points of `|psi2_interpolant - f^2|`.
    pub deviation: f64,
    pub points_used: usize,
}

/// Off-grid deviation of the squared-sample interpolant from the true square
/// for each scale.
pub fn locality_deviation_sweep(func: &BandLimitedFunction, scales: &[f64], cfg: &SweepConfig) -> Result<Vec<SweepPoint>> {
    for &l in scales {
        check_scale(l)?;
    }
    let l_max = scales.iter().copied().fold(0.0, f64::max);
    if l_max > 0.0 {
        let limit = (1.0 - cfg.margin) * PI / l_max;
        if func.bandwidth() >= limit {
            return Err(Error::BandLimit {
                bandwidth: func.bandwidth(),
                limit,
            });
        }
    }
    scales
        .iter()
        .map(|&l| {
            let sig = func.sample(l, cfg.half_window)?;
            let mut deviation = 0.0f64;
            let mut points_used = 0;
            for &t in &cfg.test_points {
                if grid_index(t / l).is_some() {
                    continue;
                }
                let f = func.eval(t);
                deviation = deviation.max((psi2_interpolant(&sig, t)? - f * f).norm());
                points_used += 1;
            }
            Ok(SweepPoint {
                scale: l,
                deviation,
                points_used,
            })
        })
        .collect()
}

/// True when each deviation is below its predecessor, allowing `slack`.
pub fn is_decreasing(points: &[SweepPoint], slack: f64) -> bool {
    points.windows(2).all(|w| w[1].deviation < w[0].deviation + slack)
}

/// Uniform random complex samples in `[-1, 1] + i[-1, 1]` on `[-radius, radius]`.
pub fn band_filling(l: f64, radius: usize, seed: u64) -> Result<SampledSignal> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    SampledSignal::centered(l, radius, |_| Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)))
}
