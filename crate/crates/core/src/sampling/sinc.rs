use num_complex::Complex64;
use std::f64::consts::PI;

use super::{check_scale, SampledSignal};
use crate::error::{Error, Result};

/// `sin(x) / x` with `sinc(0) = 1`.
pub fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        x.sin() / x
    }
}

/// `s_n(t) = sinc(pi (t - n l) / l)`.
pub fn sinc_kernel(n: i64, l: f64, t: f64) -> f64 {
    let x = t / l - n as f64;
    if x == 0.0 {
        return 1.0;
    }
    // reduce the sine argument to avoid losing digits for large |x|
    let k = x.round();
    let r = x - k;
    let s = (PI * r).sin() / (PI * x);
    if (k as i64) % 2 == 0 {
        s
    } else {
        -s
    }
}

const MIN_PAD: f64 = 32.0;

/// Trapezoid settings for integrals against sinc kernels, in units of `l`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    /// Points per sample spacing; at least 2.
    pub subdivisions: usize,
    /// Extra integration range beyond the signal support, in samples.
    pub pad: f64,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self {
            subdivisions: 2,
            pad: 1024.0,
        }
    }
}

impl Quadrature {
    /// Builds settings from a physical step `step` for scale `l`.
    pub fn from_step(step: f64, l: f64) -> Result<Self> {
        check_scale(l)?;
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::Quadrature(format!("step must be positive, got {step}")));
        }
        let q = (l / step).round();
        if q < 2.0 || ((l / step) - q).abs() > 1e-9 * q {
            return Err(Error::Quadrature(format!(
                "step {step} must divide l = {l} into at least two equal parts"
            )));
        }
        Ok(Self {
            subdivisions: q as usize,
            ..Self::default()
        })
    }

    fn validate(&self) -> Result<()> {
        if self.subdivisions < 2 {
            return Err(Error::Quadrature(format!(
                "need at least 2 subdivisions per sample, got {}",
                self.subdivisions
            )));
        }
        if !(self.pad >= MIN_PAD) {
            return Err(Error::Quadrature(format!(
                "insufficient quadrature window: pad {} is below {MIN_PAD}",
                self.pad
            )));
        }
        Ok(())
    }
}

/// `F(x) = sum_m f_m (-1)^m / (x - m)` and its derivative.
fn alternating_series(sig: &SampledSignal, x: f64) -> (Complex64, Complex64) {
    let mut f = Complex64::new(0.0, 0.0);
    let mut df = Complex64::new(0.0, 0.0);
    for (m, v) in (sig.first()..).zip(sig.values()) {
        if v.re == 0.0 && v.im == 0.0 {
            continue;
        }
        let d = x - m as f64;
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        f += v * (sign / d);
        df -= v * (sign / (d * d));
    }
    (f, df)
}

/// `l^-1 int s_c(t) psi(t) dt` with `c` in units of `l` and `psi` the
/// truncated reconstruction of `sig`.
///
/// The trapezoid rule is exact for the band-limited integrand apart from the
/// cut-off range; the tails beyond it are added analytically. With
/// `psi(x) = sin(pi x) F(x) / pi` the integrand splits into
///
/// ```text
/// cos(pi c) F(x) / (2 pi^2 (x - c))  -  cos(pi (2x - c)) F(x) / (2 pi^2 (x - c))
/// ```
///
/// The first part integrates in closed form term by term, the second is
/// integrated by parts to second order.
pub fn kernel_integral(sig: &SampledSignal, c: f64, quad: &Quadrature) -> Result<Complex64> {
    quad.validate()?;
    if !c.is_finite() {
        return Err(Error::Quadrature(format!("kernel centre must be finite, got {c}")));
    }
    let support: Vec<i64> = (sig.first()..)
        .zip(sig.values())
        .filter(|(_, v)| v.re != 0.0 || v.im != 0.0)
        .map(|(m, _)| m)
        .collect();
    let (Some(&m_lo), Some(&m_hi)) = (support.first(), support.last()) else {
        return Ok(Complex64::new(0.0, 0.0));
    };
    let y = ((m_lo as f64).min(c) - quad.pad).floor();
    let x_end = ((m_hi as f64).max(c) + quad.pad).ceil();
    let q = quad.subdivisions;
    let h = 1.0 / q as f64;
    let points = ((x_end - y) as usize) * q;

    let integrand = |x: f64| sig.series_at(x) * sinc(PI * (x - c));
    let mut acc = (integrand(y) + integrand(x_end)) * 0.5;
    for k in 1..points {
        acc += integrand(y + k as f64 * h);
    }
    acc *= h;

    let pi2 = PI * PI;
    let even = 0.5 * (PI * c).cos() / pi2;
    let mut smooth = Complex64::new(0.0, 0.0);
    for (m, v) in (sig.first()..).zip(sig.values()) {
        if v.re == 0.0 && v.im == 0.0 {
            continue;
        }
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        let mc = m as f64 - c;
        let right = if mc == 0.0 { 1.0 / (x_end - c) } else { (mc / (x_end - m as f64)).ln_1p() / mc };
        let left = if mc == 0.0 { 1.0 / (c - y) } else { (mc / (c - y)).ln_1p() / mc };
        smooth += v * (sign * (right + left));
    }
    let tail_g = |x: f64| {
        let (f, df) = alternating_series(sig, x);
        let d = x - c;
        (f / d, df / d - f / (d * d))
    };
    let (g_r, dg_r) = tail_g(x_end);
    let (g_l, dg_l) = tail_g(y);
    let ar = PI * (2.0 * x_end - c);
    let al = PI * (2.0 * y - c);
    let osc_right = -g_r * (ar.sin() / (2.0 * PI)) - dg_r * (ar.cos() / (4.0 * pi2));
    let osc_left = g_l * (al.sin() / (2.0 * PI)) + dg_l * (al.cos() / (4.0 * pi2));
    let tails = smooth * even - (osc_right + osc_left) * (0.5 / pi2);
    Ok(acc + tails)
}

/// Recovers sample `n` as `l^-1 int s_n(t) psi(t) dt`.
pub fn sample_projection(sig: &SampledSignal, n: i64, quad: &Quadrature) -> Result<Complex64> {
    kernel_integral(sig, n as f64, quad)
}

/// `l^-1 int s_n(t) dt` over `|t - t_n| <= radius l`, by trapezoid with
/// spacing `l / 2`.
pub fn nascent_delta_integral(radius: usize) -> f64 {
    let q = 2usize;
    let h = 1.0 / q as f64;
    let r = radius as f64;
    let points = radius * 2 * q;
    let mut acc = 0.5 * (sinc(PI * -r) + sinc(PI * r));
    for k in 1..points {
        acc += sinc(PI * (-r + k as f64 * h));
    }
    acc * h
}

/// `l^-1 int s_0(t) exp(-t^2) dt`, which tends to `exp(0) = 1` as `l -> 0`.
/// For `l = 1` the exact value is `erf(pi / 2)`.
pub fn nascent_delta_pairing(l: f64) -> Result<f64> {
    check_scale(l)?;
    // Gaussian is below 1e-40 beyond |t| = 10
    let cutoff = 10.0;
    let h = (l / 32.0).min(1e-2);
    let points = (2.0 * cutoff / h).ceil() as usize;
    let h = 2.0 * cutoff / points as f64;
    let f = |t: f64| sinc_kernel(0, l, t) * (-t * t).exp();
    let mut acc = 0.5 * (f(-cutoff) + f(cutoff));
    for k in 1..points {
        acc += f(-cutoff + k as f64 * h);
    }
    Ok(acc * h / l)
}

/// `int s_n(t) exp(i omega t) dt` over `|t - t_n| <= radius l`.
///
/// The exact transform is `l exp(i omega n l)` inside `|omega| < pi / l` and
/// zero outside.
pub fn sinc_fourier_transform(n: i64, l: f64, omega: f64, radius: usize) -> Result<Complex64> {
    check_scale(l)?;
    let q = 4usize;
    let h = 1.0 / q as f64;
    let r = radius as f64;
    let points = radius * 2 * q;
    let a = omega * l;
    let f = |x: f64| Complex64::from_polar(sinc(PI * x), a * x);
    let mut acc = (f(-r) + f(r)) * 0.5;
    for k in 1..points {
        acc += f(-r + k as f64 * h);
    }
    Ok(acc * (h * l) * Complex64::from_polar(1.0, a * n as f64))
}
