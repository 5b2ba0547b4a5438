//! Band-limited bridge between automaton samples and continuous time.
//!
//! Samples `f_n` at `t_n = n l` determine the band-limited function
//!
//! ```text
//! f(t) = sum_n f_n s_n(t),   s_n(t) = sinc(pi (t - t_n) / l)
//! ```
//!
//! with band limit `omega_max = pi / l`. All series here are truncated to the
//! stored samples, so evaluations are restricted to a window that stays
//! `margin` samples away from either end.

mod dispersion;
mod sinc;
mod spectrum;

pub use dispersion::{
    dispersion_energy, dispersion_series, hamiltonian_eigen, mode_frequency_measure, mode_series, project_on_mode,
    Branch, DispersionResult, EigenPair,
};
pub use sinc::{
    kernel_integral, nascent_delta_integral, nascent_delta_pairing, sample_projection, sinc, sinc_fourier_transform,
    sinc_kernel, Quadrature,
};
pub use spectrum::{find_peaks, spectrum, Spectrum};

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::dynamics::{HamiltonianSpec, Trajectory};
use crate::error::{Error, Result};
use crate::exact::int_to_f64;

pub const DEFAULT_MARGIN: usize = 1;

/// Index `n` when `x = t / l` is a grid point. `n l / l` may miss `n` by an
/// ulp, so a few ulps of tolerance are allowed.
pub fn grid_index(x: f64) -> Option<i64> {
    let nearest = x.round();
    ((x - nearest).abs() <= 4.0 * f64::EPSILON * x.abs().max(1.0) && nearest.abs() < 9.0e15).then_some(nearest as i64)
}

/// Complex samples on consecutive indices `first ..= first + len - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSignal {
    first: i64,
    values: Vec<Complex64>,
    scale: f64,
    margin: usize,
}

pub(crate) fn check_scale(l: f64) -> Result<()> {
    if l.is_finite() && l > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidScale(format!("l must be positive and finite, got {l}")))
    }
}

impl SampledSignal {
    pub fn new(first: i64, values: Vec<Complex64>, l: f64) -> Result<Self> {
        check_scale(l)?;
        if values.is_empty() {
            return Err(Error::Signal("signal needs at least one sample".into()));
        }
        Ok(Self {
            first,
            values,
            scale: l,
            margin: DEFAULT_MARGIN,
        })
    }

    /// Samples `f(n)` for `n` in `[-radius, radius]`.
    pub fn centered(l: f64, radius: usize, f: impl FnMut(i64) -> Complex64) -> Result<Self> {
        let r = radius as i64;
        Self::new(-r, (-r..=r).map(f).collect(), l)
    }

    pub fn zero(l: f64, radius: usize) -> Result<Self> {
        Self::centered(l, radius, |_| Complex64::new(0.0, 0.0))
    }

    /// Unit sample at `n = 0`.
    pub fn impulse(l: f64, radius: usize) -> Result<Self> {
        Self::centered(l, radius, |n| Complex64::new(if n == 0 { 1.0 } else { 0.0 }, 0.0))
    }

    /// Component `alpha` of every state of a trajectory, `psi^alpha_n` at `t_n = n l`.
    pub fn from_trajectory(traj: &Trajectory, alpha: usize, l: f64) -> Result<Self> {
        if alpha >= traj.spec().dim() {
            return Err(Error::DimensionMismatch {
                what: "trajectory component",
                expected: traj.spec().dim(),
                found: alpha,
            });
        }
        let values = traj
            .states()
            .iter()
            .map(|s| Complex64::new(int_to_f64(&s.x[alpha]), int_to_f64(&s.p[alpha])))
            .collect();
        Self::new(traj.first_n(), values, l)
    }

    pub fn with_margin(mut self, margin: usize) -> Self {
        self.margin = margin;
        self
    }

    pub fn map(&self, f: impl FnMut(&Complex64) -> Complex64) -> Self {
        Self {
            values: self.values.iter().map(f).collect(),
            ..self.clone()
        }
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn omega_max(&self) -> f64 {
        PI / self.scale
    }

    pub fn margin(&self) -> usize {
        self.margin
    }

    pub fn first(&self) -> i64 {
        self.first
    }

    pub fn last(&self) -> i64 {
        self.first + self.values.len() as i64 - 1
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Stored sample, zero outside the support.
    pub fn sample(&self, n: i64) -> Complex64 {
        n.checked_sub(self.first)
            .and_then(|k| usize::try_from(k).ok())
            .and_then(|k| self.values.get(k))
            .copied()
            .unwrap_or_default()
    }

    pub fn time(&self, n: i64) -> f64 {
        n as f64 * self.scale
    }

    /// `[(first + margin) l, (last - margin) l]`.
    pub fn window(&self) -> (f64, f64) {
        let m = self.margin as i64;
        (self.time(self.first + m), self.time(self.last() - m))
    }

    fn check_window(&self, t: f64) -> Result<()> {
        let (lo, hi) = self.window();
        if t.is_finite() && t >= lo && t <= hi {
            Ok(())
        } else {
            Err(Error::OutOfWindow { t, lo, hi })
        }
    }

    /// Truncated sinc series at `x = t / l`, any `x`.
    pub(crate) fn series_at(&self, x: f64) -> Complex64 {
        if let Some(n) = grid_index(x) {
            return self.sample(n);
        }
        // sin(pi (x - m)) = (-1)^m sin(pi x); split x = k + r so the sine is
        // evaluated on a small argument
        let k = x.floor();
        let r = x - k;
        let k = k as i64;
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, v) in (self.first..).zip(&self.values) {
            if v.re == 0.0 && v.im == 0.0 {
                continue;
            }
            let d = (k - m) as f64 + r;
            let term = v / d;
            if (k - m) % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc * ((PI * r).sin() / PI)
    }
}

/// Truncated sinc reconstruction; returns the stored sample exactly on grid points.
pub fn reconstruct(sig: &SampledSignal, t: f64) -> Result<Complex64> {
    sig.check_window(t)?;
    Ok(sig.series_at(t / sig.scale))
}

/// A complex function of continuous time.
pub trait ContinuousSignal {
    fn eval(&self, t: f64) -> Result<Complex64>;

    /// Interval on which `eval` is supported.
    fn window(&self) -> (f64, f64);

    /// Sample spacing the signal is tied to, if any.
    fn scale(&self) -> Option<f64> {
        None
    }
}

impl ContinuousSignal for SampledSignal {
    fn eval(&self, t: f64) -> Result<Complex64> {
        reconstruct(self, t)
    }

    fn window(&self) -> (f64, f64) {
        SampledSignal::window(self)
    }

    fn scale(&self) -> Option<f64> {
        Some(self.scale)
    }
}

/// `amplitude * exp(-i energy t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneWave {
    pub amplitude: Complex64,
    pub energy: f64,
}

impl ContinuousSignal for PlaneWave {
    fn eval(&self, t: f64) -> Result<Complex64> {
        Ok(self.amplitude * Complex64::from_polar(1.0, -self.energy * t))
    }

    fn window(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, f64::INFINITY)
    }
}

fn require_plain_linear(spec: &HamiltonianSpec) -> Result<()> {
    if !spec.lapse().is_unit() {
        return Err(Error::Unsupported("the continuum bridge requires constant lapse c = 1".into()));
    }
    if !spec.is_linear() {
        return Err(Error::Unsupported("the continuum bridge requires a linear spec without M or R".into()));
    }
    Ok(())
}

fn hamiltonian_f64(spec: &HamiltonianSpec) -> Vec<Vec<Complex64>> {
    let d = spec.dim();
    (0..d)
        .map(|r| (0..d).map(|c| Complex64::new(int_to_f64(&spec.s()[(r, c)]), int_to_f64(&spec.a()[(r, c)]))).collect())
        .collect()
}

/// `psi(t + l) - psi(t - l) + i H psi(t)` for one signal per component.
///
/// Zero for signals built from a linear solution: exactly at grid times, and
/// up to series truncation elsewhere.
pub fn modified_schrodinger_residual<S: ContinuousSignal>(
    components: &[S],
    spec: &HamiltonianSpec,
    l: f64,
    t: f64,
) -> Result<Vec<Complex64>> {
    check_scale(l)?;
    require_plain_linear(spec)?;
    if components.len() != spec.dim() {
        return Err(Error::DimensionMismatch {
            what: "signal components",
            expected: spec.dim(),
            found: components.len(),
        });
    }
    for c in components {
        if let Some(cl) = c.scale() {
            if cl != l {
                return Err(Error::InvalidScale(format!("component scale {cl} differs from l = {l}")));
            }
        }
        let (lo, hi) = c.window();
        if !(t - l >= lo && t + l <= hi) {
            return Err(Error::OutOfWindow { t, lo: lo + l, hi: hi - l });
        }
    }
    let plus = components.iter().map(|c| c.eval(t + l)).collect::<Result<Vec<_>>>()?;
    let minus = components.iter().map(|c| c.eval(t - l)).collect::<Result<Vec<_>>>()?;
    let here = components.iter().map(|c| c.eval(t)).collect::<Result<Vec<_>>>()?;
    let h = hamiltonian_f64(spec);
    let i = Complex64::new(0.0, 1.0);
    Ok((0..spec.dim())
        .map(|a| {
            let h_psi: Complex64 = h[a].iter().zip(&here).map(|(hab, v)| hab * v).sum();
            plus[a] - minus[a] + i * h_psi
        })
        .collect())
}

/// Upper bound on `|residual(t)|` caused by truncating the sample series.
///
/// The off-grid residual equals `sum_m B_m s_m(t)`, where `B_m` is the grid
/// residual of the zero-extended samples. For samples of a solution `B_m`
/// vanishes except next to the ends of the support.
pub fn schrodinger_truncation_bound(components: &[SampledSignal], spec: &HamiltonianSpec, t: f64) -> Result<f64> {
    require_plain_linear(spec)?;
    let Some(first) = components.first() else {
        return Err(Error::DimensionMismatch {
            what: "signal components",
            expected: spec.dim(),
            found: 0,
        });
    };
    if components.len() != spec.dim() {
        return Err(Error::DimensionMismatch {
            what: "signal components",
            expected: spec.dim(),
            found: components.len(),
        });
    }
    let l = first.scale();
    let lo = components.iter().map(|c| c.first()).min().unwrap_or(0) - 1;
    let hi = components.iter().map(|c| c.last()).max().unwrap_or(0) + 1;
    let h = hamiltonian_f64(spec);
    let i = Complex64::new(0.0, 1.0);
    let x = t / l;
    let sin_part = (PI * x).sin().abs() / PI;
    let mut bound = 0.0;
    for m in lo..=hi {
        let mut b = 0.0f64;
        for (a, c) in components.iter().enumerate() {
            let h_psi: Complex64 = h[a].iter().zip(components).map(|(hab, cb)| hab * cb.sample(m)).sum();
            b = b.max((c.sample(m + 1) - c.sample(m - 1) + i * h_psi).norm());
        }
        if b == 0.0 {
            continue;
        }
        let d = (x - m as f64).abs();
        bound += b * if d < 1.0 { 1.0 } else { sin_part / d };
    }
    Ok(bound * (components.len() as f64).sqrt())
}
