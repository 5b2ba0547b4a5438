//! Browser bindings for the static demo page in `www/`.
//!
//! Every export returns flat `f64` arrays so the page can plot them without
//! further decoding.

use std::f64::consts::PI;

use hca_core::conservation::constraint_residual;
use hca_core::exact::{rational_to_f64, to_rational};
use hca_core::nonlinear::{psi2_closed_form, psi2_interpolant};
use hca_core::sampling::{
    dispersion_energy, find_peaks, mode_series, reconstruct, spectrum, Branch, Quadrature, SampledSignal,
};
use hca_core::{evolve, AutomatonState, HamiltonianSpec};
use wasm_bindgen::prelude::*;

/// Scalar automaton `psi[n+1] = psi[n-1] - i h psi[n]`.
///
/// Returns `[x_n, p_n, H_n, constraint residual]` per step, `steps + 2`
/// rows; the residual is 0 at the two endpoints where it is undefined.
#[wasm_bindgen]
pub fn evolve_scalar(h: i32, x0: i32, p0: i32, x1: i32, p1: i32, steps: u32) -> Result<Vec<f64>, JsError> {
    let spec = HamiltonianSpec::scalar(h.into());
    let a = AutomatonState::from_ints(0, &[x0.into()], &[p0.into()])?;
    let b = AutomatonState::from_ints(1, &[x1.into()], &[p1.into()])?;
    let traj = evolve((a, b), steps as usize, &spec)?;
    let mut out = Vec::with_capacity(4 * traj.len());
    for s in traj.states() {
        let residual = if traj.interior().contains(&s.n) {
            rational_to_f64(&constraint_residual(&traj, s.n)?)
        } else {
            0.0
        };
        let energy = hca_core::hamiltonian_value(s, &spec)?;
        out.extend([
            rational_to_f64(&to_rational(&s.x[0])),
            rational_to_f64(&to_rational(&s.p[0])),
            rational_to_f64(&energy),
            residual,
        ]);
    }
    Ok(out)
}

/// Squared impulse at `l = 1` on `[t_min, t_max]`.
///
/// Returns `[t, reconstruction, squared-sample interpolant, closed form]` per
/// point. The two squared forms agree on grid points only.
#[wasm_bindgen]
pub fn impulse_square_curves(radius: u32, t_min: f64, t_max: f64, points: u32) -> Result<Vec<f64>, JsError> {
    let sig = SampledSignal::impulse(1.0, radius.max(4) as usize)?;
    let quad = Quadrature {
        pad: 64.0,
        ..Quadrature::default()
    };
    let points = points.max(2);
    let mut out = Vec::with_capacity(4 * points as usize);
    for k in 0..points {
        let t = t_min + (t_max - t_min) * k as f64 / (points - 1) as f64;
        out.extend([
            t,
            reconstruct(&sig, t)?.re,
            psi2_interpolant(&sig, t)?.re,
            psi2_closed_form(&sig, t, &quad)?.re,
        ]);
    }
    Ok(out)
}

/// `[epsilon, E, pi - E]` on `points` values of `epsilon` in `[-2, 2]`, `l = 1`.
#[wasm_bindgen]
pub fn dispersion_curve(points: u32) -> Result<Vec<f64>, JsError> {
    let points = points.max(2);
    let mut out = Vec::with_capacity(3 * points as usize);
    for k in 0..points {
        let eps = -2.0 + 4.0 * k as f64 / (points - 1) as f64;
        let r = dispersion_energy(eps, 1.0)?;
        let e = r.energy.unwrap_or(f64::NAN);
        out.extend([eps, e, PI - e]);
    }
    Ok(out)
}

/// Spectrum of one eigenmode with eigenvalue `epsilon` over `steps` steps.
///
/// With `integer_seeded` the mode starts from `(1, 0)`, which excites both
/// branches; otherwise it starts on the principal branch. Returns the peak
/// count `k`, then `k` peak frequencies, then `[omega, magnitude]` pairs.
#[wasm_bindgen]
pub fn mode_spectrum(epsilon: f64, steps: u32, integer_seeded: bool) -> Result<Vec<f64>, JsError> {
    let branch = if integer_seeded { Branch::Integer } else { Branch::Principal };
    let series = mode_series(epsilon, steps.max(16) as usize, branch)?;
    let spec = spectrum(&series, 1.0)?;
    let peaks = find_peaks(&spec, 0.25);
    let mut out = Vec::with_capacity(1 + peaks.len() + 2 * spec.omegas.len());
    out.push(peaks.len() as f64);
    out.extend(&peaks);
    for (o, m) in spec.omegas.iter().zip(&spec.magnitudes) {
        out.extend([*o, *m]);
    }
    Ok(out)
}
