use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::PI;

use super::spectrum::{find_peaks, spectrum};
use super::check_scale;
use crate::dynamics::{HamiltonianSpec, Trajectory};
use crate::error::{Error, Result};
use crate::exact::int_to_f64;

/// Oscillation energy belonging to an eigenvalue `epsilon` of `H`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionResult {
    pub epsilon: f64,
    /// `asin(epsilon / 2) / l`; `None` when unstable.
    pub energy: Option<f64>,
    pub stable: bool,
    pub scale: f64,
}

impl DispersionResult {
    /// Second solution `pi / l - E` of `2 sin(E l) = epsilon`.
    pub fn doubler_energy(&self) -> Option<f64> {
        self.energy.map(|e| PI / self.scale - e)
    }

    pub fn cutoff(&self) -> f64 {
        PI / (2.0 * self.scale)
    }
}

/// `E = asin(epsilon / 2) / l` on the principal branch; `|epsilon| > 2` is
/// reported as unstable.
pub fn dispersion_energy(epsilon: f64, l: f64) -> Result<DispersionResult> {
    check_scale(l)?;
    let stable = epsilon.abs() <= 2.0;
    Ok(DispersionResult {
        epsilon,
        energy: stable.then(|| (epsilon / 2.0).asin() / l),
        stable,
        scale: l,
    })
}

/// Small-`epsilon` expansion `epsilon (1 + epsilon^2 / 24) / 2l`.
pub fn dispersion_series(epsilon: f64, l: f64) -> f64 {
    epsilon * (1.0 + epsilon * epsilon / 24.0) / (2.0 * l)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    /// Unit-norm eigenvector.
    pub vector: Vec<Complex64>,
}

const EIGEN_TOL: f64 = 1e-10;

/// Eigenpairs of `H = S + iA`, ascending, each checked against
/// `|H v - e v| <= 1e-10 |v|`.
pub fn hamiltonian_eigen(spec: &HamiltonianSpec) -> Result<Vec<EigenPair>> {
    let d = spec.dim();
    let h = DMatrix::from_fn(d, d, |r, c| {
        Complex64::new(int_to_f64(&spec.s()[(r, c)]), int_to_f64(&spec.a()[(r, c)]))
    });
    let eig = h.clone().symmetric_eigen();
    let mut pairs: Vec<EigenPair> = (0..d)
        .map(|k| {
            let v = eig.eigenvectors.column(k).into_owned();
            let value = eig.eigenvalues[k];
            let residual = (&h * &v - v.map(|z| z * value)).norm();
            if residual > EIGEN_TOL * v.norm() {
                return Err(Error::Eigen(residual));
            }
            Ok(EigenPair {
                value,
                vector: v.iter().copied().collect(),
            })
        })
        .collect::<Result<_>>()?;
    pairs.sort_by(|a, b| a.value.total_cmp(&b.value));
    Ok(pairs)
}

/// Seeding of a single-mode series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `a_0 = 1`, `a_1 = exp(-i asin(epsilon / 2))`.
    Principal,
    /// `a_0 = 1`, `a_1 = exp(-i (pi - asin(epsilon / 2)))`.
    Doubler,
    /// `a_0 = 1`, `a_1 = 0`, exciting both branches with equal weight.
    Integer,
}

/// Amplitude of one eigenmode, `a_{n+1} = a_{n-1} - i epsilon a_n`, for
/// `len` steps.
pub fn mode_series(epsilon: f64, len: usize, branch: Branch) -> Result<Vec<Complex64>> {
    if epsilon.abs() > 2.0 && branch != Branch::Integer {
        return Err(Error::Unsupported(format!(
            "epsilon = {epsilon} has no real branch; only integer seeding is defined"
        )));
    }
    let theta = (epsilon / 2.0).asin();
    let a1 = match branch {
        Branch::Principal => Complex64::from_polar(1.0, -theta),
        Branch::Doubler => Complex64::from_polar(1.0, -(PI - theta)),
        Branch::Integer => Complex64::new(0.0, 0.0),
    };
    let mut out = Vec::with_capacity(len);
    let seeds = [Complex64::new(1.0, 0.0), a1];
    out.extend(seeds.iter().take(len));
    let step = Complex64::new(0.0, -epsilon);
    while out.len() < len {
        let k = out.len();
        out.push(out[k - 2] + step * out[k - 1]);
    }
    Ok(out)
}

/// `v^dagger psi_n` for every state of a trajectory.
pub fn project_on_mode(traj: &Trajectory, vector: &[Complex64]) -> Result<Vec<Complex64>> {
    if vector.len() != traj.spec().dim() {
        return Err(Error::DimensionMismatch {
            what: "mode vector",
            expected: traj.spec().dim(),
            found: vector.len(),
        });
    }
    Ok(traj
        .states()
        .iter()
        .map(|s| {
            vector
                .iter()
                .zip(s.x.iter().zip(&s.p))
                .map(|(v, (x, p))| v.conj() * Complex64::new(int_to_f64(x), int_to_f64(p)))
                .sum()
        })
        .collect())
}

/// Frequencies of the spectral peaks of a mode amplitude series, strongest
/// first. Errors when the series cannot resolve `required_resolution`.
pub fn mode_frequency_measure(series: &[Complex64], l: f64, required_resolution: Option<f64>) -> Result<Vec<f64>> {
    check_scale(l)?;
    let achievable = 2.0 * PI / (series.len() as f64 * l);
    if let Some(required) = required_resolution {
        if achievable > required {
            return Err(Error::InsufficientResolution {
                len: series.len(),
                achievable,
                required,
            });
        }
    }
    let s = spectrum(series, l)?;
    Ok(find_peaks(&s, 0.25))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dispersion_examples() {
        assert_eq!(dispersion_energy(0.0, 1.0).unwrap().energy, Some(0.0));
        let top = dispersion_energy(2.0, 0.5).unwrap();
        assert!((top.energy.unwrap() - PI / 1.0).abs() < 1e-15);
        assert_eq!(top.energy.unwrap(), top.cutoff());
        assert!((dispersion_energy(1.0, 1.0).unwrap().energy.unwrap() - PI / 6.0).abs() < 1e-15);
        let unstable = dispersion_energy(2.5, 1.0).unwrap();
        assert!(!unstable.stable && unstable.energy.is_none());
        assert!(dispersion_energy(1.0, -1.0).is_err());
    }

    #[test]
    fn series_matches_for_small_epsilon() {
        for eps in [-0.5, -0.1, 0.01, 0.3, 0.5] {
            let exact = dispersion_energy(eps, 1.0).unwrap().energy.unwrap();
            let bound = 0.5 * f64::abs(eps).powi(5) * 0.1;
            assert!((exact - dispersion_series(eps, 1.0)).abs() <= bound);
        }
    }

    #[test]
    fn eigen_of_offdiagonal_imaginary() {
        let spec = HamiltonianSpec::from_rows(&[vec![0, 0], vec![0, 0]], &[vec![0, 1], vec![-1, 0]]).unwrap();
        let pairs = hamiltonian_eigen(&spec).unwrap();
        assert!((pairs[0].value + 1.0).abs() < 1e-12);
        assert!((pairs[1].value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn branch_seeded_series_is_exact_plane_wave() {
        let a = mode_series(1.0, 50, Branch::Principal).unwrap();
        for (n, v) in a.iter().enumerate() {
            assert!((v - Complex64::from_polar(1.0, -PI / 6.0 * n as f64)).norm() < 1e-12);
        }
    }

    #[test]
    fn measured_frequencies() {
        let zero_mode = mode_series(0.0, 512, Branch::Principal).unwrap();
        assert_eq!(mode_frequency_measure(&zero_mode, 1.0, None).unwrap()[0], 0.0);

        let n = 4096;
        let bin = 2.0 * PI / n as f64;
        let both = mode_series(1.0, n, Branch::Integer).unwrap();
        let mut peaks = mode_frequency_measure(&both, 1.0, Some(bin)).unwrap();
        peaks.sort_by(f64::total_cmp);
        assert_eq!(peaks.len(), 2);
        assert!((peaks[0] - PI / 6.0).abs() <= bin);
        assert!((peaks[1] - 5.0 * PI / 6.0).abs() <= bin);

        assert!(matches!(
            mode_frequency_measure(&both[..64], 1.0, Some(bin)),
            Err(Error::InsufficientResolution { .. })
        ));
    }
}
