//! Local conservation laws along trajectories.
//!
//! For any `G` commuting with `H`, the quantity `psi* G psidot + psidot* G psi`
//! vanishes identically at every interior step of a linear solution, where
//! `psidot[n] = psi[n+1] - psi[n-1]`.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;

use crate::dynamics::{HamiltonianSpec, Trajectory};
use crate::error::{Error, Result};
use crate::exact::{to_rational, GaussianInt, SquareMatrix};

/// Observable matrix `G` with Gaussian-integer entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Observable {
    g: SquareMatrix<GaussianInt>,
}

impl Observable {
    pub fn new(g: SquareMatrix<GaussianInt>) -> Self {
        Self { g }
    }

    pub fn identity(dim: usize) -> Self {
        Self::new(SquareMatrix::identity(dim))
    }

    pub fn hamiltonian(spec: &HamiltonianSpec) -> Self {
        Self::new(spec.hamiltonian_matrix())
    }

    pub fn dim(&self) -> usize {
        self.g.dim()
    }

    pub fn matrix(&self) -> &SquareMatrix<GaussianInt> {
        &self.g
    }

    pub fn is_self_adjoint(&self) -> bool {
        let d = self.dim();
        (0..d).all(|r| (0..d).all(|c| self.g[(r, c)] == self.g[(c, r)].conj()))
    }
}

/// `sum_k coeffs[k] H^k`. Every such matrix commutes with `H`.
pub fn polynomial_in_h(spec: &HamiltonianSpec, coeffs: &[GaussianInt]) -> Observable {
    let h = spec.hamiltonian_matrix();
    let d = spec.dim();
    let mut acc = SquareMatrix::<GaussianInt>::zeros(d);
    for c in coeffs.iter().rev() {
        acc = acc.matmul(&h);
        for k in 0..d {
            acc[(k, k)] += c;
        }
    }
    Observable::new(acc)
}

/// Polynomial in `H` of the given degree with coefficients drawn from
/// `[-3, 3] + i[-3, 3]`; self-adjoint when `real_coefficients` is set.
pub fn random_polynomial_in_h<R: Rng>(spec: &HamiltonianSpec, degree: usize, real_coefficients: bool, rng: &mut R) -> Observable {
    let coeffs: Vec<GaussianInt> = (0..=degree)
        .map(|_| {
            let re = rng.gen_range(-3i64..=3);
            let im = if real_coefficients { 0 } else { rng.gen_range(-3i64..=3) };
            Complex::new(BigInt::from(re), BigInt::from(im))
        })
        .collect();
    polynomial_in_h(spec, &coeffs)
}

/// `GH - HG`.
pub fn commutator(g: &Observable, spec: &HamiltonianSpec) -> Result<SquareMatrix<GaussianInt>> {
    if g.dim() != spec.dim() {
        return Err(Error::DimensionMismatch {
            what: "observable",
            expected: spec.dim(),
            found: g.dim(),
        });
    }
    let h = spec.hamiltonian_matrix();
    let gh = g.g.matmul(&h);
    let hg = h.matmul(&g.g);
    Ok(SquareMatrix::from_fn(g.dim(), |r, c| &gh[(r, c)] - &hg[(r, c)]))
}

pub fn commutator_is_zero(g: &Observable, spec: &HamiltonianSpec) -> Result<bool> {
    Ok(commutator(g, spec)?.rows().flatten().all(Zero::is_zero))
}

fn hermitian_form(u: &[GaussianInt], g: &Observable, v: &[GaussianInt]) -> GaussianInt {
    let gv = g.g.apply(v);
    u.iter().zip(gv).fold(GaussianInt::zero(), |acc, (a, b)| acc + a.conj() * b)
}

/// `psi*[n] G psidot[n] + psidot*[n] G psi[n]`.
pub fn conservation_residual(traj: &Trajectory, n: i64, g: &Observable) -> Result<GaussianInt> {
    if g.dim() != traj.spec().dim() {
        return Err(Error::DimensionMismatch {
            what: "observable",
            expected: traj.spec().dim(),
            found: g.dim(),
        });
    }
    let before = traj.psi(n.wrapping_sub(1))?;
    let after = traj.psi(n.wrapping_add(1))?;
    let psi = traj.psi(n)?;
    let dot: Vec<GaussianInt> = after.iter().zip(&before).map(|(a, b)| a - b).collect();
    Ok(hermitian_form(&psi, g, &dot) + hermitian_form(&dot, g, &psi))
}

/// Residual of the constraint `psi* psidot + psidot* psi = 0`, the identity
/// observable case. Always real.
pub fn constraint_residual(traj: &Trajectory, n: i64) -> Result<BigRational> {
    let r = conservation_residual(traj, n, &Observable::identity(traj.spec().dim()))?;
    debug_assert!(r.im.is_zero());
    Ok(to_rational(&r.re))
}

/// Gap in the two-step product rule for triples `(O[n-1], O[n], O[n+1])`:
///
/// ```text
/// (O+ O'+ - O- O'-) - 1/2 (Odot (O'+ + O'-) + (O+ + O-) O'dot)
/// ```
///
/// This is identically zero.
pub fn leibniz_identity_gap(o: [&BigInt; 3], o2: [&BigInt; 3]) -> BigRational {
    let (om, op) = (o[0], o[2]);
    let (qm, qp) = (o2[0], o2[2]);
    let lhs = to_rational(&(op * qp - om * qm));
    let odot = op - om;
    let qdot = qp - qm;
    let rhs = BigRational::new(odot * (qp + qm) + (op + om) * qdot, BigInt::from(2));
    lhs - rhs
}
