//! Integer-valued action, discrete variations, and variation schemes whose
//! higher-order terms cancel.
//!
//! The naive symmetric variation `[g(f + d) - g(f - d)] / 2d` equals `g'(f)` only
//! for polynomials of degree at most 2. A scheme `(gamma_k, m_k)` combines
//! several step multiples so that every odd moment above the first vanishes:
//!
//! ```text
//! sum_k gamma_k m_k^(2j+1) = 1 if j = 0, else 0      (j = 0..J)
//! ```
//!
//! which makes the combined variation exact up to degree `2J + 2`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::dynamics::{hamiltonian_of, AutomatonState, HamiltonianSpec, Trajectory, Variable};
use crate::error::{Error, Result};
use crate::exact::to_rational;

/// Polynomial in one variable with exact rational coefficients, lowest power first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerPolynomial {
    coeffs: Vec<BigRational>,
}

impl IntegerPolynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    /// `f^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = BigRational::one();
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Degree, with the zero polynomial reported as 0.
    pub fn degree(&self) -> u32 {
        self.coeffs.len().saturating_sub(1) as u32
    }

    pub fn eval(&self, f: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * f + c)
    }

    pub fn eval_int(&self, f: &BigInt) -> BigRational {
        self.eval(&to_rational(f))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(k.into()))
                .collect(),
        )
    }
}

/// `[g(f + d) - g(f - d)] / 2d`, and 0 when `d = 0`.
pub fn naive_variation(g: &IntegerPolynomial, f: &BigInt, delta: &BigInt) -> BigRational {
    if delta.is_zero() {
        return BigRational::zero();
    }
    let diff = g.eval_int(&(f + delta)) - g.eval_int(&(f - delta));
    diff / to_rational(&(BigInt::from(2) * delta))
}

/// Weights `gamma_k` paired with distinct positive multipliers `m_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariationScheme {
    gammas: Vec<BigRational>,
    multipliers: Vec<u64>,
    max_degree: u32,
}

impl VariationScheme {
    pub fn gammas(&self) -> &[BigRational] {
        &self.gammas
    }

    pub fn multipliers(&self) -> &[u64] {
        &self.multipliers
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    /// Highest degree handled exactly, `2J + 2` for `J + 1` multipliers.
    pub fn capacity(&self) -> u32 {
        2 * self.multipliers.len() as u32
    }

    /// `sum_k gamma_k m_k^(2j+1)` for `j = 0..=last`.
    pub fn odd_moments(&self, last: usize) -> Vec<BigRational> {
        (0..=last)
            .map(|j| {
                self.gammas
                    .iter()
                    .zip(&self.multipliers)
                    .map(|(g, &m)| g * to_rational(&num_traits::pow(BigInt::from(m), 2 * j + 1)))
                    .sum()
            })
            .collect()
    }

    /// First moment 1, the cancelling ones 0.
    pub fn satisfies_invariants(&self) -> bool {
        let moments = self.odd_moments(self.multipliers.len() - 1);
        moments[0].is_one() && moments[1..].iter().all(Zero::is_zero)
    }

    /// `sum_k gamma_k [g(f + m_k d) - g(f - m_k d)] / 2d` for an arbitrary
    /// function of one integer.
    fn combine<F>(&self, f: &BigInt, delta: &BigInt, mut g: F) -> Result<BigRational>
    where
        F: FnMut(&BigInt) -> Result<BigRational>,
    {
        if delta.is_zero() {
            return Err(Error::ZeroVariation);
        }
        let mut acc = BigRational::zero();
        for (gamma, &m) in self.gammas.iter().zip(&self.multipliers) {
            let step = BigInt::from(m) * delta;
            acc += gamma * (g(&(f + &step))? - g(&(f - &step))?);
        }
        Ok(acc / to_rational(&(BigInt::from(2) * delta)))
    }
}

/// Smallest `J` with `2J + 2 >= max_degree`.
fn moment_count(max_degree: u32) -> usize {
    (max_degree as usize).saturating_sub(1) / 2 + 1
}

/// Solves the odd-moment system for the given multipliers exactly.
pub fn solve_scheme(max_degree: u32, multipliers: &[u64]) -> Result<VariationScheme> {
    if max_degree < 2 {
        return Err(Error::SchemeDegree(max_degree));
    }
    if multipliers.contains(&0) {
        return Err(Error::NonPositiveMultiplier);
    }
    for (i, m) in multipliers.iter().enumerate() {
        if multipliers[..i].contains(m) {
            return Err(Error::RepeatedMultiplier(*m));
        }
    }
    let needed = moment_count(max_degree);
    if multipliers.len() != needed {
        return Err(Error::SchemeSize {
            max_degree,
            needed,
            given: multipliers.len(),
            last_moment: needed - 1,
        });
    }

    // rows j: m_k^(2j+1), augmented with the unit right-hand side
    let mut rows: Vec<Vec<BigRational>> = (0..needed)
        .map(|j| {
            let mut row: Vec<BigRational> = multipliers
                .iter()
                .map(|&m| to_rational(&num_traits::pow(BigInt::from(m), 2 * j + 1)))
                .collect();
            row.push(if j == 0 { BigRational::one() } else { BigRational::zero() });
            row
        })
        .collect();
    for col in 0..needed {
        let pivot = (col..needed)
            .find(|&r| !rows[r][col].is_zero())
            .expect("odd-power Vandermonde matrix with distinct positive nodes is invertible");
        rows.swap(col, pivot);
        let lead = rows[col][col].clone();
        for v in rows[col].iter_mut() {
            *v /= &lead;
        }
        for r in 0..needed {
            if r != col && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                let (src, dst) = if r < col {
                    let (a, b) = rows.split_at_mut(col);
                    (&b[0], &mut a[r])
                } else {
                    let (a, b) = rows.split_at_mut(r);
                    (&a[col], &mut b[0])
                };
                for (d, s) in dst.iter_mut().zip(src) {
                    *d -= &factor * s;
                }
            }
        }
    }
    let gammas = rows.into_iter().map(|mut row| row.pop().unwrap()).collect();
    Ok(VariationScheme {
        gammas,
        multipliers: multipliers.to_vec(),
        max_degree,
    })
}

/// Scheme-weighted variation; equals `g'(f)` for `degree(g) <= max_degree`.
pub fn scheme_variation(g: &IntegerPolynomial, f: &BigInt, delta: &BigInt, scheme: &VariationScheme) -> Result<BigRational> {
    if g.degree() > scheme.max_degree {
        return Err(Error::DegreeExceedsScheme {
            degree: g.degree(),
            capacity: scheme.max_degree,
        });
    }
    scheme.combine(f, delta, |v| Ok(g.eval_int(v)))
}

/// Per-term breakdown of the action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionEvaluation {
    pub total: BigRational,
    /// `terms[k]` belongs to automaton time `first_n + k`.
    pub terms: Vec<BigRational>,
    pub first_n: i64,
}

/// Term `n` of the action without `a_n = c_n pi_n`:
/// `(p_n + p_{n-1}) dx_n + (pi_n + pi_{n-1}) dtau_n - dtau_n (H_n + H_{n-1})`.
fn term_without_lapse(prev: &AutomatonState, curr: &AutomatonState, spec: &HamiltonianSpec) -> BigRational {
    let kinetic: BigInt = curr
        .p
        .iter()
        .zip(&prev.p)
        .zip(curr.x.iter().zip(&prev.x))
        .map(|((pc, pp), (xc, xp))| (pc + pp) * (xc - xp))
        .sum();
    let dtau = to_rational(&(&curr.tau - &prev.tau));
    let h = hamiltonian_of(&curr.x, &curr.p, curr.n, spec) + hamiltonian_of(&prev.x, &prev.p, prev.n, spec);
    to_rational(&kinetic) + (&curr.pi + &prev.pi) * &dtau - dtau * h
}

fn action_term(prev: &AutomatonState, curr: &AutomatonState, spec: &HamiltonianSpec) -> Result<BigRational> {
    let c = to_rational(spec.lapse().at(curr.n)?);
    Ok(term_without_lapse(prev, curr, spec) - c * &curr.pi)
}

/// Action summed over `n = first + 1 ..= last`, one term per consecutive pair.
pub fn action_value(traj: &Trajectory, spec: &HamiltonianSpec) -> Result<ActionEvaluation> {
    for s in traj.states() {
        spec.check_state(s)?;
    }
    let terms = traj
        .states()
        .windows(2)
        .map(|w| action_term(&w[0], &w[1], spec))
        .collect::<Result<Vec<_>>>()?;
    Ok(ActionEvaluation {
        total: terms.iter().sum(),
        terms,
        first_n: traj.first_n() + 1,
    })
}

fn with_value(s: &AutomatonState, var: Variable, v: &BigInt) -> AutomatonState {
    let mut out = s.clone();
    match var {
        Variable::X(a) => out.x[a] = v.clone(),
        Variable::P(a) => out.p[a] = v.clone(),
        Variable::Tau => out.tau = v.clone(),
        Variable::Pi => out.pi = to_rational(v),
    }
    out
}

/// The two action terms containing the variables of state `n`, as a function
/// of one of them. `a_{n+1}` does not involve state `n` and is left out.
fn local_action(traj: &Trajectory, spec: &HamiltonianSpec, n: i64, var: Variable, v: &BigInt) -> Result<BigRational> {
    let prev = traj.state(n - 1)?;
    let next = traj.state(n + 1)?;
    let curr = with_value(traj.state(n)?, var, v);
    Ok(action_term(prev, &curr, spec)? + term_without_lapse(&curr, next, spec))
}

fn local_degree(spec: &HamiltonianSpec, var: Variable) -> u32 {
    match var {
        Variable::Tau | Variable::Pi => 1,
        _ => spec.remainder().map_or(0, |r| r.degree_in(var)).max(2),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariationResidual {
    pub n: i64,
    pub variable: Variable,
    pub delta: i64,
    pub residual: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StationarityReport {
    pub residuals: Vec<VariationResidual>,
    /// Some residual is nonzero.
    pub nonzero_residual: bool,
    /// Some variable's residual changes with the variation size.
    pub delta_dependent: bool,
    /// Variables whose residuals depend on the variation size.
    pub dependent_variables: Vec<(i64, Variable)>,
    pub scheme_multipliers: Option<Vec<u64>>,
    pub boundary_note: String,
}

impl StationarityReport {
    pub fn is_clean(&self) -> bool {
        !self.nonzero_residual && !self.delta_dependent
    }
}

impl fmt::Display for StationarityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} residuals, nonzero: {}, delta-dependent: {}",
            self.residuals.len(),
            self.nonzero_residual,
            self.delta_dependent
        )?;
        for (n, var) in &self.dependent_variables {
            writeln!(f, "  delta-dependent: {var} at n = {n}")?;
        }
        write!(f, "{}", self.boundary_note)
    }
}

/// Varies every interior variable independently, once per `delta`, and
/// collects the action response.
pub fn stationarity_audit(traj: &Trajectory, spec: &HamiltonianSpec, deltas: &[i64], scheme: Option<&VariationScheme>) -> Result<StationarityReport> {
    if traj.len() < 3 {
        return Err(Error::TrajectoryTooShort {
            len: traj.len(),
            required: 3,
        });
    }
    if deltas.contains(&0) {
        return Err(Error::ZeroVariation);
    }
    for s in traj.states() {
        spec.check_state(s)?;
    }
    let mut residuals = Vec::new();
    let mut dependent_variables = Vec::new();
    for n in traj.interior() {
        let state = traj.state(n)?;
        for var in Variable::all(spec.dim()) {
            let f = match var {
                Variable::Pi if !state.pi.is_integer() => {
                    // half-integer pi: vary around its integer part, the
                    // action is linear in pi so the shift is immaterial
                    state.pi.floor().to_integer()
                }
                _ => state.value(var).to_integer(),
            };
            let local = |v: &BigInt| local_action(traj, spec, n, var, v);
            let mut first: Option<BigRational> = None;
            let mut dependent = false;
            for &d in deltas {
                let delta = BigInt::from(d);
                let residual = match scheme {
                    None => {
                        let diff = local(&(&f + &delta))? - local(&(&f - &delta))?;
                        diff / to_rational(&(BigInt::from(2) * &delta))
                    }
                    Some(s) => {
                        let degree = local_degree(spec, var);
                        if degree > s.max_degree() {
                            return Err(Error::DegreeExceedsScheme {
                                degree,
                                capacity: s.max_degree(),
                            });
                        }
                        s.combine(&f, &delta, local)?
                    }
                };
                match &first {
                    None => first = Some(residual.clone()),
                    Some(r0) => dependent |= *r0 != residual,
                }
                residuals.push(VariationResidual {
                    n,
                    variable: var,
                    delta: d,
                    residual,
                });
            }
            if dependent {
                dependent_variables.push((n, var));
            }
        }
    }
    Ok(StationarityReport {
        nonzero_residual: residuals.iter().any(|r| !r.residual.is_zero()),
        delta_dependent: !dependent_variables.is_empty(),
        dependent_variables,
        scheme_multipliers: scheme.map(|s| s.multipliers().to_vec()),
        boundary_note: format!(
            "variables at the endpoints n = {} and n = {} are held fixed; boundary terms are not audited",
            traj.first_n(),
            traj.last_n()
        ),
        residuals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{evolve, Remainder};
    use crate::exact::{gauss, int, ratio};

    #[test]
    fn naive_variation_examples() {
        let sq = IntegerPolynomial::monomial(2);
        assert_eq!(naive_variation(&sq, &int(3), &int(2)), ratio(6, 1));
        let cube = IntegerPolynomial::monomial(3);
        assert_eq!(naive_variation(&cube, &int(1), &int(1)), ratio(4, 1));
        assert_eq!(naive_variation(&cube, &int(1), &int(2)), ratio(7, 1));
        assert_eq!(naive_variation(&cube, &int(1), &int(0)), ratio(0, 1));
    }

    #[test]
    fn solve_scheme_examples() {
        let s = solve_scheme(4, &[1, 2]).unwrap();
        assert_eq!(s.gammas(), &[ratio(4, 3), ratio(-1, 6)]);
        let s = solve_scheme(4, &[1, 3]).unwrap();
        assert_eq!(s.gammas(), &[ratio(9, 8), ratio(-1, 24)]);
        assert_eq!(solve_scheme(4, &[1, 1]).unwrap_err(), Error::RepeatedMultiplier(1));
        assert!(matches!(solve_scheme(4, &[1]).unwrap_err(), Error::SchemeSize { needed: 2, given: 1, .. }));
        assert!(matches!(solve_scheme(6, &[1, 2]).unwrap_err(), Error::SchemeSize { needed: 3, .. }));
        assert_eq!(solve_scheme(1, &[1]).unwrap_err(), Error::SchemeDegree(1));
        assert_eq!(solve_scheme(2, &[0]).unwrap_err(), Error::NonPositiveMultiplier);
    }

    #[test]
    fn higher_order_scheme_is_exact() {
        let s = solve_scheme(6, &[1, 2, 3]).unwrap();
        assert!(s.satisfies_invariants());
        let g = IntegerPolynomial::from_ints(&[3, -1, 0, 2, 5, -7, 1]);
        for f in -4..=4 {
            for d in 1..=4 {
                assert_eq!(scheme_variation(&g, &int(f), &int(d), &s).unwrap(), g.derivative().eval_int(&int(f)));
            }
        }
    }

    #[test]
    fn scheme_variation_examples() {
        let s = solve_scheme(4, &[1, 2]).unwrap();
        let cube = IntegerPolynomial::monomial(3);
        assert_eq!(scheme_variation(&cube, &int(1), &int(5), &s).unwrap(), ratio(3, 1));
        let quartic = IntegerPolynomial::monomial(4);
        assert_eq!(scheme_variation(&quartic, &int(2), &int(3), &s).unwrap(), ratio(32, 1));
        let constant = IntegerPolynomial::from_ints(&[7]);
        assert_eq!(scheme_variation(&constant, &int(2), &int(3), &s).unwrap(), ratio(0, 1));
        let quintic = IntegerPolynomial::monomial(5);
        assert!(matches!(
            scheme_variation(&quintic, &int(1), &int(1), &s),
            Err(Error::DegreeExceedsScheme { degree: 5, .. })
        ));
        assert_eq!(scheme_variation(&cube, &int(1), &int(0), &s).unwrap_err(), Error::ZeroVariation);
    }

    #[test]
    fn zero_trajectory_action() {
        let t = Trajectory::from_psi(0, &[vec![gauss(0, 0)], vec![gauss(0, 0)], vec![gauss(0, 0)]], HamiltonianSpec::scalar(1)).unwrap();
        let a = action_value(&t, t.spec()).unwrap();
        assert_eq!(a.total, ratio(0, 1));
        assert_eq!(a.terms.len(), 2);
    }

    #[test]
    fn two_state_action_is_one_term() {
        // D = 1, S = 1: term = (p1 + p0)(x1 - x0) + (pi1 + pi0)(tau1 - tau0)
        //                       - (tau1 - tau0)(H1 + H0) - c pi1
        let spec = HamiltonianSpec::scalar(1);
        let s0 = AutomatonState::from_ints(0, &[1], &[2]).unwrap().with_tau(int(0)).with_pi(ratio(1, 1));
        let s1 = AutomatonState::from_ints(1, &[3], &[-1]).unwrap().with_tau(int(1)).with_pi(ratio(3, 1));
        let t = Trajectory::new(vec![s0, s1], spec.clone()).unwrap();
        let a = action_value(&t, &spec).unwrap();
        let h0 = ratio(5, 2);
        let h1 = ratio(10, 2);
        let expect = ratio(1 * 2, 1) + ratio(4, 1) - (h0 + h1) - ratio(3, 1);
        assert_eq!(a.terms, vec![expect.clone()]);
        assert_eq!(a.total, expect);
    }

    #[test]
    fn solution_has_clean_audit() {
        let spec = HamiltonianSpec::from_rows(&[vec![2, 1], vec![1, -1]], &[vec![0, 2], vec![-2, 0]]).unwrap();
        let init = (
            AutomatonState::from_ints(0, &[1, 0], &[-1, 2]).unwrap(),
            AutomatonState::from_ints(1, &[0, 3], &[1, 1]).unwrap(),
        );
        let t = evolve(init, 5, &spec).unwrap();
        let report = stationarity_audit(&t, &spec, &[1, 2, 3], None).unwrap();
        assert!(report.is_clean(), "{report}");
        assert_eq!(report.residuals.len(), 5 * 6 * 3);
    }

    #[test]
    fn perturbed_trajectory_is_flagged_nonzero() {
        let spec = HamiltonianSpec::scalar(1);
        let init = (
            AutomatonState::from_ints(0, &[1], &[0]).unwrap(),
            AutomatonState::from_ints(1, &[0], &[1]).unwrap(),
        );
        let mut states = evolve(init, 4, &spec).unwrap().into_states();
        states[3].x[0] += 1;
        let t = Trajectory::new(states, spec.clone()).unwrap();
        let report = stationarity_audit(&t, &spec, &[1, 2], None).unwrap();
        assert!(report.nonzero_residual);
        assert!(!report.delta_dependent);
    }

    #[test]
    fn cubic_remainder_is_delta_dependent_until_schemed() {
        let base = HamiltonianSpec::scalar(2);
        let init = (
            AutomatonState::from_ints(0, &[1], &[1]).unwrap(),
            AutomatonState::from_ints(1, &[2], &[-1]).unwrap(),
        );
        let t = evolve(init, 4, &base).unwrap();
        let spec = base.with_remainder(Remainder::power(1, Variable::X(0), int(1), 3).unwrap()).unwrap();
        let naive = stationarity_audit(&t, &spec, &[1, 2, 3], None).unwrap();
        assert!(naive.delta_dependent);
        let scheme = solve_scheme(4, &[1, 2]).unwrap();
        let schemed = stationarity_audit(&t, &spec, &[1, 2, 3], Some(&scheme)).unwrap();
        assert!(!schemed.delta_dependent);
        assert!(schemed.nonzero_residual);
    }

    #[test]
    fn audit_rejects_short_or_zero_delta() {
        let spec = HamiltonianSpec::scalar(1);
        let t = Trajectory::from_psi(0, &[vec![gauss(1, 0)], vec![gauss(0, 1)]], spec.clone()).unwrap();
        assert!(matches!(stationarity_audit(&t, &spec, &[1], None), Err(Error::TrajectoryTooShort { .. })));
        let t = evolve(t.initial_pair(), 2, &spec).unwrap();
        assert_eq!(stationarity_audit(&t, &spec, &[0], None).unwrap_err(), Error::ZeroVariation);
    }
}
