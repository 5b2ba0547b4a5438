//! Exact evolution of integer-valued Hamiltonian cellular automata.
//!
//! A state at automaton time `n` carries integer coordinates `x`, momenta `p`,
//! the clock variable `tau` and its conjugate `pi`. The update is a central
//! difference recurrence: the state at `n + 1` follows from the states at `n`
//! and `n - 1`, and the state at `n - 1` follows from `n` and `n + 1`.
//!
//! In complex form, with `psi = x + i p` and `H = S + iA`,
//!
//! ```text
//! psi[n+1] = psi[n-1] - i c H psi[n]
//! ```

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::exact::{to_rational, GaussianInt, SquareMatrix};

/// Snapshot of one automaton time step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutomatonState {
    pub n: i64,
    pub x: Vec<BigInt>,
    pub p: Vec<BigInt>,
    pub tau: BigInt,
    /// Conjugate of `tau`. Half-integer when `S` has odd diagonal entries.
    pub pi: BigRational,
}

impl AutomatonState {
    pub fn new(n: i64, x: Vec<BigInt>, p: Vec<BigInt>) -> Result<Self> {
        if x.is_empty() || x.len() != p.len() {
            return Err(Error::DimensionMismatch {
                what: "state p",
                expected: x.len().max(1),
                found: p.len(),
            });
        }
        Ok(Self {
            n,
            x,
            p,
            tau: BigInt::zero(),
            pi: BigRational::zero(),
        })
    }

    pub fn from_ints(n: i64, x: &[i64], p: &[i64]) -> Result<Self> {
        Self::new(
            n,
            x.iter().copied().map(BigInt::from).collect(),
            p.iter().copied().map(BigInt::from).collect(),
        )
    }

    pub fn from_psi(n: i64, psi: &[GaussianInt]) -> Result<Self> {
        Self::new(
            n,
            psi.iter().map(|z| z.re.clone()).collect(),
            psi.iter().map(|z| z.im.clone()).collect(),
        )
    }

    pub fn zero(n: i64, dim: usize) -> Self {
        Self {
            n,
            x: vec![BigInt::zero(); dim],
            p: vec![BigInt::zero(); dim],
            tau: BigInt::zero(),
            pi: BigRational::zero(),
        }
    }

    pub fn with_tau(mut self, tau: BigInt) -> Self {
        self.tau = tau;
        self
    }

    pub fn with_pi(mut self, pi: BigRational) -> Self {
        self.pi = pi;
        self
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    pub fn psi(&self) -> Vec<GaussianInt> {
        to_state_vector(self)
    }

    pub fn value(&self, var: Variable) -> BigRational {
        match var {
            Variable::X(a) => to_rational(&self.x[a]),
            Variable::P(a) => to_rational(&self.p[a]),
            Variable::Tau => to_rational(&self.tau),
            Variable::Pi => self.pi.clone(),
        }
    }
}

/// `psi^a = x^a + i p^a`, componentwise.
pub fn to_state_vector(s: &AutomatonState) -> Vec<GaussianInt> {
    s.x.iter()
        .zip(&s.p)
        .map(|(x, p)| Complex::new(x.clone(), p.clone()))
        .collect()
}

/// One dynamical variable of a state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Variable {
    X(usize),
    P(usize),
    Tau,
    Pi,
}

impl Variable {
    pub fn all(dim: usize) -> Vec<Variable> {
        let mut out: Vec<_> = (0..dim).map(Variable::X).collect();
        out.extend((0..dim).map(Variable::P));
        out.push(Variable::Tau);
        out.push(Variable::Pi);
        out
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variable::X(a) => write!(f, "x[{a}]"),
            Variable::P(a) => write!(f, "p[{a}]"),
            Variable::Tau => write!(f, "tau"),
            Variable::Pi => write!(f, "pi"),
        }
    }
}

/// Lapse `c_n`, the increment of `tau` over two steps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Lapse {
    Constant(BigInt),
    /// `values[k]` is `c_n` for `n = first + k`.
    Schedule { first: i64, values: Vec<BigInt> },
}

impl Lapse {
    pub fn at(&self, n: i64) -> Result<&BigInt> {
        match self {
            Lapse::Constant(c) => Ok(c),
            Lapse::Schedule { first, values } => n
                .checked_sub(*first)
                .and_then(|k| usize::try_from(k).ok())
                .and_then(|k| values.get(k))
                .ok_or(Error::LapseUndefined(n)),
        }
    }

    pub fn is_unit(&self) -> bool {
        matches!(self, Lapse::Constant(c) if c.is_one())
    }
}

impl Default for Lapse {
    fn default() -> Self {
        Lapse::Constant(BigInt::one())
    }
}

/// Real, totally symmetric rank-3 coupling `M[a][b][c]` of the nonlinear update.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CouplingTensor {
    dim: usize,
    entries: Vec<BigRational>,
}

impl CouplingTensor {
    pub fn new(dim: usize, entries: Vec<BigRational>) -> Result<Self> {
        if entries.len() != dim * dim * dim {
            return Err(Error::DimensionMismatch {
                what: "coupling tensor entries",
                expected: dim * dim * dim,
                found: entries.len(),
            });
        }
        let tensor = Self { dim, entries };
        for a in 0..dim {
            for b in 0..dim {
                for c in 0..dim {
                    let v = tensor.get(a, b, c);
                    let perms = [(a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)];
                    if perms.iter().any(|&(i, j, k)| tensor.get(i, j, k) != v) {
                        return Err(Error::TensorNotSymmetric(a, b, c));
                    }
                }
            }
        }
        Ok(tensor)
    }

    pub fn scalar(mu: BigRational) -> Self {
        Self {
            dim: 1,
            entries: vec![mu],
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![BigRational::zero(); dim * dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, a: usize, b: usize, c: usize) -> &BigRational {
        &self.entries[(a * self.dim + b) * self.dim + c]
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.entries
    }
}

/// `coeff * prod_a (x^a)^{x_powers[a]} (p^a)^{p_powers[a]}`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monomial {
    pub coeff: BigInt,
    pub x_powers: Vec<u32>,
    pub p_powers: Vec<u32>,
}

impl Monomial {
    fn eval(&self, x: &[BigInt], p: &[BigInt]) -> BigInt {
        let mut acc = self.coeff.clone();
        for (v, &e) in x.iter().zip(&self.x_powers).chain(p.iter().zip(&self.p_powers)) {
            if e > 0 {
                acc *= num_traits::pow(v.clone(), e as usize);
            }
        }
        acc
    }

    pub fn degree(&self) -> u32 {
        self.x_powers.iter().chain(&self.p_powers).sum()
    }
}

/// Higher-than-quadratic remainder `R_n(x, p)` of the Hamiltonian.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Remainder {
    dim: usize,
    terms: Vec<Monomial>,
    active: Option<BTreeSet<i64>>,
}

impl Remainder {
    pub fn new(dim: usize, terms: Vec<Monomial>) -> Result<Self> {
        for m in &terms {
            for len in [m.x_powers.len(), m.p_powers.len()] {
                if len != dim {
                    return Err(Error::DimensionMismatch {
                        what: "remainder monomial powers",
                        expected: dim,
                        found: len,
                    });
                }
            }
        }
        Ok(Self {
            dim,
            terms,
            active: None,
        })
    }

    /// Pure power `coeff * f^power` of a single variable.
    pub fn power(dim: usize, var: Variable, coeff: BigInt, power: u32) -> Result<Self> {
        let mut x_powers = vec![0; dim];
        let mut p_powers = vec![0; dim];
        match var {
            Variable::X(a) if a < dim => x_powers[a] = power,
            Variable::P(a) if a < dim => p_powers[a] = power,
            _ => return Err(Error::Unsupported(format!("remainder cannot depend on {var}"))),
        }
        Self::new(
            dim,
            vec![Monomial {
                coeff,
                x_powers,
                p_powers,
            }],
        )
    }

    /// Restricts the remainder to the listed automaton times.
    pub fn at_times(mut self, times: impl IntoIterator<Item = i64>) -> Self {
        self.active = Some(times.into_iter().collect());
        self
    }

    pub fn is_active(&self, n: i64) -> bool {
        self.active.as_ref().is_none_or(|set| set.contains(&n))
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn active_times(&self) -> Option<&BTreeSet<i64>> {
        self.active.as_ref()
    }

    pub fn eval(&self, x: &[BigInt], p: &[BigInt]) -> BigInt {
        self.terms.iter().map(|m| m.eval(x, p)).sum()
    }

    pub fn degree_in(&self, var: Variable) -> u32 {
        self.terms
            .iter()
            .filter(|m| !m.coeff.is_zero())
            .map(|m| match var {
                Variable::X(a) => m.x_powers[a],
                Variable::P(a) => m.p_powers[a],
                Variable::Tau | Variable::Pi => 0,
            })
            .max()
            .unwrap_or(0)
    }
}

/// Integer symmetric `S`, antisymmetric `A`, lapse, and optional nonlinear payloads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HamiltonianSpec {
    s: SquareMatrix<BigInt>,
    a: SquareMatrix<BigInt>,
    lapse: Lapse,
    coupling: Option<CouplingTensor>,
    remainder: Option<Remainder>,
}

impl HamiltonianSpec {
    pub fn new(s: SquareMatrix<BigInt>, a: SquareMatrix<BigInt>) -> Result<Self> {
        if s.dim() != a.dim() {
            return Err(Error::DimensionMismatch {
                what: "A",
                expected: s.dim(),
                found: a.dim(),
            });
        }
        let d = s.dim();
        for r in 0..d {
            for c in 0..d {
                if s[(r, c)] != s[(c, r)] {
                    return Err(Error::NotSymmetric("S"));
                }
                if a[(r, c)] != -&a[(c, r)] {
                    return Err(Error::NotAntisymmetric("A"));
                }
            }
        }
        Ok(Self {
            s,
            a,
            lapse: Lapse::default(),
            coupling: None,
            remainder: None,
        })
    }

    pub fn from_rows(s: &[Vec<i64>], a: &[Vec<i64>]) -> Result<Self> {
        let conv = |m: &[Vec<i64>]| {
            SquareMatrix::from_rows(
                m.iter()
                    .map(|row| row.iter().copied().map(BigInt::from).collect())
                    .collect(),
            )
        };
        Self::new(conv(s)?, conv(a)?)
    }

    /// One degree of freedom with `H = h`.
    pub fn scalar(h: i64) -> Self {
        Self::from_rows(&[vec![h]], &[vec![0]]).expect("1x1 spec is always valid")
    }

    pub fn with_lapse(mut self, lapse: Lapse) -> Self {
        self.lapse = lapse;
        self
    }

    pub fn with_coupling(mut self, coupling: CouplingTensor) -> Result<Self> {
        self.check_dim("coupling tensor", coupling.dim())?;
        self.coupling = Some(coupling);
        Ok(self)
    }

    pub fn with_remainder(mut self, remainder: Remainder) -> Result<Self> {
        self.check_dim("remainder", remainder.dim)?;
        self.remainder = Some(remainder);
        Ok(self)
    }

    pub fn without_remainder(&self) -> Self {
        Self {
            remainder: None,
            ..self.clone()
        }
    }

    /// Rejects specs whose `H` can take half-integer values.
    pub fn check_strict(&self) -> Result<()> {
        match (0..self.dim()).find(|&k| self.s[(k, k)].is_odd()) {
            Some(k) => Err(Error::OddDiagonal(k)),
            None => Ok(()),
        }
    }

    pub fn dim(&self) -> usize {
        self.s.dim()
    }

    pub fn s(&self) -> &SquareMatrix<BigInt> {
        &self.s
    }

    pub fn a(&self) -> &SquareMatrix<BigInt> {
        &self.a
    }

    pub fn lapse(&self) -> &Lapse {
        &self.lapse
    }

    pub fn coupling(&self) -> Option<&CouplingTensor> {
        self.coupling.as_ref()
    }

    pub fn remainder(&self) -> Option<&Remainder> {
        self.remainder.as_ref()
    }

    pub fn is_linear(&self) -> bool {
        self.coupling.is_none() && self.remainder.is_none()
    }

    /// `H = S + iA`, self-adjoint with Gaussian-integer entries.
    pub fn hamiltonian_matrix(&self) -> SquareMatrix<GaussianInt> {
        SquareMatrix::from_fn(self.dim(), |r, c| {
            Complex::new(self.s[(r, c)].clone(), self.a[(r, c)].clone())
        })
    }

    pub(crate) fn check_state(&self, s: &AutomatonState) -> Result<()> {
        self.check_dim("state", s.x.len())?;
        self.check_dim("state", s.p.len())
    }

    fn check_dim(&self, what: &'static str, found: usize) -> Result<()> {
        if found != self.dim() {
            return Err(Error::DimensionMismatch {
                what,
                expected: self.dim(),
                found,
            });
        }
        Ok(())
    }
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `H = 1/2 S(pp + xx) + A p x + R_n`, exact with denominator at most 2
/// (when `R` is integer-valued).
pub fn hamiltonian_value(s: &AutomatonState, spec: &HamiltonianSpec) -> Result<BigRational> {
    spec.check_state(s)?;
    Ok(hamiltonian_of(&s.x, &s.p, s.n, spec))
}

pub(crate) fn hamiltonian_of(x: &[BigInt], p: &[BigInt], n: i64, spec: &HamiltonianSpec) -> BigRational {
    add_half(&BigRational::zero(), twice_hamiltonian(x, p, n, spec))
}

/// `2 H`, always an integer; stepping works with this to avoid rational
/// normalization of large numbers.
fn twice_hamiltonian(x: &[BigInt], p: &[BigInt], n: i64, spec: &HamiltonianSpec) -> BigInt {
    let mut h = dot(p, &spec.s.apply(p)) + dot(x, &spec.s.apply(x)) + 2 * dot(p, &spec.a.apply(x));
    if let Some(r) = spec.remainder.as_ref().filter(|r| r.is_active(n)) {
        h += 2 * r.eval(x, p);
    }
    h
}

/// `pi + diff / 2`, without a gcd when `pi` has denominator 1 or 2.
fn add_half(pi: &BigRational, diff: BigInt) -> BigRational {
    let two = BigInt::from(2);
    if pi.denom().is_one() || *pi.denom() == two {
        let scaled = if pi.denom().is_one() { pi.numer() * 2 } else { pi.numer().clone() };
        let num = scaled + diff;
        if num.is_even() {
            BigRational::from_integer(num / 2)
        } else {
            BigRational::new_raw(num, two)
        }
    } else {
        pi + BigRational::new(diff, two)
    }
}

/// Two-step increments `(x[n+1] - x[n-1], p[n+1] - p[n-1], c_n)` at state `curr`.
fn increments(curr: &AutomatonState, spec: &HamiltonianSpec) -> Result<(Vec<BigInt>, Vec<BigInt>, BigInt)> {
    let c = spec.lapse.at(curr.n)?.clone();
    let (sx, sp) = (spec.s.apply(&curr.x), spec.s.apply(&curr.p));
    let (ax, ap) = (spec.a.apply(&curr.x), spec.a.apply(&curr.p));
    let mut dx: Vec<BigInt> = sp.into_iter().zip(ax).map(|(u, v)| &c * (u + v)).collect();
    let dp: Vec<BigInt> = sx.into_iter().zip(ap).map(|(u, v)| -&c * (u - v)).collect();

    if let Some(m) = &spec.coupling {
        // (psi* + psi) = 2x, so the real term M (2x)(2x) only moves x
        let d = spec.dim();
        for (alpha, slot) in dx.iter_mut().enumerate() {
            let mut term = BigRational::zero();
            for b in 0..d {
                for g in 0..d {
                    let coeff = m.get(alpha, b, g);
                    if !coeff.is_zero() {
                        term += coeff * to_rational(&(BigInt::from(4) * &curr.x[b] * &curr.x[g]));
                    }
                }
            }
            if !term.is_integer() {
                return Err(Error::NonIntegralUpdate(curr.n));
            }
            *slot += &c * term.to_integer();
        }
    }
    Ok((dx, dp, c))
}

/// Advances `(prev, curr)` at `(n - 1, n)` to the state at `n + 1`.
pub fn step_forward(prev: &AutomatonState, curr: &AutomatonState, spec: &HamiltonianSpec) -> Result<AutomatonState> {
    let h_prev = twice_hamiltonian(&prev.x, &prev.p, prev.n, spec);
    advance(prev, curr, &h_prev, Direction::Forward, spec).map(|(s, _)| s)
}

/// Recovers the state at `n - 1` from `(curr, next)` at `(n, n + 1)`.
pub fn step_backward(curr: &AutomatonState, next: &AutomatonState, spec: &HamiltonianSpec) -> Result<AutomatonState> {
    let h_next = twice_hamiltonian(&next.x, &next.p, next.n, spec);
    advance(next, curr, &h_next, Direction::Backward, spec).map(|(s, _)| s)
}

/// One step away from `far` through `mid`; `h_far` is `2 H` at `far`.
/// Returns the new state with its `2 H`.
fn advance(
    far: &AutomatonState,
    mid: &AutomatonState,
    h_far: &BigInt,
    direction: Direction,
    spec: &HamiltonianSpec,
) -> Result<(AutomatonState, BigInt)> {
    spec.check_state(far)?;
    spec.check_state(mid)?;
    let (first, second) = match direction {
        Direction::Forward => (far.n, mid.n),
        Direction::Backward => (mid.n, far.n),
    };
    if first.checked_add(1) != Some(second) {
        return Err(Error::NonConsecutive { first, second });
    }
    let (dx, dp, c) = increments(mid, spec)?;
    let (n, sign) = match direction {
        Direction::Forward => (mid.n + 1, 1),
        Direction::Backward => (mid.n - 1, -1),
    };
    let (dx, dp, c) = if sign > 0 {
        (dx, dp, c)
    } else {
        (dx.into_iter().map(|v| -v).collect(), dp.into_iter().map(|v| -v).collect(), -c)
    };
    let x: Vec<BigInt> = far.x.iter().zip(dx).map(|(a, d)| a + d).collect();
    let p: Vec<BigInt> = far.p.iter().zip(dp).map(|(a, d)| a + d).collect();
    let h = twice_hamiltonian(&x, &p, n, spec);
    let state = AutomatonState {
        n,
        tau: &far.tau + c,
        pi: add_half(&far.pi, &h - h_far),
        x,
        p,
    };
    Ok((state, h))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Direction {
    Forward,
    Backward,
}

/// Lazily generated states beyond an initial pair.
///
/// Forward evolution yields `n + 1, n + 2, ...` after the pair `(n - 1, n)`;
/// backward evolution yields `n - 1, n - 2, ...` before the pair `(n, n + 1)`.
/// Iteration stops after the first error.
pub struct Evolution<'a> {
    spec: &'a HamiltonianSpec,
    older: AutomatonState,
    newer: AutomatonState,
    h_older: Option<BigInt>,
    h_newer: Option<BigInt>,
    direction: Direction,
    failed: bool,
}

impl<'a> Evolution<'a> {
    pub fn forward(prev: AutomatonState, curr: AutomatonState, spec: &'a HamiltonianSpec) -> Self {
        Self::start(prev, curr, Direction::Forward, spec)
    }

    pub fn backward(curr: AutomatonState, next: AutomatonState, spec: &'a HamiltonianSpec) -> Self {
        Self::start(next, curr, Direction::Backward, spec)
    }

    fn start(older: AutomatonState, newer: AutomatonState, direction: Direction, spec: &'a HamiltonianSpec) -> Self {
        Self {
            spec,
            older,
            newer,
            h_older: None,
            h_newer: None,
            direction,
            failed: false,
        }
    }
}

impl Iterator for Evolution<'_> {
    type Item = Result<AutomatonState>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        let h_older = match self.h_older.take() {
            Some(h) => h,
            None => twice_hamiltonian(&self.older.x, &self.older.p, self.older.n, self.spec),
        };
        match advance(&self.older, &self.newer, &h_older, self.direction, self.spec) {
            Ok((state, h)) => {
                self.older = std::mem::replace(&mut self.newer, state.clone());
                self.h_older = self.h_newer.replace(h);
                Some(Ok(state))
            }
            Err(err) => {
                self.failed = true;
                Some(Err(err))
            }
        }
    }
}

/// Ordered run of consecutive states together with the spec that produced
/// or is used to interpret them.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    states: Vec<AutomatonState>,
    spec: HamiltonianSpec,
}

impl Trajectory {
    /// At least two consecutive states are required; a lone state does not
    /// determine the evolution.
    pub fn new(states: Vec<AutomatonState>, spec: HamiltonianSpec) -> Result<Self> {
        if states.len() < 2 {
            return Err(Error::TrajectoryTooShort {
                len: states.len(),
                required: 2,
            });
        }
        for s in &states {
            spec.check_state(s)?;
        }
        for w in states.windows(2) {
            if w[0].n.checked_add(1) != Some(w[1].n) {
                return Err(Error::NonConsecutive {
                    first: w[0].n,
                    second: w[1].n,
                });
            }
        }
        Ok(Self { states, spec })
    }

    /// Builds a trajectory from raw amplitudes starting at `first_n`, with
    /// `tau` and `pi` zero. The amplitudes need not solve the dynamics.
    pub fn from_psi(first_n: i64, psi: &[Vec<GaussianInt>], spec: HamiltonianSpec) -> Result<Self> {
        let states = psi
            .iter()
            .zip(first_n..)
            .map(|(v, n)| AutomatonState::from_psi(n, v))
            .collect::<Result<Vec<_>>>()?;
        Self::new(states, spec)
    }

    pub fn states(&self) -> &[AutomatonState] {
        &self.states
    }

    pub fn into_states(self) -> Vec<AutomatonState> {
        self.states
    }

    pub fn spec(&self) -> &HamiltonianSpec {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn first_n(&self) -> i64 {
        self.states[0].n
    }

    pub fn last_n(&self) -> i64 {
        self.states[self.states.len() - 1].n
    }

    pub fn state(&self, n: i64) -> Result<&AutomatonState> {
        n.checked_sub(self.first_n())
            .and_then(|k| usize::try_from(k).ok())
            .and_then(|k| self.states.get(k))
            .ok_or(Error::IndexOutOfRange {
                index: n,
                first: self.first_n(),
                last: self.last_n(),
            })
    }

    pub fn psi(&self, n: i64) -> Result<Vec<GaussianInt>> {
        self.state(n).map(to_state_vector)
    }

    pub fn initial_pair(&self) -> (AutomatonState, AutomatonState) {
        (self.states[0].clone(), self.states[1].clone())
    }

    pub fn final_pair(&self) -> (AutomatonState, AutomatonState) {
        let k = self.states.len();
        (self.states[k - 2].clone(), self.states[k - 1].clone())
    }

    /// Checks that every interior triple obeys the update rule exactly.
    pub fn is_solution(&self) -> Result<bool> {
        for w in self.states.windows(3) {
            if step_forward(&w[0], &w[1], &self.spec)? != w[2] {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Interior indices `n` with both neighbours present.
    pub fn interior(&self) -> std::ops::Range<i64> {
        self.first_n() + 1..self.last_n()
    }
}

/// Runs `steps` forward updates after the initial pair; the result holds
/// `steps + 2` states.
pub fn evolve(init: (AutomatonState, AutomatonState), steps: usize, spec: &HamiltonianSpec) -> Result<Trajectory> {
    let (prev, curr) = init;
    if prev.n.checked_add(1) != Some(curr.n) {
        return Err(Error::NonConsecutive {
            first: prev.n,
            second: curr.n,
        });
    }
    let mut states = Vec::with_capacity(steps + 2);
    states.push(prev.clone());
    states.push(curr.clone());
    for next in Evolution::forward(prev, curr, spec).take(steps) {
        states.push(next?);
    }
    Trajectory::new(states, spec.clone())
}

/// Runs `steps` backward updates before the pair `(n, n + 1)`; states are
/// returned in increasing `n`.
pub fn evolve_backward(pair: (AutomatonState, AutomatonState), steps: usize, spec: &HamiltonianSpec) -> Result<Trajectory> {
    let (curr, next) = pair;
    if curr.n.checked_add(1) != Some(next.n) {
        return Err(Error::NonConsecutive {
            first: curr.n,
            second: next.n,
        });
    }
    let mut earlier = Evolution::backward(curr.clone(), next.clone(), spec)
        .take(steps)
        .collect::<Result<Vec<_>>>()?;
    earlier.reverse();
    earlier.push(curr);
    earlier.push(next);
    Trajectory::new(earlier, spec.clone())
}

/// `f(state[n+1]) - f(state[n-1])`.
pub fn central_difference<F>(traj: &Trajectory, n: i64, f: F) -> Result<BigRational>
where
    F: Fn(&AutomatonState) -> BigRational,
{
    let before = traj.state(n.wrapping_sub(1))?;
    let after = traj.state(n.wrapping_add(1))?;
    Ok(f(after) - f(before))
}

/// True when every `x`, `p`, `tau` is integral and `pi` has denominator 1 or 2.
pub fn has_integer_closure(s: &AutomatonState) -> bool {
    s.pi.denom() <= &BigInt::from(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{gauss, int, ratio};

    fn scalar_pair(a: GaussianInt, b: GaussianInt) -> (AutomatonState, AutomatonState) {
        (
            AutomatonState::from_psi(0, &[a]).unwrap(),
            AutomatonState::from_psi(1, &[b]).unwrap(),
        )
    }

    #[test]
    fn scalar_recurrence_matches_hand_iteration() {
        let spec = HamiltonianSpec::scalar(1);
        let (s0, s1) = scalar_pair(gauss(1, 0), gauss(0, 1));
        let s2 = step_forward(&s0, &s1, &spec).unwrap();
        assert_eq!(s2.psi(), vec![gauss(2, 0)]);
        let s3 = step_forward(&s1, &s2, &spec).unwrap();
        assert_eq!(s3.psi(), vec![gauss(0, -1)]);
        assert_eq!(s3.n, 3);
    }

    #[test]
    fn zero_state_is_fixed_but_clock_advances() {
        let spec = HamiltonianSpec::scalar(3).with_lapse(Lapse::Constant(int(2)));
        let s0 = AutomatonState::zero(0, 1);
        let s1 = AutomatonState::zero(1, 1);
        let s2 = step_forward(&s0, &s1, &spec).unwrap();
        assert_eq!(s2.psi(), vec![gauss(0, 0)]);
        assert_eq!(s2.tau, int(2));
        assert_eq!(s2.pi, ratio(0, 1));
    }

    #[test]
    fn backward_step_inverts_example() {
        let spec = HamiltonianSpec::scalar(1);
        let (s1, s2) = (
            AutomatonState::from_psi(1, &[gauss(0, 1)]).unwrap(),
            AutomatonState::from_psi(2, &[gauss(2, 0)]).unwrap(),
        );
        let s0 = step_backward(&s1, &s2, &spec).unwrap();
        assert_eq!(s0.psi(), vec![gauss(1, 0)]);
        assert_eq!(s0.n, 0);
    }

    #[test]
    fn step_rejects_bad_inputs() {
        let spec = HamiltonianSpec::scalar(1);
        let s0 = AutomatonState::zero(0, 1);
        let s2 = AutomatonState::zero(2, 1);
        assert!(matches!(step_forward(&s0, &s2, &spec), Err(Error::NonConsecutive { .. })));
        let wide = AutomatonState::zero(1, 2);
        assert!(matches!(step_forward(&s0, &wide, &spec), Err(Error::DimensionMismatch { .. })));
        assert!(step_backward(&s2, &s0, &spec).is_err());
    }

    #[test]
    fn evolve_lengths_and_sequence() {
        let spec = HamiltonianSpec::scalar(1);
        let init = scalar_pair(gauss(1, 0), gauss(0, 1));
        let t0 = evolve(init.clone(), 0, &spec).unwrap();
        assert_eq!(t0.states(), &[init.0.clone(), init.1.clone()]);
        let t = evolve(init.clone(), 2, &spec).unwrap();
        let psi: Vec<_> = t.states().iter().map(|s| s.x[0].clone() + 0).collect();
        assert_eq!(psi.len(), 4);
        let seq: Vec<_> = (0..4).map(|n| t.psi(n).unwrap()[0].clone()).collect();
        assert_eq!(seq, vec![gauss(1, 0), gauss(0, 1), gauss(2, 0), gauss(0, -1)]);
        assert!(t.is_solution().unwrap());
    }

    #[test]
    fn evolve_backward_returns_to_initial_pair() {
        let spec = HamiltonianSpec::from_rows(&[vec![1, 2], vec![2, -1]], &[vec![0, 1], vec![-1, 0]]).unwrap();
        let init = (
            AutomatonState::from_ints(0, &[1, -2], &[0, 3]).unwrap(),
            AutomatonState::from_ints(1, &[2, 2], &[-1, 1]).unwrap(),
        );
        let fwd = evolve(init.clone(), 40, &spec).unwrap();
        let back = evolve_backward(fwd.final_pair(), 40, &spec).unwrap();
        assert_eq!(back.initial_pair(), init);
        assert_eq!(back.states(), fwd.states());
    }

    #[test]
    fn single_state_trajectory_rejected() {
        let err = Trajectory::new(vec![AutomatonState::zero(0, 1)], HamiltonianSpec::scalar(1)).unwrap_err();
        assert_eq!(err, Error::TrajectoryTooShort { len: 1, required: 2 });
    }

    #[test]
    fn state_vector_examples() {
        let s = AutomatonState::from_ints(0, &[2, -3], &[1, 4]).unwrap();
        assert_eq!(to_state_vector(&s), vec![gauss(2, 1), gauss(-3, 4)]);
        let s = AutomatonState::from_ints(0, &[0], &[1]).unwrap();
        assert_eq!(to_state_vector(&s), vec![gauss(0, 1)]);
        let s = AutomatonState::from_ints(0, &[1], &[0]).unwrap();
        assert_eq!(to_state_vector(&s), vec![gauss(1, 0)]);
    }

    #[test]
    fn hamiltonian_value_examples() {
        let s = AutomatonState::from_ints(0, &[2], &[1]).unwrap();
        assert_eq!(hamiltonian_value(&s, &HamiltonianSpec::scalar(2)).unwrap(), ratio(5, 1));
        assert_eq!(hamiltonian_value(&s, &HamiltonianSpec::scalar(1)).unwrap(), ratio(5, 2));
        let z = AutomatonState::zero(0, 1);
        assert_eq!(hamiltonian_value(&z, &HamiltonianSpec::scalar(7)).unwrap(), ratio(0, 1));
        let wide = AutomatonState::zero(0, 2);
        assert!(hamiltonian_value(&wide, &HamiltonianSpec::scalar(1)).is_err());
    }

    #[test]
    fn antisymmetric_part_enters_hamiltonian() {
        // H = 1/2 (p0^2 + x0^2) + p0 x1 - p1 x0 with S = diag(1, 0), A = [[0,1],[-1,0]]
        let spec = HamiltonianSpec::from_rows(&[vec![1, 0], vec![0, 0]], &[vec![0, 1], vec![-1, 0]]).unwrap();
        let s = AutomatonState::from_ints(0, &[1, 2], &[3, 5]).unwrap();
        let expect = ratio(10, 2) + ratio(3 * 2 - 5, 1);
        assert_eq!(hamiltonian_value(&s, &spec).unwrap(), expect);
    }

    #[test]
    fn central_difference_examples() {
        let spec = HamiltonianSpec::scalar(1);
        let t = Trajectory::from_psi(0, &[vec![gauss(1, 0)], vec![gauss(0, 0)], vec![gauss(2, 0)]], spec.clone()).unwrap();
        let x0 = |s: &AutomatonState| to_rational(&s.x[0]);
        assert_eq!(central_difference(&t, 1, x0).unwrap(), ratio(1, 1));
        assert_eq!(central_difference(&t, 1, |_| ratio(7, 1)).unwrap(), ratio(0, 1));
        assert!(central_difference(&t, 0, x0).is_err());
        assert!(central_difference(&t, 2, x0).is_err());

        let lapse = int(3);
        let spec = spec.with_lapse(Lapse::Constant(lapse.clone()));
        let t = evolve(scalar_pair(gauss(1, 0), gauss(0, 1)), 6, &spec).unwrap();
        for n in t.interior() {
            let tau_dot = central_difference(&t, n, |s| to_rational(&s.tau)).unwrap();
            assert_eq!(tau_dot, to_rational(&lapse));
        }
    }

    #[test]
    fn pi_tracks_hamiltonian_difference() {
        let spec = HamiltonianSpec::scalar(1);
        let t = evolve(scalar_pair(gauss(2, 1), gauss(-1, 3)), 10, &spec).unwrap();
        for n in t.interior() {
            let pi_dot = central_difference(&t, n, |s| s.pi.clone()).unwrap();
            let h_dot = central_difference(&t, n, |s| hamiltonian_value(s, &spec).unwrap()).unwrap();
            assert_eq!(pi_dot, h_dot);
        }
        assert!(t.states().iter().all(has_integer_closure));
    }

    #[test]
    fn spec_validation() {
        assert_eq!(
            HamiltonianSpec::from_rows(&[vec![1, 2], vec![3, 1]], &[vec![0, 0], vec![0, 0]]).unwrap_err(),
            Error::NotSymmetric("S")
        );
        assert_eq!(
            HamiltonianSpec::from_rows(&[vec![1, 0], vec![0, 1]], &[vec![1, 0], vec![0, 0]]).unwrap_err(),
            Error::NotAntisymmetric("A")
        );
        assert_eq!(HamiltonianSpec::scalar(3).check_strict().unwrap_err(), Error::OddDiagonal(0));
        assert!(HamiltonianSpec::scalar(2).check_strict().is_ok());
    }

    #[test]
    fn lapse_schedule_lookup() {
        let lapse = Lapse::Schedule {
            first: 1,
            values: vec![int(1), int(2)],
        };
        assert_eq!(lapse.at(2).unwrap(), &int(2));
        assert_eq!(lapse.at(3).unwrap_err(), Error::LapseUndefined(3));
        assert_eq!(lapse.at(0).unwrap_err(), Error::LapseUndefined(0));
    }

    #[test]
    fn scheduled_lapse_evolution_is_reversible() {
        let spec = HamiltonianSpec::scalar(1).with_lapse(Lapse::Schedule {
            first: 1,
            values: vec![int(1), int(2), int(-1), int(3), int(1)],
        });
        let init = scalar_pair(gauss(1, 1), gauss(0, 2));
        let fwd = evolve(init.clone(), 5, &spec).unwrap();
        let back = evolve_backward(fwd.final_pair(), 5, &spec).unwrap();
        assert_eq!(back.initial_pair(), init);
        assert!(evolve(init, 6, &spec).is_err());
    }

    #[test]
    fn coupling_tensor_symmetry_enforced() {
        let mut entries = vec![ratio(0, 1); 8];
        entries[1] = ratio(1, 1); // M[0][0][1] without its permutations
        assert_eq!(CouplingTensor::new(2, entries).unwrap_err(), Error::TensorNotSymmetric(0, 0, 1));
    }

    #[test]
    fn remainder_power_evaluation() {
        let r = Remainder::power(2, Variable::P(1), int(2), 3).unwrap();
        assert_eq!(r.eval(&[int(5), int(5)], &[int(1), int(-2)]), int(-16));
        assert_eq!(r.degree_in(Variable::P(1)), 3);
        assert_eq!(r.degree_in(Variable::X(0)), 0);
        let r = r.at_times([4]);
        assert!(r.is_active(4) && !r.is_active(5));
    }
}
