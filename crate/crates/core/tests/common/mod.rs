#![allow(dead_code)]

use hca_core::exact::int;
use hca_core::{AutomatonState, HamiltonianSpec};
use proptest::prelude::*;

/// Symmetric `S` and antisymmetric `A` with entries in `[-bound, bound]`.
pub fn spec_strategy(max_dim: usize, bound: i64) -> impl Strategy<Value = HamiltonianSpec> {
    (1..=max_dim).prop_flat_map(move |d| {
        let half = d * (d + 1) / 2;
        (
            prop::collection::vec(-bound..=bound, half),
            prop::collection::vec(-bound..=bound, half),
        )
            .prop_map(move |(s_vals, a_vals)| build_spec(d, &s_vals, &a_vals))
    })
}

pub fn build_spec(d: usize, s_vals: &[i64], a_vals: &[i64]) -> HamiltonianSpec {
    let mut s = vec![vec![0i64; d]; d];
    let mut a = vec![vec![0i64; d]; d];
    let mut k = 0;
    for r in 0..d {
        for c in r..d {
            s[r][c] = s_vals[k];
            s[c][r] = s_vals[k];
            if r != c {
                a[r][c] = a_vals[k];
                a[c][r] = -a_vals[k];
            }
            k += 1;
        }
    }
    HamiltonianSpec::from_rows(&s, &a).unwrap()
}

pub fn pair_strategy(d: usize, bound: i64) -> impl Strategy<Value = (AutomatonState, AutomatonState)> {
    prop::collection::vec(-bound..=bound, 4 * d).prop_map(move |v| {
        let (x0, rest) = v.split_at(d);
        let (p0, rest) = rest.split_at(d);
        let (x1, p1) = rest.split_at(d);
        (
            AutomatonState::from_ints(0, x0, p0).unwrap(),
            AutomatonState::from_ints(1, x1, p1).unwrap(),
        )
    })
}

pub fn spec_and_pair(max_dim: usize, bound: i64, state_bound: i64) -> impl Strategy<Value = (HamiltonianSpec, (AutomatonState, AutomatonState))> {
    spec_strategy(max_dim, bound).prop_flat_map(move |spec| {
        let d = spec.dim();
        (Just(spec), pair_strategy(d, state_bound))
    })
}

pub fn scale_state(s: &AutomatonState, k: i64) -> AutomatonState {
    AutomatonState {
        n: s.n,
        x: s.x.iter().map(|v| v * int(k)).collect(),
        p: s.p.iter().map(|v| v * int(k)).collect(),
        tau: s.tau.clone(),
        pi: s.pi.clone(),
    }
}
