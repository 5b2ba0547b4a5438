use hca_core::sampling::{
    dispersion_energy, dispersion_series, mode_frequency_measure, mode_series, reconstruct, sample_projection, Branch,
    Quadrature, SampledSignal,
};
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn grid_points_return_samples(values in prop::collection::vec((-100i32..100, -100i32..100), 3..40), l in 0.01f64..10.0) {
        let values: Vec<Complex64> = values.iter().map(|&(a, b)| Complex64::new(a as f64, b as f64)).collect();
        let sig = SampledSignal::new(-3, values.clone(), l).unwrap();
        for n in sig.first() + 1..sig.last() {
            prop_assert_eq!(reconstruct(&sig, n as f64 * l).unwrap(), sig.sample(n));
        }
    }

    #[test]
    fn stable_energies_respect_cutoff(eps in -2.0f64..=2.0, l in 0.01f64..10.0) {
        let r = dispersion_energy(eps, l).unwrap();
        prop_assert!(r.stable);
        prop_assert!(r.energy.unwrap().abs() <= PI / (2.0 * l));
        let e = r.energy.unwrap();
        prop_assert!(((e * l).sin() * 2.0 - eps).abs() < 1e-12);
        prop_assert!(((r.doubler_energy().unwrap() * l).sin() * 2.0 - eps).abs() < 1e-12);
    }

    #[test]
    fn series_remainder_bound(eps in -0.5f64..=0.5, l in 0.1f64..10.0) {
        let e = dispersion_energy(eps, l).unwrap().energy.unwrap();
        prop_assert!((e - dispersion_series(eps, l)).abs() <= eps.abs().powi(5) * 0.1 / (2.0 * l) + 1e-15);
    }

    #[test]
    fn unstable_beyond_two(eps in 2.0001f64..100.0) {
        let r = dispersion_energy(-eps, 1.0).unwrap();
        prop_assert!(!r.stable && r.energy.is_none());
    }
}

#[test]
fn projection_recovers_random_samples() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    let support: Vec<Complex64> = (0..48).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let sig = SampledSignal::centered(0.5, 10_000, |n| {
        if (-24..24).contains(&n) { support[(n + 24) as usize] } else { Complex64::new(0.0, 0.0) }
    })
    .unwrap();
    let quad = Quadrature::default();
    for n in [-30, -24, -7, 0, 5, 23, 40] {
        let got = sample_projection(&sig, n, &quad).unwrap();
        assert!((got - sig.sample(n)).norm() < 1e-6, "n = {n}: {got} vs {}", sig.sample(n));
    }
}

#[test]
fn doubler_seeded_mode_peaks_on_doubler_branch() {
    let n = 2048;
    let bin = 2.0 * PI / n as f64;
    let r = dispersion_energy(0.7, 1.0).unwrap();
    let series = mode_series(0.7, n, Branch::Doubler).unwrap();
    let peak = mode_frequency_measure(&series, 1.0, Some(bin)).unwrap()[0];
    assert!((peak - r.doubler_energy().unwrap()).abs() <= bin);
}
