use std::f64::consts::PI;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use hca_core::conservation::{
    commutator_is_zero, conservation_residual, constraint_residual, leibniz_identity_gap, polynomial_in_h,
    random_polynomial_in_h, Observable,
};
use hca_core::exact::{format_gaussian, gauss, GaussianInt};
use hca_core::io::{write_nonlocality_csv, write_pairs_csv, write_signal_csv, write_spectrum_csv, write_trajectory_csv};
use hca_core::nonlinear::{
    band_filling, is_decreasing, locality_deviation_sweep, nonlocality_report, product_bandwidth, triple_sum_audit,
    BandLimitedFunction, SweepConfig,
};
use hca_core::sampling::{
    dispersion_energy, find_peaks, grid_index, hamiltonian_eigen, mode_series, modified_schrodinger_residual,
    nascent_delta_integral, project_on_mode, reconstruct, sample_projection, schrodinger_truncation_bound,
    sinc_kernel, spectrum, Branch, Quadrature, SampledSignal,
};
use hca_core::variational::{solve_scheme, stationarity_audit, StationarityReport};
use hca_core::{evolve, evolve_backward, AutomatonState, HamiltonianSpec, Trajectory, Variable};
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{ObservableConfig, Scenario, ScenarioConfig, SignalKind};
use crate::report::{emit_report, Check, RunReport};
use crate::RunError;

struct Run<'a> {
    scenario: Scenario,
    cfg: &'a ScenarioConfig,
    spec: HamiltonianSpec,
    seed: u64,
    out: &'a Path,
    report: RunReport,
}

impl Run<'_> {
    fn core<T>(&self, r: hca_core::Result<T>) -> Result<T, RunError> {
        r.map_err(|e| RunError::Runtime(format!("{}: {e}", self.scenario)))
    }

    fn write(&mut self, name: &str, body: impl FnOnce(&mut dyn Write) -> hca_core::Result<()>) -> Result<(), RunError> {
        let path = self.out.join(name);
        let file = File::create(&path).map_err(|e| RunError::Io(format!("{}: {e}", path.display())))?;
        let mut w = BufWriter::new(file);
        body(&mut w).map_err(|e| RunError::Io(format!("{}: {e}", path.display())))?;
        w.flush().map_err(|e| RunError::Io(format!("{}: {e}", path.display())))?;
        self.report.outputs.push(name.to_string());
        Ok(())
    }

    fn check(&mut self, name: impl Into<String>, expected: impl Into<String>, observed: impl Into<String>, pass: bool) {
        self.report.push(Check::new(name, expected, observed, pass));
    }

    fn initial_pair(&self) -> Result<(AutomatonState, AutomatonState), RunError> {
        let [a, b] = self
            .cfg
            .initial_psi()?
            .ok_or_else(|| RunError::Config(format!("init: required by the {} scenario", self.scenario)))?;
        let n = self.cfg.init.as_ref().map_or(0, |i| i.n);
        let first = self.core(AutomatonState::from_psi(n, &a))?;
        let second = self.core(AutomatonState::from_psi(n + 1, &b))?;
        Ok((first, second))
    }

    fn trajectory(&self, steps: usize) -> Result<Trajectory, RunError> {
        let init = self.initial_pair()?;
        self.core(evolve(init, steps, &self.spec))
    }

    fn has_coupling(&self) -> bool {
        self.spec
            .coupling()
            .is_some_and(|m| m.entries().iter().any(|v| !v.is_zero()))
    }

    fn quadrature(&self) -> Result<Quadrature, RunError> {
        match self.cfg.quadrature_step {
            Some(step) => self.core(Quadrature::from_step(step, self.cfg.l)),
            None => Ok(Quadrature::default()),
        }
    }
}

/// Runs `scenario` and writes its outputs and `report.json` into `out`.
pub fn run_scenario(scenario: Scenario, cfg: &ScenarioConfig, seed: u64, out: &Path) -> Result<RunReport, RunError> {
    if let Some(name) = &cfg.scenario {
        if name != scenario.name() {
            return Err(RunError::Config(format!(
                "scenario: config names `{name}` but `{scenario}` was requested"
            )));
        }
    }
    std::fs::create_dir_all(out).map_err(|e| RunError::Io(format!("{}: {e}", out.display())))?;
    let mut run = Run {
        scenario,
        cfg,
        spec: cfg.hamiltonian()?,
        seed,
        out,
        report: RunReport::new(scenario.name(), seed, Some(cfg.clone())),
    };
    match scenario {
        Scenario::Evolve => evolve_scenario(&mut run)?,
        Scenario::ConserveAudit => conserve_scenario(&mut run)?,
        Scenario::Stationarity => stationarity_scenario(&mut run)?,
        Scenario::Dispersion => dispersion_scenario(&mut run)?,
        Scenario::SamplingDemo => sampling_scenario(&mut run)?,
        Scenario::NonlinearAudit => nonlinear_scenario(&mut run)?,
    }
    emit_report(&run.report, &out.join("report.json"))?;
    let mut report = run.report;
    report.outputs.push("report.json".into());
    Ok(report)
}

/// Plain decimal for moderate magnitudes, scientific notation otherwise.
fn num(v: f64) -> String {
    if v != 0.0 && v.is_finite() && !(1e-4..1e6).contains(&v.abs()) {
        format!("{v:e}")
    } else {
        v.to_string()
    }
}

/// `"0"` when every entry is zero, else the first nonzero entry with its time.
fn first_nonzero<T: Zero + ToString>(values: &[(i64, T)]) -> String {
    values
        .iter()
        .find(|(_, v)| !v.is_zero())
        .map_or_else(|| "0".to_string(), |(n, v)| format!("{} at n = {n}", v.to_string()))
}

fn evolve_scenario(run: &mut Run) -> Result<(), RunError> {
    let steps = run.cfg.steps;
    let traj = run.trajectory(steps)?;
    run.write("trajectory.csv", |w| write_trajectory_csv(&traj, w))?;

    let back = run.core(evolve_backward(traj.final_pair(), steps, &run.spec))?;
    let recovered = back.initial_pair() == traj.initial_pair();
    run.check(
        "reversibility",
        format!("{steps} backward steps recover the initial pair bit-exactly"),
        if recovered { "recovered" } else { "differs" },
        recovered,
    );

    let closure = traj.states().iter().all(hca_core::dynamics::has_integer_closure);
    run.check(
        "integer_closure",
        "x, p, tau integral and pi with denominator 1 or 2",
        if closure { "holds" } else { "violated" },
        closure,
    );

    constraint_check(run, &traj)
}

fn constraint_check(run: &mut Run, traj: &Trajectory) -> Result<(), RunError> {
    let residuals = traj
        .interior()
        .map(|n| Ok((n, run.core(constraint_residual(traj, n))?)))
        .collect::<Result<Vec<_>, RunError>>()?;
    let observed = first_nonzero(&residuals);
    if run.has_coupling() {
        let broken = residuals.iter().any(|(_, r)| !r.is_zero());
        run.check("constraint", "nonzero at some interior n (M breaks the constraint)", observed, broken);
    } else {
        run.check("constraint", "0 at every interior n", observed.clone(), observed == "0");
    }
    Ok(())
}

fn observables(run: &Run) -> Result<Vec<(String, Observable)>, RunError> {
    let d = run.spec.dim();
    let default = vec![
        ObservableConfig::Named("identity".into()),
        ObservableConfig::Named("hamiltonian".into()),
        ObservableConfig::Named("hamiltonian^2".into()),
        ObservableConfig::Named("random-polynomial".into()),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(run.seed);
    let one = gauss(1, 0);
    let zero = gauss(0, 0);
    run.cfg
        .observables
        .as_ref()
        .unwrap_or(&default)
        .iter()
        .map(|o| {
            Ok(match o {
                ObservableConfig::Named(name) => {
                    let g = match name.as_str() {
                        "identity" => Observable::identity(d),
                        "hamiltonian" => Observable::hamiltonian(&run.spec),
                        "hamiltonian^2" => polynomial_in_h(&run.spec, &[zero.clone(), zero.clone(), one.clone()]),
                        _ => random_polynomial_in_h(&run.spec, 4, false, &mut rng),
                    };
                    (name.clone(), g)
                }
                ObservableConfig::Polynomial(p) => {
                    let coeffs = p
                        .polynomial
                        .iter()
                        .enumerate()
                        .map(|(k, c)| c.gaussian(&format!("observables.{}.polynomial[{k}]", p.name)))
                        .collect::<Result<Vec<GaussianInt>, _>>()?;
                    (p.name.clone(), polynomial_in_h(&run.spec, &coeffs))
                }
                ObservableConfig::Matrix(m) => (m.name.clone(), Observable::new(run.cfg.observable_matrix(m)?)),
            })
        })
        .collect()
}

fn conserve_scenario(run: &mut Run) -> Result<(), RunError> {
    let traj = run.trajectory(run.cfg.steps)?;
    run.write("trajectory.csv", |w| write_trajectory_csv(&traj, w))?;
    let coupled = run.has_coupling();
    let mut rows = Vec::new();
    for (name, g) in observables(run)? {
        let commutes = run.core(commutator_is_zero(&g, &run.spec))?;
        let residuals = traj
            .interior()
            .map(|n| Ok((n, run.core(conservation_residual(&traj, n, &g))?)))
            .collect::<Result<Vec<_>, RunError>>()?;
        let observed = residuals
            .iter()
            .find(|(_, r)| !r.is_zero())
            .map_or_else(|| "0".to_string(), |(n, r)| format!("{} at n = {n}", format_gaussian(r)));
        let is_identity = g == Observable::identity(run.spec.dim());
        let check = format!("residual[{name}]");
        if coupled && is_identity {
            let broken = observed != "0";
            run.check(check, "nonzero at some interior n (M breaks the constraint)", observed, broken);
        } else if coupled {
            run.check(check, "reported only: the spec is nonlinear", observed, true);
        } else if commutes {
            run.check(check, "0 at every interior n", observed.clone(), observed == "0");
        } else {
            run.check(check, "reported only: G does not commute with H", observed, true);
        }
        if g.is_self_adjoint() {
            let imag = residuals
                .iter()
                .map(|(n, r)| (*n, r.im.clone()))
                .collect::<Vec<_>>();
            let observed = first_nonzero(&imag);
            run.check(format!("imaginary_part[{name}]"), "0 at every interior n", observed.clone(), observed == "0");
        }
        rows.extend(residuals.into_iter().map(|(n, r)| (name.clone(), n, r)));
    }

    // two-step product rule on the first component's x and p
    let mut worst = None;
    for n in traj.interior() {
        let s = [n - 1, n, n + 1].map(|k| traj.state(k).expect("interior neighbours exist"));
        let gap = leibniz_identity_gap([&s[0].x[0], &s[1].x[0], &s[2].x[0]], [&s[0].p[0], &s[1].p[0], &s[2].p[0]]);
        if !gap.is_zero() && worst.is_none() {
            worst = Some(format!("{gap} at n = {n}"));
        }
    }
    let observed = worst.unwrap_or_else(|| "0".into());
    run.check("leibniz[x0, p0]", "0 at every interior n", observed.clone(), observed == "0");

    run.write("conservation.csv", |w| {
        writeln!(w, "observable,n,re,im")?;
        for (name, n, r) in &rows {
            writeln!(w, "{name},{n},{},{}", r.re, r.im)?;
        }
        Ok(())
    })
}

fn remainder_degree(spec: &HamiltonianSpec) -> u32 {
    spec.remainder()
        .map_or(0, |r| Variable::all(spec.dim()).into_iter().map(|v| r.degree_in(v)).max().unwrap_or(0))
}

fn stationarity_scenario(run: &mut Run) -> Result<(), RunError> {
    if run.spec.coupling().is_some() {
        return Err(RunError::Config(
            "spec.m: the stationarity scenario audits the action, which has no term for M".into(),
        ));
    }
    let traj = run.trajectory(run.cfg.steps)?;
    run.write("trajectory.csv", |w| write_trajectory_csv(&traj, w))?;
    let degree = remainder_degree(&run.spec);
    let r_active = run
        .spec
        .remainder()
        .is_some_and(|r| traj.interior().any(|n| r.is_active(n)));

    let naive = run.core(stationarity_audit(&traj, &run.spec, &run.cfg.deltas, None))?;
    let summary = |r: &StationarityReport| {
        format!(
            "nonzero residual: {}, delta-dependent: {} ({} variables)",
            r.nonzero_residual,
            r.delta_dependent,
            r.dependent_variables.len()
        )
    };
    if !r_active {
        run.check("naive_audit", "all residuals 0, no delta dependence", summary(&naive), naive.is_clean());
    } else if degree >= 3 {
        run.check(
            "naive_audit",
            "delta-dependent residuals flagged (overdetermination)",
            summary(&naive),
            naive.delta_dependent,
        );
    } else {
        run.check("naive_audit", "no delta dependence", summary(&naive), !naive.delta_dependent);
    }

    let mut audits = vec![("naive".to_string(), naive)];
    if let Some(sc) = &run.cfg.scheme {
        let scheme = run.core(solve_scheme(
            sc.max_degree.unwrap_or(2 * sc.multipliers.len() as u32),
            &sc.multipliers,
        ))?;
        let report = run.core(stationarity_audit(&traj, &run.spec, &run.cfg.deltas, Some(&scheme)))?;
        let name = format!(
            "scheme({})",
            scheme.multipliers().iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
        );
        if r_active {
            run.check("scheme_audit", "no delta dependence", summary(&report), !report.delta_dependent);
        } else {
            run.check("scheme_audit", "all residuals 0, no delta dependence", summary(&report), report.is_clean());
        }
        audits.push((name, report));
    }
    let note = audits[0].1.boundary_note.clone();
    run.check("boundary", "endpoint variables held fixed", note, true);

    run.write("stationarity.csv", |w| {
        writeln!(w, "method,n,variable,delta,residual")?;
        for (method, report) in &audits {
            for r in &report.residuals {
                writeln!(w, "{method},{},{},{},{}", r.n, r.variable, r.delta, r.residual)?;
            }
        }
        Ok(())
    })
}

/// Distance between two angular frequencies modulo `period`.
fn circular_distance(a: f64, b: f64, period: f64) -> f64 {
    let d = (a - b).rem_euclid(period);
    d.min(period - d)
}

fn dispersion_scenario(run: &mut Run) -> Result<(), RunError> {
    let l = run.cfg.l;
    let steps = run.cfg.dispersion.steps;
    let eigen = run.core(hamiltonian_eigen(&run.spec))?;
    let epsilons = match &run.cfg.dispersion.epsilons {
        Some(e) => e.clone(),
        None => eigen.iter().map(|p| p.value).collect(),
    };
    let bin = 2.0 * PI / (steps as f64 * l);
    let mut rows = Vec::new();
    for (k, &eps) in epsilons.iter().enumerate() {
        let result = run.core(dispersion_energy(eps, l))?;
        let Some(energy) = result.energy else {
            run.check(format!("stability[{eps}]"), "unstable: |epsilon| > 2", "unstable", true);
            rows.push((eps, None, None));
            continue;
        };
        let series = run.core(mode_series(eps, steps, Branch::Principal))?;
        let spec = run.core(spectrum(&series, l))?;
        let peaks = find_peaks(&spec, 0.25);
        run.write(&format!("spectrum_{k}.csv"), |w| write_spectrum_csv(&spec, w))?;
        let strongest = peaks[0];
        run.check(
            format!("peak[{eps}]"),
            format!("within one bin ({}) of E = {}", num(bin), num(energy)),
            num(strongest),
            (strongest - energy).abs() <= bin,
        );
        let highest = peaks.iter().map(|p| p.abs()).fold(0.0, f64::max);
        run.check(
            format!("cutoff[{eps}]"),
            format!("no peak above pi / 2l + one bin = {}", result.cutoff() + bin),
            num(highest),
            highest <= result.cutoff() + bin,
        );
        rows.push((eps, Some(energy), Some(strongest)));
    }

    // integer initial data excite both branches of each mode
    let all_stable = eigen.iter().all(|p| p.value.abs() <= 2.0);
    if run.cfg.init.is_some() && run.spec.is_linear() && run.spec.lapse().is_unit() && all_stable {
        let traj = run.trajectory(steps.saturating_sub(2))?;
        let period = 2.0 * PI / l;
        for pair in &eigen {
            let series = run.core(project_on_mode(&traj, &pair.vector))?;
            if series.iter().all(|v| v.norm() < 1e-9) {
                continue;
            }
            let e = run.core(dispersion_energy(pair.value, l))?.energy.unwrap_or(0.0);
            let doubler = PI / l - e;
            let spec = run.core(spectrum(&series, l))?;
            let peaks = find_peaks(&spec, 0.25);
            let ok = peaks
                .iter()
                .all(|&p| circular_distance(p, e, period) <= bin || circular_distance(p, doubler, period) <= bin);
            let listed = peaks.iter().map(f64::to_string).collect::<Vec<_>>().join(" ");
            run.check(
                format!("integer_seeded[{}]", pair.value),
                format!("peaks only at E = {e} or pi/l - E = {doubler}"),
                listed,
                ok,
            );
        }
    }

    run.write("dispersion.csv", |w| {
        writeln!(w, "epsilon,energy,measured")?;
        for (eps, e, m) in &rows {
            let show = |v: &Option<f64>| v.map_or_else(|| "unstable".to_string(), |v| v.to_string());
            writeln!(w, "{eps},{},{}", show(e), show(m))?;
        }
        Ok(())
    })
}

/// Exact solution on `[-W, W]` through the configured initial pair.
fn windowed_trajectory(run: &Run) -> Result<Trajectory, RunError> {
    let (a, b) = run.initial_pair()?;
    let w = run.cfg.window as i64;
    if a.n < -w || b.n > w {
        return Err(RunError::Config(format!("init.n: the pair must lie inside [-{w}, {w}]")));
    }
    let back = run.core(evolve_backward((a.clone(), b.clone()), (a.n + w) as usize, &run.spec))?;
    let steps = (w - b.n) as usize;
    let fwd = run.core(evolve((a, b), steps, &run.spec))?;
    let mut states = back.into_states();
    states.extend(fwd.into_states().into_iter().skip(2));
    run.core(Trajectory::new(states, run.spec.clone()))
}

fn sampling_scenario(run: &mut Run) -> Result<(), RunError> {
    let l = run.cfg.l;
    let w = run.cfg.window as i64;
    let traj = windowed_trajectory(run)?;
    let d = run.spec.dim();
    let comps = (0..d)
        .map(|a| run.core(SampledSignal::from_trajectory(&traj, a, l)))
        .collect::<Result<Vec<_>, _>>()?;
    for (a, c) in comps.iter().enumerate() {
        run.write(&format!("signal_{a}.csv"), |out| write_signal_csv(c, out))?;
    }

    // grid times: the finite-difference relation holds exactly
    let mut grid_worst = 0.0f64;
    let mut grid_exact = true;
    for n in traj.first_n() + 2..=traj.last_n() - 2 {
        let t = n as f64 * l;
        for r in run.core(modified_schrodinger_residual(&comps, &run.spec, l, t))? {
            grid_worst = grid_worst.max(r.norm());
        }
        for c in &comps {
            grid_exact &= run.core(reconstruct(c, t))? == c.sample(n);
        }
    }
    run.check("grid_residual", "exactly 0 at every grid time", num(grid_worst), grid_worst == 0.0);
    run.check(
        "reconstruct_on_grid",
        "reconstruction returns the stored samples exactly",
        if grid_exact { "exact" } else { "differs" },
        grid_exact,
    );

    let times = run.cfg.sampling.times.clone().unwrap_or_else(|| {
        let half = w as f64 / 2.0;
        (0..8)
            .map(|k| (-half + 0.5 + k as f64 * (w as f64 - 1.0) / 7.0) * l)
            .collect()
    });
    let mut rows = Vec::new();
    let mut worst = 0.0f64;
    let mut within = true;
    for &t in &times {
        let residual = run.core(modified_schrodinger_residual(&comps, &run.spec, l, t))?;
        let bound = run.core(schrodinger_truncation_bound(&comps, &run.spec, t))?;
        for (a, r) in residual.iter().enumerate() {
            worst = worst.max(r.norm());
            within &= r.norm() <= bound * (1.0 + 1e-9) + 1e-12;
            rows.push((t, a, *r, bound));
        }
    }
    run.check(
        "off_grid_residual",
        "at most the series truncation bound at every evaluation time",
        format!("max residual {}", num(worst)),
        within,
    );

    let quad = run.quadrature()?;
    for &n in &run.cfg.sampling.projections {
        let mut err = 0.0f64;
        for c in &comps {
            err = err.max((run.core(sample_projection(c, n, &quad))? - c.sample(n)).norm());
        }
        run.check(format!("projection[{n}]"), "recovers the sample within 1e-6", num(err), err <= 1e-6);
    }
    let delta = nascent_delta_integral(run.cfg.window);
    run.check(
        "nascent_delta",
        "integral of the kernel over the window within 1e-4 of 1",
        num(delta),
        (delta - 1.0).abs() <= 1e-4,
    );

    run.write("residuals.csv", |out| {
        writeln!(out, "t,component,re,im,bound")?;
        for (t, a, r, b) in &rows {
            writeln!(out, "{t},{a},{},{},{b}", r.re, r.im)?;
        }
        Ok(())
    })
}

fn nonlinear_scenario(run: &mut Run) -> Result<(), RunError> {
    let l = run.cfg.l;
    let w = run.cfg.window;
    let quad = run.quadrature()?;
    let signal = run.cfg.nonlinear.signal;
    let sig = match signal {
        SignalKind::Impulse => run.core(SampledSignal::impulse(l, w))?,
        SignalKind::BandFilling => run.core(band_filling(l, w, run.seed))?,
    };
    let times = run.cfg.nonlinear.times.clone().unwrap_or_else(|| vec![l / 2.0]);
    let reports = times
        .iter()
        .map(|&t| run.core(nonlocality_report(&sig, t, &quad)))
        .collect::<Result<Vec<_>, _>>()?;
    run.write("nonlocality.csv", |out| write_nonlocality_csv(&reports, out))?;
    let json = serde_json::to_string_pretty(&reports).expect("reports serialize") + "\n";
    run.write("nonlocality.json", |out| Ok(out.write_all(json.as_bytes())?))?;

    for r in &reports {
        let t = r.t;
        let on_grid = grid_index(t / l).is_some();
        if on_grid {
            run.check(
                format!("grid_square[{t}]"),
                "squared-sample interpolant equals the pointwise square",
                num(r.deviations.interpolant_vs_square),
                r.deviations.interpolant_vs_square == 0.0,
            );
        }
        if signal == SignalKind::Impulse {
            let s = sinc_kernel(0, l, t);
            let expected = (s - s * s).abs();
            let observed = r.deviations.interpolant_vs_closed_form;
            run.check(
                format!("impulse_deviation[{t}]"),
                format!("|s0(t) - s0(t)^2| = {} within 1e-6", num(expected)),
                num(observed),
                (observed - expected).abs() <= 1e-6,
            );
        }
        let audit = run.core(triple_sum_audit(t, 0.0, 0.0, l, w as u64))?;
        let s = sinc_kernel(0, l, t);
        let expected = (s - s * s).abs();
        run.check(
            format!("triple_sum[{t}, 0, 0]"),
            format!("gap {} within 1e-6", num(expected)),
            num(audit.gap),
            (audit.gap - expected).abs() <= 1e-6,
        );
    }
    let on_grid = run.core(triple_sum_audit(3.0 * l, 0.3 * l, -1.7 * l, l, w as u64))?;
    run.check(
        "triple_sum_on_grid",
        "gap at most 1e-10 when t is a grid time",
        num(on_grid.gap),
        on_grid.gap <= 1e-10,
    );

    let filling = run.core(band_filling(l, run.cfg.nonlinear.band_radius, run.seed))?;
    let bw = run.core(product_bandwidth(&filling))?;
    run.check(
        "square_out_of_band",
        "more than 1% of the squared signal's energy above pi / l",
        num(bw.square.out_of_band_fraction()),
        bw.square.out_of_band_fraction() > 0.01,
    );
    run.check(
        "signal_out_of_band",
        "below 1e-6 of the signal's energy above pi / l",
        num(bw.signal.out_of_band_fraction()),
        bw.signal.out_of_band_fraction() < 1e-6,
    );
    run.write("spectrum_square.csv", |out| write_pairs_csv(bw.square_spectrum.iter().copied(), out))?;

    let scales = run
        .cfg
        .nonlinear
        .sweep_scales
        .clone()
        .unwrap_or_else(|| vec![l, l / 2.0, l / 4.0, l / 8.0]);
    let l_max = scales.iter().copied().fold(0.0, f64::max);
    let func = BandLimitedFunction::SingleSinc {
        amplitude: 1.0,
        bandwidth: run.cfg.nonlinear.sweep_bandwidth.unwrap_or(0.8 * PI / l_max),
        center: 0.1,
    };
    let sweep = run.core(locality_deviation_sweep(&func, &scales, &SweepConfig::default()))?;
    let listed = sweep.iter().map(|p| num(p.deviation)).collect::<Vec<_>>().join(" ");
    run.check("locality_sweep", "decreasing as l shrinks (1e-3 slack)", listed, is_decreasing(&sweep, 1e-3));
    run.write("sweep.csv", |out| {
        writeln!(out, "scale,deviation,points")?;
        for p in &sweep {
            writeln!(out, "{},{},{}", p.scale, p.deviation, p.points_used)?;
        }
        Ok(())
    })?;

    if run.has_coupling() && run.cfg.init.is_some() {
        let traj = run.trajectory(run.cfg.steps)?;
        run.write("trajectory.csv", |out| write_trajectory_csv(&traj, out))?;
        constraint_check(run, &traj)?;
    }
    Ok(())
}
