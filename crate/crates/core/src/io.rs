//! CSV import and export. Exact values are written as integers or `a/b`.

use std::io::{Read, Write};

use num_bigint::BigInt;
use num_complex::Complex64;

use crate::dynamics::{AutomatonState, HamiltonianSpec, Trajectory};
use crate::error::{Error, Result};
use crate::exact::parse_rational;
use crate::nonlinear::NonlocalityReport;
use crate::sampling::{SampledSignal, Spectrum};

fn parse_int(field: &str, what: &str) -> Result<BigInt> {
    field
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("{what}: `{field}` is not an integer")))
}

fn parse_f64(field: &str, what: &str) -> Result<f64> {
    field
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("{what}: `{field}` is not a number")))
}

/// Columns `n, x0, p0, x1, p1, ..., tau, pi`.
pub fn write_trajectory_csv<W: Write>(traj: &Trajectory, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let d = traj.spec().dim();
    let mut header = vec!["n".to_string()];
    for a in 0..d {
        header.push(format!("x{a}"));
        header.push(format!("p{a}"));
    }
    header.push("tau".into());
    header.push("pi".into());
    w.write_record(&header)?;
    for s in traj.states() {
        let mut row = vec![s.n.to_string()];
        for (x, p) in s.x.iter().zip(&s.p) {
            row.push(x.to_string());
            row.push(p.to_string());
        }
        row.push(s.tau.to_string());
        row.push(s.pi.to_string());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_trajectory_csv<R: Read>(input: R, spec: HamiltonianSpec) -> Result<Trajectory> {
    let mut r = csv::Reader::from_reader(input);
    let d = spec.dim();
    let width = 2 * d + 3;
    let header = r.headers()?.clone();
    if header.len() != width {
        return Err(Error::DimensionMismatch {
            what: "trajectory CSV columns",
            expected: width,
            found: header.len(),
        });
    }
    let mut states = Vec::new();
    for record in r.records() {
        let record = record?;
        let n: i64 = record[0]
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("n: `{}` is not an integer", &record[0])))?;
        let mut x = Vec::with_capacity(d);
        let mut p = Vec::with_capacity(d);
        for a in 0..d {
            x.push(parse_int(&record[1 + 2 * a], "x")?);
            p.push(parse_int(&record[2 + 2 * a], "p")?);
        }
        let state = AutomatonState::new(n, x, p)?
            .with_tau(parse_int(&record[width - 2], "tau")?)
            .with_pi(parse_rational(&record[width - 1])?);
        states.push(state);
    }
    Trajectory::new(states, spec)
}

/// Columns `n, t_n, re, im`.
pub fn write_signal_csv<W: Write>(sig: &SampledSignal, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "t_n", "re", "im"])?;
    for (n, v) in (sig.first()..).zip(sig.values()) {
        w.write_record([n.to_string(), sig.time(n).to_string(), v.re.to_string(), v.im.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads consecutive rows written by [`write_signal_csv`]; the scale is taken
/// from `t_n / n` and must be consistent across rows.
pub fn read_signal_csv<R: Read>(input: R) -> Result<SampledSignal> {
    let mut r = csv::Reader::from_reader(input);
    let mut first = None;
    let mut scale: Option<f64> = None;
    let mut values = Vec::new();
    let mut times = Vec::new();
    for record in r.records() {
        let record = record?;
        if record.len() != 4 {
            return Err(Error::Parse(format!("signal rows need 4 columns, found {}", record.len())));
        }
        let n: i64 = record[0]
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("n: `{}` is not an integer", &record[0])))?;
        let expected = first.map(|f: i64| f + values.len() as i64).unwrap_or(n);
        if n != expected {
            return Err(Error::NonConsecutive { first: expected - 1, second: n });
        }
        first.get_or_insert(n);
        let t = parse_f64(&record[1], "t_n")?;
        if n != 0 && scale.is_none() {
            scale = Some(t / n as f64);
        }
        times.push((n, t));
        values.push(Complex64::new(parse_f64(&record[2], "re")?, parse_f64(&record[3], "im")?));
    }
    let l = scale.ok_or_else(|| Error::Signal("cannot infer l from a signal sampled only at n = 0".into()))?;
    for (n, t) in times {
        if (t - n as f64 * l).abs() > 1e-9 * l.max(t.abs()) {
            return Err(Error::Signal(format!("t_n = {t} at n = {n} is inconsistent with l = {l}")));
        }
    }
    SampledSignal::new(first.unwrap_or(0), values, l)
}

/// Columns `omega, magnitude`.
pub fn write_spectrum_csv<W: Write>(spectrum: &Spectrum, out: W) -> Result<()> {
    write_pairs_csv(spectrum.omegas.iter().copied().zip(spectrum.magnitudes.iter().copied()), out)
}

pub fn write_pairs_csv<W: Write>(pairs: impl IntoIterator<Item = (f64, f64)>, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["omega", "magnitude"])?;
    for (o, m) in pairs {
        w.write_record([o.to_string(), m.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_nonlocality_csv<W: Write>(reports: &[NonlocalityReport], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "t",
        "interpolant_re",
        "interpolant_im",
        "closed_form_re",
        "closed_form_im",
        "square_re",
        "square_im",
        "interpolant_vs_closed_form",
        "interpolant_vs_square",
        "closed_form_vs_square",
        "window",
    ])?;
    for r in reports {
        let d = &r.deviations;
        let row = [
            r.t,
            r.interpolant_value.re,
            r.interpolant_value.im,
            r.closed_form_value.re,
            r.closed_form_value.im,
            r.pointwise_square.re,
            r.pointwise_square.im,
            d.interpolant_vs_closed_form,
            d.interpolant_vs_square,
            d.closed_form_vs_square,
            r.window,
        ];
        w.write_record(row.iter().map(f64::to_string))?;
    }
    w.flush()?;
    Ok(())
}
