//! JSON scenario configuration.
//!
//! Integers may be given as JSON numbers or as strings (for values beyond
//! 64 bits); rationals and Gaussian integers as strings such as `"3/4"` or
//! `"2-i"`.

use std::fmt;
use std::path::Path;

use hca_core::exact::{parse_gaussian, parse_rational, GaussianInt, SquareMatrix};
use hca_core::{CouplingTensor, HamiltonianSpec, Lapse, Monomial, Remainder};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::RunError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    Evolve,
    ConserveAudit,
    Stationarity,
    Dispersion,
    SamplingDemo,
    NonlinearAudit,
}

impl Scenario {
    pub const ALL: [Scenario; 6] = [
        Scenario::Evolve,
        Scenario::ConserveAudit,
        Scenario::Stationarity,
        Scenario::Dispersion,
        Scenario::SamplingDemo,
        Scenario::NonlinearAudit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Evolve => "evolve",
            Scenario::ConserveAudit => "conserve-audit",
            Scenario::Stationarity => "stationarity",
            Scenario::Dispersion => "dispersion",
            Scenario::SamplingDemo => "sampling-demo",
            Scenario::NonlinearAudit => "nonlinear-audit",
        }
    }

    pub fn parse(name: &str) -> Result<Self, RunError> {
        Self::ALL.into_iter().find(|s| s.name() == name).ok_or_else(|| {
            let valid: Vec<_> = Self::ALL.iter().map(|s| s.name()).collect();
            RunError::Config(format!("unknown scenario `{name}`; valid scenarios: {}", valid.join(", ")))
        })
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An exact number written either as a JSON integer or as a string.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize, Serialize)]
#[serde(untagged)]
pub enum Exact {
    Int(i64),
    Text(String),
}

impl Exact {
    fn text(&self) -> String {
        match self {
            Exact::Int(v) => v.to_string(),
            Exact::Text(s) => s.clone(),
        }
    }

    pub fn integer(&self, field: &str) -> Result<BigInt, RunError> {
        match self {
            Exact::Int(v) => Ok(BigInt::from(*v)),
            Exact::Text(s) => s
                .trim()
                .parse()
                .map_err(|_| RunError::Config(format!("{field}: `{s}` is not an integer"))),
        }
    }

    pub fn rational(&self, field: &str) -> Result<BigRational, RunError> {
        parse_rational(&self.text()).map_err(|e| RunError::Config(format!("{field}: {e}")))
    }

    pub fn gaussian(&self, field: &str) -> Result<GaussianInt, RunError> {
        parse_gaussian(&self.text()).map_err(|e| RunError::Config(format!("{field}: {e}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize, Serialize)]
#[serde(untagged)]
pub enum LapseConfig {
    Constant(Exact),
    Schedule(ScheduleConfig),
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleConfig {
    pub first: i64,
    pub values: Vec<Exact>,
}

impl Default for LapseConfig {
    fn default() -> Self {
        LapseConfig::Constant(Exact::Int(1))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct MonomialConfig {
    pub coeff: Exact,
    pub x_powers: Vec<u32>,
    pub p_powers: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RemainderConfig {
    pub terms: Vec<MonomialConfig>,
    /// Times `n` at which the remainder is present; all times when absent.
    #[serde(default)]
    pub times: Option<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SpecConfig {
    #[serde(default)]
    pub dim: Option<usize>,
    pub s: Vec<Vec<Exact>>,
    /// Zero when absent.
    #[serde(default)]
    pub a: Option<Vec<Vec<Exact>>>,
    #[serde(default)]
    pub c: LapseConfig,
    /// Coupling tensor `M[a][b][g]` flattened in row-major order.
    #[serde(default)]
    pub m: Option<Vec<Exact>>,
    #[serde(default)]
    pub r: Option<RemainderConfig>,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct InitConfig {
    /// Time of the first state of the pair.
    #[serde(default)]
    pub n: i64,
    /// `psi` at `n` and `n + 1`, one Gaussian integer per component.
    pub psi: [Vec<Exact>; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeConfig {
    pub multipliers: Vec<u64>,
    /// Defaults to twice the number of multipliers.
    #[serde(default)]
    pub max_degree: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize, Serialize)]
#[serde(untagged)]
pub enum ObservableConfig {
    /// `identity`, `hamiltonian`, `hamiltonian^2` or `random-polynomial`.
    Named(String),
    Polynomial(PolynomialObservable),
    Matrix(MatrixObservable),
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct PolynomialObservable {
    pub name: String,
    /// Coefficients of `H^0, H^1, ...`.
    pub polynomial: Vec<Exact>,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixObservable {
    pub name: String,
    pub matrix: Vec<Vec<Exact>>,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct DispersionConfig {
    /// Eigenvalues of `H` when absent.
    #[serde(default)]
    pub epsilons: Option<Vec<f64>>,
    #[serde(default = "default_dispersion_steps")]
    pub steps: usize,
}

impl Default for DispersionConfig {
    fn default() -> Self {
        Self {
            epsilons: None,
            steps: default_dispersion_steps(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize, Default)]
#[serde(deny_unknown_fields)]
pub struct SamplingConfig {
    /// Off-grid evaluation times; eight points across the central half of
    /// the window when absent.
    #[serde(default)]
    pub times: Option<Vec<f64>>,
    /// Sample indices recovered by projection.
    #[serde(default = "default_projections")]
    pub projections: Vec<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum SignalKind {
    #[default]
    Impulse,
    BandFilling,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct NonlinearConfig {
    #[serde(default)]
    pub signal: SignalKind,
    /// Evaluation times; `l / 2` when absent.
    #[serde(default)]
    pub times: Option<Vec<f64>>,
    /// `l, l/2, l/4, l/8` when absent.
    #[serde(default)]
    pub sweep_scales: Option<Vec<f64>>,
    /// `0.8 pi / max(sweep_scales)` when absent.
    #[serde(default)]
    pub sweep_bandwidth: Option<f64>,
    /// Sample radius of the band-filling signal used for the bandwidth check.
    #[serde(default = "default_band_radius")]
    pub band_radius: usize,
}

impl Default for NonlinearConfig {
    fn default() -> Self {
        Self {
            signal: SignalKind::default(),
            times: None,
            sweep_scales: None,
            sweep_bandwidth: None,
            band_radius: default_band_radius(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize, Serialize, Default)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub dir: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    /// Must agree with the scenario given on the command line when present.
    #[serde(default)]
    pub scenario: Option<String>,
    pub spec: SpecConfig,
    #[serde(default)]
    pub init: Option<InitConfig>,
    #[serde(default = "default_steps")]
    pub steps: usize,
    #[serde(default = "default_l")]
    pub l: f64,
    #[serde(default = "default_window")]
    pub window: usize,
    /// `l / 2` when absent.
    #[serde(default)]
    pub quadrature_step: Option<f64>,
    #[serde(default = "default_deltas")]
    pub deltas: Vec<i64>,
    #[serde(default)]
    pub scheme: Option<SchemeConfig>,
    /// `identity, hamiltonian, hamiltonian^2, random-polynomial` when absent.
    #[serde(default)]
    pub observables: Option<Vec<ObservableConfig>>,
    #[serde(default)]
    pub dispersion: DispersionConfig,
    #[serde(default)]
    pub sampling: SamplingConfig,
    #[serde(default)]
    pub nonlinear: NonlinearConfig,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub seed: Option<u64>,
    /// Reject specs with an odd diagonal entry of `S`.
    #[serde(default)]
    pub strict: bool,
}

fn default_steps() -> usize {
    16
}

fn default_l() -> f64 {
    1.0
}

fn default_window() -> usize {
    10_000
}

fn default_deltas() -> Vec<i64> {
    vec![1, 2, 3]
}

fn default_dispersion_steps() -> usize {
    4096
}

fn default_projections() -> Vec<i64> {
    vec![0]
}

fn default_band_radius() -> usize {
    1024
}

pub fn load_config(text: &str) -> Result<ScenarioConfig, RunError> {
    let cfg: ScenarioConfig = serde_json::from_str(text).map_err(|e| RunError::Config(format!("config: {e}")))?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_config_file(path: &Path) -> Result<ScenarioConfig, RunError> {
    let text = std::fs::read_to_string(path).map_err(|e| RunError::Config(format!("{}: {e}", path.display())))?;
    load_config(&text)
}

fn matrix(rows: &[Vec<Exact>], field: &str) -> Result<SquareMatrix<BigInt>, RunError> {
    let rows = rows
        .iter()
        .enumerate()
        .map(|(r, row)| {
            row.iter()
                .enumerate()
                .map(|(c, v)| v.integer(&format!("{field}[{r}][{c}]")))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    SquareMatrix::from_rows(rows).map_err(|e| RunError::Config(format!("{field}: {e}")))
}

impl ScenarioConfig {
    /// Checks everything that can be checked without running the scenario.
    pub fn validate(&self) -> Result<(), RunError> {
        if let Some(name) = &self.scenario {
            Scenario::parse(name)?;
        }
        let spec = self.hamiltonian()?;
        if let Some(init) = &self.init {
            for (k, psi) in init.psi.iter().enumerate() {
                if psi.len() != spec.dim() {
                    return Err(RunError::Config(format!(
                        "init.psi[{k}]: expected {} components, found {}",
                        spec.dim(),
                        psi.len()
                    )));
                }
            }
            self.initial_psi()?;
        }
        if !(self.l.is_finite() && self.l > 0.0) {
            return Err(RunError::Config(format!("l: must be positive, got {}", self.l)));
        }
        if self.window < 2 {
            return Err(RunError::Config(format!("window: must be at least 2, got {}", self.window)));
        }
        if let Some(step) = self.quadrature_step {
            hca_core::sampling::Quadrature::from_step(step, self.l).map_err(|e| RunError::Config(format!("quadrature_step: {e}")))?;
        }
        if self.deltas.is_empty() || self.deltas.contains(&0) {
            return Err(RunError::Config("deltas: must be a nonempty list of nonzero integers".into()));
        }
        if let Some(s) = &self.scheme {
            hca_core::variational::solve_scheme(s.max_degree.unwrap_or(2 * s.multipliers.len() as u32), &s.multipliers)
                .map_err(|e| RunError::Config(format!("scheme: {e}")))?;
        }
        if let Some(obs) = &self.observables {
            for o in obs {
                self.observable_check(o, spec.dim())?;
            }
        }
        Ok(())
    }

    fn observable_check(&self, o: &ObservableConfig, dim: usize) -> Result<(), RunError> {
        match o {
            ObservableConfig::Named(name) => match name.as_str() {
                "identity" | "hamiltonian" | "hamiltonian^2" | "random-polynomial" => Ok(()),
                other => Err(RunError::Config(format!(
                    "observables: unknown observable `{other}`; expected identity, hamiltonian, hamiltonian^2 or random-polynomial"
                ))),
            },
            ObservableConfig::Polynomial(p) => {
                for (k, c) in p.polynomial.iter().enumerate() {
                    c.gaussian(&format!("observables.{}.polynomial[{k}]", p.name))?;
                }
                Ok(())
            }
            ObservableConfig::Matrix(m) => {
                if m.matrix.len() != dim || m.matrix.iter().any(|r| r.len() != dim) {
                    return Err(RunError::Config(format!("observables.{}: matrix must be {dim}x{dim}", m.name)));
                }
                for (r, row) in m.matrix.iter().enumerate() {
                    for (c, v) in row.iter().enumerate() {
                        v.gaussian(&format!("observables.{}.matrix[{r}][{c}]", m.name))?;
                    }
                }
                Ok(())
            }
        }
    }

    /// The spec described by the `spec` section.
    pub fn hamiltonian(&self) -> Result<HamiltonianSpec, RunError> {
        let cfg = &self.spec;
        let s = matrix(&cfg.s, "spec.s")?;
        let d = s.dim();
        if let Some(dim) = cfg.dim {
            if dim != d {
                return Err(RunError::Config(format!("spec.dim: {dim} does not match the {d}x{d} matrix S")));
            }
        }
        let a = match &cfg.a {
            Some(rows) => matrix(rows, "spec.a")?,
            None => SquareMatrix::zeros(d),
        };
        let mut spec = HamiltonianSpec::new(s, a).map_err(|e| RunError::Config(format!("spec: {e}")))?;
        let lapse = match &cfg.c {
            LapseConfig::Constant(c) => Lapse::Constant(c.integer("spec.c")?),
            LapseConfig::Schedule(s) => Lapse::Schedule {
                first: s.first,
                values: s
                    .values
                    .iter()
                    .enumerate()
                    .map(|(k, v)| v.integer(&format!("spec.c.values[{k}]")))
                    .collect::<Result<_, _>>()?,
            },
        };
        spec = spec.with_lapse(lapse);
        if let Some(m) = &cfg.m {
            let entries = m
                .iter()
                .enumerate()
                .map(|(k, v)| v.rational(&format!("spec.m[{k}]")))
                .collect::<Result<Vec<_>, _>>()?;
            let tensor = CouplingTensor::new(d, entries).map_err(|e| RunError::Config(format!("spec.m: {e}")))?;
            spec = spec.with_coupling(tensor).map_err(|e| RunError::Config(format!("spec.m: {e}")))?;
        }
        if let Some(r) = &cfg.r {
            let terms = r
                .terms
                .iter()
                .enumerate()
                .map(|(k, t)| {
                    Ok(Monomial {
                        coeff: t.coeff.integer(&format!("spec.r.terms[{k}].coeff"))?,
                        x_powers: t.x_powers.clone(),
                        p_powers: t.p_powers.clone(),
                    })
                })
                .collect::<Result<Vec<_>, RunError>>()?;
            let mut rem = Remainder::new(d, terms).map_err(|e| RunError::Config(format!("spec.r: {e}")))?;
            if let Some(times) = &r.times {
                rem = rem.at_times(times.iter().copied());
            }
            spec = spec.with_remainder(rem).map_err(|e| RunError::Config(format!("spec.r: {e}")))?;
        }
        if self.strict {
            spec.check_strict().map_err(|e| RunError::Config(format!("spec.s: {e}")))?;
        }
        Ok(spec)
    }

    pub fn initial_psi(&self) -> Result<Option<[Vec<GaussianInt>; 2]>, RunError> {
        let Some(init) = &self.init else {
            return Ok(None);
        };
        let conv = |k: usize| {
            init.psi[k]
                .iter()
                .enumerate()
                .map(|(a, v)| v.gaussian(&format!("init.psi[{k}][{a}]")))
                .collect::<Result<Vec<_>, _>>()
        };
        Ok(Some([conv(0)?, conv(1)?]))
    }

    pub fn observable_matrix(&self, m: &MatrixObservable) -> Result<SquareMatrix<GaussianInt>, RunError> {
        let rows = m
            .matrix
            .iter()
            .enumerate()
            .map(|(r, row)| {
                row.iter()
                    .enumerate()
                    .map(|(c, v)| v.gaussian(&format!("observables.{}.matrix[{r}][{c}]", m.name)))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        SquareMatrix::from_rows(rows).map_err(|e| RunError::Config(format!("observables.{}: {e}", m.name)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "spec": {"dim": 1, "s": [[1]], "a": [[0]]},
        "init": {"psi": [["1"], ["i"]]},
        "steps": 2
    }"#;

    #[test]
    fn minimal_config_gets_defaults() {
        let cfg = load_config(MINIMAL).unwrap();
        assert_eq!(cfg.window, 10_000);
        assert_eq!(cfg.deltas, vec![1, 2, 3]);
        assert_eq!(cfg.spec.c, LapseConfig::Constant(Exact::Int(1)));
        assert!(cfg.hamiltonian().unwrap().lapse().is_unit());
    }

    #[test]
    fn rejections_name_the_field() {
        let asym = r#"{"spec": {"s": [[0, 1], [2, 0]]}}"#;
        let err = load_config(asym).unwrap_err().to_string();
        assert!(err.contains("S"), "{err}");

        let unknown = r#"{"spec": {"s": [[1]]}, "stepz": 3}"#;
        let err = load_config(unknown).unwrap_err().to_string();
        assert!(err.contains("stepz") && err.contains("line"), "{err}");

        let scenario = r#"{"scenario": "walk", "spec": {"s": [[1]]}}"#;
        let err = load_config(scenario).unwrap_err().to_string();
        assert!(err.contains("evolve") && err.contains("nonlinear-audit"), "{err}");

        let bad_int = r#"{"spec": {"s": [["1/2"]]}}"#;
        assert!(load_config(bad_int).unwrap_err().to_string().contains("spec.s[0][0]"));

        let strict = r#"{"spec": {"s": [[1]]}, "strict": true}"#;
        assert!(load_config(strict).unwrap_err().to_string().contains("odd"));
    }

    #[test]
    fn big_and_rational_entries() {
        let cfg = load_config(
            r#"{"spec": {"s": [["123456789012345678901234567890"]], "m": ["1/4"]},
                "init": {"n": -1, "psi": [["2-3i"], [5]]}}"#,
        )
        .unwrap();
        let spec = cfg.hamiltonian().unwrap();
        assert_eq!(spec.s()[(0, 0)].to_string(), "123456789012345678901234567890");
        assert!(!spec.is_linear());
        let [a, b] = cfg.initial_psi().unwrap().unwrap();
        assert_eq!(a[0], hca_core::exact::gauss(2, -3));
        assert_eq!(b[0], hca_core::exact::gauss(5, 0));
    }
}
