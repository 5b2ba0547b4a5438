use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::config::ScenarioConfig;
use crate::RunError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, expected: impl Into<String>, observed: impl Into<String>, pass: bool) -> Self {
        Self {
            name: name.into(),
            expected: expected.into(),
            observed: observed.into(),
            pass,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Versions {
    pub cli: String,
    pub core: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub scenario: String,
    pub seed: u64,
    pub versions: Versions,
    /// The configuration with defaults applied.
    pub config: Option<ScenarioConfig>,
    pub checks: Vec<Check>,
    /// Files written next to the report, relative to the output directory.
    pub outputs: Vec<String>,
    pub status: Status,
}

impl RunReport {
    pub fn new(scenario: &str, seed: u64, config: Option<ScenarioConfig>) -> Self {
        Self {
            scenario: scenario.to_string(),
            seed,
            versions: Versions {
                cli: env!("CARGO_PKG_VERSION").to_string(),
                core: hca_core::VERSION.to_string(),
            },
            config,
            checks: Vec::new(),
            outputs: Vec::new(),
            status: Status::Pass,
        }
    }

    pub fn push(&mut self, check: Check) {
        if !check.pass {
            self.status = Status::Fail;
        }
        self.checks.push(check);
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report is always serializable");
        text.push('\n');
        text
    }
}

pub fn emit_report(report: &RunReport, path: &Path) -> Result<(), RunError> {
    let mut file = std::fs::File::create(path).map_err(|e| RunError::Io(format!("{}: {e}", path.display())))?;
    file.write_all(report.to_json().as_bytes())
        .map_err(|e| RunError::Io(format!("{}: {e}", path.display())))
}
