//! Scenario runner: reads a JSON configuration, runs one scenario against
//! `hca-core`, and writes CSV time series plus a JSON report.

pub mod config;
pub mod report;
pub mod scenario;

use std::path::{Path, PathBuf};

pub use config::{load_config, load_config_file, Scenario, ScenarioConfig};
pub use report::{emit_report, Check, RunReport, Status};
pub use scenario::run_scenario;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RunError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("runtime error: {0}")]
    Runtime(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl RunError {
    /// 2 for configuration errors, 3 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Runtime(_) | RunError::Io(_) => 3,
        }
    }
}

pub const DEFAULT_OUT: &str = "hca-out";

/// `--out`, then `HCA_OUT`, then `output.dir` from the config, then
/// [`DEFAULT_OUT`].
pub fn output_dir(cli: Option<&Path>, env: Option<&Path>, cfg: &ScenarioConfig) -> PathBuf {
    cli.or(env)
        .map(Path::to_path_buf)
        .or_else(|| cfg.output.dir.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT))
}

/// `--seed`, then `seed` from the config, then 0.
pub fn resolve_seed(cli: Option<u64>, cfg: &ScenarioConfig) -> u64 {
    cli.or(cfg.seed).unwrap_or(0)
}

/// Process exit status for a finished run.
pub fn exit_code(result: &Result<RunReport, RunError>) -> i32 {
    match result {
        Ok(r) if r.passed() => 0,
        Ok(_) => 1,
        Err(e) => e.exit_code(),
    }
}
