use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use hca_cli::{exit_code, load_config_file, output_dir, resolve_seed, run_scenario, Scenario};

/// Run a Hamiltonian cellular automaton scenario.
#[derive(Debug, Parser)]
#[command(name = "hca", version)]
struct Cli {
    /// evolve, conserve-audit, stationarity, dispersion, sampling-demo or nonlinear-audit
    scenario: String,
    /// JSON scenario configuration
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides HCA_OUT and the config
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = (|| {
        let scenario = Scenario::parse(&cli.scenario)?;
        let cfg = load_config_file(&cli.config)?;
        let env = std::env::var_os("HCA_OUT").map(PathBuf::from);
        let out = output_dir(cli.out.as_deref(), env.as_deref(), &cfg);
        let seed = resolve_seed(cli.seed, &cfg);
        run_scenario(scenario, &cfg, seed, &out)
    })();
    match &result {
        Ok(report) => {
            for c in &report.checks {
                let mark = if c.pass { "pass" } else { "FAIL" };
                println!("{mark} {}: {}", c.name, c.observed);
            }
            println!("{}: {:?}", report.scenario, report.status);
        }
        Err(e) => eprintln!("hca: {e}"),
    }
    ExitCode::from(exit_code(&result) as u8)
}
