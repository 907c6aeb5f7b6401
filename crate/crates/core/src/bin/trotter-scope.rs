use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use trotter_scope::experiments::{init_thread_pool, run_to_dir, Scenario, ScenarioConfig};
use trotter_scope::Error;

/// Exact Trotter errors and their bounds for spin chains.
#[derive(Parser)]
#[command(name = "trotter-scope", version)]
struct Cli {
    /// one-step, strong-weak, long-time, min-steps, induced-entropy or energy-entropy.
    scenario: String,
    /// JSON scenario configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory; defaults to the config's `output` field, then `.`.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Numerical(_) | Error::NotHermitian { .. } | Error::AnnihilatedState { .. } => 3,
        Error::Io(_) => 1,
        _ => 2,
    }
}

fn run(cli: &Cli) -> Result<PathBuf, Error> {
    let scenario: Scenario = cli.scenario.parse()?;
    let cfg = ScenarioConfig::from_file(&cli.config)?;
    init_thread_pool()?;
    let base = cli.config.parent();
    let out = cli
        .out
        .clone()
        .or_else(|| cfg.output.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    run_to_dir(scenario, &cfg, base, &out)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(path) => {
            println!("{}", path.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("trotter-scope: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
