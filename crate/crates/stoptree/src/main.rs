use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use stoptree::{config, runner};

/// Solve and train stopping strategies on a binomial lattice.
#[derive(Parser)]
#[command(name = "stoptree", version, about)]
struct Cli {
    /// Experiment config file (TOML).
    config: PathBuf,

    /// Override a config entry, e.g. --override solver.rng_seed=42
    /// (repeatable; dotted keys, TOML-literal values).
    #[arg(long = "override", value_name = "KEY=VALUE")]
    overrides: Vec<String>,

    /// Output directory (overrides output.directory).
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let text = match std::fs::read_to_string(&cli.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", cli.config.display());
            return ExitCode::from(2);
        }
    };
    let config = match config::load(&text, &cli.overrides) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match runner::run(&config, cli.out.as_deref()) {
        Ok(outcome) => {
            for line in outcome.lines {
                println!("{line}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
