use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use walker_env_cli::{execute, load, validate, CliError, Overrides};

#[derive(Parser)]
#[command(name = "walker-env", version, about = "Random walks in dynamic random environments: experiment runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment and write CSV and JSON artifacts.
    Run(Common),
    /// Check a config without simulating anything.
    Validate(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn overrides(&self) -> Overrides {
        Overrides {
            seed: self.seed,
            threads: self.threads,
            out: self.out.clone(),
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Validate(args) => {
            let config = load(&args.config, &args.overrides())?;
            let report = validate(&config)?;
            for line in &report.lines {
                println!("{line}");
            }
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            println!("ok");
            Ok(())
        }
        Command::Run(args) => {
            let overrides = args.overrides();
            let config = load(&args.config, &overrides)?;
            let outcome = execute(&config, overrides.out.as_deref())?;
            let failed = outcome.artifacts.failed_checks();
            if failed.is_empty() {
                println!("{}", outcome.artifacts.summary);
            } else {
                println!("{} [failed checks: {}]", outcome.artifacts.summary, failed.join(", "));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.to_exit()
        }
    }
}
