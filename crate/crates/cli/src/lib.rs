//! Batch experiment runner for `walker-env-core`: TOML configs in, CSV and
//! JSON artifacts out.

pub mod build;
pub mod config;
pub mod error;
pub mod experiments;
pub mod output;

use std::path::{Path, PathBuf};

pub use build::{validate, ValidationReport};
pub use config::ExperimentConfig;
pub use error::CliError;
pub use output::Artifacts;

/// Command-line overrides applied on top of a config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
}

pub fn load(path: &Path, overrides: &Overrides) -> Result<ExperimentConfig, CliError> {
    let mut config = ExperimentConfig::load(path)?;
    if let Some(seed) = overrides.seed {
        config.master_seed = seed;
    }
    if let Some(threads) = overrides.threads {
        config.threads = Some(threads);
    }
    Ok(config)
}

/// Outcome of a completed run.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub artifacts: Artifacts,
    pub written: Vec<PathBuf>,
    pub digest: String,
}

/// Validates, runs on the configured number of threads and writes the
/// artifacts into `out` (or the config's output directory).
pub fn execute(config: &ExperimentConfig, out: Option<&Path>) -> Result<RunOutcome, CliError> {
    let digest = config.digest()?;
    let artifacts = walker_env_core::parallel::with_threads(config.threads(), || experiments::run(config))?;
    let dir = out.map_or_else(|| config.output_dir(), Path::to_path_buf);
    let written = output::write_artifacts(&dir, config.experiment.name(), &digest, config.master_seed, config.replicas, &artifacts)?;
    Ok(RunOutcome { artifacts, written, digest })
}
