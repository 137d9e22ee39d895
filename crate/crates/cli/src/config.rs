//! Experiment configuration: TOML with one table per concern and unknown keys
//! rejected.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    ExpansionCheck,
    MixingLayered,
    MixingOu,
    ContactRun,
    DpCheck,
    SdpCheck,
    Lln,
    Clt,
    EpGap,
    RnTable,
    Stability,
    PercolationSweep,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::ExpansionCheck => "expansion-check",
            Self::MixingLayered => "mixing-layered",
            Self::MixingOu => "mixing-ou",
            Self::ContactRun => "contact-run",
            Self::DpCheck => "dp-check",
            Self::SdpCheck => "sdp-check",
            Self::Lln => "lln",
            Self::Clt => "clt",
            Self::EpGap => "ep-gap",
            Self::RnTable => "rn-table",
            Self::Stability => "stability",
            Self::PercolationSweep => "percolation-sweep",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default = "default_replicas")]
    pub replicas: u64,
    /// Worker threads; 0 uses all cores. Never affects results.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geometry: Option<GeometryConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub env: Option<EnvConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel: Option<KernelConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expansion: Option<ExpansionConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mixing: Option<MixingConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coupling: Option<CouplingConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clt: Option<CltSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub walk: Option<WalkConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stability: Option<StabilityConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub percolation: Option<PercolationConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputConfig>,
}

fn default_replicas() -> u64 {
    10_000
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    pub dim: usize,
    /// Torus side; defaults to the smallest safe side for the run.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnvKind {
    SiteChain,
    Pca,
    Layered,
    Ou,
    Contact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PcaRule {
    Ising,
    Constant,
    Frozen,
    Table,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvConfig {
    pub kind: EnvKind,
    /// Site chain transition matrix.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transition: Option<Vec<Vec<f64>>>,
    /// Site chain stationary law; alone it gives a memoryless chain.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stationary: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule: Option<PcaRule>,
    /// Ising inverse temperature, or the layered resampling exponent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    /// Constant PCA update probability.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    /// PCA `c1` table indexed by the base-2 code of the 3^d patch.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub init_density: Option<f64>,
    /// PCA burn-in steps or contact burn-in time.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub burn_in: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layers: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    /// Contact process dimension before projection.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_dim: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelPreset {
    Uniform,
    Lazy,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelConfig {
    #[serde(default)]
    pub radius: usize,
    /// Jump set; defaults to the box `{y : |y|_inf <= 1}`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<Vec<Vec<i64>>>,
    /// One row per patch code, one column per jump.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rows: Option<Vec<Vec<f64>>>,
    /// CSV file with the rows, relative to the config file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rows_csv: Option<String>,
    /// Environment-blind jump law.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blind: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<KernelPreset>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpansionConfig {
    pub k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    /// Forward Monte Carlo replicas for comparison (0 skips it).
    #[serde(default)]
    pub mc_replicas: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MixingConfig {
    /// Time grid (layered: integers).
    pub grid: Vec<f64>,
    /// Layered: "indicator" or "conditional".
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    /// OU sign history `[[time, sign], ...]` with times <= 0.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conditioning: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub acceptance_floor: Option<f64>,
    /// OU reflection-coupling gaps; when set the run reports coupling tails
    /// on `grid` instead of sign mixing.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coupling_gaps: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coupling_horizon: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AdjacencyConfig {
    Cross,
    Box,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingConfig {
    pub steps: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub adjacency: Option<AdjacencyConfig>,
    /// SDP: number of final steps in the comparison window.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window_steps: Option<usize>,
    /// Percolation threshold used for the subcriticality verdict.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_c: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CltMode {
    Quenched,
    Annealed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CltSection {
    pub mode: CltMode,
    pub pilot_walks: u64,
    #[serde(default = "yes")]
    pub jitter: bool,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WalkConfig {
    /// Co-simulated steps before measuring.
    pub steps: usize,
    /// Observation window radius.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<usize>,
    /// Explicit window offsets (subset of the radius-`window` box).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offsets: Option<Vec<Vec<i64>>>,
    /// EP gap lags.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lags: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StabilityConfig {
    /// Member indices `n`; member `n` uses `(1 - 1/n) α + (1/n) α_mix`.
    pub members: Vec<u64>,
    /// Rows of the mixing kernel `α_mix` (same shape as the kernel).
    pub mix_rows: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PercolationConfig {
    pub grid: Vec<f64>,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub adjacency: Option<AdjacencyConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub critical_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<String>,
    /// Also write the simulated field as CSV (contact-run).
    #[serde(default)]
    pub write_field: bool,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(format!("{e}")))
    }

    /// Reads a config file and inlines any kernel CSV it references.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut config = Self::from_toml(&text)?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        config.inline_kernel_csv(&base)?;
        Ok(config)
    }

    pub fn inline_kernel_csv(&mut self, base: &Path) -> Result<(), CliError> {
        let Some(kernel) = self.kernel.as_mut() else {
            return Ok(());
        };
        let Some(file) = kernel.rows_csv.take() else {
            return Ok(());
        };
        if kernel.rows.is_some() {
            return Err(CliError::Config("kernel: give either `rows` or `rows_csv`, not both".into()));
        }
        let path: PathBuf = base.join(&file);
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_path(&path)
            .map_err(|e| CliError::Config(format!("kernel.rows_csv: cannot read {}: {e}", path.display())))?;
        let mut rows = Vec::new();
        for (i, record) in reader.records().enumerate() {
            let record = record.map_err(|e| CliError::Config(format!("kernel.rows_csv: {e}")))?;
            let row = record
                .iter()
                .map(|f| f.parse::<f64>())
                .collect::<Result<Vec<f64>, _>>()
                .map_err(|e| CliError::Config(format!("kernel.rows_csv: row {i}: {e}")))?;
            rows.push(row);
        }
        kernel.rows = Some(rows);
        Ok(())
    }

    pub fn to_toml(&self) -> Result<String, CliError> {
        toml::to_string(self).map_err(|e| CliError::Config(format!("cannot serialise config: {e}")))
    }

    /// SHA-256 of the canonical serialisation without the thread count and
    /// the output directory.
    pub fn digest(&self) -> Result<String, CliError> {
        let mut canonical = self.clone();
        canonical.threads = None;
        if let Some(o) = canonical.output.as_mut() {
            o.dir = None;
        }
        let text = canonical.to_toml()?;
        Ok(hex::encode(Sha256::digest(text.as_bytes())))
    }

    pub fn threads(&self) -> usize {
        self.threads.unwrap_or(0)
    }

    pub fn output_dir(&self) -> PathBuf {
        self.output
            .as_ref()
            .and_then(|o| o.dir.clone())
            .map_or_else(|| PathBuf::from("out"), PathBuf::from)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const LLN: &str = r#"
experiment = "lln"
master_seed = 7
replicas = 100
horizon = 10

[geometry]
dim = 1

[env]
kind = "site-chain"
transition = [[0.7, 0.3], [0.4, 0.6]]

[kernel]
blind = [0.2, 0.3, 0.5]
"#;

    #[test]
    fn round_trip_is_exact() {
        let c = ExperimentConfig::from_toml(LLN).unwrap();
        let text = c.to_toml().unwrap();
        let back = ExperimentConfig::from_toml(&text).unwrap();
        assert_eq!(c, back);
        assert_eq!(text, back.to_toml().unwrap());
    }

    #[test]
    fn unknown_keys_rejected_with_path() {
        let bad = LLN.replace("blind", "blindd");
        let err = ExperimentConfig::from_toml(&bad).unwrap_err().to_string();
        assert!(err.contains("blindd"), "{err}");
        let bad = format!("{LLN}\nmystery = 1\n");
        assert!(ExperimentConfig::from_toml(&bad).is_err());
    }

    #[test]
    fn digest_ignores_threads_only() {
        let a = ExperimentConfig::from_toml(LLN).unwrap();
        let mut b = a.clone();
        b.threads = Some(4);
        assert_eq!(a.digest().unwrap(), b.digest().unwrap());
        b.master_seed = 8;
        assert_ne!(a.digest().unwrap(), b.digest().unwrap());
    }
}
