//! Turns a parsed config into core objects, and the `validate` report.

use walker_env_core::couplings::{check_sdp_subcritical, ising_pca_threshold, Adjacency};
use walker_env_core::environments::layered::DEFAULT_TAIL_TOL;
use walker_env_core::environments::{ContactParams, EnvModel, LayeredParams, OUParams, PcaSpec, SiteChainSpec, DEFAULT_CONTACT_BURN_IN, DEFAULT_PCA_BURN_IN};
use walker_env_core::lattice::{safe_torus_side, JumpRange, TorusGeometry};
use walker_env_core::walker::{kernel_validate, KernelReport, WalkKernel};

use crate::config::{AdjacencyConfig, EnvConfig, EnvKind, ExperimentConfig, ExperimentKind, KernelConfig, KernelPreset, PcaRule};
use crate::error::CliError;

pub const DEFAULT_OU_DT: f64 = 0.01;

pub fn required<T: Clone>(value: &Option<T>, path: &str) -> Result<T, CliError> {
    value.clone().ok_or_else(|| CliError::Config(format!("missing key `{path}`")))
}

pub fn section<'a, T>(value: &'a Option<T>, path: &str) -> Result<&'a T, CliError> {
    value.as_ref().ok_or_else(|| CliError::Config(format!("missing section `[{path}]`")))
}

pub fn adjacency(a: Option<AdjacencyConfig>) -> Adjacency {
    match a {
        Some(AdjacencyConfig::Box) => Adjacency::Box,
        Some(AdjacencyConfig::Cross) | None => Adjacency::Cross,
    }
}

fn whole(v: f64, path: &str) -> Result<u64, CliError> {
    if v >= 0.0 && v.fract() == 0.0 && v < u64::MAX as f64 {
        Ok(v as u64)
    } else {
        Err(CliError::Config(format!("`{path}` must be a non-negative integer, got {v}")))
    }
}

pub fn pca_spec(env: &EnvConfig, dim: usize) -> Result<PcaSpec, CliError> {
    let spec = match required(&env.rule, "env.rule")? {
        PcaRule::Ising => PcaSpec::ising(dim, required(&env.beta, "env.beta")?),
        PcaRule::Constant => PcaSpec::constant(dim, required(&env.p, "env.p")?),
        PcaRule::Frozen => PcaSpec::frozen(dim),
        PcaRule::Table => PcaSpec::new(dim, required(&env.table, "env.table")?),
    };
    Ok(spec?)
}

pub fn layered_params(env: &EnvConfig) -> Result<LayeredParams, CliError> {
    let alpha = required(&env.alpha, "env.alpha")?;
    let beta = required(&env.beta, "env.beta")?;
    let params = match (env.layers, env.tail_tolerance) {
        (Some(_), Some(_)) => return Err(CliError::Config("env: give either `layers` or `tail_tolerance`, not both".into())),
        (Some(n), None) => LayeredParams::new(alpha, beta, n),
        (None, tol) => LayeredParams::with_tail_tolerance(alpha, beta, tol.unwrap_or(DEFAULT_TAIL_TOL)),
    };
    Ok(params?)
}

/// Environment model observed on a `dim`-dimensional lattice.
pub fn env_model(env: &EnvConfig, dim: usize) -> Result<EnvModel, CliError> {
    let model = match env.kind {
        EnvKind::SiteChain => {
            let spec = match (&env.transition, &env.stationary) {
                (Some(t), Some(pi)) => SiteChainSpec::new(t.clone(), pi.clone()),
                (Some(t), None) => SiteChainSpec::from_transition(t.clone()),
                (None, Some(pi)) => SiteChainSpec::memoryless(pi.clone()),
                (None, None) => return Err(CliError::Config("missing key `env.transition` (or `env.stationary`)".into())),
            }?;
            EnvModel::SiteChain(spec)
        }
        EnvKind::Pca => EnvModel::Pca {
            spec: pca_spec(env, dim)?,
            init_density: env.init_density.unwrap_or(0.5),
            burn_in: env.burn_in.map_or(Ok(DEFAULT_PCA_BURN_IN), |b| whole(b, "env.burn_in"))?,
        },
        EnvKind::Layered => EnvModel::Layered(layered_params(env)?),
        EnvKind::Ou => EnvModel::Ou(OUParams::new(env.dt.unwrap_or(DEFAULT_OU_DT))?),
        EnvKind::Contact => {
            let source = env.source_dim.unwrap_or(dim);
            if source < dim {
                return Err(CliError::Config(format!("`env.source_dim` = {source} is below the walk dimension {dim}")));
            }
            let projection = (source > dim).then_some(dim);
            EnvModel::Contact {
                params: ContactParams::new(required(&env.lambda, "env.lambda")?, projection)?,
                dim: source,
                burn_in: env.burn_in.unwrap_or(DEFAULT_CONTACT_BURN_IN),
            }
        }
    };
    Ok(model)
}

pub fn kernel(k: &KernelConfig, dim: usize, alphabet: u8) -> Result<WalkKernel, CliError> {
    let range = match &k.range {
        Some(jumps) => JumpRange::new(dim, jumps.clone())?,
        None => JumpRange::nearest_neighbour(dim),
    };
    let given = [k.rows.is_some(), k.blind.is_some(), k.preset.is_some()].iter().filter(|&&b| b).count();
    if given != 1 {
        return Err(CliError::Config("kernel: give exactly one of `rows`, `rows_csv`, `blind` or `preset`".into()));
    }
    let kernel = if let Some(rows) = &k.rows {
        WalkKernel::new(dim, k.radius, alphabet, range, rows.clone())
    } else if let Some(q) = &k.blind {
        WalkKernel::environment_blind(dim, k.radius, alphabet, range, q.clone())
    } else {
        match k.preset.expect("counted above") {
            KernelPreset::Uniform => WalkKernel::uniform(dim, alphabet),
            KernelPreset::Lazy => WalkKernel::lazy(dim, alphabet, range),
        }
    };
    kernel.map_err(|e| CliError::Config(format!("kernel: {e}")))
}

/// Number of co-simulated steps and the observation radius a walker
/// experiment needs on the torus.
pub fn walker_extent(config: &ExperimentConfig, kernel: &WalkKernel) -> Result<(usize, usize), CliError> {
    let window = config.walk.as_ref().and_then(|w| w.window).unwrap_or(1);
    let radius = kernel.radius().max(window);
    let steps = match config.experiment {
        ExperimentKind::Lln | ExperimentKind::Clt => required(&config.horizon, "horizon")?,
        ExperimentKind::ExpansionCheck => section(&config.expansion, "expansion")?.k,
        ExperimentKind::EpGap => {
            let walk = section(&config.walk, "walk")?;
            let lags = required(&walk.lags, "walk.lags")?;
            walk.steps + lags.iter().copied().max().unwrap_or(0)
        }
        ExperimentKind::RnTable | ExperimentKind::Stability => section(&config.walk, "walk")?.steps,
        _ => return Err(CliError::Config(format!("`{}` is not a walker experiment", config.experiment.name()))),
    };
    Ok((steps, radius))
}

pub fn is_walker_experiment(kind: ExperimentKind) -> bool {
    matches!(
        kind,
        ExperimentKind::ExpansionCheck | ExperimentKind::Lln | ExperimentKind::Clt | ExperimentKind::EpGap | ExperimentKind::RnTable | ExperimentKind::Stability
    )
}

/// Torus for a walker experiment. The side defaults to the smallest safe
/// side; a smaller explicit side is rejected with the required value.
pub fn walker_geometry(config: &ExperimentConfig, kernel: &WalkKernel) -> Result<TorusGeometry, CliError> {
    let g = section(&config.geometry, "geometry")?;
    let (steps, radius) = walker_extent(config, kernel)?;
    let safe = safe_torus_side(steps, radius, kernel.range());
    let side = g.side.unwrap_or(safe);
    if side < safe {
        return Err(CliError::Config(format!(
            "geometry.side = {side} is too small for {steps} steps at radius {radius}: need L >= {safe}"
        )));
    }
    Ok(TorusGeometry::new(g.dim, side, steps)?)
}

/// Torus for a field-level experiment; the side defaults to `2T + 3`.
pub fn field_geometry(config: &ExperimentConfig, steps: usize) -> Result<TorusGeometry, CliError> {
    let g = section(&config.geometry, "geometry")?;
    let side = g.side.unwrap_or(2 * steps + 3);
    Ok(TorusGeometry::new(g.dim, side, steps)?)
}

/// Walker experiment inputs.
pub struct WalkerSetup {
    pub model: EnvModel,
    pub kernel: WalkKernel,
    pub geometry: TorusGeometry,
}

pub fn walker_setup(config: &ExperimentConfig) -> Result<WalkerSetup, CliError> {
    let dim = section(&config.geometry, "geometry")?.dim;
    let model = env_model(section(&config.env, "env")?, dim)?;
    let kernel = kernel(section(&config.kernel, "kernel")?, dim, model.alphabet())?;
    let geometry = walker_geometry(config, &kernel)?;
    Ok(WalkerSetup { model, kernel, geometry })
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub lines: Vec<String>,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }
}

fn kernel_lines(report: &mut ValidationReport, k: &KernelReport) {
    report.line(format!("kernel.row_sums_ok = {}", k.row_sums_ok));
    report.line(format!("kernel.elliptic_time = {}", k.elliptic_time));
    report.line(format!("kernel.elliptic = {}", k.elliptic));
    report.line(format!("kernel.r_ok = {}", k.r_ok));
    report.line(format!("kernel.min_stay = {}", k.min_stay));
    report.line(format!("kernel.min_any = {}", k.min_any));
}

/// Full static validation; every error here is also a `run` error.
pub fn validate(config: &ExperimentConfig) -> Result<ValidationReport, CliError> {
    let mut report = ValidationReport::default();
    report.line(format!("experiment = {}", config.experiment.name()));
    report.line(format!("config_digest = {}", config.digest()?));
    if config.replicas == 0 {
        return Err(CliError::Config("`replicas` must be positive".into()));
    }
    if is_walker_experiment(config.experiment) {
        let setup = walker_setup(config)?;
        let (steps, radius) = walker_extent(config, &setup.kernel)?;
        let safe = safe_torus_side(steps, radius, setup.kernel.range());
        report.line(format!("geometry.side = {} (safe side for {steps} steps: {safe})", setup.geometry.side()));
        kernel_lines(&mut report, &kernel_validate(&setup.kernel));
        setup.model.prepare(&setup.geometry)?;
    } else if let (Some(env), Some(k)) = (&config.env, &config.kernel) {
        let dim = config.geometry.as_ref().map_or(1, |g| g.dim);
        let model = env_model(env, dim)?;
        kernel_lines(&mut report, &kernel_validate(&kernel(k, dim, model.alphabet())?));
    }
    if let Some(env) = &config.env {
        if env.kind == EnvKind::Pca {
            let dim = section(&config.geometry, "geometry")?.dim;
            let spec = pca_spec(env, dim)?;
            let (c_minus, c_plus) = spec.bounds();
            report.line(format!("pca.c_minus = {c_minus}"));
            report.line(format!("pca.c_plus = {c_plus}"));
            let p_c = config.coupling.as_ref().and_then(|c| c.p_c).unwrap_or(1.0);
            let sub = check_sdp_subcritical(c_minus, c_plus, p_c);
            match sub.p_star {
                Some(p) => report.line(format!("pca.p_star = {p}")),
                None => report.line("pca.p_star = undefined (c_minus = 0 or c_plus = 1)"),
            }
            if let (Some(s), Some(p_c)) = (sub.subcritical, config.coupling.as_ref().and_then(|c| c.p_c)) {
                report.line(format!("pca.subcritical (p_star < {p_c}) = {s}"));
            }
            if env.rule == Some(PcaRule::Ising) {
                let beta = required(&env.beta, "env.beta")?;
                let threshold = ising_pca_threshold(dim);
                report.line(format!("pca.ising_threshold = {threshold}"));
                if beta > threshold {
                    report.warnings.push(format!(
                        "env.beta = {beta} is above the Ising PCA threshold {threshold} for d = {dim}; the strong disagreement coupling may be supercritical"
                    ));
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(text: &str) -> ExperimentConfig {
        ExperimentConfig::from_toml(text).unwrap()
    }

    const BASE: &str = r#"
experiment = "lln"
horizon = 10

[geometry]
dim = 1

[env]
kind = "site-chain"
transition = [[0.7, 0.3], [0.4, 0.6]]
"#;

    #[test]
    fn lazy_kernel_is_elliptic_in_time_only() {
        let c = config(&format!("{BASE}\n[kernel]\npreset = \"lazy\"\n"));
        let r = validate(&c).unwrap();
        assert!(r.lines.contains(&"kernel.elliptic_time = true".to_string()));
        assert!(r.lines.contains(&"kernel.elliptic = false".to_string()));
    }

    #[test]
    fn undersized_side_names_required_side() {
        let c = config(&BASE.replace("dim = 1", "dim = 1\nside = 11").replace("[env]", "[kernel]\npreset = \"uniform\"\n\n[env]"));
        let err = validate(&c).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("need L >= 43"), "{err}");
    }

    #[test]
    fn ising_above_threshold_warns() {
        let text = r#"
experiment = "dp-check"

[geometry]
dim = 1

[env]
kind = "pca"
rule = "ising"
beta = 0.2

[coupling]
steps = 10
"#;
        let r = validate(&config(text)).unwrap();
        assert_eq!(r.warnings.len(), 1);
        let r = validate(&config(&text.replace("0.2", "0.05"))).unwrap();
        assert!(r.warnings.is_empty());
        assert!(r.lines.iter().any(|l| l.starts_with("pca.p_star = ")));
    }

    #[test]
    fn bad_row_names_patch() {
        let text = format!("{BASE}\n[kernel]\nrows = [[0.3, 0.3, 0.4], [0.3, 0.3, 0.3]]\n");
        let err = validate(&config(&text)).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("patch 1 sums to 0.900000000000"), "{err}");
    }
}
