//! Experiment dispatch: every kind maps config sections onto one core
//! estimator and turns its report into artifacts.

use serde_json::Value;
use walker_env_core::couplings::{check_sdp_subcritical, dp_check, estimate_threshold, sdp_check};
use walker_env_core::environments::{EnvModel, PcaSpec};
use walker_env_core::estimators::layered_mixing::first_layer_bound;
use walker_env_core::estimators::stats::Moments;
use walker_env_core::estimators::{
    clt_annealed, clt_quenched, ep_env_gap, ep_histogram, layered_mixing, ou_coupling_tails, ou_mixing, speed_estimate, stability, CltConfig, FamilyMember, LayeredMode, MixingCurve, RnTable, SignConstraint, SlopeFit,
};
use walker_env_core::expansion::{ExpansionInstance, DEFAULT_BUDGET};
use walker_env_core::lattice::{patch_offsets, CylinderEvent, TorusGeometry};
use walker_env_core::parallel::{map_reduce, DEFAULT_BATCH};
use walker_env_core::rng::{Purpose, RngStream};
use walker_env_core::walker::{kernel_validate, WalkKernel};

use crate::build::{self, required, section, WalkerSetup};
use crate::config::{CltMode, EnvKind, ExperimentConfig, ExperimentKind};
use crate::error::CliError;
use crate::output::{number, numbers, Artifacts, Row};

/// Default acceptance floor for OU sign conditioning.
pub const DEFAULT_ACCEPTANCE_FLOOR: f64 = 1e-3;
/// Tolerance of the exact partition identity.
pub const PARTITION_TOL: f64 = 1e-9;

pub fn run(config: &ExperimentConfig) -> Result<Artifacts, CliError> {
    build::validate(config)?;
    match config.experiment {
        ExperimentKind::ExpansionCheck => expansion_check(config),
        ExperimentKind::MixingLayered => mixing_layered(config),
        ExperimentKind::MixingOu => mixing_ou(config),
        ExperimentKind::ContactRun => contact_run(config),
        ExperimentKind::DpCheck => dp(config),
        ExperimentKind::SdpCheck => sdp(config),
        ExperimentKind::Lln => lln(config),
        ExperimentKind::Clt => clt(config),
        ExperimentKind::EpGap => ep_gap(config),
        ExperimentKind::RnTable => rn_table(config),
        ExperimentKind::Stability => stability_run(config),
        ExperimentKind::PercolationSweep => percolation_sweep(config),
    }
}

fn fit_metrics(a: &mut Artifacts, prefix: &str, fit: &Option<SlopeFit>) {
    match fit {
        Some(f) => {
            a.metric(&format!("{prefix}slope"), f.slope);
            a.metric(&format!("{prefix}slope_ci_low"), f.ci_low);
            a.metric(&format!("{prefix}slope_ci_high"), f.ci_high);
            a.metric_value(&format!("{prefix}slope_points"), Value::Number(f.points.into()));
        }
        None => a.metric_value(&format!("{prefix}slope"), Value::Null),
    }
}

fn curve_rows(a: &mut Artifacts, prefix: &str, curve: &MixingCurve, replicas: u64) {
    for ((t, v), e) in curve.grid.iter().zip(&curve.values).zip(&curve.errors) {
        a.rows.push(Row::new(format!("{prefix}{t}"), *v, *e, replicas));
    }
}

/// `eta(x1)=v1;eta(x2)=v2` with coordinates comma-separated.
pub fn event_key(event: &CylinderEvent) -> String {
    event
        .iter()
        .map(|(site, t, v)| {
            let x: Vec<String> = site.iter().map(i64::to_string).collect();
            format!("eta({};{t})={v}", x.join(","))
        })
        .collect::<Vec<_>>()
        .join("&")
}

/// Every single-site and two-site cylinder on the radius-`window` box at
/// time 0.
pub fn window_events(dim: usize, window: usize, alphabet: u8) -> Result<Vec<CylinderEvent>, CliError> {
    let offsets = patch_offsets(dim, window);
    let mut events = Vec::new();
    for (i, x) in offsets.iter().enumerate() {
        events.extend(CylinderEvent::all_on_support(&[(x.clone(), 0)], alphabet)?);
        for y in &offsets[i + 1..] {
            events.extend(CylinderEvent::all_on_support(&[(x.clone(), 0), (y.clone(), 0)], alphabet)?);
        }
    }
    Ok(events)
}

fn expansion_check(config: &ExperimentConfig) -> Result<Artifacts, CliError> {
    let exp = section(&config.expansion, "expansion")?;
    let WalkerSetup { model, kernel, geometry } = build::walker_setup(config)?;
    let EnvModel::SiteChain(chain) = &model else {
        return Err(CliError::Config("expansion-check needs `env.kind = \"site-chain\"`".into()));
    };
    let window = config.walk.as_ref().and_then(|w| w.window).unwrap_or(1);
    let instance = ExpansionInstance::new(chain.clone(), kernel.clone(), exp.k)?.with_budget(exp.budget.map_or(DEFAULT_BUDGET, u128::from));
    let mut a = Artifacts::default();
    let residual = instance.partition_check()?;
    a.rows.push(Row::exact("partition_residual", residual));
    a.metric("partition_residual", residual);
    a.metric_value("terms", Value::Number((instance.term_count() as u64).into()));
    a.check("partition_residual_below_1e-9", residual < PARTITION_TOL);

    let events = window_events(geometry.dim(), window, model.alphabet())?;
    let exact: Vec<f64> = events
        .iter()
        .map(|b| instance.exact_backward_law(b).map(|v| v.value))
        .collect::<walker_env_core::Result<_>>()?;
    for (b, v) in events.iter().zip(&exact) {
        a.rows.push(Row::exact(format!("exact:{}", event_key(b)), *v));
    }
    let mut max_z = 0.0f64;
    if exp.mc_replicas > 0 {
        let h = ep_histogram(&model, &geometry, &kernel, exp.k, window, exp.mc_replicas, config.master_seed, 0)?;
        for (b, v) in events.iter().zip(&exact) {
            let p = h.probability(b)?;
            a.rows.push(Row::new(format!("mc:{}", event_key(b)), p.ep, p.ep_se, exp.mc_replicas));
            max_z = max_z.max((p.ep - v).abs() / p.ep_se);
        }
        a.metric("max_abs_z", max_z);
        a.check("mc_within_3se", max_z <= 3.0);
    }
    a.summary = format!("expansion-check k={}: residual {residual:.3e}, {} events, max |z| {max_z:.3}", exp.k, events.len());
    Ok(a)
}

fn mixing_layered(config: &ExperimentConfig) -> Result<Artifacts, CliError> {
    let env = section(&config.env, "env")?;
    if env.kind != EnvKind::Layered {
        return Err(CliError::Config("mixing-layered needs `env.kind = \"layered\"`".into()));
    }
    let params = build::layered_params(env)?;
    let mixing = section(&config.mixing, "mixing")?;
    let grid = mixing
        .grid
        .iter()
        .map(|&t| if t >= 1.0 && t.fract() == 0.0 { Ok(t as u64) } else { Err(CliError::Config(format!("`mixing.grid` entries must be positive integers, got {t}"))) })
        .collect::<Result<Vec<u64>, _>>()?;
    let mode = match mixing.mode.as_deref() {
        None | Some("conditional") => LayeredMode::Conditional,
        Some("indicator") => LayeredMode::Indicator,
        Some(m) => return Err(CliError::Config(format!("`mixing.mode` must be \"indicator\" or \"conditional\", got {m:?}"))),
    };
    let r = layered_mixing(&params, &grid, config.replicas, mode, config.master_seed)?;
    let mut a = Artifacts::default();
    curve_rows(&mut a, "tv:t=", &r.curve, config.replicas);
    let mut below = true;
    for (i, t) in grid.iter().enumerate() {
        a.rows.push(Row::exact(format!("bound:t={t}"), r.bound[i]));
        a.rows.push(Row::exact(format!("first_layer_bound:t={t}"), first_layer_bound(&params, *t)));
        below &= r.curve.values[i] <= r.bound[i] + 3.0 * r.curve.errors[i];
    }
    fit_metrics(&mut a, "", &r.curve.fit);
    a.metric("expected_slope", r.expected_slope);
    a.metric_value("n_layers", Value::Number(r.n_layers.into()));
    a.metric("tail_mass", r.tail_mass);
    a.check("below_weighted_uncoupled_sum", below);
    a.summary = format!(
        "mixing-layered: N={}, slope {}, expected {:.4}",
        r.n_layers,
        r.curve.fit.map_or("n/a".into(), |f| format!("{:.4}", f.slope)),
        r.expected_slope
    );
    Ok(a)
}

fn mixing_ou(config: &ExperimentConfig) -> Result<Artifacts, CliError> {
    let mixing = section(&config.mixing, "mixing")?;
    let mut a = Artifacts::default();
    if let Some(gaps) = &mixing.coupling_gaps {
        let dt = config.env.as_ref().and_then(|e| e.dt).unwrap_or(build::DEFAULT_OU_DT);
        let horizon = required(&mixing.coupling_horizon, "mixing.coupling_horizon")?;
        let r = ou_coupling_tails(gaps, dt, horizon, &mixing.grid, config.replicas, config.master_seed)?;
        for (g, gap) in r.gaps.iter().enumerate() {
            for (j, x) in r.r_grid.iter().enumerate() {
                a.rows.push(Row::new(format!("tail:g={gap}:r={x}"), r.tails[g][j], r.errors[g][j], config.replicas));
            }
            fit_metrics(&mut a, &format!("g={gap}:"), &r.fits[g]);
        }
        a.metric_value("censored", numbers(&r.censored));
        let slopes: Vec<String> = r.fits.iter().map(|f| f.map_or("n/a".into(), |f| format!("{:.4}", f.slope))).collect();
        a.summary = format!("mixing-ou coupling tails: slopes [{}]", slopes.join(", "));
        return Ok(a);
    }
    let conditioning = mixing
        .conditioning
        .iter()
        .flatten()
        .map(|&[time, sign]| {
            if sign == 1.0 || sign == -1.0 {
                Ok(SignConstraint { time, sign: sign as i8 })
            } else {
                Err(CliError::Config(format!("`mixing.conditioning` signs must be +1 or -1, got {sign}")))
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    let floor = mixing.acceptance_floor.unwrap_or(DEFAULT_ACCEPTANCE_FLOOR);
    let r = ou_mixing(&conditioning, &mixing.grid, config.replicas, floor, config.master_seed)?;
    curve_rows(&mut a, "tv:t=", &r.curve, config.replicas);
    fit_metrics(&mut a, "", &r.curve.fit);
    a.metric("acceptance_rate", r.acceptance_rate);
    a.summary = format!(
        "mixing-ou: acceptance {:.4}, rate {}",
        r.acceptance_rate,
        r.curve.fit.map_or("n/a".into(), |f| format!("{:.4}", f.slope))
    );
    Ok(a)
}

fn contact_run(config: &ExperimentConfig) -> Result<Artifacts, CliError> {
    let horizon = required(&config.horizon, "horizon")?;
    let geometry = build::field_geometry(config, horizon)?;
    let env = section(&config.env, "env")?;
    if env.kind != EnvKind::Contact {
        return Err(CliError::Config("contact-run needs `env.kind = \"contact\"`".into()));
    }
    let model = build::env_model(env, geometry.dim())?;
    let density = |layer: &[u8]| layer.iter().map(|&v| f64::from(v)).sum::<f64>() / layer.len() as f64;
    let moments = map_reduce(
        config.replicas,
        DEFAULT_BATCH,
        |range| -> walker_env_core::Result<Vec<Moments>> {
            let mut m = vec![Moments::new(); horizon + 1];
            for r in range {
                let field = model.simulate(&geometry, horizon, RngStream::for_replica(config.master_seed, 0, r, Purpose::Environment))?;
                for (t, mt) in m.iter_mut().enumerate() {
                    mt.add(density(field.layer(t as i64)?));
                }
            }
            Ok(m)
        },
        |x, y| {
            let (mut x, y) = (x?, y?);
            x.iter_mut().zip(&y).for_each(|(a, b)| a.merge(b));
            Ok(x)
        },
    )
    .expect("replicas validated positive")?;
    let mut a = Artifacts::default();
    for (t, m) in moments.iter().enumerate() {
        a.rows.push(Row::new(format!("density:t={t}"), m.mean(), m.se(), config.replicas));
    }
    let means: Vec<f64> = moments.iter().map(Moments::mean).collect();
    a.metric_value("density", numbers(&means));
    if config.output.as_ref().is_some_and(|o| o.write_field) {
        let field = model.simulate(&geometry, horizon, RngStream::for_replica(config.master_seed, 0, 0, Purpose::Environment))?;
        let mut bytes = Vec::new();
        field.write_csv(&mut bytes)?;
        a.extra.push(("contact-run.field.csv".into(), bytes));
    }
    a.summary = format!("contact-run: density {:.6} at t=0, {:.6} at t={horizon}", means[0], means[horizon]);
    Ok(a)
}

fn pca_inputs(config: &ExperimentConfig) -> Result<(PcaSpec, TorusGeometry, usize), CliError> {
    let coupling = section(&config.coupling, "coupling")?;
    let geometry = build::field_geometry(config, coupling.steps)?;
    let env = section(&config.env, "env")?;
    if env.kind != EnvKind::Pca {
        return Err(CliError::Config(format!("{} needs `env.kind = \"pca\"`", config.experiment.name())));
    }
    Ok((build::pca_spec(env, geometry.dim())?, geometry, coupling.steps))
}

fn dp(config: &ExperimentConfig) -> Result<Artifacts, CliError> {
    let (spec, geometry, steps) = pca_inputs(config)?;
    let adjacency = build::adjacency(section(&config.coupling, "coupling")?.adjacency);
    let r = dp_check(&spec, &geometry, adjacency, steps, config.replicas, config.master_seed)?;
    let mut a = Artifacts::default();
    a.rows.push(Row::new("open_frequency", r.open_frequency, r.std_error, config.replicas));
    a.rows.push(Row::exact("c_plus_minus_c_minus", r.expected));
    a.metric_value("site_updates", Value::Number(r.site_updates.into()));
    a.metric("z_score", r.z_score());
    a.check("open_frequency_within_4se", r.z_score().abs() <= 4.0);
    a.summary = format!("dp-check: open frequency {:.6} vs {:.6} (z {:.3})", r.open_frequency, r.expected, r.z_score());
    Ok(a)
}

fn sdp(config: &ExperimentConfig) -> Result<Artifacts, CliError> {
    let (spec, geometry, steps) = pca_inputs(config)?;
    let coupling = section(&config.coupling, "coupling")?;
    let window_steps = coupling.window_steps.unwrap_or(steps.min(3));
    let r = sdp_check(&spec, &geometry, build::adjacency(coupling.adjacency), steps, window_steps, config.replicas, config.master_seed)?;
    let mut a = Artifacts::default();
    a.rows.push(Row::exact("p_star", r.p_star));
    a.rows.push(Row::new("correlation", r.correlation, r.correlation_se, config.replicas));
    a.rows.push(Row::exact("marginal_p_value", r.marginal.p_value));
    a.metric("min_threshold", r.min_threshold);
    a.metric("max_threshold", r.max_threshold);
    a.metric("chi_square", r.marginal.statistic);
    a.metric("chi_square_df", r.marginal.df);
    a.metric_value("threshold_checks", Value::Number(r.threshold_checks.into()));
    a.check("marginal_p_above_1e-3", r.marginal.p_value > 1e-3);
    if let Some(p_c) = coupling.p_c {
        let (c_minus, c_plus) = spec.bounds();
        let sub = check_sdp_subcritical(c_minus, c_plus, p_c);
        a.metric("p_c", p_c);
        a.metric_value("subcritical", sub.subcritical.map_or(Value::Null, Value::Bool));
    }
    a.summary = format!("sdp-check: p* {:.6}, marginal chi-square p {:.4}, corr {:.4}", r.p_star, r.marginal.p_value, r.correlation);
    Ok(a)
}

/// Drift of an environment-blind kernel, when it is one.
fn blind_drift(kernel: &WalkKernel) -> Option<Vec<f64>> {
    let first = kernel.rows().first()?;
    kernel.rows().iter().all(|r| r == first).then(|| kernel.drift(0))
}

fn lln(config: &ExperimentConfig) -> Result<Artifacts, CliError> {
    let WalkerSetup { model, kernel, geometry } = build::walker_setup(config)?;
    let horizon = required(&config.horizon, "horizon")?;
    let r = speed_estimate(&model, &geometry, &kernel, horizon, config.replicas, config.master_seed)?;
    let mut a = Artifacts::default();
    for (i, (v, e)) in r.estimate.iter().zip(&r.std_error).enumerate() {
        a.rows.push(Row::new(format!("v[{i}]"), *v, *e, config.replicas));
    }
    a.metric_value("speed", numbers(&r.estimate));
    if let Some(drift) = blind_drift(&kernel) {
        let ok = drift.iter().zip(r.estimate.iter().zip(&r.std_error)).all(|(d, (v, e))| (v - d).abs() <= 3.0 * e.max(f64::MIN_POSITIVE));
        a.metric_value("blind_drift", numbers(&drift));
        a.check("blind_drift_within_3se", ok);
    }
    let v: Vec<String> = r.estimate.iter().map(|v| format!("{v:.6}")).collect();
    a.summary = format!("lln: speed [{}] at T={horizon}", v.join(", "));
    Ok(a)
}

fn clt(config: &ExperimentConfig) -> Result<Artifacts, CliError> {
    let WalkerSetup { model, kernel, geometry } = build::walker_setup(config)?;
    let section = section(&config.clt, "clt")?;
    let horizon = required(&config.horizon, "horizon")?;
    let clt_config = CltConfig {
        horizon,
        walks: config.replicas,
        pilot_walks: section.pilot_walks,
        jitter: section.jitter,
    };
    let r = match section.mode {
        CltMode::Quenched => {
            let field = model.simulate(&geometry, horizon, RngStream::for_replica(config.master_seed, 0, 0, Purpose::Environment))?;
            clt_quenched(&field, &kernel, &clt_config, config.master_seed)?
        }
        CltMode::Annealed => clt_annealed(&model, &geometry, &kernel, &clt_config, config.master_seed)?,
    };
    let mut a = Artifacts::default();
    for i in 0..r.v_hat.len() {
        a.rows.push(Row::exact(format!("v_hat[{i}]"), r.v_hat[i]));
        a.rows.push(Row::exact(format!("variance[{i}]"), r.variance[i]));
        a.rows.push(Row::exact(format!("ks_statistic[{i}]"), r.ks_statistic[i]));
        a.rows.push(Row::exact(format!("ks_p_value[{i}]"), r.p_value[i]));
    }
    a.metric("min_p_value", r.min_p_value());
    a.metric_value("standardized_mean", numbers(&r.standardized_mean));
    a.metric_value("degenerate", Value::Array(r.degenerate.iter().map(|&d| Value::Bool(d)).collect()));
    a.check("ks_p_above_1e-2", r.min_p_value() > 1e-2);
    a.summary = format!("clt: {} walks, min KS p-value {:.4}", r.walks, r.min_p_value());
    Ok(a)
}

fn ep_gap(config: &ExperimentConfig) -> Result<Artifacts, CliError> {
    let WalkerSetup { model, kernel, geometry } = build::walker_setup(config)?;
    let walk = section(&config.walk, "walk")?;
    let lags = required(&walk.lags, "walk.lags")?;
    let r = ep_env_gap(&model, &geometry, &kernel, walk.steps, &lags, config.replicas, config.master_seed)?;
    let mut a = Artifacts::default();
    curve_rows(&mut a, "gap:l=", &r.curve, config.replicas);
    fit_metrics(&mut a, "", &r.curve.fit);
    a.summary = format!(
        "ep-gap: gap {:.5} at l={} down to {:.5} at l={}",
        r.curve.values[0],
        lags[0],
        r.curve.values[lags.len() - 1],
        lags[lags.len() - 1]
    );
    Ok(a)
}

fn rn_table(config: &ExperimentConfig) -> Result<Artifacts, CliError> {
    let WalkerSetup { model, kernel, geometry } = build::walker_setup(config)?;
    let walk = section(&config.walk, "walk")?;
    let window = walk.window.unwrap_or(1);
    let h = ep_histogram(&model, &geometry, &kernel, walk.steps, window, config.replicas, config.master_seed, 0)?;
    let table = match &walk.offsets {
        Some(offsets) => RnTable::on_offsets(&h, offsets)?,
        None => RnTable::from_histogram(&h),
    };
    let mut a = Artifacts::default();
    for cell in &table.cells {
        let key: Vec<String> = cell.values.iter().map(u8::to_string).collect();
        let se = match (cell.ratio, cell.ci) {
            (Some(r), Some((lo, hi))) => r * (hi / lo).ln() / (2.0 * 1.96),
            _ => f64::NAN,
        };
        a.rows.push(Row::new(format!("rn:{}", key.join("")), cell.ratio.unwrap_or(f64::NAN), se, config.replicas));
    }
    a.metric_value("max_ratio", table.max_ratio.map_or(Value::Null, number));
    a.metric_value("min_ratio", table.min_ratio.map_or(Value::Null, number));
    a.metric_value("sparse_cells", Value::Number(table.sparse_cells.into()));
    a.summary = format!(
        "rn-table: {} cells, ratio in [{}, {}], {} sparse",
        table.cells.len(),
        table.min_ratio.map_or("n/a".into(), |r| format!("{r:.4}")),
        table.max_ratio.map_or("n/a".into(), |r| format!("{r:.4}")),
        table.sparse_cells
    );
    Ok(a)
}

fn stability_run(config: &ExperimentConfig) -> Result<Artifacts, CliError> {
    let WalkerSetup { model, kernel, geometry } = build::walker_setup(config)?;
    let st = section(&config.stability, "stability")?;
    let walk = section(&config.walk, "walk")?;
    let window = walk.window.unwrap_or(1);
    let mix = WalkKernel::new(kernel.dim(), kernel.radius(), kernel.alphabet(), kernel.range().clone(), st.mix_rows.clone())
        .map_err(|e| CliError::Config(format!("stability.mix_rows: {e}")))?;
    if !kernel_validate(&mix).row_sums_ok {
        return Err(CliError::Config("stability.mix_rows: rows must sum to 1".into()));
    }
    let members = st
        .members
        .iter()
        .map(|&n| {
            if n == 0 {
                return Err(CliError::Config("`stability.members` entries must be positive".into()));
            }
            Ok(FamilyMember {
                label: n,
                model: model.clone(),
                kernel: kernel.mix(&mix, 1.0 / n as f64)?,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let limit = FamilyMember { label: 0, model: model.clone(), kernel };
    let events = patch_offsets(geometry.dim(), window)
        .into_iter()
        .map(|x| CylinderEvent::from_constraints([(x, 0, 1)]))
        .collect::<walker_env_core::Result<Vec<_>>>()?;
    let t = stability(&members, &limit, &geometry, walk.steps, window, &events, config.replicas, config.master_seed)?;
    let mut a = Artifacts::default();
    for (e, p) in events.iter().zip(&t.limit) {
        a.rows.push(Row::new(format!("limit:{}", event_key(e)), *p, f64::NAN, config.replicas));
    }
    let mut monotone = true;
    for (i, row) in t.rows.iter().enumerate() {
        a.rows.push(Row::exact(format!("kernel_distance:n={}", row.label), row.kernel_distance));
        a.rows.push(Row::new(format!("max_gap:n={}", row.label), row.max_gap, row.max_gap_se, config.replicas));
        if i > 0 {
            let prev = &t.rows[i - 1];
            monotone &= row.max_gap <= prev.max_gap + 3.0 * row.max_gap_se.hypot(prev.max_gap_se);
        }
    }
    let last = t.rows.last().ok_or_else(|| CliError::Config("`stability.members` is empty".into()))?;
    a.check("monotone_up_to_3se", monotone);
    a.check("final_gap_below_3se", last.max_gap < 3.0 * last.max_gap_se);
    a.summary = format!("stability: final gap {:.5} (se {:.5}) at n={}", last.max_gap, last.max_gap_se, last.label);
    Ok(a)
}

fn percolation_sweep(config: &ExperimentConfig) -> Result<Artifacts, CliError> {
    let perc = section(&config.percolation, "percolation")?;
    let horizon = required(&config.horizon, "horizon")?;
    let ratio = perc.critical_ratio.unwrap_or(0.9);
    let r = estimate_threshold(&perc.grid, horizon, config.replicas, build::adjacency(perc.adjacency), perc.dim, ratio, config.master_seed)?;
    let mut a = Artifacts::default();
    for (p, q) in r.grid.iter().zip(&r.ratios) {
        a.rows.push(Row::new(format!("survival_ratio:p={p}"), *q, f64::NAN, config.replicas));
    }
    a.metric("p_c", r.estimate);
    a.metric("p_c_lower", r.lower);
    a.metric("p_c_upper", r.upper);
    a.summary = format!("percolation-sweep: p_c ~ {:.4} in [{:.4}, {:.4}]", r.estimate, r.lower, r.upper);
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_events_count() {
        // 3 sites, 2 symbols: 3·2 single-site plus 3·4 two-site events.
        assert_eq!(window_events(1, 1, 2).unwrap().len(), 18);
    }

    #[test]
    fn event_keys_are_readable() {
        let e = CylinderEvent::from_constraints([(vec![-1], 0, 1), (vec![1], 0, 0)]).unwrap();
        assert_eq!(event_key(&e), "eta(-1;0)=1&eta(1;0)=0");
    }
}
