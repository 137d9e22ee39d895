//! Central-limit diagnostics for the walker.
//!
//! The quenched mode fixes one stored environment and runs many walks on it;
//! the annealed mode draws a fresh environment per walk. Endpoints are
//! centred with a pilot speed estimate from independent walks, optionally
//! smoothed by a uniform jitter in `[-½, ½]^d`, scaled per coordinate by the
//! empirical standard deviation and compared with `N(0, 1)` by a KS test.

use crate::environments::EnvModel;
use crate::error::{Error, Result};
use crate::estimators::stats::{ks_standard_normal, Moments};
use crate::lattice::{SpaceTimeField, TorusGeometry};
use crate::parallel::{map_reduce, DEFAULT_BATCH};
use crate::rng::{uniform_oc, Purpose, RngStream};
use crate::walker::{CoSimulation, WalkKernel, WalkTables};

/// Variance below which a coordinate is reported as degenerate.
pub const DEGENERATE_VARIANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CltConfig {
    pub horizon: usize,
    pub walks: u64,
    pub pilot_walks: u64,
    pub jitter: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CltReport {
    pub walks: u64,
    /// Pilot speed used for centring.
    pub v_hat: Vec<f64>,
    /// Empirical variance of `(X_N - N v̂) / √N` per coordinate.
    pub variance: Vec<f64>,
    /// Mean of the standardised endpoints per coordinate.
    pub standardized_mean: Vec<f64>,
    pub ks_statistic: Vec<f64>,
    pub p_value: Vec<f64>,
    pub degenerate: Vec<bool>,
}

impl CltReport {
    pub fn min_p_value(&self) -> f64 {
        self.p_value.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

fn walk_on_field(field: &SpaceTimeField, kernel: &WalkKernel, tables: &WalkTables, horizon: usize, stream: &RngStream) -> Result<Vec<i64>> {
    let g = field.geometry();
    let mut rng = stream.rng();
    let mut site = g.origin();
    let mut x = vec![0i64; g.dim()];
    for t in 0..horizon {
        let layer = field.layer(t as i64)?;
        let code = tables.kernel_code(layer, site, kernel.alphabet());
        let j = kernel.sample_index(code, uniform_oc(&mut rng));
        site = tables.jump(site, j);
        for (a, b) in x.iter_mut().zip(kernel.range().get(j)) {
            *a += b;
        }
    }
    Ok(x)
}

fn collect_endpoints<F>(walks: u64, family: u64, endpoint: F) -> Result<Vec<Vec<i64>>>
where
    F: Fn(u64, u64) -> Result<Vec<i64>> + Sync,
{
    map_reduce(
        walks,
        DEFAULT_BATCH,
        |range| range.map(|r| endpoint(family, r)).collect::<Result<Vec<_>>>(),
        |a, b| {
            let (mut a, b) = (a?, b?);
            a.extend(b);
            Ok(a)
        },
    )
    .ok_or_else(|| Error::InvalidParameter("at least one walk is required".into()))?
}

fn diagnose(config: &CltConfig, pilot: &[Vec<i64>], endpoints: &[Vec<i64>], master_seed: u64) -> CltReport {
    let n = config.horizon as f64;
    let dim = endpoints[0].len();
    let v_hat: Vec<f64> = (0..dim)
        .map(|i| pilot.iter().map(|x| x[i] as f64).sum::<f64>() / (pilot.len() as f64 * n))
        .collect();
    let mut report = CltReport {
        walks: endpoints.len() as u64,
        v_hat: v_hat.clone(),
        variance: Vec::new(),
        standardized_mean: Vec::new(),
        ks_statistic: Vec::new(),
        p_value: Vec::new(),
        degenerate: Vec::new(),
    };
    for i in 0..dim {
        let ys: Vec<f64> = endpoints
            .iter()
            .enumerate()
            .map(|(w, x)| {
                let jitter = if config.jitter {
                    let mut rng = RngStream::for_replica(master_seed, i as u64, w as u64, Purpose::Jitter).rng();
                    uniform_oc(&mut rng) - 0.5
                } else {
                    0.0
                };
                (x[i] as f64 + jitter - n * v_hat[i]) / n.sqrt()
            })
            .collect();
        let m: Moments = ys.iter().copied().collect();
        let var = m.variance();
        report.variance.push(var);
        if var < DEGENERATE_VARIANCE {
            report.degenerate.push(true);
            report.standardized_mean.push(0.0);
            report.ks_statistic.push(f64::NAN);
            report.p_value.push(f64::NAN);
            continue;
        }
        let sd = var.sqrt();
        let zs: Vec<f64> = ys.iter().map(|y| y / sd).collect();
        let (d, p) = ks_standard_normal(&zs);
        report.degenerate.push(false);
        report.standardized_mean.push(m.mean() / sd);
        report.ks_statistic.push(d);
        report.p_value.push(p);
    }
    report
}

fn check(config: &CltConfig) -> Result<()> {
    if config.horizon == 0 || config.walks < 2 || config.pilot_walks == 0 {
        return Err(Error::InvalidParameter(
            "CLT needs a positive horizon, at least two walks and a pilot".into(),
        ));
    }
    Ok(())
}

/// Walks on one fixed environment realisation, which must cover times
/// `0..horizon`.
pub fn clt_quenched(field: &SpaceTimeField, kernel: &WalkKernel, config: &CltConfig, master_seed: u64) -> Result<CltReport> {
    check(config)?;
    if field.t_lo() > 0 || field.t_hi() < config.horizon as i64 - 1 {
        return Err(Error::OutOfWindow {
            lo: 0,
            hi: config.horizon as i64 - 1,
            stored_lo: field.t_lo(),
            stored_hi: field.t_hi(),
        });
    }
    if field.geometry().dim() != kernel.dim() {
        return Err(Error::Dimension("field and kernel dimensions differ".into()));
    }
    let tables = WalkTables::new(field.geometry(), kernel, kernel.radius());
    let run = |family: u64, r: u64| {
        let purpose = if family == 0 { Purpose::Walker } else { Purpose::Pilot };
        walk_on_field(field, kernel, &tables, config.horizon, &RngStream::for_replica(master_seed, family, r, purpose))
    };
    let pilot = collect_endpoints(config.pilot_walks, 1, run)?;
    let endpoints = collect_endpoints(config.walks, 0, run)?;
    Ok(diagnose(config, &pilot, &endpoints, master_seed))
}

/// A fresh environment draw for every walk.
pub fn clt_annealed(model: &EnvModel, geometry: &TorusGeometry, kernel: &WalkKernel, config: &CltConfig, master_seed: u64) -> Result<CltReport> {
    check(config)?;
    let prepared = model.prepare(geometry)?;
    let tables = WalkTables::new(geometry, kernel, kernel.radius());
    let run = |family: u64, r: u64| -> Result<Vec<i64>> {
        let mut sim = CoSimulation::new(
            &prepared,
            kernel,
            &tables,
            RngStream::for_replica(master_seed, family, r, Purpose::Environment),
            RngStream::for_replica(master_seed, family, r, Purpose::Walker),
        )?;
        for _ in 0..config.horizon {
            sim.step();
        }
        Ok(sim.position().to_vec())
    };
    let pilot = collect_endpoints(config.pilot_walks, 1, run)?;
    let endpoints = collect_endpoints(config.walks, 0, run)?;
    Ok(diagnose(config, &pilot, &endpoints, master_seed))
}
