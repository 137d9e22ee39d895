//! Empirical law of the environment seen from the walker after `k` steps,
//! alongside the environment law at a fixed site, both read through a
//! radius-`W` window.

use crate::environments::EnvModel;
use crate::error::{Error, Result};
use crate::estimators::report::binomial_se;
use crate::lattice::{CylinderEvent, Patch, TorusGeometry};
use crate::parallel::{map_reduce, DEFAULT_BATCH};
use crate::rng::{Purpose, RngStream};
use crate::walker::{CoSimulation, WalkKernel, WalkTables};

/// Largest window histogram kept in memory.
pub const MAX_WINDOW_CODES: usize = 1 << 20;

/// Window-pattern counts at time `k`: around the walker (`ep`) and around
/// the origin (`env`), from the same replicas.
#[derive(Debug, Clone, PartialEq)]
pub struct EpHistogram {
    pub dim: usize,
    pub window: usize,
    pub alphabet: u8,
    pub steps: usize,
    pub replicas: u64,
    pub ep: Vec<u64>,
    pub env: Vec<u64>,
}

/// Probability of an event under both laws, with binomial errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventProbability {
    pub ep: f64,
    pub ep_se: f64,
    pub env: f64,
    pub env_se: f64,
}

impl EpHistogram {
    /// Window codes whose patch satisfies every constraint of `event`; the
    /// event must sit at time 0 inside the window.
    pub fn matching_codes(&self, event: &CylinderEvent) -> Result<Vec<usize>> {
        let w = self.window as i64;
        for (site, t, v) in event.iter() {
            if t != 0 || site.len() != self.dim || site.iter().any(|c| c.abs() > w) || v >= self.alphabet {
                return Err(Error::InvalidParameter(format!(
                    "event constraint at {site:?}, time {t} is outside the radius-{w} window at time 0"
                )));
            }
        }
        Ok((0..self.ep.len())
            .filter(|&code| {
                let p = Patch::from_code(self.dim, self.window, self.alphabet, code);
                event.iter().all(|(site, _, v)| p.at(site) == v)
            })
            .collect())
    }

    pub fn probability(&self, event: &CylinderEvent) -> Result<EventProbability> {
        let codes = self.matching_codes(event)?;
        let n = self.replicas;
        let ep = codes.iter().map(|&c| self.ep[c]).sum::<u64>() as f64 / n as f64;
        let env = codes.iter().map(|&c| self.env[c]).sum::<u64>() as f64 / n as f64;
        Ok(EventProbability {
            ep,
            ep_se: binomial_se(ep, n),
            env,
            env_se: binomial_se(env, n),
        })
    }
}

/// Co-simulates `replicas` independent (environment, walk) pairs for `steps`
/// steps and tallies the window patterns at the final time. Streams use
/// `family` so that different experiments can be made independent.
#[allow(clippy::too_many_arguments)]
pub fn ep_histogram(
    model: &EnvModel,
    geometry: &TorusGeometry,
    kernel: &WalkKernel,
    steps: usize,
    window: usize,
    replicas: u64,
    master_seed: u64,
    family: u64,
) -> Result<EpHistogram> {
    if replicas == 0 {
        return Err(Error::InvalidParameter("at least one replica is required".into()));
    }
    if model.alphabet() > kernel.alphabet() {
        return Err(Error::Shape("environment alphabet exceeds kernel alphabet".into()));
    }
    let alphabet = model.alphabet();
    let dim = geometry.dim();
    let codes = Patch::count(dim, window, alphabet)
        .filter(|&c| c <= MAX_WINDOW_CODES)
        .ok_or_else(|| Error::InvalidParameter(format!("window radius {window} has too many patterns")))?;
    let prepared = model.prepare(geometry)?;
    let tables = WalkTables::new(geometry, kernel, window);
    let origin = geometry.origin();
    let counts = map_reduce(
        replicas,
        DEFAULT_BATCH,
        |range| -> Result<(Vec<u64>, Vec<u64>)> {
            let mut ep = vec![0u64; codes];
            let mut env = vec![0u64; codes];
            for r in range {
                let mut sim = CoSimulation::new(
                    &prepared,
                    kernel,
                    &tables,
                    RngStream::for_replica(master_seed, family, r, Purpose::Environment),
                    RngStream::for_replica(master_seed, family, r, Purpose::Walker),
                )?;
                for _ in 0..steps {
                    sim.step();
                }
                ep[sim.window_code(alphabet)] += 1;
                env[tables.window_code(sim.env().observed(), origin, alphabet)] += 1;
            }
            Ok((ep, env))
        },
        |a, b| {
            let (mut a, b) = (a?, b?);
            a.0.iter_mut().zip(&b.0).for_each(|(x, y)| *x += y);
            a.1.iter_mut().zip(&b.1).for_each(|(x, y)| *x += y);
            Ok(a)
        },
    )
    .expect("replicas > 0")?;
    Ok(EpHistogram {
        dim,
        window,
        alphabet,
        steps,
        replicas,
        ep: counts.0,
        env: counts.1,
    })
}
