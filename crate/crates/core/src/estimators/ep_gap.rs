//! Gap between the environment ahead of the walker and the stationary
//! environment. After `k` co-simulated steps the walker is frozen at `X_k`
//! and the environment keeps running; for each lag `l` on the grid the event
//! `{η_{k+l}(X_k + x) = 1}` is compared with the same event at a fixed site,
//! for every `x` in the unit box. The curve reports the largest gap.

use crate::environments::EnvModel;
use crate::error::{Error, Result};
use crate::estimators::report::{binomial_se, MixingCurve};
use crate::lattice::TorusGeometry;
use crate::parallel::{map_reduce, DEFAULT_BATCH};
use crate::rng::{Purpose, RngStream};
use crate::walker::{CoSimulation, WalkKernel, WalkTables};

#[derive(Debug, Clone, PartialEq)]
pub struct EpGapReport {
    pub curve: MixingCurve,
    /// Per lag, per offset: `(P̂ at the walker, P̂ at the fixed site)`.
    pub probabilities: Vec<Vec<(f64, f64)>>,
}

pub fn ep_env_gap(
    model: &EnvModel,
    geometry: &TorusGeometry,
    kernel: &WalkKernel,
    steps: usize,
    lags: &[usize],
    replicas: u64,
    master_seed: u64,
) -> Result<EpGapReport> {
    if lags.is_empty() || lags.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("lag grid must be non-empty and strictly increasing".into()));
    }
    if replicas == 0 {
        return Err(Error::InvalidParameter("at least one replica is required".into()));
    }
    let offsets = geometry.neighbourhood(1);
    let cells = offsets.len() / geometry.num_sites();
    let origin = geometry.origin();
    let fixed: Vec<usize> = (0..cells).map(|c| offsets[origin * cells + c]).collect();
    let prepared = model.prepare(geometry)?;
    let tables = WalkTables::new(geometry, kernel, kernel.radius());
    let l_max = *lags.last().expect("non-empty");
    let counts = map_reduce(
        replicas,
        DEFAULT_BATCH,
        |range| -> Result<Vec<(u64, u64)>> {
            let mut c = vec![(0u64, 0u64); lags.len() * cells];
            for r in range {
                let mut sim = CoSimulation::new(
                    &prepared,
                    kernel,
                    &tables,
                    RngStream::for_replica(master_seed, 0, r, Purpose::Environment),
                    RngStream::for_replica(master_seed, 0, r, Purpose::Walker),
                )?;
                for _ in 0..steps {
                    sim.step();
                }
                let here: Vec<usize> = (0..cells).map(|k| offsets[sim.site() * cells + k]).collect();
                let mut env = sim.env().clone();
                let mut next = 0;
                for l in 0..=l_max {
                    if l > 0 {
                        env.advance();
                    }
                    if lags[next] == l {
                        let layer = env.observed();
                        for k in 0..cells {
                            let e = &mut c[next * cells + k];
                            e.0 += u64::from(layer[here[k]] == 1);
                            e.1 += u64::from(layer[fixed[k]] == 1);
                        }
                        next += 1;
                    }
                }
            }
            Ok(c)
        },
        |a, b| {
            let (mut a, b) = (a?, b?);
            a.iter_mut().zip(&b).for_each(|(x, y)| {
                x.0 += y.0;
                x.1 += y.1;
            });
            Ok(a)
        },
    )
    .expect("replicas > 0")?;
    let n = replicas as f64;
    let mut values = Vec::new();
    let mut errors = Vec::new();
    let mut probabilities = Vec::new();
    for li in 0..lags.len() {
        let probs: Vec<(f64, f64)> = (0..cells)
            .map(|k| {
                let (a, b) = counts[li * cells + k];
                (a as f64 / n, b as f64 / n)
            })
            .collect();
        let (gap, se) = probs
            .iter()
            .map(|&(p, q)| ((p - q).abs(), (binomial_se(p, replicas).powi(2) + binomial_se(q, replicas).powi(2)).sqrt()))
            .fold((f64::NEG_INFINITY, 0.0), |acc, x| if x.0 > acc.0 { x } else { acc });
        values.push(gap);
        errors.push(se);
        probabilities.push(probs);
    }
    Ok(EpGapReport {
        curve: MixingCurve {
            grid: lags.iter().map(|&l| l as f64).collect(),
            values,
            errors,
            fit: None,
        },
        probabilities,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::environments::PcaSpec;
    use crate::lattice::JumpRange;

    #[test]
    fn memoryless_pca_has_no_gap_ahead() {
        let model = EnvModel::pca(PcaSpec::constant(1, 0.4).unwrap());
        let kernel = WalkKernel::new(1, 0, 2, JumpRange::nearest_neighbour(1), vec![vec![0.7, 0.2, 0.1], vec![0.1, 0.2, 0.7]]).unwrap();
        let g = TorusGeometry::new(1, 41, 15).unwrap();
        let r = ep_env_gap(&model, &g, &kernel, 5, &[1, 2, 4], 20_000, 2).unwrap();
        for (v, e) in r.curve.values.iter().zip(&r.curve.errors) {
            assert!(*v < 4.0 * e, "{r:?}");
        }
    }

    #[test]
    fn state_dependent_walk_sees_a_biased_present() {
        // Lag 0: the walker's site is biased by where it jumped.
        let model = EnvModel::pca(PcaSpec::ising(1, 0.3).unwrap());
        let kernel = WalkKernel::new(1, 0, 2, JumpRange::nearest_neighbour(1), vec![vec![0.8, 0.1, 0.1], vec![0.1, 0.1, 0.8]]).unwrap();
        let g = TorusGeometry::new(1, 41, 15).unwrap();
        let model = match model {
            EnvModel::Pca { spec, .. } => EnvModel::Pca {
                spec,
                init_density: 0.5,
                burn_in: 50,
            },
            m => m,
        };
        let r = ep_env_gap(&model, &g, &kernel, 5, &[0, 8], 20_000, 3).unwrap();
        assert!(r.curve.values[0] > 4.0 * r.curve.errors[0], "{r:?}");
        assert!(r.curve.values[1] < r.curve.values[0]);
    }
}
