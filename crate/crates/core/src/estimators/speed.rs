//! Annealed law-of-large-numbers estimate of the speed `X_T / T`.

use crate::environments::EnvModel;
use crate::error::{Error, Result};
use crate::estimators::report::EstimatorReport;
use crate::estimators::stats::Moments;
use crate::lattice::TorusGeometry;
use crate::parallel::{map_reduce, DEFAULT_BATCH};
use crate::rng::{Purpose, RngStream};
use crate::walker::{CoSimulation, WalkKernel, WalkTables};

/// Per-coordinate mean of `X_T / T` over independent (environment, walk)
/// replicas, with standard errors.
pub fn speed_estimate(
    model: &EnvModel,
    geometry: &TorusGeometry,
    kernel: &WalkKernel,
    horizon: usize,
    replicas: u64,
    master_seed: u64,
) -> Result<EstimatorReport> {
    if horizon == 0 || replicas == 0 {
        return Err(Error::InvalidParameter("horizon and replicas must be positive".into()));
    }
    let dim = geometry.dim();
    let prepared = model.prepare(geometry)?;
    let tables = WalkTables::new(geometry, kernel, kernel.radius());
    let moments = map_reduce(
        replicas,
        DEFAULT_BATCH,
        |range| -> Result<Vec<Moments>> {
            let mut m = vec![Moments::new(); dim];
            for r in range {
                let mut sim = CoSimulation::new(
                    &prepared,
                    kernel,
                    &tables,
                    RngStream::for_replica(master_seed, 0, r, Purpose::Environment),
                    RngStream::for_replica(master_seed, 0, r, Purpose::Walker),
                )?;
                for _ in 0..horizon {
                    sim.step();
                }
                for (mi, &x) in m.iter_mut().zip(sim.position()) {
                    mi.add(x as f64 / horizon as f64);
                }
            }
            Ok(m)
        },
        |a, b| {
            let (mut a, b) = (a?, b?);
            a.iter_mut().zip(&b).for_each(|(x, y)| x.merge(y));
            Ok(a)
        },
    )
    .expect("replicas > 0")?;
    Ok(EstimatorReport {
        estimate: moments.iter().map(Moments::mean).collect(),
        std_error: moments.iter().map(Moments::se).collect(),
        replicas,
        master_seed,
        config_digest: String::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::environments::SiteChainSpec;
    use crate::lattice::JumpRange;

    #[test]
    fn blind_kernel_speed_is_its_drift() {
        let model = EnvModel::SiteChain(SiteChainSpec::two_state(0.2, 0.3).unwrap());
        let kernel = WalkKernel::environment_blind(1, 0, 2, JumpRange::nearest_neighbour(1), vec![0.2, 0.3, 0.5]).unwrap();
        let g = TorusGeometry::new(1, 41, 20).unwrap();
        let r = speed_estimate(&model, &g, &kernel, 20, 20_000, 3).unwrap();
        assert!((r.value() - 0.3).abs() < 4.0 * r.se(), "{r:?}");
    }

    #[test]
    fn rejects_empty_runs() {
        let model = EnvModel::SiteChain(SiteChainSpec::two_state(0.2, 0.3).unwrap());
        let kernel = WalkKernel::uniform(1, 2).unwrap();
        let g = TorusGeometry::new(1, 5, 1).unwrap();
        assert!(speed_estimate(&model, &g, &kernel, 0, 10, 0).is_err());
    }
}
