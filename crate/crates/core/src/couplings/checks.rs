//! Empirical checks of the DP and SDP couplings of a PCA, started from the
//! extremal pair `η¹ ≡ 0`, `η² ≡ 1` (so `ξ ≡ 1`).

use crate::couplings::graphical::{CouplingTriple, PcaCoupler, SdpParams};
use crate::couplings::percolation::Adjacency;
use crate::environments::{layer_uniforms, PcaSpec};
use crate::error::{Error, Result};
use crate::estimators::report::binomial_se;
use crate::estimators::stats::{chi_square_homogeneity, ChiSquareResult};
use crate::lattice::TorusGeometry;
use crate::parallel::{map_reduce, DEFAULT_BATCH};
use crate::rng::{Purpose, RngStream};

fn extremal_triple(n: usize) -> CouplingTriple {
    CouplingTriple::new(vec![0; n], vec![1; n]).expect("equal sizes")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DpCheckReport {
    pub site_updates: u64,
    pub open: u64,
    pub open_frequency: f64,
    pub std_error: f64,
    /// `c₊ - c₋`.
    pub expected: f64,
}

impl DpCheckReport {
    pub fn z_score(&self) -> f64 {
        (self.open_frequency - self.expected) / self.std_error
    }
}

/// Runs `replicas` DP couplings for `steps` steps. The invariant
/// `ξ = 0 ⇒ η¹ = η²` is checked after every update and a breach is an error.
pub fn dp_check(spec: &PcaSpec, geometry: &TorusGeometry, adjacency: Adjacency, steps: usize, replicas: u64, master_seed: u64) -> Result<DpCheckReport> {
    let coupler = PcaCoupler::new(geometry, spec, adjacency)?;
    let (c_minus, c_plus) = coupler.bounds();
    let (open, sites) = map_reduce(
        replicas,
        DEFAULT_BATCH,
        |range| -> Result<(u64, u64)> {
            let (mut open, mut sites) = (0u64, 0u64);
            for r in range {
                let stream = RngStream::for_replica(master_seed, 0, r, Purpose::Coupling);
                let mut triple = extremal_triple(geometry.num_sites());
                for t in 1..=steps {
                    let s = coupler.dp_step(&mut triple, &mut stream.layer(t as u64))?;
                    open += s.open;
                    sites += s.sites;
                }
            }
            Ok((open, sites))
        },
        |a, b| {
            let (a, b) = (a?, b?);
            Ok((a.0 + b.0, a.1 + b.1))
        },
    )
    .ok_or_else(|| Error::InvalidParameter("at least one replica is required".into()))??;
    let freq = open as f64 / sites as f64;
    Ok(DpCheckReport {
        site_updates: sites,
        open,
        open_frequency: freq,
        std_error: binomial_se(freq, sites),
        expected: c_plus - c_minus,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SdpCheckReport {
    pub p_star: f64,
    pub threshold_checks: u64,
    pub min_threshold: f64,
    pub max_threshold: f64,
    /// Correlation of `η¹(0)` and `ξ(0)` at the final time across replicas.
    pub correlation: f64,
    pub correlation_se: f64,
    /// Second copy against a direct simulation on the space-time window.
    pub marginal: ChiSquareResult,
    pub replicas: u64,
}

/// Appends the values at `sites` to a binary window code.
fn window_bits(layer: &[u8], sites: &[usize], code: &mut usize) {
    for &s in sites {
        *code = (*code << 1) | usize::from(layer[s] == 1);
    }
}

/// Runs `replicas` SDP couplings for `steps` steps and compares the law of
/// `η²` on the unit box around the origin over the last `window_steps`
/// steps with `replicas` direct simulations of the PCA from all ones.
pub fn sdp_check(spec: &PcaSpec, geometry: &TorusGeometry, adjacency: Adjacency, steps: usize, window_steps: usize, replicas: u64, master_seed: u64) -> Result<SdpCheckReport> {
    if window_steps == 0 || window_steps > steps {
        return Err(Error::InvalidParameter("window must cover between 1 and `steps` steps".into()));
    }
    let coupler = PcaCoupler::new(geometry, spec, adjacency)?;
    let sdp = SdpParams::from_spec(spec)?;
    let origin = geometry.origin();
    let table = geometry.neighbourhood(1);
    let cells = table.len() / geometry.num_sites();
    let window: Vec<usize> = table[origin * cells..(origin + 1) * cells].to_vec();
    let codes = 1usize << (cells * window_steps);
    let first_recorded = steps - window_steps + 1;
    let n = geometry.num_sites();

    struct Acc {
        coupled: Vec<u64>,
        direct: Vec<u64>,
        checks: u64,
        min_thr: f64,
        max_thr: f64,
        pairs: Vec<(f64, f64)>,
    }
    let acc = map_reduce(
        replicas,
        DEFAULT_BATCH,
        |range| -> Result<Acc> {
            let mut acc = Acc {
                coupled: vec![0; codes],
                direct: vec![0; codes],
                checks: 0,
                min_thr: f64::INFINITY,
                max_thr: f64::NEG_INFINITY,
                pairs: Vec::new(),
            };
            for r in range {
                let stream = RngStream::for_replica(master_seed, 0, r, Purpose::Coupling);
                let mut triple = extremal_triple(n);
                let mut code = 0usize;
                for t in 1..=steps {
                    let s = coupler.sdp_step(&mut triple, &sdp, &mut stream.layer(t as u64))?;
                    acc.checks += s.checks;
                    acc.min_thr = acc.min_thr.min(s.min_threshold);
                    acc.max_thr = acc.max_thr.max(s.max_threshold);
                    if t >= first_recorded {
                        window_bits(&triple.eta2, &window, &mut code);
                    }
                }
                acc.coupled[code] += 1;
                acc.pairs.push((f64::from(triple.eta1[origin]), f64::from(triple.xi[origin])));

                let stream = RngStream::for_replica(master_seed, 1, r, Purpose::Environment);
                let mut layer = vec![1u8; n];
                let mut code = 0usize;
                for t in 1..=steps {
                    let u = layer_uniforms(geometry, &mut stream.layer(t as u64), 1);
                    layer = spec.step(geometry, &layer, &u);
                    if t >= first_recorded {
                        window_bits(&layer, &window, &mut code);
                    }
                }
                acc.direct[code] += 1;
            }
            Ok(acc)
        },
        |a, b| {
            let (mut a, b) = (a?, b?);
            a.coupled.iter_mut().zip(&b.coupled).for_each(|(x, y)| *x += y);
            a.direct.iter_mut().zip(&b.direct).for_each(|(x, y)| *x += y);
            a.checks += b.checks;
            a.min_thr = a.min_thr.min(b.min_thr);
            a.max_thr = a.max_thr.max(b.max_thr);
            a.pairs.extend(b.pairs);
            Ok(a)
        },
    )
    .ok_or_else(|| Error::InvalidParameter("at least one replica is required".into()))??;
    let (xs, ys): (Vec<f64>, Vec<f64>) = acc.pairs.into_iter().unzip();
    let (correlation, correlation_se) = crate::estimators::stats::correlation(&xs, &ys);
    Ok(SdpCheckReport {
        p_star: sdp.p_star,
        threshold_checks: acc.checks,
        min_threshold: acc.min_thr,
        max_threshold: acc.max_thr,
        correlation,
        correlation_se,
        marginal: chi_square_homogeneity(&acc.coupled, &acc.direct)?,
        replicas,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dp_open_frequency_matches_bounds() {
        let spec = PcaSpec::ising(1, 0.1).unwrap();
        let g = TorusGeometry::new(1, 101, 100).unwrap();
        let r = dp_check(&spec, &g, Adjacency::Cross, 100, 2, 0).unwrap();
        assert_eq!(r.site_updates, 2 * 101 * 100);
        assert!(r.z_score().abs() < 4.0, "{r:?}");
    }

    #[test]
    fn sdp_contract_on_small_run() {
        let spec = PcaSpec::ising(1, 0.1).unwrap();
        let g = TorusGeometry::new(1, 11, 3).unwrap();
        let r = sdp_check(&spec, &g, Adjacency::Cross, 3, 3, 5000, 1).unwrap();
        assert!(r.min_threshold >= -1e-12 && r.max_threshold <= 1.0 + 1e-12);
        assert!(r.correlation.abs() < 4.0 * r.correlation_se, "{r:?}");
        assert!(r.marginal.p_value > 1e-4, "{r:?}");
        assert_eq!(r.threshold_checks, 5000 * 11 * 3);
    }

    #[test]
    fn window_longer_than_run_rejected() {
        let spec = PcaSpec::ising(1, 0.1).unwrap();
        let g = TorusGeometry::new(1, 11, 3).unwrap();
        assert!(sdp_check(&spec, &g, Adjacency::Cross, 2, 3, 10, 1).is_err());
    }
}
