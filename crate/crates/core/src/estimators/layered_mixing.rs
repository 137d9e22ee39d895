//! Mixing of the layered environment at one site, measured by the
//! disagreement probability `P(η^{+1}_t ≠ η^{-1}_t)` of the extremal copies
//! under the shared-resampling coupling.

use crate::couplings::layered::{sample_extremal, uncoupled_probabilities, ExtremalSums};
use crate::environments::LayeredParams;
use crate::error::{Error, Result};
use crate::estimators::report::{MixingCurve, SlopeFit};
use crate::estimators::stats::{slope_fit_bootstrap, Moments};
use crate::parallel::{map_reduce, DEFAULT_BATCH};
use crate::rng::{Purpose, RngStream};

/// Bootstrap resamples for slope intervals.
pub const BOOTSTRAP_RESAMPLES: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LayeredMode {
    /// Monte Carlo average of the disagreement indicator.
    Indicator,
    /// Average of the disagreement probability conditional on everything
    /// except the value of layer 1 (exact integral over that value).
    Conditional,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayeredMixingReport {
    pub curve: MixingCurve,
    /// `Σ_n a_n (1 - b_n)^t`.
    pub bound: Vec<f64>,
    /// `Σ_k P(k is the first resampled layer) · E[uncoupled weight | k] / a_k
    ///  + P(no layer resampled)`, capped at 1.
    pub first_layer_bound: Vec<f64>,
    pub n_layers: usize,
    pub tail_mass: f64,
    /// `-(α - 1)/β`.
    pub expected_slope: f64,
}

fn disagreement(sums: &ExtremalSums, a1: f64, mode: LayeredMode) -> f64 {
    match (mode, sums.first_layer) {
        (LayeredMode::Conditional, Some(_)) => {
            // S = a1 V + R with V uniform on [-1, 1]; disagreement iff |S| < W
            // (up to a null set).
            let (r, w) = (sums.coupled_rest, sums.uncoupled_weight);
            let lo = ((-w - r) / a1).max(-1.0);
            let hi = ((w - r) / a1).min(1.0);
            ((hi - lo) / 2.0).max(0.0)
        }
        _ => {
            let (p, m) = sums.project(a1);
            f64::from(u8::from(p != m))
        }
    }
}

/// `Σ_n a_n u_n`.
pub fn weighted_uncoupled_sum(params: &LayeredParams, t: u64) -> f64 {
    params.a().iter().zip(uncoupled_probabilities(params, t)).map(|(a, u)| a * u).sum()
}

/// Conditioning on the first resampled layer `k`, layers before `k` are
/// uncoupled, layers after `k` are independently uncoupled with
/// probability `u_n`, and layer `k` carries a uniform value whose density
/// bounds the chance of landing in the disagreement interval.
pub fn first_layer_bound(params: &LayeredParams, t: u64) -> f64 {
    let a = params.a();
    let u = uncoupled_probabilities(params, t);
    let n = a.len();
    let mut suffix = vec![0.0; n + 1];
    for k in (0..n).rev() {
        suffix[k] = suffix[k + 1] + a[k] * u[k];
    }
    let mut none_before = 1.0;
    let mut prefix = 0.0;
    let mut total = 0.0;
    for k in 0..n {
        let first_here = none_before * (1.0 - u[k]);
        total += first_here * ((prefix + suffix[k + 1]) / a[k]).min(1.0);
        none_before *= u[k];
        prefix += a[k];
    }
    (total + none_before).min(1.0)
}

/// Log-log slope over the grid points in the largest decade `[t_max/10, t_max]`.
pub fn fit_largest_decade(grid: &[f64], values: &[f64], seed: u64) -> Option<SlopeFit> {
    let t_max = grid.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (x, y): (Vec<f64>, Vec<f64>) = grid
        .iter()
        .zip(values)
        .filter(|(t, v)| **t >= t_max / 10.0 && **v > 0.0 && **t > 0.0)
        .map(|(t, v)| (t.ln(), v.ln()))
        .unzip();
    if x.len() < 3 {
        return None;
    }
    let mut rng = RngStream::for_replica(seed, 0, 0, Purpose::Bootstrap).rng();
    slope_fit_bootstrap(&x, &y, BOOTSTRAP_RESAMPLES, &mut rng).ok()
}

/// Disagreement curve on `grid` from `replicas` exact samples per time.
pub fn layered_mixing(params: &LayeredParams, grid: &[u64], replicas: u64, mode: LayeredMode, master_seed: u64) -> Result<LayeredMixingReport> {
    if grid.is_empty() || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("time grid must be non-empty and strictly increasing".into()));
    }
    if replicas < 2 {
        return Err(Error::InvalidParameter("at least two replicas are required".into()));
    }
    let a1 = params.a()[0];
    let mut values = Vec::with_capacity(grid.len());
    let mut errors = Vec::with_capacity(grid.len());
    for (family, &t) in grid.iter().enumerate() {
        let u = uncoupled_probabilities(params, t);
        let m = map_reduce(
            replicas,
            DEFAULT_BATCH,
            |range| {
                let mut m = Moments::new();
                for r in range {
                    let mut rng = RngStream::for_replica(master_seed, family as u64, r, Purpose::Coupling).rng();
                    m.add(disagreement(&sample_extremal(params, &u, &mut rng), a1, mode));
                }
                m
            },
            |mut a, b| {
                a.merge(&b);
                a
            },
        )
        .expect("replicas > 0");
        values.push(m.mean());
        errors.push(m.se().max(f64::MIN_POSITIVE));
    }
    let grid_f: Vec<f64> = grid.iter().map(|&t| t as f64).collect();
    let fit = fit_largest_decade(&grid_f, &values, master_seed);
    Ok(LayeredMixingReport {
        curve: MixingCurve {
            grid: grid_f,
            values,
            errors,
            fit,
        },
        bound: grid.iter().map(|&t| weighted_uncoupled_sum(params, t)).collect(),
        first_layer_bound: grid.iter().map(|&t| first_layer_bound(params, t)).collect(),
        n_layers: params.n_layers(),
        tail_mass: params.tail_mass(),
        expected_slope: -(params.alpha() - 1.0) / params.beta(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let p = LayeredParams::new(3.0, 1.0, 30).unwrap();
        let grid = [4, 16];
        let ind = layered_mixing(&p, &grid, 40_000, LayeredMode::Indicator, 1).unwrap();
        let cond = layered_mixing(&p, &grid, 40_000, LayeredMode::Conditional, 2).unwrap();
        for (i, t) in grid.iter().enumerate() {
            let (a, b) = (ind.curve.values[i], cond.curve.values[i]);
            let se = (ind.curve.errors[i].powi(2) + cond.curve.errors[i].powi(2)).sqrt();
            assert!((a - b).abs() < 4.0 * se, "t={t} {a} vs {b}");
            assert!(cond.curve.errors[i] <= ind.curve.errors[i] * 1.05);
        }
    }

    #[test]
    fn first_layer_bound_dominates_estimate() {
        let p = LayeredParams::new(3.0, 1.0, 40).unwrap();
        let grid = [2, 8, 32];
        let r = layered_mixing(&p, &grid, 20_000, LayeredMode::Conditional, 3).unwrap();
        for i in 0..3 {
            assert!(r.curve.values[i] <= r.first_layer_bound[i] + 4.0 * r.curve.errors[i]);
        }
        assert!(r.curve.is_well_formed());
    }

    #[test]
    fn time_zero_always_disagrees() {
        let p = LayeredParams::new(3.0, 1.0, 5).unwrap();
        let r = layered_mixing(&p, &[0, 1], 100, LayeredMode::Indicator, 0).unwrap();
        assert_eq!(r.curve.values[0], 1.0);
        assert_eq!(r.first_layer_bound[0], 1.0);
    }

    #[test]
    fn bounds_decrease_in_time() {
        let p = LayeredParams::new(3.0, 1.0, 50).unwrap();
        let b: Vec<f64> = [1, 10, 100, 1000].iter().map(|&t| weighted_uncoupled_sum(&p, t)).collect();
        assert!(b.windows(2).all(|w| w[1] < w[0]));
        assert!((weighted_uncoupled_sum(&p, 0) - p.a().iter().sum::<f64>()).abs() < 1e-15);
    }
}
