//! Empirical Radon-Nikodym ratio of the environment seen from the walker
//! against the environment at a fixed site, cell by cell on a window.

use crate::environments::EnvModel;
use crate::error::{Error, Result};
use crate::estimators::ep_law::{ep_histogram, EpHistogram};
use crate::lattice::{patch_offsets, Patch, TorusGeometry};
use crate::walker::WalkKernel;

/// Cells with fewer expected hits than this are reported but excluded from
/// the extremes.
pub const MIN_EXPECTED_HITS: f64 = 100.0;

#[derive(Debug, Clone, PartialEq)]
pub struct RnCell {
    /// Values at the table's offsets.
    pub values: Vec<u8>,
    pub ep_count: u64,
    pub env_count: u64,
    /// `P̂_EP / P̂`, undefined when the reference cell is empty.
    pub ratio: Option<f64>,
    /// 95% interval from the delta method on `ln ratio`.
    pub ci: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RnTable {
    pub offsets: Vec<Vec<i64>>,
    pub replicas: u64,
    pub cells: Vec<RnCell>,
    /// Extremes over cells with enough expected hits.
    pub max_ratio: Option<f64>,
    pub min_ratio: Option<f64>,
    pub sparse_cells: usize,
}

impl RnTable {
    /// Table over every cylinder on the full window of the histogram.
    pub fn from_histogram(h: &EpHistogram) -> Self {
        Self::build(patch_offsets(h.dim, h.window), h.replicas, h.alphabet, h.ep.clone(), h.env.clone())
    }

    /// Table over the cylinders on `offsets`, a subset of the histogram's
    /// window, obtained by marginalising the counts.
    pub fn on_offsets(h: &EpHistogram, offsets: &[Vec<i64>]) -> Result<Self> {
        let w = h.window as i64;
        if offsets.iter().any(|o| o.len() != h.dim || o.iter().any(|c| c.abs() > w)) {
            return Err(Error::OutOfWindow {
                lo: -w,
                hi: w,
                stored_lo: -w,
                stored_hi: w,
            });
        }
        let size = (h.alphabet as usize).pow(offsets.len() as u32);
        let mut ep = vec![0u64; size];
        let mut env = vec![0u64; size];
        for code in 0..h.ep.len() {
            let p = Patch::from_code(h.dim, h.window, h.alphabet, code);
            let c = offsets.iter().fold(0usize, |acc, o| acc * h.alphabet as usize + p.at(o) as usize);
            ep[c] += h.ep[code];
            env[c] += h.env[code];
        }
        Ok(Self::build(offsets.to_vec(), h.replicas, h.alphabet, ep, env))
    }

    fn build(offsets: Vec<Vec<i64>>, replicas: u64, alphabet: u8, ep: Vec<u64>, env: Vec<u64>) -> Self {
        let n = replicas as f64;
        let mut cells = Vec::with_capacity(ep.len());
        let mut max_ratio: Option<f64> = None;
        let mut min_ratio: Option<f64> = None;
        let mut sparse = 0;
        for (code, (&a, &b)) in ep.iter().zip(&env).enumerate() {
            let (ratio, ci) = if b == 0 {
                (None, None)
            } else {
                let r = (a as f64 / n) / (b as f64 / n);
                let ci = (a > 0).then(|| {
                    let s = (1.0 / a as f64 - 1.0 / n + 1.0 / b as f64 - 1.0 / n).max(0.0).sqrt();
                    (r * (-1.96 * s).exp(), r * (1.96 * s).exp())
                });
                (Some(r), ci)
            };
            if (b as f64) < MIN_EXPECTED_HITS {
                sparse += 1;
            } else if let Some(r) = ratio {
                max_ratio = Some(max_ratio.map_or(r, |m| m.max(r)));
                min_ratio = Some(min_ratio.map_or(r, |m| m.min(r)));
            }
            let mut values = vec![0u8; offsets.len()];
            let mut c = code;
            for v in values.iter_mut().rev() {
                *v = (c % alphabet as usize) as u8;
                c /= alphabet as usize;
            }
            cells.push(RnCell {
                values,
                ep_count: a,
                env_count: b,
                ratio,
                ci,
            });
        }
        Self {
            offsets,
            replicas,
            cells,
            max_ratio,
            min_ratio,
            sparse_cells: sparse,
        }
    }
}

/// Runs the walk for `steps` steps and tabulates the ratio on the radius-`W`
/// window.
#[allow(clippy::too_many_arguments)]
pub fn rn_empirical(
    model: &EnvModel,
    geometry: &TorusGeometry,
    kernel: &WalkKernel,
    steps: usize,
    window: usize,
    replicas: u64,
    master_seed: u64,
) -> Result<RnTable> {
    let h = ep_histogram(model, geometry, kernel, steps, window, replicas, master_seed, 0)?;
    Ok(RnTable::from_histogram(&h))
}
