//! Directed site percolation with the self-inclusive neighbourhood
//! `{y : |y - x| <= 1}` (the site itself and its `2d` nearest neighbours):
//! site `x` is wet at time `t` when it is open (`U_t(x) <= p`) and some
//! neighbour was wet at time `t - 1`.

use crate::error::{Error, Result};
use crate::estimators::report::binomial_se;
use crate::lattice::TorusGeometry;
use crate::parallel::{map_reduce, DEFAULT_BATCH};
use crate::environments::layer_uniforms;
use crate::rng::{Purpose, RngStream};

/// Neighbourhood used by disagreement and percolation updates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Adjacency {
    /// `{x} ∪ {x ± e_i}`: `2d + 1` sites.
    Cross,
    /// `{y : ‖y - x‖_∞ <= 1}`: `3^d` sites.
    Box,
}

impl Adjacency {
    pub fn offsets(self, dim: usize) -> Vec<Vec<i64>> {
        match self {
            Adjacency::Cross => {
                let mut out = vec![vec![0i64; dim]];
                for axis in 0..dim {
                    for s in [-1i64, 1] {
                        let mut e = vec![0i64; dim];
                        e[axis] = s;
                        out.push(e);
                    }
                }
                out
            }
            Adjacency::Box => crate::lattice::patch_offsets(dim, 1),
        }
    }

    /// Flattened neighbour table `[site * cells + k]` and `cells`.
    pub fn table(self, geometry: &TorusGeometry) -> (Vec<usize>, usize) {
        let offsets = self.offsets(geometry.dim());
        let cells = offsets.len();
        let mut t = Vec::with_capacity(geometry.num_sites() * cells);
        for x in 0..geometry.num_sites() {
            for off in &offsets {
                t.push(geometry.offset(x, off));
            }
        }
        (t, cells)
    }
}

/// `ξ_t(x) = open_t(x) ∧ ∃ y ~ x : ξ_{t-1}(y) = 1`.
#[inline]
pub fn percolation_update(prev: &[u8], open: impl Fn(usize) -> bool, table: &[usize], cells: usize) -> Vec<u8> {
    (0..prev.len())
        .map(|x| {
            let fed = table[x * cells..(x + 1) * cells].iter().any(|&y| prev[y] == 1);
            u8::from(fed && open(x))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeedSet {
    Origin,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurvivalEstimate {
    pub p: f64,
    pub horizon: usize,
    pub estimate: f64,
    pub std_error: f64,
    pub replicas: u64,
}

/// One percolation run from `seeds`; returns whether anything is wet at
/// `horizon`. Layer `t` of `stream` supplies the time-`t` uniforms.
pub fn percolation_run(p: f64, geometry: &TorusGeometry, horizon: usize, seeds: SeedSet, stream: &RngStream, table: &[usize], cells: usize) -> bool {
    let mut xi = match seeds {
        SeedSet::Origin => {
            let mut v = vec![0u8; geometry.num_sites()];
            v[geometry.origin()] = 1;
            v
        }
        SeedSet::Full => vec![1u8; geometry.num_sites()],
    };
    for t in 1..=horizon {
        let u = layer_uniforms(geometry, &mut stream.layer(t as u64), 1);
        xi = percolation_update(&xi, |x| u[x] <= p, table, cells);
        if xi.iter().all(|&v| v == 0) {
            return false;
        }
    }
    true
}

/// Fraction of runs still alive at `horizon`, with binomial standard error.
/// Replica `r` uses stream `(master_seed, family, r, Coupling)`, so sweeps
/// over `p` with the same seed share uniforms.
#[allow(clippy::too_many_arguments)]
pub fn percolation_survival(
    p: f64,
    geometry: &TorusGeometry,
    horizon: usize,
    replicas: u64,
    seeds: SeedSet,
    adjacency: Adjacency,
    master_seed: u64,
    family: u64,
) -> Result<SurvivalEstimate> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("percolation parameter {p} outside [0, 1]")));
    }
    if replicas == 0 {
        return Err(Error::InvalidParameter("need at least one replica".into()));
    }
    let (table, cells) = adjacency.table(geometry);
    let alive = map_reduce(
        replicas,
        DEFAULT_BATCH,
        |range| {
            range
                .filter(|&r| {
                    let s = RngStream::for_replica(master_seed, family, r, Purpose::Coupling);
                    percolation_run(p, geometry, horizon, seeds, &s, &table, cells)
                })
                .count() as u64
        },
        |a, b| a + b,
    )
    .unwrap_or(0);
    let est = alive as f64 / replicas as f64;
    Ok(SurvivalEstimate {
        p,
        horizon,
        estimate: est,
        std_error: binomial_se(est, replicas),
        replicas,
    })
}

/// Finite-size estimate of `p_c` from survival curves at horizons `T` and
/// `2T`: below threshold the ratio `S(2T) / S(T)` falls towards 0, above it
/// tends to 1. The estimate is where the ratio crosses `critical_ratio`
/// (linear interpolation on the `p` grid).
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdEstimate {
    pub grid: Vec<f64>,
    pub ratios: Vec<f64>,
    pub lower: f64,
    pub upper: f64,
    pub estimate: f64,
}

#[allow(clippy::too_many_arguments)]
pub fn estimate_threshold(
    grid: &[f64],
    horizon: usize,
    replicas: u64,
    adjacency: Adjacency,
    dim: usize,
    critical_ratio: f64,
    master_seed: u64,
) -> Result<ThresholdEstimate> {
    if grid.len() < 2 || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("threshold grid must be strictly increasing with at least two points".into()));
    }
    let long = 2 * horizon;
    let geometry = TorusGeometry::new(dim, 2 * long + 3, long)?;
    let mut ratios = Vec::with_capacity(grid.len());
    for &p in grid {
        let short = percolation_survival(p, &geometry, horizon, replicas, SeedSet::Origin, adjacency, master_seed, 0)?;
        let longer = percolation_survival(p, &geometry, long, replicas, SeedSet::Origin, adjacency, master_seed, 0)?;
        ratios.push(if short.estimate > 0.0 { longer.estimate / short.estimate } else { 0.0 });
    }
    let crossing = ratios.iter().position(|&r| r >= critical_ratio);
    let (lower, upper, estimate) = match crossing {
        None => (grid[grid.len() - 1], 1.0, grid[grid.len() - 1]),
        Some(0) => (0.0, grid[0], grid[0]),
        Some(i) => {
            let (p0, p1, r0, r1) = (grid[i - 1], grid[i], ratios[i - 1], ratios[i]);
            let est = p0 + (critical_ratio - r0) / (r1 - r0) * (p1 - p0);
            (p0, p1, est)
        }
    };
    Ok(ThresholdEstimate {
        grid: grid.to_vec(),
        ratios,
        lower,
        upper,
        estimate,
    })
}
