//! Walk kernels, the quenched walk and the environment process.
//!
//! Time convention: at time `t` the walker at `X_t` reads the radius-`R`
//! patch of the time-`t` field around `X_t` and jumps to `X_{t+1}`; the
//! environment then advances to time `t + 1`. The environment process at time
//! `t` is the radius-`W` patch of the time-`t` field around `X_t`.

use rand::RngCore;

use crate::environments::{EnvModel, EnvState, PreparedEnv};
use crate::error::{Error, Result};
use crate::lattice::{patch_code_at, JumpRange, Patch, SpaceTimeField, TorusGeometry};
use crate::rng::{uniform_oc, RngStream};

const ROW_TOL: f64 = 1e-12;

/// Largest patch alphabet a kernel table may index.
pub const MAX_KERNEL_PATCHES: usize = 1 << 22;

/// Transition rule `α(patch, y)` over a finite jump range. Rows are indexed by
/// patch code (see [`Patch::code`]); columns follow the order of the range.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkKernel {
    dim: usize,
    radius: usize,
    alphabet: u8,
    range: JumpRange,
    rows: Vec<Vec<f64>>,
    cdf: Vec<Vec<f64>>,
}

fn patch_label(patch: &Patch) -> String {
    patch.values().iter().map(|v| v.to_string()).collect()
}

impl WalkKernel {
    pub fn new(dim: usize, radius: usize, alphabet: u8, range: JumpRange, rows: Vec<Vec<f64>>) -> Result<Self> {
        if range.dim() != dim {
            return Err(Error::Shape(format!(
                "jump range has dimension {}, kernel has {dim}",
                range.dim()
            )));
        }
        if alphabet == 0 {
            return Err(Error::InvalidParameter("alphabet must be non-empty".into()));
        }
        let count = Patch::count(dim, radius, alphabet)
            .filter(|&n| n <= MAX_KERNEL_PATCHES)
            .ok_or_else(|| Error::InvalidParameter(format!(
                "radius-{radius} patches over {alphabet} symbols in d={dim} are too many to tabulate"
            )))?;
        if rows.len() != count {
            return Err(Error::Shape(format!("kernel needs {count} rows, got {}", rows.len())));
        }
        for (code, row) in rows.iter().enumerate() {
            let label = || patch_label(&Patch::from_code(dim, radius, alphabet, code));
            if row.len() != range.len() {
                return Err(Error::Shape(format!(
                    "kernel row for patch {} has {} entries, range has {}",
                    label(),
                    row.len(),
                    range.len()
                )));
            }
            if row.iter().any(|p| !(0.0..=1.0).contains(p)) {
                return Err(Error::InvalidParameter(format!(
                    "kernel row for patch {} has entries outside [0, 1]",
                    label()
                )));
            }
            let s: f64 = row.iter().sum();
            if (s - 1.0).abs() > ROW_TOL {
                return Err(Error::InvalidParameter(format!(
                    "kernel row for patch {} sums to {s:.12}",
                    label()
                )));
            }
        }
        let cdf = rows
            .iter()
            .map(|r| {
                r.iter()
                    .scan(0.0, |acc, &x| {
                        *acc += x;
                        Some(*acc)
                    })
                    .collect()
            })
            .collect();
        Ok(Self {
            dim,
            radius,
            alphabet,
            range,
            rows,
            cdf,
        })
    }

    /// Kernel whose row for each patch is `f(patch)`.
    pub fn from_fn<F: Fn(&Patch) -> Vec<f64>>(dim: usize, radius: usize, alphabet: u8, range: JumpRange, f: F) -> Result<Self> {
        let count = Patch::count(dim, radius, alphabet)
            .filter(|&n| n <= MAX_KERNEL_PATCHES)
            .ok_or_else(|| Error::InvalidParameter("too many patches to tabulate".into()))?;
        let rows = (0..count)
            .map(|c| f(&Patch::from_code(dim, radius, alphabet, c)))
            .collect();
        Self::new(dim, radius, alphabet, range, rows)
    }

    /// `α(·, z) = q(z)` regardless of the environment.
    pub fn environment_blind(dim: usize, radius: usize, alphabet: u8, range: JumpRange, q: Vec<f64>) -> Result<Self> {
        Self::from_fn(dim, radius, alphabet, range, |_| q.clone())
    }

    /// Uniform over the nearest-neighbour range `{‖y‖_∞ <= 1}`.
    pub fn uniform(dim: usize, alphabet: u8) -> Result<Self> {
        let range = JumpRange::nearest_neighbour(dim);
        let q = vec![1.0 / range.len() as f64; range.len()];
        Self::environment_blind(dim, 0, alphabet, range, q)
    }

    /// `α(·, o) = 1`.
    pub fn lazy(dim: usize, alphabet: u8, range: JumpRange) -> Result<Self> {
        let o = range.origin_index();
        let q = (0..range.len()).map(|j| if j == o { 1.0 } else { 0.0 }).collect();
        Self::environment_blind(dim, 0, alphabet, range, q)
    }

    /// `(1 - w) · self + w · other`, for kernels sharing shape.
    pub fn mix(&self, other: &WalkKernel, w: f64) -> Result<Self> {
        if self.dim != other.dim || self.radius != other.radius || self.alphabet != other.alphabet || self.range != other.range {
            return Err(Error::Shape("mixed kernels must share dimension, radius, alphabet and range".into()));
        }
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::InvalidParameter(format!("mixture weight {w} outside [0, 1]")));
        }
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| (1.0 - w) * x + w * y).collect())
            .collect();
        Self::new(self.dim, self.radius, self.alphabet, self.range.clone(), rows)
    }

    /// `sup_{patch, y} |α(patch, y) - β(patch, y)|`.
    pub fn sup_distance(&self, other: &WalkKernel) -> Result<f64> {
        if self.rows.len() != other.rows.len() || self.range != other.range {
            return Err(Error::Shape("kernels have different shapes".into()));
        }
        Ok(self
            .rows
            .iter()
            .zip(&other.rows)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn alphabet(&self) -> u8 {
        self.alphabet
    }

    pub fn range(&self) -> &JumpRange {
        &self.range
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    #[inline]
    pub fn row(&self, code: usize) -> &[f64] {
        &self.rows[code]
    }

    fn check_patch(&self, patch: &Patch) -> Result<()> {
        if patch.radius() != self.radius || patch.dim() != self.dim {
            return Err(Error::Shape(format!(
                "patch has radius {} in d={}, kernel expects radius {} in d={}",
                patch.radius(),
                patch.dim(),
                self.radius,
                self.dim
            )));
        }
        if patch.values().iter().any(|&v| v >= self.alphabet) {
            return Err(Error::InvalidParameter("patch symbol outside kernel alphabet".into()));
        }
        Ok(())
    }

    /// `α(patch, jump)`; zero for jumps outside the range.
    pub fn alpha(&self, patch: &Patch, jump: &[i64]) -> Result<f64> {
        self.check_patch(patch)?;
        Ok(match self.range.position(jump) {
            Some(j) => self.rows[patch.code(self.alphabet)][j],
            None => 0.0,
        })
    }

    /// Index into the range drawn by inverse CDF with `u ∈ (0, 1]`.
    #[inline]
    pub fn sample_index(&self, code: usize, u: f64) -> usize {
        crate::environments::sitechain::inverse_cdf(&self.cdf[code], u)
    }

    /// `Σ_y y α(patch, y)` for every patch code.
    pub fn drift(&self, code: usize) -> Vec<f64> {
        let mut v = vec![0.0; self.dim];
        for (p, y) in self.rows[code].iter().zip(self.range.jumps()) {
            for (a, &c) in v.iter_mut().zip(y) {
                *a += p * c as f64;
            }
        }
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelReport {
    pub row_sums_ok: bool,
    /// `min_patch α(patch, o) > 0`.
    pub elliptic_time: bool,
    /// `min_{patch, y ∈ ℛ} α(patch, y) > 0`.
    pub elliptic: bool,
    /// Every jump satisfies `‖y‖₁ <= R`.
    pub r_ok: bool,
    pub min_stay: f64,
    pub min_any: f64,
}

/// Exhaustive scan of the kernel table.
pub fn kernel_validate(kernel: &WalkKernel) -> KernelReport {
    let o = kernel.range.origin_index();
    let row_sums_ok = kernel
        .rows
        .iter()
        .all(|r| (r.iter().sum::<f64>() - 1.0).abs() <= ROW_TOL);
    let min_stay = kernel.rows.iter().map(|r| r[o]).fold(f64::INFINITY, f64::min);
    let min_any = kernel
        .rows
        .iter()
        .flat_map(|r| r.iter().copied())
        .fold(f64::INFINITY, f64::min);
    KernelReport {
        row_sums_ok,
        elliptic_time: min_stay > 0.0,
        elliptic: min_any > 0.0,
        r_ok: kernel.range.max_l1() <= kernel.radius,
        min_stay,
        min_any,
    }
}

/// One jump drawn from `α(patch, ·)`.
pub fn walk_step<R: RngCore + ?Sized>(kernel: &WalkKernel, patch: &Patch, rng: &mut R) -> Result<Vec<i64>> {
    kernel.check_patch(patch)?;
    let j = kernel.sample_index(patch.code(kernel.alphabet), uniform_oc(rng));
    Ok(kernel.range.get(j).to_vec())
}

/// Walk in a fixed field, starting at `o` at time 0. Returns the `horizon`
/// displacements; step `t` reads the field at time `t`.
pub fn run_quenched(field: &SpaceTimeField, kernel: &WalkKernel, horizon: usize, stream: &RngStream) -> Result<Vec<Vec<i64>>> {
    if horizon > 0 && !field.covers(0, horizon as i64 - 1) {
        return Err(Error::OutOfWindow {
            lo: 0,
            hi: horizon as i64 - 1,
            stored_lo: field.t_lo(),
            stored_hi: field.t_hi(),
        });
    }
    if field.alphabet() > kernel.alphabet() || field.geometry().dim() != kernel.dim() {
        return Err(Error::Shape("field and kernel disagree on alphabet or dimension".into()));
    }
    let geometry = field.geometry();
    let tables = WalkTables::new(geometry, kernel, kernel.radius());
    let mut rng = stream.rng();
    let mut site = geometry.origin();
    let mut out = Vec::with_capacity(horizon);
    for t in 0..horizon as i64 {
        let code = tables.kernel_code(field.layer(t)?, site, kernel.alphabet());
        let j = kernel.sample_index(code, uniform_oc(&mut rng));
        site = tables.jump(site, j);
        out.push(kernel.range().get(j).to_vec());
    }
    Ok(out)
}

/// Positions `X_0 = o, X_1, …` from displacements.
pub fn positions(dim: usize, displacements: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut x = vec![0i64; dim];
    let mut out = vec![x.clone()];
    for z in displacements {
        for (a, b) in x.iter_mut().zip(z) {
            *a += b;
        }
        out.push(x.clone());
    }
    out
}

/// Precomputed neighbourhood and jump tables for walking on a torus.
#[derive(Debug, Clone)]
pub struct WalkTables {
    kernel_table: Vec<usize>,
    kernel_cells: usize,
    window_table: Vec<usize>,
    window_cells: usize,
    jumps: Vec<usize>,
    n_jumps: usize,
}

impl WalkTables {
    pub fn new(geometry: &TorusGeometry, kernel: &WalkKernel, window: usize) -> Self {
        let kernel_cells = (2 * kernel.radius() + 1).pow(geometry.dim() as u32);
        let window_cells = (2 * window + 1).pow(geometry.dim() as u32);
        let kernel_table = geometry.neighbourhood(kernel.radius());
        let window_table = if window == kernel.radius() {
            kernel_table.clone()
        } else {
            geometry.neighbourhood(window)
        };
        let n_jumps = kernel.range().len();
        let mut jumps = Vec::with_capacity(geometry.num_sites() * n_jumps);
        for x in 0..geometry.num_sites() {
            for y in kernel.range().jumps() {
                jumps.push(geometry.offset(x, y));
            }
        }
        Self {
            kernel_table,
            kernel_cells,
            window_table,
            window_cells,
            jumps,
            n_jumps,
        }
    }

    #[inline]
    pub fn kernel_code(&self, layer: &[u8], site: usize, alphabet: u8) -> usize {
        patch_code_at(layer, &self.kernel_table, self.kernel_cells, site, alphabet)
    }

    #[inline]
    pub fn window_code(&self, layer: &[u8], site: usize, alphabet: u8) -> usize {
        patch_code_at(layer, &self.window_table, self.window_cells, site, alphabet)
    }

    #[inline]
    pub fn jump(&self, site: usize, j: usize) -> usize {
        self.jumps[site * self.n_jumps + j]
    }
}

/// Environment and walker advanced together.
pub struct CoSimulation<'a> {
    env: EnvState<'a>,
    kernel: &'a WalkKernel,
    tables: &'a WalkTables,
    rng: rand_chacha::ChaCha8Rng,
    site: usize,
    position: Vec<i64>,
}

impl<'a> CoSimulation<'a> {
    pub fn new(prepared: &'a PreparedEnv<'a>, kernel: &'a WalkKernel, tables: &'a WalkTables, env_stream: RngStream, walk_stream: RngStream) -> Result<Self> {
        Self::from_state(prepared.instantiate(env_stream), kernel, tables, walk_stream)
    }

    pub fn from_state(env: EnvState<'a>, kernel: &'a WalkKernel, tables: &'a WalkTables, walk_stream: RngStream) -> Result<Self> {
        let g = env.geometry();
        if g.dim() != kernel.dim() {
            return Err(Error::Dimension(format!(
                "environment observed in d={}, kernel in d={}",
                g.dim(),
                kernel.dim()
            )));
        }
        let origin = g.origin();
        let dim = g.dim();
        Ok(Self {
            env,
            kernel,
            tables,
            rng: walk_stream.rng(),
            site: origin,
            position: vec![0; dim],
        })
    }

    pub fn env(&self) -> &EnvState<'a> {
        &self.env
    }

    pub fn position(&self) -> &[i64] {
        &self.position
    }

    pub fn site(&self) -> usize {
        self.site
    }

    pub fn time(&self) -> i64 {
        self.env.time()
    }

    /// Base-|E| code of the radius-`W` window around the walker now.
    pub fn window_code(&self, alphabet: u8) -> usize {
        self.tables.window_code(self.env.observed(), self.site, alphabet)
    }

    /// Jump from the current patch, then advance the environment. Returns
    /// the index of the jump in the range.
    pub fn step(&mut self) -> usize {
        let code = self.tables.kernel_code(self.env.observed(), self.site, self.kernel.alphabet());
        let j = self.kernel.sample_index(code, uniform_oc(&mut self.rng));
        self.site = self.tables.jump(self.site, j);
        for (a, b) in self.position.iter_mut().zip(self.kernel.range().get(j)) {
            *a += b;
        }
        self.env.advance();
        j
    }
}

/// The environment process observed through a radius-`W` window.
#[derive(Debug, Clone, PartialEq)]
pub struct EPTrace {
    pub window: usize,
    /// Window patch around `X_t` at time `t`, for `t = 0..=horizon`.
    pub patches: Vec<Patch>,
    /// `X_{t+1} - X_t` for `t = 0..horizon`.
    pub displacements: Vec<Vec<i64>>,
}

impl EPTrace {
    pub fn horizon(&self) -> usize {
        self.displacements.len()
    }

    pub fn positions(&self) -> Vec<Vec<i64>> {
        positions(self.patches.first().map_or(1, |p| p.dim()), &self.displacements)
    }
}

/// Co-simulates a fresh environment draw and the walk for `horizon` steps.
pub fn run_ep(
    model: &EnvModel,
    geometry: &TorusGeometry,
    kernel: &WalkKernel,
    horizon: usize,
    window: usize,
    env_stream: RngStream,
    walk_stream: RngStream,
) -> Result<EPTrace> {
    if window < kernel.radius() {
        return Err(Error::InvalidParameter(format!(
            "window radius {window} is smaller than the kernel radius {}",
            kernel.radius()
        )));
    }
    if model.alphabet() > kernel.alphabet() {
        return Err(Error::Shape("environment alphabet exceeds kernel alphabet".into()));
    }
    let prepared = model.prepare(geometry)?;
    let tables = WalkTables::new(geometry, kernel, window);
    let mut sim = CoSimulation::new(&prepared, kernel, &tables, env_stream, walk_stream)?;
    let alphabet = model.alphabet();
    let dim = geometry.dim();
    let patch = |code| Patch::from_code(dim, window, alphabet, code);
    let mut patches = vec![patch(sim.window_code(alphabet))];
    let mut displacements = Vec::with_capacity(horizon);
    for _ in 0..horizon {
        let j = sim.step();
        displacements.push(kernel.range().get(j).to_vec());
        patches.push(patch(sim.window_code(alphabet)));
    }
    Ok(EPTrace {
        window,
        patches,
        displacements,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::environments::{PcaSpec, SiteChainSpec};

    fn state_kernel() -> WalkKernel {
        // R = 0, ℛ = {-1, 0, 1}: on 1 drift right, on 0 drift left.
        WalkKernel::new(
            1,
            0,
            2,
            JumpRange::nearest_neighbour(1),
            vec![vec![0.4, 0.4, 0.2], vec![0.1, 0.3, 0.6]],
        )
        .unwrap()
    }

    #[test]
    fn row_sum_error_names_patch() {
        let err = WalkKernel::new(1, 0, 2, JumpRange::nearest_neighbour(1), vec![vec![0.3, 0.3, 0.3], vec![0.1, 0.3, 0.6]])
            .unwrap_err()
            .to_string();
        assert!(err.contains("patch 0") && err.contains("0.900000000000"), "{err}");
    }

    #[test]
    fn validation_reports() {
        let uniform = kernel_validate(&WalkKernel::uniform(1, 2).unwrap());
        assert!(uniform.elliptic && uniform.elliptic_time && uniform.row_sums_ok);
        // the uniform kernel has R = 0 but jumps of length 1
        assert!(!uniform.r_ok);

        let stuck = WalkKernel::new(1, 0, 2, JumpRange::nearest_neighbour(1), vec![vec![0.5, 0.0, 0.5], vec![0.2, 0.6, 0.2]]).unwrap();
        assert!(!kernel_validate(&stuck).elliptic_time);

        let mixed = WalkKernel::new(1, 0, 2, JumpRange::nearest_neighbour(1), vec![vec![0.0, 0.8, 0.2], vec![0.0, 0.3, 0.7]]).unwrap();
        let r = kernel_validate(&mixed);
        assert!(r.elliptic_time && !r.elliptic);

        let lazy = kernel_validate(&WalkKernel::lazy(1, 2, JumpRange::nearest_neighbour(1)).unwrap());
        assert!(lazy.elliptic_time && !lazy.elliptic);
    }

    #[test]
    fn alpha_lookup() {
        let k = state_kernel();
        let one = Patch::new(1, 0, vec![1]).unwrap();
        assert_eq!(k.alpha(&one, &[1]).unwrap(), 0.6);
        assert_eq!(k.alpha(&one, &[2]).unwrap(), 0.0);
        assert!(k.alpha(&Patch::new(1, 1, vec![0, 1, 0]).unwrap(), &[1]).is_err());
    }

    #[test]
    fn lazy_step_stays() {
        let k = WalkKernel::lazy(1, 2, JumpRange::nearest_neighbour(1)).unwrap();
        let p = Patch::new(1, 0, vec![1]).unwrap();
        let mut rng = RngStream::new(0, 0).rng();
        for _ in 0..100 {
            assert_eq!(walk_step(&k, &p, &mut rng).unwrap(), vec![0]);
        }
    }

    #[test]
    fn uniform_step_frequencies() {
        let k = WalkKernel::uniform(1, 2).unwrap();
        let p = Patch::new(1, 0, vec![0]).unwrap();
        let mut rng = RngStream::new(3, 0).rng();
        let n = 100_000;
        let mut counts = [0usize; 3];
        for _ in 0..n {
            counts[(walk_step(&k, &p, &mut rng).unwrap()[0] + 1) as usize] += 1;
        }
        let se = (1.0 / 3.0 * 2.0 / 3.0 / n as f64).sqrt();
        for c in counts {
            assert!((c as f64 / n as f64 - 1.0 / 3.0).abs() < 4.0 * se);
        }
    }

    #[test]
    fn inverse_cdf_follows_range_order() {
        let k = state_kernel();
        assert_eq!(k.sample_index(1, 0.05), 0);
        assert_eq!(k.sample_index(1, 0.1), 0);
        assert_eq!(k.sample_index(1, 0.35), 1);
        assert_eq!(k.sample_index(1, 1.0), 2);
    }

    #[test]
    fn quenched_walk_reproducible_and_bounded() {
        let g = TorusGeometry::new(1, 21, 8).unwrap();
        let model = EnvModel::SiteChain(SiteChainSpec::two_state(0.3, 0.4).unwrap());
        let field = model.simulate(&g, 8, RngStream::new(1, 0)).unwrap();
        let k = state_kernel();
        let a = run_quenched(&field, &k, 8, &RngStream::new(1, 1)).unwrap();
        let b = run_quenched(&field, &k, 8, &RngStream::new(1, 1)).unwrap();
        assert_eq!(a, b);
        assert!(run_quenched(&field, &k, 10, &RngStream::new(1, 1)).is_err());
        let lazy = WalkKernel::lazy(1, 2, JumpRange::nearest_neighbour(1)).unwrap();
        assert!(run_quenched(&field, &lazy, 8, &RngStream::new(1, 1)).unwrap().iter().all(|z| z == &vec![0]));
    }

    #[test]
    fn lazy_ep_is_the_origin_window() {
        let g = TorusGeometry::new(1, 11, 5).unwrap();
        let model = EnvModel::SiteChain(SiteChainSpec::two_state(0.3, 0.4).unwrap());
        let lazy = WalkKernel::lazy(1, 2, JumpRange::nearest_neighbour(1)).unwrap();
        let env = RngStream::new(2, 0);
        let trace = run_ep(&model, &g, &lazy, 5, 1, env, RngStream::new(2, 1)).unwrap();
        let field = model.simulate(&g, 5, env).unwrap();
        for t in 0..=5 {
            assert_eq!(trace.patches[t as usize], field.patch(&[0], t, 1).unwrap());
        }
    }

    #[test]
    fn ep_matches_reconstruction_from_field() {
        let g = TorusGeometry::new(1, 31, 6).unwrap();
        let model = EnvModel::Pca {
            spec: PcaSpec::ising(1, 0.2).unwrap(),
            init_density: 0.5,
            burn_in: 3,
        };
        let k = state_kernel();
        for seed in 0..20 {
            let env = RngStream::new(seed, 0);
            let walk = RngStream::new(seed, 1);
            let trace = run_ep(&model, &g, &k, 6, 2, env, walk).unwrap();
            let field = model.simulate(&g, 6, env).unwrap();
            let quenched = run_quenched(&field, &k, 6, &walk).unwrap();
            assert_eq!(quenched, trace.displacements);
            for (t, x) in trace.positions().iter().enumerate() {
                assert_eq!(trace.patches[t], field.shift(x, t as i64).unwrap().patch(&[0], 0, 2).unwrap());
            }
        }
    }

    #[test]
    fn frozen_environment_patches_are_translates() {
        let g = TorusGeometry::new(1, 15, 4).unwrap();
        let model = EnvModel::pca(PcaSpec::frozen(1).unwrap());
        let prepared = model.prepare(&g).unwrap();
        let init: Vec<u8> = (0..15).map(|i| (i % 3 == 0) as u8).collect();
        let field0 = SpaceTimeField::from_layers(g.clone(), 2, 0, vec![init.clone()]).unwrap();
        let k = state_kernel();
        let tables = WalkTables::new(&g, &k, 1);
        let state = prepared.instantiate_with(RngStream::new(0, 0), init).unwrap();
        let mut sim = CoSimulation::from_state(state, &k, &tables, RngStream::new(0, 1)).unwrap();
        for _ in 0..4 {
            sim.step();
            let expected = field0.patch(sim.position(), 0, 1).unwrap();
            assert_eq!(sim.window_code(2), expected.code(2));
        }
    }
}
