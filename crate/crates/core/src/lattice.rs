//! Torus geometry, space-time fields, patches, backward paths and cylinder
//! events.
//!
//! Sites are addressed by centred coordinates `c ∈ [-h, h]^d` with
//! `h = (L - 1) / 2`; arithmetic wraps modulo `L` per coordinate. Raster order
//! is lexicographic in the centred coordinates, first coordinate slowest.

use std::collections::BTreeMap;
use std::io::{self, Write};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::walker::WalkKernel;

/// Offsets of `[-r, r]^d` in raster order.
pub fn patch_offsets(dim: usize, radius: usize) -> Vec<Vec<i64>> {
    let r = radius as i64;
    let width = 2 * radius + 1;
    let count = width.pow(dim as u32);
    (0..count)
        .map(|mut k| {
            let mut off = vec![0i64; dim];
            for slot in off.iter_mut().rev() {
                *slot = (k % width) as i64 - r;
                k /= width;
            }
            off
        })
        .collect()
}

#[derive(Debug)]
struct GeometryCache {
    draw_order: Vec<usize>,
    unit_neighbourhood: Vec<usize>,
}

/// Finite torus `(Z / LZ)^d` plus the length of the time window of interest.
#[derive(Debug, Clone)]
pub struct TorusGeometry {
    dim: usize,
    side: usize,
    horizon: usize,
    cache: Arc<GeometryCache>,
}

impl PartialEq for TorusGeometry {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.side == other.side && self.horizon == other.horizon
    }
}

impl Eq for TorusGeometry {}

impl TorusGeometry {
    pub fn new(dim: usize, side: usize, horizon: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        if side.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "torus side must be odd, got {side}"
            )));
        }
        let sites = side
            .checked_pow(dim as u32)
            .filter(|&n| n <= 1 << 32)
            .ok_or_else(|| Error::InvalidParameter(format!("torus {side}^{dim} too large")))?;
        let mut geometry = Self {
            dim,
            side,
            horizon,
            cache: Arc::new(GeometryCache {
                draw_order: Vec::new(),
                unit_neighbourhood: Vec::new(),
            }),
        };
        // Draw order: by max-norm shell, then raster. The first L^d entries of
        // a larger torus enumerate the smaller one in the same order.
        let mut draw_order: Vec<usize> = (0..sites).collect();
        draw_order.sort_by_cached_key(|&i| {
            let c = geometry.coords(i);
            let shell = c.iter().map(|x| x.abs()).max().unwrap_or(0);
            (shell, c)
        });
        let unit_neighbourhood = geometry.neighbourhood(1);
        geometry.cache = Arc::new(GeometryCache {
            draw_order,
            unit_neighbourhood,
        });
        Ok(geometry)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn half(&self) -> i64 {
        ((self.side - 1) / 2) as i64
    }

    pub fn num_sites(&self) -> usize {
        self.side.pow(self.dim as u32)
    }

    /// Index of the site with centred coordinates `c` (wrapped).
    pub fn index(&self, c: &[i64]) -> usize {
        debug_assert_eq!(c.len(), self.dim);
        let l = self.side as i64;
        let h = self.half();
        c.iter()
            .fold(0usize, |acc, &x| acc * self.side + (x + h).rem_euclid(l) as usize)
    }

    pub fn origin(&self) -> usize {
        self.index(&vec![0; self.dim])
    }

    /// Centred coordinates of site `idx`.
    pub fn coords(&self, mut idx: usize) -> Vec<i64> {
        let h = self.half();
        let mut c = vec![0i64; self.dim];
        for slot in c.iter_mut().rev() {
            *slot = (idx % self.side) as i64 - h;
            idx /= self.side;
        }
        c
    }

    /// Index of `site + offset` (wrapped).
    pub fn offset(&self, idx: usize, offset: &[i64]) -> usize {
        let c: Vec<i64> = self
            .coords(idx)
            .iter()
            .zip(offset)
            .map(|(a, b)| a + b)
            .collect();
        self.index(&c)
    }

    /// Order in which per-site uniforms are drawn within one time layer.
    pub fn draw_order(&self) -> &[usize] {
        &self.cache.draw_order
    }

    /// Flattened table: entry `[site * (2r+1)^d + k]` is the index of
    /// `site + patch_offsets(d, r)[k]`.
    pub fn neighbourhood(&self, radius: usize) -> Vec<usize> {
        if radius == 1 && !self.cache.unit_neighbourhood.is_empty() {
            return self.cache.unit_neighbourhood.clone();
        }
        let offsets = patch_offsets(self.dim, radius);
        let mut table = Vec::with_capacity(self.num_sites() * offsets.len());
        for site in 0..self.num_sites() {
            let c = self.coords(site);
            for off in &offsets {
                let shifted: Vec<i64> = c.iter().zip(off).map(|(a, b)| a + b).collect();
                table.push(self.index(&shifted));
            }
        }
        table
    }

    /// The cached radius-1 neighbourhood table.
    pub fn unit_neighbourhood(&self) -> &[usize] {
        &self.cache.unit_neighbourhood
    }
}

/// Smallest odd torus side such that observables within `radius` of a walker
/// run for `horizon` steps never see a wrapped copy of their own dependence
/// cone.
///
/// Each step the walker moves at most `max(‖ℛ‖₁, 1)` and nearest-neighbour
/// environment information moves at most one site; the per-step speed used is
/// `max(‖ℛ‖₁, 1) + max(R, 1)`, which dominates both. The rule is conservative,
/// not tight.
pub fn safe_torus_side(horizon: usize, radius: usize, range: &JumpRange) -> usize {
    let speed = range.max_l1().max(1) + radius.max(1);
    2 * horizon * speed + 2 * radius + 1
}

/// Finite jump set ℛ ⊂ Z^d, sorted lexicographically, containing the origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JumpRange {
    dim: usize,
    jumps: Vec<Vec<i64>>,
}

impl JumpRange {
    pub fn new(dim: usize, mut jumps: Vec<Vec<i64>>) -> Result<Self> {
        if jumps.iter().any(|j| j.len() != dim) {
            return Err(Error::Shape(format!("jumps must have {dim} coordinates")));
        }
        jumps.sort();
        jumps.dedup();
        if !jumps.iter().any(|j| j.iter().all(|&x| x == 0)) {
            return Err(Error::InvalidParameter(
                "jump range must contain the origin".into(),
            ));
        }
        Ok(Self { dim, jumps })
    }

    /// `{y : ‖y‖_∞ <= 1}`, the nearest-neighbour range including staying put.
    pub fn nearest_neighbour(dim: usize) -> Self {
        Self::new(dim, patch_offsets(dim, 1)).expect("contains origin")
    }

    /// `{o}`.
    pub fn lazy(dim: usize) -> Self {
        Self::new(dim, vec![vec![0; dim]]).expect("contains origin")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.jumps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.jumps.is_empty()
    }

    pub fn jumps(&self) -> &[Vec<i64>] {
        &self.jumps
    }

    pub fn get(&self, i: usize) -> &[i64] {
        &self.jumps[i]
    }

    pub fn position(&self, jump: &[i64]) -> Option<usize> {
        self.jumps.iter().position(|j| j == jump)
    }

    pub fn origin_index(&self) -> usize {
        self.jumps
            .iter()
            .position(|j| j.iter().all(|&x| x == 0))
            .expect("contains origin")
    }

    pub fn max_l1(&self) -> usize {
        self.jumps
            .iter()
            .map(|j| j.iter().map(|x| x.unsigned_abs() as usize).sum())
            .max()
            .unwrap_or(0)
    }
}

/// Radius-R observation window `[-R, R]^d` with symbols in raster order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Patch {
    dim: usize,
    radius: usize,
    values: Vec<u8>,
}

impl Patch {
    pub fn new(dim: usize, radius: usize, values: Vec<u8>) -> Result<Self> {
        let expected = (2 * radius + 1).pow(dim as u32);
        if values.len() != expected {
            return Err(Error::Shape(format!(
                "radius-{radius} patch in d={dim} needs {expected} entries, got {}",
                values.len()
            )));
        }
        Ok(Self { dim, radius, values })
    }

    /// Number of distinct patches over an alphabet of `alphabet` symbols, if
    /// it fits in `usize`.
    pub fn count(dim: usize, radius: usize, alphabet: u8) -> Option<usize> {
        let cells = (2 * radius + 1).checked_pow(dim as u32)?;
        (alphabet as usize).checked_pow(cells as u32)
    }

    /// Patch with the given base-|E| code; the first raster entry is the most
    /// significant digit.
    pub fn from_code(dim: usize, radius: usize, alphabet: u8, mut code: usize) -> Self {
        let cells = (2 * radius + 1).pow(dim as u32);
        let base = alphabet as usize;
        let mut values = vec![0u8; cells];
        for slot in values.iter_mut().rev() {
            *slot = (code % base) as u8;
            code /= base;
        }
        Self { dim, radius, values }
    }

    pub fn code(&self, alphabet: u8) -> usize {
        let base = alphabet as usize;
        self.values
            .iter()
            .fold(0usize, |acc, &v| acc * base + v as usize)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    pub fn centre(&self) -> u8 {
        self.values[self.values.len() / 2]
    }

    /// Symbol at `offset` relative to the centre.
    pub fn at(&self, offset: &[i64]) -> u8 {
        let width = (2 * self.radius + 1) as i64;
        let r = self.radius as i64;
        let k = offset
            .iter()
            .fold(0i64, |acc, &x| acc * width + (x + r));
        self.values[k as usize]
    }

    /// Radius-`radius'` sub-patch around the centre.
    pub fn restrict(&self, radius: usize) -> Result<Patch> {
        if radius > self.radius {
            return Err(Error::Shape(format!(
                "cannot restrict radius {} patch to radius {radius}",
                self.radius
            )));
        }
        let values = patch_offsets(self.dim, radius)
            .iter()
            .map(|off| self.at(off))
            .collect();
        Patch::new(self.dim, radius, values)
    }
}

/// Base-|E| patch code of the radius-`radius` window around `site` in one
/// layer, using a neighbourhood table from [`TorusGeometry::neighbourhood`].
#[inline]
pub fn patch_code_at(layer: &[u8], table: &[usize], cells: usize, site: usize, alphabet: u8) -> usize {
    let base = alphabet as usize;
    table[site * cells..(site + 1) * cells]
        .iter()
        .fold(0usize, |acc, &j| acc * base + layer[j] as usize)
}

/// Configuration of a finite alphabet over a torus and a window of times
/// `[t_lo, t_lo + n_times)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceTimeField {
    geometry: TorusGeometry,
    alphabet: u8,
    t_lo: i64,
    n_times: usize,
    values: Vec<u8>,
}

impl SpaceTimeField {
    pub fn constant(geometry: TorusGeometry, alphabet: u8, t_lo: i64, n_times: usize, v: u8) -> Result<Self> {
        if v >= alphabet {
            return Err(Error::InvalidParameter(format!(
                "symbol {v} outside alphabet of size {alphabet}"
            )));
        }
        let values = vec![v; geometry.num_sites() * n_times];
        Ok(Self {
            geometry,
            alphabet,
            t_lo,
            n_times,
            values,
        })
    }

    pub fn from_layers(geometry: TorusGeometry, alphabet: u8, t_lo: i64, layers: Vec<Vec<u8>>) -> Result<Self> {
        let n = geometry.num_sites();
        let n_times = layers.len();
        let mut values = Vec::with_capacity(n * n_times);
        for (k, layer) in layers.into_iter().enumerate() {
            if layer.len() != n {
                return Err(Error::Shape(format!(
                    "layer {k} has {} sites, torus has {n}",
                    layer.len()
                )));
            }
            if let Some(&bad) = layer.iter().find(|&&v| v >= alphabet) {
                return Err(Error::InvalidParameter(format!(
                    "symbol {bad} outside alphabet of size {alphabet}"
                )));
            }
            values.extend(layer);
        }
        Ok(Self {
            geometry,
            alphabet,
            t_lo,
            n_times,
            values,
        })
    }

    pub fn geometry(&self) -> &TorusGeometry {
        &self.geometry
    }

    pub fn alphabet(&self) -> u8 {
        self.alphabet
    }

    pub fn t_lo(&self) -> i64 {
        self.t_lo
    }

    pub fn t_hi(&self) -> i64 {
        self.t_lo + self.n_times as i64 - 1
    }

    pub fn n_times(&self) -> usize {
        self.n_times
    }

    fn out_of_window(&self, lo: i64, hi: i64) -> Error {
        Error::OutOfWindow {
            lo,
            hi,
            stored_lo: self.t_lo,
            stored_hi: self.t_hi(),
        }
    }

    pub fn covers(&self, lo: i64, hi: i64) -> bool {
        self.n_times > 0 && lo >= self.t_lo && hi <= self.t_hi()
    }

    pub fn layer(&self, t: i64) -> Result<&[u8]> {
        if !self.covers(t, t) {
            return Err(self.out_of_window(t, t));
        }
        let n = self.geometry.num_sites();
        let k = (t - self.t_lo) as usize;
        Ok(&self.values[k * n..(k + 1) * n])
    }

    pub fn get(&self, site: &[i64], t: i64) -> Result<u8> {
        Ok(self.layer(t)?[self.geometry.index(site)])
    }

    pub fn set(&mut self, site: &[i64], t: i64, v: u8) -> Result<()> {
        if v >= self.alphabet {
            return Err(Error::InvalidParameter(format!(
                "symbol {v} outside alphabet of size {}",
                self.alphabet
            )));
        }
        if !self.covers(t, t) {
            return Err(self.out_of_window(t, t));
        }
        let n = self.geometry.num_sites();
        let k = (t - self.t_lo) as usize;
        let idx = self.geometry.index(site);
        self.values[k * n + idx] = v;
        Ok(())
    }

    /// Appends a layer at time `t_hi + 1`.
    pub fn push_layer(&mut self, layer: &[u8]) -> Result<()> {
        if layer.len() != self.geometry.num_sites() {
            return Err(Error::Shape("layer size does not match torus".into()));
        }
        self.values.extend_from_slice(layer);
        self.n_times += 1;
        Ok(())
    }

    /// `θ_{x,t}`: `result(y, s) = self(y + x, s + t)`, on the largest window of
    /// times `s` for which both `s` and `s + t` are stored.
    pub fn shift(&self, x: &[i64], t: i64) -> Result<SpaceTimeField> {
        if x.len() != self.geometry.dim() {
            return Err(Error::Shape(format!(
                "shift vector has {} coordinates, torus has {}",
                x.len(),
                self.geometry.dim()
            )));
        }
        let lo = self.t_lo.max(self.t_lo - t);
        let hi = self.t_hi().min(self.t_hi() - t);
        if lo > hi {
            return Err(self.out_of_window(self.t_lo + t, self.t_hi() + t));
        }
        let n = self.geometry.num_sites();
        let targets: Vec<usize> = (0..n).map(|y| self.geometry.offset(y, x)).collect();
        let mut values = Vec::with_capacity(n * (hi - lo + 1) as usize);
        for s in lo..=hi {
            let src = self.layer(s + t)?;
            values.extend(targets.iter().map(|&j| src[j]));
        }
        Ok(SpaceTimeField {
            geometry: self.geometry.clone(),
            alphabet: self.alphabet,
            t_lo: lo,
            n_times: (hi - lo + 1) as usize,
            values,
        })
    }

    /// Radius-`radius` patch centred at `site` at time `t`.
    pub fn patch(&self, site: &[i64], t: i64, radius: usize) -> Result<Patch> {
        let layer = self.layer(t)?;
        let values = patch_offsets(self.geometry.dim(), radius)
            .iter()
            .map(|off| {
                let c: Vec<i64> = site.iter().zip(off).map(|(a, b)| a + b).collect();
                layer[self.geometry.index(&c)]
            })
            .collect();
        Patch::new(self.geometry.dim(), radius, values)
    }

    /// CSV export: header `time,s0,s1,...` (site indices in raster order), one
    /// row per stored time.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        let n = self.geometry.num_sites();
        write!(w, "time")?;
        for i in 0..n {
            write!(w, ",s{i}")?;
        }
        writeln!(w)?;
        for k in 0..self.n_times {
            write!(w, "{}", self.t_lo + k as i64)?;
            for v in &self.values[k * n..(k + 1) * n] {
                write!(w, ",{v}")?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

/// A backward trajectory `(γ_{-k}, …, γ_0)` with `γ_0 = o`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    sites: Vec<Vec<i64>>,
}

impl Path {
    /// Path whose increments `γ_{i+1} - γ_i`, for `i = -k..-1`, are given in
    /// time order.
    pub fn from_increments(dim: usize, increments: &[&[i64]]) -> Self {
        let k = increments.len();
        let mut sites = vec![vec![0i64; dim]; k + 1];
        for i in (0..k).rev() {
            for a in 0..dim {
                sites[i][a] = sites[i + 1][a] - increments[i][a];
            }
        }
        Self { sites }
    }

    pub fn len(&self) -> usize {
        self.sites.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `γ_{-k+j}` for `j = 0..=k`.
    pub fn sites(&self) -> &[Vec<i64>] {
        &self.sites
    }

    /// Site at time `t ∈ [-k, 0]`.
    pub fn at(&self, t: i64) -> &[i64] {
        &self.sites[(self.len() as i64 + t) as usize]
    }

    pub fn increments(&self) -> Vec<Vec<i64>> {
        self.sites
            .windows(2)
            .map(|w| w[1].iter().zip(&w[0]).map(|(b, a)| b - a).collect())
            .collect()
    }
}

/// Index sequences `(j_{-k}, …, j_{-1})` into the jump range, lexicographic.
pub(crate) fn increment_index_sequences(k: usize, n_jumps: usize) -> Vec<Vec<usize>> {
    let total = n_jumps.pow(k as u32);
    (0..total)
        .map(|mut code| {
            let mut seq = vec![0usize; k];
            for slot in seq.iter_mut().rev() {
                *slot = code % n_jumps;
                code /= n_jumps;
            }
            seq
        })
        .collect()
}

/// All `|ℛ|^k` backward paths of length `k` ending at the origin, ordered
/// lexicographically in the increment sequence (earliest increment most
/// significant, increments compared by their position in `ℛ`).
pub fn enumerate_paths(k: usize, range: &JumpRange) -> Vec<Path> {
    increment_index_sequences(k, range.len())
        .into_iter()
        .map(|seq| {
            let incs: Vec<&[i64]> = seq.iter().map(|&j| range.get(j)).collect();
            Path::from_increments(range.dim(), &incs)
        })
        .collect()
}

/// A backward path together with the patch observed at each of its steps:
/// the event that the environment equals `patches[j]` around `γ_{-k+j}` at
/// time `-k + j`, for `j = 0..k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObservationEvent {
    path: Path,
    patches: Vec<Patch>,
}

impl ObservationEvent {
    pub fn new(path: Path, patches: Vec<Patch>) -> Result<Self> {
        if patches.len() != path.len() {
            return Err(Error::Shape(format!(
                "path of length {} needs {} patches, got {}",
                path.len(),
                path.len(),
                patches.len()
            )));
        }
        if let Some(p) = patches.windows(2).find(|w| w[0].radius() != w[1].radius()) {
            return Err(Error::Shape(format!(
                "patch radii differ ({} vs {})",
                p[0].radius(),
                p[1].radius()
            )));
        }
        Ok(Self { path, patches })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn patches(&self) -> &[Patch] {
        &self.patches
    }

    /// Absolute `(site, time, symbol)` constraints this event imposes.
    pub fn constraints(&self) -> Vec<(Vec<i64>, i64, u8)> {
        let k = self.path.len() as i64;
        let mut out = Vec::new();
        for (j, patch) in self.patches.iter().enumerate() {
            let t = -k + j as i64;
            let centre = self.path.at(t);
            for (off, &v) in patch_offsets(patch.dim(), patch.radius())
                .iter()
                .zip(patch.values())
            {
                let site = centre.iter().zip(off).map(|(a, b)| a + b).collect();
                out.push((site, t, v));
            }
        }
        out
    }

    pub fn to_cylinder(&self) -> Result<CylinderEvent> {
        CylinderEvent::from_constraints(self.constraints())
    }
}

/// `∏_i α(σ_i, γ_{i+1} - γ_i)` over the steps of an observation event.
pub fn path_weight(kernel: &WalkKernel, obs: &ObservationEvent) -> Result<f64> {
    let increments = obs.path().increments();
    let mut w = 1.0;
    for (patch, inc) in obs.patches().iter().zip(&increments) {
        if patch.radius() != kernel.radius() {
            return Err(Error::Shape(format!(
                "patch radius {} does not match kernel radius {}",
                patch.radius(),
                kernel.radius()
            )));
        }
        w *= kernel.alpha(patch, inc)?;
        if w == 0.0 {
            break;
        }
    }
    Ok(w)
}

/// Finite set of `(site, time, symbol)` constraints, at most one per
/// space-time point.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct CylinderEvent {
    constraints: BTreeMap<(i64, Vec<i64>), u8>,
}

impl CylinderEvent {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_constraints<I>(constraints: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<i64>, i64, u8)>,
    {
        let mut ev = Self::new();
        for (site, t, v) in constraints {
            ev.insert(site, t, v)?;
        }
        Ok(ev)
    }

    /// Adds a constraint; a repeated identical constraint is a no-op, a
    /// conflicting one is a contradiction.
    pub fn insert(&mut self, site: Vec<i64>, time: i64, v: u8) -> Result<()> {
        match self.constraints.get(&(time, site.clone())) {
            Some(&old) if old != v => Err(Error::Contradiction { site, time }),
            Some(_) => Ok(()),
            None => {
                self.constraints.insert((time, site), v);
                Ok(())
            }
        }
    }

    pub fn intersect(&self, other: &CylinderEvent) -> Result<CylinderEvent> {
        let mut out = self.clone();
        for ((t, site), &v) in &other.constraints {
            out.insert(site.clone(), *t, v)?;
        }
        Ok(out)
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    /// Constraints ordered by time, then site.
    pub fn iter(&self) -> impl Iterator<Item = (&[i64], i64, u8)> {
        self.constraints
            .iter()
            .map(|((t, site), &v)| (site.as_slice(), *t, v))
    }

    pub fn support(&self) -> Vec<(Vec<i64>, i64)> {
        self.iter().map(|(s, t, _)| (s.to_vec(), t)).collect()
    }

    pub fn time_span(&self) -> Option<(i64, i64)> {
        let lo = self.constraints.keys().next()?.0;
        let hi = self.constraints.keys().next_back()?.0;
        Some((lo, hi))
    }

    /// Whether `field` satisfies every constraint.
    pub fn holds(&self, field: &SpaceTimeField) -> Result<bool> {
        for (site, t, v) in self.iter() {
            if field.get(site, t)? != v {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Every assignment of `alphabet` symbols to `support`, in lexicographic
    /// order of the value vector.
    pub fn all_on_support(support: &[(Vec<i64>, i64)], alphabet: u8) -> Result<Vec<CylinderEvent>> {
        let base = alphabet as usize;
        let count = base
            .checked_pow(support.len() as u32)
            .ok_or_else(|| Error::InvalidParameter("support too large".into()))?;
        (0..count)
            .map(|mut code| {
                let mut vals = vec![0u8; support.len()];
                for slot in vals.iter_mut().rev() {
                    *slot = (code % base) as u8;
                    code /= base;
                }
                CylinderEvent::from_constraints(
                    support
                        .iter()
                        .zip(vals)
                        .map(|((s, t), v)| (s.clone(), *t, v)),
                )
            })
            .collect()
    }
}
