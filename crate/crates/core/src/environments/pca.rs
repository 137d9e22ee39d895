//! Translation-invariant nearest-neighbour probabilistic cellular automata on
//! `{0,1}`: `η_{t+1}(x) = 1{U_{t+1}(x) <= c1(radius-1 patch of η_t at x)}`.

use crate::error::{Error, Result};
use crate::lattice::{patch_code_at, Patch, TorusGeometry};

/// Largest dimension for which the `2^{3^d}`-entry rate table is built.
pub const MAX_PCA_DIM: usize = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct PcaSpec {
    dim: usize,
    c1: Vec<f64>,
}

impl PcaSpec {
    /// Rate table indexed by the base-2 radius-1 patch code.
    pub fn new(dim: usize, c1: Vec<f64>) -> Result<Self> {
        if dim == 0 || dim > MAX_PCA_DIM {
            return Err(Error::UnsupportedDimension(dim));
        }
        let expected = Patch::count(dim, 1, 2).expect("small table");
        if c1.len() != expected {
            return Err(Error::Shape(format!(
                "PCA rate table needs {expected} entries in d={dim}, got {}",
                c1.len()
            )));
        }
        if let Some((i, p)) = c1.iter().enumerate().find(|(_, p)| !(0.0..=1.0).contains(*p)) {
            return Err(Error::InvalidParameter(format!(
                "c1 for patch {:?} is {p}, outside [0, 1]",
                Patch::from_code(dim, 1, 2, i).values()
            )));
        }
        Ok(Self { dim, c1 })
    }

    pub fn from_fn<F: Fn(&Patch) -> f64>(dim: usize, f: F) -> Result<Self> {
        if dim == 0 || dim > MAX_PCA_DIM {
            return Err(Error::UnsupportedDimension(dim));
        }
        let n = Patch::count(dim, 1, 2).expect("small table");
        Self::new(dim, (0..n).map(|code| f(&Patch::from_code(dim, 1, 2, code))).collect())
    }

    /// `c1 ≡ p`: the next field is i.i.d. Bernoulli(p).
    pub fn constant(dim: usize, p: f64) -> Result<Self> {
        Self::from_fn(dim, |_| p)
    }

    /// `c1(η) = η(o)`: the field never changes.
    pub fn frozen(dim: usize) -> Result<Self> {
        Self::from_fn(dim, |p| f64::from(p.centre()))
    }

    /// Ising-like heat-bath rule in the ±1 spin convention: with
    /// `s = Σ_{patch} (2η - 1)` over the `3^d` patch sites,
    /// `c1 = e^{2βs} / (e^{2βs} + e^{-2βs})`.
    pub fn ising(dim: usize, beta: f64) -> Result<Self> {
        if !beta.is_finite() || beta < 0.0 {
            return Err(Error::InvalidParameter(format!("β must be finite and non-negative, got {beta}")));
        }
        Self::from_fn(dim, |p| {
            let s: f64 = p.values().iter().map(|&v| 2.0 * f64::from(v) - 1.0).sum();
            1.0 / (1.0 + (-4.0 * beta * s).exp())
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn table(&self) -> &[f64] {
        &self.c1
    }

    #[inline]
    pub fn c1_code(&self, code: usize) -> f64 {
        self.c1[code]
    }

    pub fn c1(&self, patch: &Patch) -> Result<f64> {
        if patch.dim() != self.dim || patch.radius() != 1 {
            return Err(Error::Shape("PCA rates take radius-1 patches of the PCA dimension".into()));
        }
        Ok(self.c1[patch.code(2)])
    }

    /// `(c₋, c₊) = (min, max)` of `c1` over all radius-1 patches.
    pub fn bounds(&self) -> (f64, f64) {
        self.c1
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &c| (lo.min(c), hi.max(c)))
    }

    /// Radius-1 patch codes of every site of `layer`.
    pub fn patch_codes(geometry: &TorusGeometry, layer: &[u8]) -> Vec<usize> {
        let table = geometry.unit_neighbourhood();
        let cells = 3usize.pow(geometry.dim() as u32);
        (0..geometry.num_sites())
            .map(|x| patch_code_at(layer, table, cells, x, 2))
            .collect()
    }

    /// One synchronous update with one uniform per site (`uniforms[site]`).
    pub fn step(&self, geometry: &TorusGeometry, layer: &[u8], uniforms: &[f64]) -> Vec<u8> {
        Self::patch_codes(geometry, layer)
            .into_iter()
            .zip(uniforms)
            .map(|(code, &u)| u8::from(u <= self.c1[code]))
            .collect()
    }
}

/// `(c₋, c₊)` for an arbitrary rate function, by exhaustive scan.
pub fn pca_bounds<F: Fn(&Patch) -> f64>(dim: usize, f: F) -> Result<(f64, f64)> {
    Ok(PcaSpec::from_fn(dim, f)?.bounds())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn ising_bounds_d1() {
        let spec = PcaSpec::ising(1, 0.1).unwrap();
        let (lo, hi) = spec.bounds();
        assert_abs_diff_eq!(lo, 1.0 / (1.0 + 1.2f64.exp()), epsilon = 1e-15);
        assert_abs_diff_eq!(hi, 1.0 / (1.0 + (-1.2f64).exp()), epsilon = 1e-15);
        assert!((lo - 0.2315).abs() < 1e-4 && (hi - 0.7685).abs() < 1e-4);
    }

    #[test]
    fn ising_formula_matches_closed_form() {
        let beta: f64 = 0.3;
        let spec = PcaSpec::ising(1, beta).unwrap();
        let p = Patch::new(1, 1, vec![1, 0, 1]).unwrap();
        let s: f64 = 1.0;
        let expected = (2.0 * beta * s).exp() / ((2.0 * beta * s).exp() + (-2.0 * beta * s).exp());
        assert_abs_diff_eq!(spec.c1(&p).unwrap(), expected, epsilon = 1e-15);
    }

    #[test]
    fn trivial_bounds() {
        assert_eq!(PcaSpec::constant(2, 0.3).unwrap().bounds(), (0.3, 0.3));
        assert_eq!(PcaSpec::frozen(1).unwrap().bounds(), (0.0, 1.0));
        assert_eq!(PcaSpec::frozen(2).unwrap().table().len(), 512);
    }

    #[test]
    fn high_dimension_is_unsupported() {
        assert_eq!(pca_bounds(3, |_| 0.5), Err(Error::UnsupportedDimension(3)));
    }

    #[test]
    fn frozen_step_is_identity() {
        let g = TorusGeometry::new(1, 7, 1).unwrap();
        let spec = PcaSpec::frozen(1).unwrap();
        let layer = vec![0, 1, 1, 0, 1, 0, 0];
        let u: Vec<f64> = (0..7).map(|i| (i as f64 + 0.5) / 7.0).collect();
        assert_eq!(spec.step(&g, &layer, &u), layer);
    }

    #[test]
    fn patch_codes_read_neighbours() {
        let g = TorusGeometry::new(1, 5, 1).unwrap();
        // sites -2..=2 in raster order
        let layer = vec![1, 0, 0, 0, 0];
        let codes = PcaSpec::patch_codes(&g, &layer);
        // site -1 sees (-2, -1, 0) = (1, 0, 0) -> 4; site 2 sees (1, 2, -2) = (0, 0, 1) -> 1
        assert_eq!(codes[1], 4);
        assert_eq!(codes[4], 1);
    }
}
