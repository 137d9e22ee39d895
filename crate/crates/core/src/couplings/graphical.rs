//! Couplings of two copies of a PCA: the shared-uniform graphical coupling,
//! disagreement percolation (DP) and strong disagreement percolation (SDP).
//!
//! All three carry a disagreement field `ξ` with the guarantee
//! `ξ(x) = 0 ⇒ η¹(x) = η²(x)`, checked after every step.

use rand::RngCore;

use crate::couplings::percolation::Adjacency;
use crate::environments::{layer_uniforms, PcaSpec};
use crate::error::{Error, Result};
use crate::lattice::{patch_offsets, Patch, TorusGeometry};

const THRESHOLD_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CouplingTriple {
    pub eta1: Vec<u8>,
    pub eta2: Vec<u8>,
    pub xi: Vec<u8>,
}

impl CouplingTriple {
    /// Triple with `ξ` the exact disagreement set.
    pub fn new(eta1: Vec<u8>, eta2: Vec<u8>) -> Result<Self> {
        if eta1.len() != eta2.len() {
            return Err(Error::Shape("coupled fields differ in size".into()));
        }
        let xi = eta1.iter().zip(&eta2).map(|(a, b)| u8::from(a != b)).collect();
        Ok(Self { eta1, eta2, xi })
    }

    pub fn with_xi(eta1: Vec<u8>, eta2: Vec<u8>, xi: Vec<u8>) -> Result<Self> {
        if eta1.len() != eta2.len() || xi.len() != eta1.len() {
            return Err(Error::Shape("coupled fields differ in size".into()));
        }
        let t = Self { eta1, eta2, xi };
        t.check()?;
        Ok(t)
    }

    /// `ξ(x) = 0 ⇒ η¹(x) = η²(x)`.
    pub fn check(&self) -> Result<()> {
        match (0..self.xi.len()).find(|&x| self.xi[x] == 0 && self.eta1[x] != self.eta2[x]) {
            Some(x) => Err(Error::InvariantViolation(format!(
                "site {x} has ξ = 0 but the coupled fields disagree"
            ))),
            None => Ok(()),
        }
    }

    pub fn disagreement_density(&self) -> f64 {
        self.eta1.iter().zip(&self.eta2).filter(|(a, b)| a != b).count() as f64 / self.eta1.len() as f64
    }
}

/// `p* = max((c₊ - c₋)/c₊, (c₊ - c₋)/(1 - c₋))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SdpParams {
    pub p_star: f64,
    pub c_minus: f64,
    pub c_plus: f64,
}

impl SdpParams {
    pub fn from_bounds(c_minus: f64, c_plus: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&c_minus) || !(0.0..=1.0).contains(&c_plus) || c_minus > c_plus {
            return Err(Error::InvalidParameter(format!(
                "need 0 <= c₋ <= c₊ <= 1, got ({c_minus}, {c_plus})"
            )));
        }
        if c_plus <= 0.0 || c_minus >= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "p* undefined for c₋ = {c_minus}, c₊ = {c_plus}"
            )));
        }
        let gap = c_plus - c_minus;
        Ok(Self {
            p_star: (gap / c_plus).max(gap / (1.0 - c_minus)),
            c_minus,
            c_plus,
        })
    }

    pub fn from_spec(spec: &PcaSpec) -> Result<Self> {
        let (lo, hi) = spec.bounds();
        Self::from_bounds(lo, hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubcriticalCheck {
    /// `None` when `p*` is undefined.
    pub p_star: Option<f64>,
    pub p_c: f64,
    pub subcritical: Option<bool>,
}

/// Compares `p*` with a supplied percolation threshold.
pub fn check_sdp_subcritical(c_minus: f64, c_plus: f64, p_c: f64) -> SubcriticalCheck {
    match SdpParams::from_bounds(c_minus, c_plus) {
        Ok(s) => SubcriticalCheck {
            p_star: Some(s.p_star),
            p_c,
            subcritical: Some(s.p_star < p_c),
        },
        Err(_) => SubcriticalCheck {
            p_star: None,
            p_c,
            subcritical: None,
        },
    }
}

/// `(1 / 4d) · log(2d / (2d - 1))`: the inverse temperature below which the
/// Ising-like PCA has a subcritical strong disagreement coupling.
pub fn ising_pca_threshold(d: usize) -> f64 {
    assert!(d >= 1, "dimension must be positive");
    let d = d as f64;
    (1.0 / (2.0 * d - 1.0)).ln_1p() / (4.0 * d)
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DpStepStats {
    /// Sites with `U ∈ [c₋, c₊]`.
    pub open: u64,
    pub sites: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SdpStepStats {
    /// Sites where the second-copy threshold was evaluated.
    pub checks: u64,
    pub min_threshold: f64,
    pub max_threshold: f64,
}

/// Tables for coupling two copies of one PCA on one torus.
#[derive(Debug, Clone)]
pub struct PcaCoupler<'a> {
    geometry: TorusGeometry,
    spec: &'a PcaSpec,
    c_minus: f64,
    c_plus: f64,
    table: Vec<usize>,
    cells: usize,
}

/// Whether `c1` ignores every patch cell outside `adjacency`.
fn depends_only_on(spec: &PcaSpec, adjacency: Adjacency) -> bool {
    let dim = spec.dim();
    let kept = adjacency.offsets(dim);
    let free: Vec<usize> = patch_offsets(dim, 1)
        .iter()
        .enumerate()
        .filter(|(_, off)| !kept.contains(off))
        .map(|(i, _)| i)
        .collect();
    let n = Patch::count(dim, 1, 2).expect("small table");
    let cells = 3usize.pow(dim as u32);
    (0..n).all(|code| {
        free.iter().all(|&i| {
            let bit = 1usize << (cells - 1 - i);
            spec.c1_code(code) == spec.c1_code(code ^ bit)
        })
    })
}

impl<'a> PcaCoupler<'a> {
    /// Fails when `c1` reads cells outside `adjacency`, since then `ξ` could
    /// not track all disagreements.
    pub fn new(geometry: &TorusGeometry, spec: &'a PcaSpec, adjacency: Adjacency) -> Result<Self> {
        if geometry.dim() != spec.dim() {
            return Err(Error::Dimension(format!(
                "PCA in d={}, torus in d={}",
                spec.dim(),
                geometry.dim()
            )));
        }
        if !depends_only_on(spec, adjacency) {
            return Err(Error::InvalidParameter(format!(
                "c1 depends on sites outside the {adjacency:?} neighbourhood; use the Box adjacency"
            )));
        }
        let (c_minus, c_plus) = spec.bounds();
        let (table, cells) = adjacency.table(geometry);
        Ok(Self {
            geometry: geometry.clone(),
            spec,
            c_minus,
            c_plus,
            table,
            cells,
        })
    }

    pub fn geometry(&self) -> &TorusGeometry {
        &self.geometry
    }

    pub fn bounds(&self) -> (f64, f64) {
        (self.c_minus, self.c_plus)
    }

    fn fed(&self, xi: &[u8], x: usize) -> bool {
        self.table[x * self.cells..(x + 1) * self.cells]
            .iter()
            .any(|&y| xi[y] == 1)
    }

    /// Both copies updated with the same uniform per site;
    /// `ξ := 1{η¹ ≠ η²}`.
    pub fn graphical_step<R: RngCore + ?Sized>(&self, triple: &mut CouplingTriple, rng: &mut R) {
        let u = layer_uniforms(&self.geometry, rng, 1);
        self.graphical_step_with(triple, &u);
    }

    pub fn graphical_step_with(&self, triple: &mut CouplingTriple, u: &[f64]) {
        triple.eta1 = self.spec.step(&self.geometry, &triple.eta1, u);
        triple.eta2 = self.spec.step(&self.geometry, &triple.eta2, u);
        for ((x, a), b) in triple.xi.iter_mut().zip(&triple.eta1).zip(&triple.eta2) {
            *x = u8::from(a != b);
        }
    }

    /// Shared-uniform update of both copies with
    /// `ξ_t(x) = 1{U_t(x) ∈ [c₋, c₊]} · 1{∃ y ~ x : ξ_{t-1}(y) = 1}`.
    pub fn dp_step<R: RngCore + ?Sized>(&self, triple: &mut CouplingTriple, rng: &mut R) -> Result<DpStepStats> {
        let u = layer_uniforms(&self.geometry, rng, 1);
        self.dp_step_with(triple, &u)
    }

    pub fn dp_step_with(&self, triple: &mut CouplingTriple, u: &[f64]) -> Result<DpStepStats> {
        let open = |x: usize| u[x] >= self.c_minus && u[x] <= self.c_plus;
        let xi: Vec<u8> = (0..u.len())
            .map(|x| u8::from(open(x) && self.fed(&triple.xi, x)))
            .collect();
        triple.eta1 = self.spec.step(&self.geometry, &triple.eta1, u);
        triple.eta2 = self.spec.step(&self.geometry, &triple.eta2, u);
        triple.xi = xi;
        triple.check()?;
        Ok(DpStepStats {
            open: (0..u.len()).filter(|&x| open(x)).count() as u64,
            sites: u.len() as u64,
        })
    }

    /// Three uniforms per site `(U¹, U², U³)`: `η¹` is updated by `U¹`
    /// alone, `ξ` by `U³ <= p*` and the neighbourhood clause, and `η²`
    /// copies `η¹` where `ξ = 0` and is otherwise 1 iff
    /// `U² <= (c1(η²) - (1 - p*) c1(η¹)) / p*`.
    pub fn sdp_step<R: RngCore + ?Sized>(&self, triple: &mut CouplingTriple, sdp: &SdpParams, rng: &mut R) -> Result<SdpStepStats> {
        let u = layer_uniforms(&self.geometry, rng, 3);
        self.sdp_step_with(triple, sdp, &u)
    }

    pub fn sdp_step_with(&self, triple: &mut CouplingTriple, sdp: &SdpParams, u: &[f64]) -> Result<SdpStepStats> {
        let p = sdp.p_star;
        let codes1 = PcaSpec::patch_codes(&self.geometry, &triple.eta1);
        let codes2 = PcaSpec::patch_codes(&self.geometry, &triple.eta2);
        let n = codes1.len();
        let mut eta1 = Vec::with_capacity(n);
        let mut eta2 = Vec::with_capacity(n);
        let mut xi = Vec::with_capacity(n);
        let mut stats = SdpStepStats {
            checks: 0,
            min_threshold: f64::INFINITY,
            max_threshold: f64::NEG_INFINITY,
        };
        for x in 0..n {
            let (u1, u2, u3) = (u[3 * x], u[3 * x + 1], u[3 * x + 2]);
            let c1_first = self.spec.c1_code(codes1[x]);
            let e1 = u8::from(u1 <= c1_first);
            let d = u8::from(u3 <= p && self.fed(&triple.xi, x));
            let e2 = if p > 0.0 {
                let thr = (self.spec.c1_code(codes2[x]) - (1.0 - p) * c1_first) / p;
                stats.checks += 1;
                stats.min_threshold = stats.min_threshold.min(thr);
                stats.max_threshold = stats.max_threshold.max(thr);
                if !(-THRESHOLD_TOL..=1.0 + THRESHOLD_TOL).contains(&thr) {
                    return Err(Error::InvariantViolation(format!(
                        "SDP threshold {thr} outside [0, 1] at site {x} (p* = {p})"
                    )));
                }
                if d == 1 {
                    u8::from(u2 <= thr)
                } else {
                    e1
                }
            } else {
                e1
            };
            eta1.push(e1);
            eta2.push(e2);
            xi.push(d);
        }
        triple.eta1 = eta1;
        triple.eta2 = eta2;
        triple.xi = xi;
        triple.check()?;
        Ok(stats)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;
    use approx::assert_abs_diff_eq;

    fn line(side: usize) -> TorusGeometry {
        TorusGeometry::new(1, side, 10).unwrap()
    }

    #[test]
    fn p_star_examples() {
        assert_eq!(SdpParams::from_bounds(0.3, 0.6).unwrap().p_star, 0.5);
        assert_eq!(SdpParams::from_bounds(0.4, 0.4).unwrap().p_star, 0.0);
        assert_eq!(SdpParams::from_bounds(0.0, 0.7).unwrap().p_star, 1.0);
        assert!(SdpParams::from_bounds(0.0, 0.0).is_err());
        assert!(SdpParams::from_bounds(1.0, 1.0).is_err());
    }

    #[test]
    fn subcritical_flags() {
        assert_eq!(check_sdp_subcritical(0.4, 0.4, 0.5).subcritical, Some(true));
        assert_eq!(check_sdp_subcritical(0.0, 0.7, 0.99).subcritical, Some(false));
        assert_eq!(check_sdp_subcritical(1.0, 1.0, 0.5).p_star, None);
    }

    #[test]
    fn ising_thresholds() {
        assert_abs_diff_eq!(ising_pca_threshold(1), 0.25 * 2f64.ln(), epsilon = 1e-15);
        assert!((ising_pca_threshold(1) - 0.173287).abs() < 1e-6);
        assert!((ising_pca_threshold(2) - 0.035961).abs() < 1e-6);
        for d in 1..6 {
            assert!(ising_pca_threshold(d + 1) < ising_pca_threshold(d));
        }
    }

    #[test]
    fn identical_copies_stay_coupled() {
        let g = line(21);
        let spec = PcaSpec::ising(1, 0.3).unwrap();
        let c = PcaCoupler::new(&g, &spec, Adjacency::Cross).unwrap();
        let eta: Vec<u8> = (0..21).map(|i| (i % 2) as u8).collect();
        let mut t = CouplingTriple::new(eta.clone(), eta).unwrap();
        let mut rng = RngStream::new(1, 0).rng();
        for _ in 0..20 {
            c.graphical_step(&mut t, &mut rng);
            assert_eq!(t.eta1, t.eta2);
            assert!(t.xi.iter().all(|&v| v == 0));
        }
    }

    #[test]
    fn constant_rule_couples_in_one_step() {
        let g = line(15);
        let spec = PcaSpec::constant(1, 0.4).unwrap();
        let c = PcaCoupler::new(&g, &spec, Adjacency::Cross).unwrap();
        let mut t = CouplingTriple::new(vec![0; 15], vec![1; 15]).unwrap();
        c.graphical_step(&mut t, &mut RngStream::new(2, 0).rng());
        assert_eq!(t.eta1, t.eta2);
        let mut t = CouplingTriple::new(vec![0; 15], vec![1; 15]).unwrap();
        c.dp_step(&mut t, &mut RngStream::new(2, 0).rng()).unwrap();
        assert!(t.xi.iter().all(|&v| v == 0));
    }

    #[test]
    fn dp_without_disagreement_stays_clean() {
        let g = line(15);
        let spec = PcaSpec::ising(1, 0.1).unwrap();
        let c = PcaCoupler::new(&g, &spec, Adjacency::Cross).unwrap();
        let eta = vec![1u8; 15];
        let mut t = CouplingTriple::new(eta.clone(), eta).unwrap();
        let mut rng = RngStream::new(5, 0).rng();
        for _ in 0..10 {
            c.dp_step(&mut t, &mut rng).unwrap();
            assert!(t.xi.iter().all(|&v| v == 0));
        }
    }

    #[test]
    fn dp_guarantee_holds_from_full_disagreement() {
        let g = line(31);
        let spec = PcaSpec::ising(1, 0.1).unwrap();
        let c = PcaCoupler::new(&g, &spec, Adjacency::Cross).unwrap();
        for seed in 0..50 {
            let mut t = CouplingTriple::new(vec![0; 31], vec![1; 31]).unwrap();
            let mut rng = RngStream::new(seed, 0).rng();
            for _ in 0..30 {
                c.dp_step(&mut t, &mut rng).unwrap();
            }
        }
    }

    #[test]
    fn box_dependent_rule_needs_box_adjacency() {
        let g = TorusGeometry::new(2, 5, 1).unwrap();
        let spec = PcaSpec::ising(2, 0.01).unwrap();
        assert!(PcaCoupler::new(&g, &spec, Adjacency::Cross).is_err());
        assert!(PcaCoupler::new(&g, &spec, Adjacency::Box).is_ok());
        let cross_only = PcaSpec::from_fn(2, |p| {
            let s: u8 = [p.at(&[0, 0]), p.at(&[1, 0]), p.at(&[-1, 0]), p.at(&[0, 1]), p.at(&[0, -1])].iter().sum();
            0.3 + 0.08 * f64::from(s)
        })
        .unwrap();
        assert!(PcaCoupler::new(&g, &cross_only, Adjacency::Cross).is_ok());
    }

    #[test]
    fn sdp_thresholds_stay_in_unit_interval() {
        let g = line(25);
        for beta in [0.02, 0.1, 0.17] {
            let spec = PcaSpec::ising(1, beta).unwrap();
            let sdp = SdpParams::from_spec(&spec).unwrap();
            let c = PcaCoupler::new(&g, &spec, Adjacency::Cross).unwrap();
            for seed in 0..20 {
                let mut t = CouplingTriple::new(vec![0; 25], vec![1; 25]).unwrap();
                let mut rng = RngStream::new(seed, 0).rng();
                for _ in 0..20 {
                    let s = c.sdp_step(&mut t, &sdp, &mut rng).unwrap();
                    assert!(s.min_threshold >= -1e-12 && s.max_threshold <= 1.0 + 1e-12);
                }
            }
        }
    }

    #[test]
    fn sdp_with_equal_bounds_tracks_first_copy() {
        let g = line(11);
        let spec = PcaSpec::constant(1, 0.35).unwrap();
        let sdp = SdpParams::from_spec(&spec).unwrap();
        assert_eq!(sdp.p_star, 0.0);
        let c = PcaCoupler::new(&g, &spec, Adjacency::Cross).unwrap();
        let mut t = CouplingTriple::new(vec![0; 11], vec![1; 11]).unwrap();
        let mut rng = RngStream::new(0, 0).rng();
        c.sdp_step(&mut t, &sdp, &mut rng).unwrap();
        assert!(t.xi.iter().all(|&v| v == 0));
        assert_eq!(t.eta1, t.eta2);
    }

    #[test]
    fn sdp_first_copy_is_plain_pca() {
        let g = line(13);
        let spec = PcaSpec::ising(1, 0.1).unwrap();
        let sdp = SdpParams::from_spec(&spec).unwrap();
        let c = PcaCoupler::new(&g, &spec, Adjacency::Cross).unwrap();
        let init: Vec<u8> = (0..13).map(|i| (i % 3 == 0) as u8).collect();
        let mut t = CouplingTriple::new(init.clone(), vec![1; 13]).unwrap();
        let mut plain = init;
        let mut rng = RngStream::new(4, 0).rng();
        for _ in 0..10 {
            let u = layer_uniforms(&g, &mut rng, 3);
            let u1: Vec<f64> = u.chunks(3).map(|c| c[0]).collect();
            c.sdp_step_with(&mut t, &sdp, &u).unwrap();
            plain = spec.step(&g, &plain, &u1);
            assert_eq!(t.eta1, plain);
        }
    }
}
