//! Environment families and a common stepping interface.
//!
//! Every family exposes an observed layer over a finite alphabet (what the
//! walker sees) and possibly a hidden state (layers, OU values, the
//! unprojected contact process). [`EnvModel::prepare`] binds a model to a
//! torus; [`PreparedEnv::instantiate`] draws a time-0 state from one random
//! stream; [`EnvState::advance`] moves it forward one unit of time.
//!
//! Stream layout: layer 0 holds the initial draw, burn-in and later steps use
//! one layer each (the contact process uses one layer per unit of time).

pub mod contact;
pub mod layered;
pub mod ou;
pub mod pca;
pub mod projection;
pub mod sitechain;

use rand::RngCore;

pub use contact::{contact_simulate, contact_upper_invariant_sample, ContactDynamics, ContactParams};
pub use layered::LayeredParams;
pub use ou::{ou_project, ou_sign, OUParams};
pub use pca::{pca_bounds, PcaSpec};
pub use projection::project_axis;
pub use sitechain::SiteChainSpec;

use crate::error::{Error, Result};
use crate::lattice::{SpaceTimeField, TorusGeometry};
use crate::rng::{uniform_oc, RngStream};

pub const DEFAULT_PCA_BURN_IN: u64 = 1000;
pub const DEFAULT_CONTACT_BURN_IN: f64 = 1000.0;

/// `per_site` uniforms for every site, drawn site by site in the geometry's
/// draw order; entry `[site * per_site + j]`.
pub fn layer_uniforms<R: RngCore + ?Sized>(geometry: &TorusGeometry, rng: &mut R, per_site: usize) -> Vec<f64> {
    let mut out = vec![0.0; geometry.num_sites() * per_site];
    for &site in geometry.draw_order() {
        for slot in &mut out[site * per_site..(site + 1) * per_site] {
            *slot = uniform_oc(rng);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub enum EnvModel {
    SiteChain(SiteChainSpec),
    Pca {
        spec: PcaSpec,
        /// Initial product Bernoulli density before burn-in.
        init_density: f64,
        burn_in: u64,
    },
    Layered(LayeredParams),
    Ou(OUParams),
    Contact {
        params: ContactParams,
        /// Dimension of the simulated process (before projection).
        dim: usize,
        burn_in: f64,
    },
}

impl EnvModel {
    /// PCA with the default Bernoulli(½) start and burn-in.
    pub fn pca(spec: PcaSpec) -> Self {
        EnvModel::Pca {
            spec,
            init_density: 0.5,
            burn_in: DEFAULT_PCA_BURN_IN,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            EnvModel::SiteChain(_) => "site-chain",
            EnvModel::Pca { .. } => "pca",
            EnvModel::Layered(_) => "layered",
            EnvModel::Ou(_) => "ou",
            EnvModel::Contact { .. } => "contact",
        }
    }

    /// Size of the observed alphabet.
    pub fn alphabet(&self) -> u8 {
        match self {
            EnvModel::SiteChain(s) => s.alphabet(),
            _ => 2,
        }
    }

    /// Dimension of the observed lattice, when fixed by the model.
    pub fn observed_dim(&self) -> Option<usize> {
        match self {
            EnvModel::Pca { spec, .. } => Some(spec.dim()),
            EnvModel::Contact { params, dim, .. } => Some(params.projection().unwrap_or(*dim)),
            _ => None,
        }
    }

    /// Whether the time-0 state is drawn exactly from the stationary law.
    pub fn starts_stationary(&self) -> bool {
        matches!(self, EnvModel::SiteChain(_) | EnvModel::Layered(_) | EnvModel::Ou(_))
    }

    /// Binds the model to the observed torus `geometry`.
    pub fn prepare(&self, geometry: &TorusGeometry) -> Result<PreparedEnv<'_>> {
        if let Some(d) = self.observed_dim() {
            if d != geometry.dim() {
                return Err(Error::Dimension(format!(
                    "{} environment is observed in d={d}, torus has d={}",
                    self.name(),
                    geometry.dim()
                )));
            }
        }
        let contact = match self {
            EnvModel::Contact { params, dim, burn_in } => {
                if !(*burn_in >= 0.0) {
                    return Err(Error::InvalidParameter(format!("burn-in must be non-negative, got {burn_in}")));
                }
                let (hidden, map) = match params.projection() {
                    Some(keep) => {
                        if keep >= *dim || keep == 0 {
                            return Err(Error::Dimension(format!(
                                "cannot project a {dim}-dimensional contact process onto {keep} axes"
                            )));
                        }
                        let hidden = TorusGeometry::new(*dim, geometry.side(), geometry.horizon())?;
                        let map = projection::projection_map(&hidden, geometry)?;
                        (hidden, Some(map))
                    }
                    None => (geometry.clone(), None),
                };
                Some((ContactDynamics::new(&hidden, params.lambda()), map))
            }
            EnvModel::Pca { init_density, .. } if !(0.0..=1.0).contains(init_density) => {
                return Err(Error::InvalidParameter(format!("initial density {init_density} outside [0, 1]")));
            }
            _ => None,
        };
        Ok(PreparedEnv {
            model: self,
            geometry: geometry.clone(),
            contact,
        })
    }

    /// Observed field at times `0..=horizon`.
    pub fn simulate(&self, geometry: &TorusGeometry, horizon: usize, stream: RngStream) -> Result<SpaceTimeField> {
        let prepared = self.prepare(geometry)?;
        let mut state = prepared.instantiate(stream);
        let mut layers = Vec::with_capacity(horizon + 1);
        layers.push(state.observed().to_vec());
        for _ in 0..horizon {
            state.advance();
            layers.push(state.observed().to_vec());
        }
        SpaceTimeField::from_layers(geometry.clone(), self.alphabet(), 0, layers)
    }
}

/// A model bound to a torus, with geometry-dependent tables precomputed.
#[derive(Debug, Clone)]
pub struct PreparedEnv<'a> {
    model: &'a EnvModel,
    geometry: TorusGeometry,
    contact: Option<(ContactDynamics, Option<Vec<usize>>)>,
}

#[derive(Debug, Clone)]
enum Hidden {
    None,
    Real(Vec<f64>),
    Contact(Vec<u8>),
}

/// One realisation of an environment, advanced in place.
#[derive(Debug, Clone)]
pub struct EnvState<'a> {
    prepared: &'a PreparedEnv<'a>,
    stream: RngStream,
    next_layer: u64,
    time: i64,
    hidden: Hidden,
    observed: Vec<u8>,
}

impl<'a> PreparedEnv<'a> {
    pub fn model(&self) -> &EnvModel {
        self.model
    }

    pub fn geometry(&self) -> &TorusGeometry {
        &self.geometry
    }

    /// Time-0 state: an exact stationary draw, or the model's start followed
    /// by its burn-in.
    pub fn instantiate(&'a self, stream: RngStream) -> EnvState<'a> {
        let g = &self.geometry;
        let mut rng = stream.layer(0);
        let mut state = EnvState {
            prepared: self,
            stream,
            next_layer: 1,
            time: 0,
            hidden: Hidden::None,
            observed: Vec::new(),
        };
        match self.model {
            EnvModel::SiteChain(spec) => {
                let u = layer_uniforms(g, &mut rng, 1);
                state.observed = u.iter().map(|&u| spec.sample_stationary(u)).collect();
            }
            EnvModel::Pca {
                init_density, burn_in, ..
            } => {
                let u = layer_uniforms(g, &mut rng, 1);
                state.observed = u.iter().map(|&u| u8::from(u <= *init_density)).collect();
                for _ in 0..*burn_in {
                    state.step_dynamics();
                }
            }
            EnvModel::Layered(p) => {
                let u = layer_uniforms(g, &mut rng, p.n_layers());
                let hidden = p.stationary_from(&u);
                state.observed = p.project(&hidden);
                state.hidden = Hidden::Real(hidden);
            }
            EnvModel::Ou(_) => {
                let u = layer_uniforms(g, &mut rng, 2);
                let hidden: Vec<f64> = u.chunks(2).map(|c| OUParams::stationary(c[0], c[1])).collect();
                state.observed = ou::ou_symbols(&hidden);
                state.hidden = Hidden::Real(hidden);
            }
            EnvModel::Contact { burn_in, .. } => {
                let (dynamics, map) = self.contact.as_ref().expect("prepared contact");
                let mut hidden = vec![1u8; dynamics.geometry().num_sites()];
                state.next_layer = contact::run_from(dynamics, &mut hidden, *burn_in, &state.stream, 0);
                state.observed = match map {
                    Some(m) => projection::project_layer(&hidden, m),
                    None => hidden.clone(),
                };
                state.hidden = Hidden::Contact(hidden);
            }
        }
        state
    }

    /// State with a given observed time-0 layer, for models whose observed
    /// layer is the whole state (site chains and PCA). No burn-in is applied.
    pub fn instantiate_with(&'a self, stream: RngStream, observed: Vec<u8>) -> Result<EnvState<'a>> {
        if !matches!(self.model, EnvModel::SiteChain(_) | EnvModel::Pca { .. }) {
            return Err(Error::InvalidParameter(format!(
                "{} environments have hidden state; cannot start from an observed layer",
                self.model.name()
            )));
        }
        if observed.len() != self.geometry.num_sites() || observed.iter().any(|&v| v >= self.model.alphabet()) {
            return Err(Error::Shape("initial layer does not match torus or alphabet".into()));
        }
        Ok(EnvState {
            prepared: self,
            stream,
            next_layer: 1,
            time: 0,
            hidden: Hidden::None,
            observed,
        })
    }
}

impl<'a> EnvState<'a> {
    pub fn time(&self) -> i64 {
        self.time
    }

    pub fn geometry(&self) -> &TorusGeometry {
        &self.prepared.geometry
    }

    /// The observed layer at the current time, indexed by site.
    pub fn observed(&self) -> &[u8] {
        &self.observed
    }

    /// Hidden real-valued state (layered: `site * N + n`; OU: per site).
    pub fn hidden_real(&self) -> Option<&[f64]> {
        match &self.hidden {
            Hidden::Real(v) => Some(v),
            _ => None,
        }
    }

    fn step_dynamics(&mut self) {
        let g = &self.prepared.geometry;
        let layer = self.next_layer;
        self.next_layer += 1;
        let mut rng = self.stream.layer(layer);
        match self.prepared.model {
            EnvModel::SiteChain(spec) => {
                let u = layer_uniforms(g, &mut rng, 1);
                spec.step(&mut self.observed, &u);
            }
            EnvModel::Pca { spec, .. } => {
                let u = layer_uniforms(g, &mut rng, 1);
                self.observed = spec.step(g, &self.observed, &u);
            }
            EnvModel::Layered(p) => {
                let u = layer_uniforms(g, &mut rng, layered::step_draws(p.n_layers()));
                if let Hidden::Real(h) = &mut self.hidden {
                    p.step(h, &u);
                    self.observed = p.project(h);
                }
            }
            EnvModel::Ou(p) => {
                let u = layer_uniforms(g, &mut rng, 2);
                if let Hidden::Real(h) = &mut self.hidden {
                    p.step(h, &u);
                    self.observed = ou::ou_symbols(h);
                }
            }
            EnvModel::Contact { .. } => {
                let (dynamics, map) = self.prepared.contact.as_ref().expect("prepared contact");
                if let Hidden::Contact(h) = &mut self.hidden {
                    dynamics.run(h, 1.0, &mut rng);
                    self.observed = match map {
                        Some(m) => projection::project_layer(h, m),
                        None => h.clone(),
                    };
                }
            }
        }
    }

    /// Moves the environment from time `t` to `t + 1`.
    pub fn advance(&mut self) {
        self.step_dynamics();
        self.time += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(v: &[u8]) -> String {
        v.iter().map(|b| char::from(b'0' + b)).collect()
    }

    #[test]
    fn reproducible_trajectories() {
        let g = TorusGeometry::new(1, 9, 5).unwrap();
        let models = [
            EnvModel::SiteChain(SiteChainSpec::two_state(0.3, 0.4).unwrap()),
            EnvModel::Pca {
                spec: PcaSpec::ising(1, 0.1).unwrap(),
                init_density: 0.5,
                burn_in: 5,
            },
            EnvModel::Layered(LayeredParams::new(3.0, 1.0, 6).unwrap()),
            EnvModel::Ou(OUParams::new(0.1).unwrap()),
            EnvModel::Contact {
                params: ContactParams::new(2.0, Some(1)).unwrap(),
                dim: 2,
                burn_in: 3.5,
            },
        ];
        for m in &models {
            let a = m.simulate(&g, 5, RngStream::new(1, 2)).unwrap();
            let b = m.simulate(&g, 5, RngStream::new(1, 2)).unwrap();
            assert_eq!(a, b, "{}", m.name());
        }
    }

    #[test]
    fn central_sites_agree_across_torus_sizes_for_one_step() {
        // With nested draw orders the inner torus's uniforms are a prefix of
        // the outer one's, so a single stationary draw agrees on shared sites.
        let model = EnvModel::SiteChain(SiteChainSpec::two_state(0.3, 0.4).unwrap());
        let small = TorusGeometry::new(1, 7, 0).unwrap();
        let big = TorusGeometry::new(1, 15, 0).unwrap();
        let a = model.simulate(&small, 0, RngStream::new(4, 4)).unwrap();
        let b = model.simulate(&big, 0, RngStream::new(4, 4)).unwrap();
        for x in -3..=3 {
            assert_eq!(a.get(&[x], 0).unwrap(), b.get(&[x], 0).unwrap());
        }
    }

    #[test]
    fn frozen_pca_never_changes() {
        let g = TorusGeometry::new(1, 7, 3).unwrap();
        let model = EnvModel::pca(PcaSpec::frozen(1).unwrap());
        let prepared = model.prepare(&g).unwrap();
        let init = vec![1, 0, 0, 1, 1, 0, 1];
        let mut s = prepared.instantiate_with(RngStream::new(0, 0), init.clone()).unwrap();
        for _ in 0..5 {
            s.advance();
            assert_eq!(bits(s.observed()), bits(&init));
        }
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let g = TorusGeometry::new(2, 5, 1).unwrap();
        assert!(EnvModel::pca(PcaSpec::constant(1, 0.5).unwrap()).prepare(&g).is_err());
        let bad_projection = EnvModel::Contact {
            params: ContactParams::new(1.0, Some(2)).unwrap(),
            dim: 2,
            burn_in: 1.0,
        };
        assert!(bad_projection.prepare(&g).is_err());
    }

    #[test]
    fn constant_pca_marginal_is_bernoulli() {
        use statrs::distribution::{ChiSquared, ContinuousCDF};
        let g = TorusGeometry::new(1, 11, 1).unwrap();
        let p = 0.3;
        let model = EnvModel::Pca {
            spec: PcaSpec::constant(1, p).unwrap(),
            init_density: 0.5,
            burn_in: 0,
        };
        let prepared = model.prepare(&g).unwrap();
        let mut ones = 0u64;
        let n = 100_000u64;
        let reps = n / 11 + 1;
        let mut total = 0u64;
        for r in 0..reps {
            let mut s = prepared.instantiate(RngStream::new(9, r));
            s.advance();
            ones += s.observed().iter().map(|&v| u64::from(v)).sum::<u64>();
            total += 11;
        }
        let expected1 = p * total as f64;
        let expected0 = (1.0 - p) * total as f64;
        let zeros = total - ones;
        let chi2 = (ones as f64 - expected1).powi(2) / expected1 + (zeros as f64 - expected0).powi(2) / expected0;
        let pval = 1.0 - ChiSquared::new(1.0).unwrap().cdf(chi2);
        assert!(pval > 0.001, "p-value {pval}");
    }
}
