//! Shared-resampling coupling of layered environments: all copies use the
//! same resampling coin and the same resampled value for each
//! `(site, layer, time)`, so a layer agrees across copies from its first
//! resampling on.

use rand::RngCore;

use crate::environments::LayeredParams;
use crate::error::{Error, Result};
use crate::rng::uniform_oc;

/// Applies one step with shared uniforms (see [`LayeredParams::step`]) to
/// every state in `states`.
pub fn layered_shared_step(params: &LayeredParams, states: &mut [&mut [f64]], uniforms: &[f64]) -> Result<()> {
    if let Some(first) = states.first() {
        let len = first.len();
        if states.iter().any(|s| s.len() != len) {
            return Err(Error::Shape("coupled layered states differ in size".into()));
        }
    }
    for s in states.iter_mut() {
        params.step(s, uniforms);
    }
    Ok(())
}

/// `(1 - b_n)^t`: probability that layer `n` has not been resampled by time
/// `t`, i.e. is still uncoupled.
pub fn uncoupled_probabilities(params: &LayeredParams, t: u64) -> Vec<f64> {
    params
        .b()
        .iter()
        .map(|&b| (t as f64 * (-b).ln_1p()).exp())
        .collect()
}

/// Exact time-`t` state at one site of the copies started from `+1` and `-1`
/// under the shared-resampling coupling, summarised by the sums the
/// projection needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtremalSums {
    /// `Σ a_n ξ_t(n)` over coupled layers `n >= 2`.
    pub coupled_rest: f64,
    /// `Σ a_n` over uncoupled layers (all layers included).
    pub uncoupled_weight: f64,
    /// Value of layer 1 if it is coupled.
    pub first_layer: Option<f64>,
}

impl ExtremalSums {
    /// Coupled sum including layer 1.
    pub fn coupled_sum(&self, a1: f64) -> f64 {
        self.coupled_rest + self.first_layer.map_or(0.0, |v| a1 * v)
    }

    /// `(η^{+1}_t, η^{-1}_t)` at the site.
    pub fn project(&self, a1: f64) -> (u8, u8) {
        let s = self.coupled_sum(a1);
        (
            u8::from(s + self.uncoupled_weight > 0.0),
            u8::from(s - self.uncoupled_weight > 0.0),
        )
    }
}

/// Draws one [`ExtremalSums`] using two uniforms per layer: the coupling
/// indicator and the common value.
pub fn sample_extremal<R: RngCore + ?Sized>(params: &LayeredParams, uncoupled: &[f64], rng: &mut R) -> ExtremalSums {
    let a = params.a();
    let mut out = ExtremalSums {
        coupled_rest: 0.0,
        uncoupled_weight: 0.0,
        first_layer: None,
    };
    for (n, (&an, &un)) in a.iter().zip(uncoupled).enumerate() {
        let coin = uniform_oc(rng);
        let value = 2.0 * uniform_oc(rng) - 1.0;
        if coin <= un {
            out.uncoupled_weight += an;
        } else if n == 0 {
            out.first_layer = Some(value);
        } else {
            out.coupled_rest += an * value;
        }
    }
    out
}
