//! Reflection coupling of two OU processes: the driving Brownian motions are
//! perfectly negatively correlated, so the difference `D = ξ¹ - ξ²` solves
//! `dD = -D dt + 2 dW` and the copies can be merged when `D` first hits 0.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Exact one-step coefficients of `dD = -D dt + 2 dW` over a step `dt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionStep {
    dt: f64,
    decay: f64,
    noise_sd: f64,
}

impl ReflectionStep {
    pub fn new(dt: f64) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::InvalidParameter(format!("step must be positive, got {dt}")));
        }
        Ok(Self {
            dt,
            decay: (-dt).exp(),
            noise_sd: (-2.0 * (-2.0 * dt).exp_m1()).sqrt(),
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// `e^{-Δ}`.
    pub fn decay(&self) -> f64 {
        self.decay
    }

    /// `√(2 (1 - e^{-2Δ}))`.
    pub fn noise_sd(&self) -> f64 {
        self.noise_sd
    }

    #[inline]
    pub fn advance(&self, d: f64, z: f64) -> f64 {
        self.decay * d + self.noise_sd * z
    }
}

/// First time the difference of two copies started at `x` and `y` reaches 0,
/// with linear interpolation inside the step where the sign changes; `None`
/// if it has not happened by `horizon`.
pub fn ou_reflection_coupling<R: Rng + ?Sized>(x: f64, y: f64, step: &ReflectionStep, horizon: f64, rng: &mut R) -> Option<f64> {
    let mut d = x - y;
    if d == 0.0 {
        return Some(0.0);
    }
    let max_steps = (horizon / step.dt()).floor() as u64;
    for k in 0..max_steps {
        let z: f64 = rng.sample(StandardNormal);
        let next = step.advance(d, z);
        if next == 0.0 || next.signum() != d.signum() {
            let t = (k as f64 + d / (d - next)) * step.dt();
            return Some(t.min(horizon));
        }
        d = next;
    }
    None
}
