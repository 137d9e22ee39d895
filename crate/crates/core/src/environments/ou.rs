//! Independent stationary Ornstein-Uhlenbeck processes
//! `dξ = -ξ dt + dW` per site, observed through their signs.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Standard normal from two uniforms on (0, 1] (Box-Muller, cosine branch).
/// Always consuming two uniforms keeps the per-site draw count fixed.
#[inline]
pub fn standard_normal(u1: f64, u2: f64) -> f64 {
    (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
}

/// Stationary variance of `dξ = -ξ dt + dW`.
pub const STATIONARY_VAR: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OUParams {
    dt: f64,
    decay: f64,
    noise_sd: f64,
}

impl OUParams {
    pub fn new(dt: f64) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::InvalidParameter(format!("OU step must be positive, got {dt}")));
        }
        Ok(Self {
            dt,
            decay: (-dt).exp(),
            noise_sd: (-(-2.0 * dt).exp_m1() / 2.0).sqrt(),
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// `e^{-Δ}`.
    pub fn decay(&self) -> f64 {
        self.decay
    }

    /// `√((1 - e^{-2Δ}) / 2)`.
    pub fn noise_sd(&self) -> f64 {
        self.noise_sd
    }

    /// Stationary draw `N(0, ½)` from two uniforms.
    #[inline]
    pub fn stationary(u1: f64, u2: f64) -> f64 {
        STATIONARY_VAR.sqrt() * standard_normal(u1, u2)
    }

    /// Exact one-step transition given a standard normal `z`.
    #[inline]
    pub fn transition(&self, x: f64, z: f64) -> f64 {
        self.decay * x + self.noise_sd * z
    }

    /// Advances every site; `uniforms` holds two values per site.
    pub fn step(&self, state: &mut [f64], uniforms: &[f64]) {
        for (x, u) in state.iter_mut().zip(uniforms.chunks(2)) {
            *x = self.transition(*x, standard_normal(u[0], u[1]));
        }
    }
}

/// `sign(x) = 1 - 2·1{x < 0}`, so `sign(0) = +1`.
#[inline]
pub fn ou_sign(x: f64) -> i8 {
    if x < 0.0 {
        -1
    } else {
        1
    }
}

/// Sign field in `{-1, 1}`.
pub fn ou_project(state: &[f64]) -> Vec<i8> {
    state.iter().map(|&x| ou_sign(x)).collect()
}

/// Sign field as alphabet symbols: `-1 → 0`, `+1 → 1`.
pub fn ou_symbols(state: &[f64]) -> Vec<u8> {
    state.iter().map(|&x| u8::from(x >= 0.0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{uniform_oc, RngStream};
    use approx::assert_abs_diff_eq;

    #[test]
    fn coefficients() {
        let p = OUParams::new(1.0).unwrap();
        assert_abs_diff_eq!(p.transition(2.0, 0.0), 2.0 * (-1.0f64).exp(), epsilon = 1e-15);
        assert!((p.transition(2.0, 0.0) - 0.7358).abs() < 1e-4);
        let tiny = OUParams::new(1e-12).unwrap();
        assert!((tiny.decay() - 1.0).abs() < 1e-11 && tiny.noise_sd() < 1e-5);
        assert!(OUParams::new(0.0).is_err());
    }

    #[test]
    fn stationary_variance_recursion() {
        for dt in [0.01, 0.5, 3.0] {
            let p = OUParams::new(dt).unwrap();
            assert_abs_diff_eq!(p.decay().powi(2) * 0.5 + p.noise_sd().powi(2), 0.5, epsilon = 1e-15);
        }
    }

    #[test]
    fn sign_convention() {
        assert_eq!(ou_project(&[0.3, -0.3, 0.0, -0.0]), vec![1, -1, 1, 1]);
        assert_eq!(ou_symbols(&[0.3, -0.3, 0.0]), vec![1, 0, 1]);
    }

    #[test]
    fn step_moments_match_exact_law() {
        let p = OUParams::new(0.7).unwrap();
        let mut rng = RngStream::new(5, 0).rng();
        let n = 100_000;
        let x0 = 1.3;
        let xs: Vec<f64> = (0..n)
            .map(|_| {
                let mut s = [x0];
                p.step(&mut s, &[uniform_oc(&mut rng), uniform_oc(&mut rng)]);
                s[0]
            })
            .collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n as f64 - 1.0);
        let target_var = p.noise_sd().powi(2);
        assert!((mean - p.decay() * x0).abs() < 4.0 * (target_var / n as f64).sqrt());
        // Var of the sample variance of a normal is 2σ⁴/(n-1).
        assert!((var - target_var).abs() < 4.0 * target_var * (2.0 / n as f64).sqrt());
    }

    #[test]
    fn stationary_sign_fraction_is_half() {
        let mut rng = RngStream::new(6, 0).rng();
        let n = 100_000;
        let plus = (0..n)
            .filter(|_| OUParams::stationary(uniform_oc(&mut rng), uniform_oc(&mut rng)) >= 0.0)
            .count();
        let frac = plus as f64 / n as f64;
        assert!((frac - 0.5).abs() < 3.0 * (0.25 / n as f64).sqrt());
    }
}
