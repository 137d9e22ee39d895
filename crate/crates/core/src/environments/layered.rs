//! Layered spin-flip environments observed through a threshold projection.
//!
//! Each site carries `N` independent layers with values in `[-1, 1]`. Per
//! step, layer `n` keeps its value with probability `1 - b_n` and is resampled
//! uniformly on `[-1, 1]` with probability `b_n`. The observed spin is
//! `1{Σ_n a_n ξ(x, n) > 0}` with `a_n = ½ n^{-α}`, `b_n = ½ n^{-β}`.

use crate::error::{Error, Result};

/// Default bound on the truncated weight `Σ_{n>N} a_n`.
pub const DEFAULT_TAIL_TOL: f64 = 1e-4;

/// Uniforms consumed per site by one [`LayeredParams::step`]: a resampling
/// coin and a candidate value for every layer.
pub fn step_draws(n_layers: usize) -> usize {
    2 * n_layers
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayeredParams {
    alpha: f64,
    beta: f64,
    a: Vec<f64>,
    b: Vec<f64>,
}

/// `Σ_{n > N} ½ n^{-α}`: explicit terms up to `N + 1000`, then the integral
/// with the first Euler-Maclaurin corrections.
fn tail_weight(alpha: f64, n: usize) -> f64 {
    let f = |x: f64| 0.5 * x.powf(-alpha);
    let m = n + 1000;
    let explicit: f64 = (n + 1..=m).map(|k| f(k as f64)).sum();
    let mf = m as f64;
    let integral = 0.5 * mf.powf(1.0 - alpha) / (alpha - 1.0);
    let deriv = -0.5 * alpha * mf.powf(-alpha - 1.0);
    explicit + integral - f(mf) / 2.0 - deriv / 12.0
}

impl LayeredParams {
    pub fn new(alpha: f64, beta: f64, n_layers: usize) -> Result<Self> {
        if !(alpha > 1.0) || !alpha.is_finite() {
            return Err(Error::InvalidParameter(format!("α must exceed 1, got {alpha}")));
        }
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::InvalidParameter(format!("β must be positive, got {beta}")));
        }
        if n_layers == 0 {
            return Err(Error::InvalidParameter("need at least one layer".into()));
        }
        let a = (1..=n_layers).map(|n| 0.5 * (n as f64).powf(-alpha)).collect();
        let b = (1..=n_layers).map(|n| 0.5 * (n as f64).powf(-beta)).collect();
        Ok(Self { alpha, beta, a, b })
    }

    /// Smallest `N` whose truncated weight `Σ_{n>N} a_n` is below `tol`.
    pub fn with_tail_tolerance(alpha: f64, beta: f64, tol: f64) -> Result<Self> {
        if !(tol > 0.0) {
            return Err(Error::InvalidParameter(format!("tail tolerance must be positive, got {tol}")));
        }
        if !(alpha > 1.0) {
            return Err(Error::InvalidParameter(format!("α must exceed 1, got {alpha}")));
        }
        // Integral bound gives an upper estimate on N; bisect below it.
        let upper = ((0.5 / ((alpha - 1.0) * tol)).powf(1.0 / (alpha - 1.0)).ceil() as usize).max(1);
        if upper > 50_000_000 {
            return Err(Error::InvalidParameter(format!(
                "tail tolerance {tol} needs more than {upper} layers"
            )));
        }
        let (mut lo, mut hi) = (1usize, upper);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if tail_weight(alpha, mid) < tol {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        Self::new(alpha, beta, lo)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn n_layers(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    /// `Σ_{n>N} a_n`, the weight dropped by truncation.
    pub fn tail_mass(&self) -> f64 {
        tail_weight(self.alpha, self.n_layers())
    }

    /// Stationary state from `N` uniforms per site (`uniforms[site * N + n]`).
    pub fn stationary_from(&self, uniforms: &[f64]) -> Vec<f64> {
        uniforms.iter().map(|&u| 2.0 * u - 1.0).collect()
    }

    /// One step; `uniforms` holds [`step_draws`] values per site.
    pub fn step(&self, state: &mut [f64], uniforms: &[f64]) {
        let n = self.n_layers();
        for (site_state, u) in state.chunks_mut(n).zip(uniforms.chunks(2 * n)) {
            for (layer, value) in site_state.iter_mut().enumerate() {
                if u[2 * layer] <= self.b[layer] {
                    *value = 2.0 * u[2 * layer + 1] - 1.0;
                }
            }
        }
    }

    /// `1{Σ_n a_n ξ(x, n) > 0}` per site.
    pub fn project(&self, state: &[f64]) -> Vec<u8> {
        state
            .chunks(self.n_layers())
            .map(|layers| {
                let s: f64 = layers.iter().zip(&self.a).map(|(x, a)| a * x).sum();
                u8::from(s > 0.0)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn coefficients() {
        let p = LayeredParams::new(3.0, 1.0, 2).unwrap();
        assert_eq!(p.b()[0], 0.5);
        assert_eq!(p.a(), &[0.5, 0.0625]);
    }

    #[test]
    fn projection_examples() {
        let p = LayeredParams::new(3.0, 1.0, 2).unwrap();
        assert_eq!(p.project(&[-0.1, 1.0]), vec![1]);
        assert_eq!(p.project(&[1.0, 1.0, -1.0, -1.0]), vec![1, 0]);
    }

    #[test]
    fn tail_rule() {
        let p = LayeredParams::with_tail_tolerance(3.0, 1.0, 1e-4).unwrap();
        let n = p.n_layers();
        assert!(p.tail_mass() < 1e-4);
        assert!(LayeredParams::new(3.0, 1.0, n - 1).unwrap().tail_mass() >= 1e-4);
        // Σ_{n>N} ½ n^{-3} ≈ 1 / (4 N²)
        assert!((45..=55).contains(&n), "N = {n}");
    }

    #[test]
    fn tail_weight_matches_brute_force() {
        let brute: f64 = (11..2_000_000).map(|k| 0.5 * (k as f64).powf(-2.5)).sum::<f64>()
            + 0.5 * 2_000_000f64.powf(-1.5) / 1.5;
        assert_abs_diff_eq!(tail_weight(2.5, 10), brute, epsilon = 1e-10);
    }

    #[test]
    fn no_resampling_leaves_state() {
        let p = LayeredParams::new(3.0, 1.0, 3).unwrap();
        let mut s = vec![0.2, -0.4, 0.9];
        p.step(&mut s, &[1.0, 0.3, 1.0, 0.3, 1.0, 0.3]);
        assert_eq!(s, vec![0.2, -0.4, 0.9]);
        p.step(&mut s, &[0.1, 0.75, 1.0, 0.3, 1.0, 0.3]);
        assert_eq!(s, vec![0.5, -0.4, 0.9]);
    }

    #[test]
    fn rejects_bad_exponents() {
        assert!(LayeredParams::new(1.0, 1.0, 5).is_err());
        assert!(LayeredParams::new(3.0, 0.0, 5).is_err());
    }
}
