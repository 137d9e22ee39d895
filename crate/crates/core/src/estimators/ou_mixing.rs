//! Mixing of the sign of a stationary OU process `dξ = -ξ dt + dW` under
//! conditioning on past signs, and tails of the reflection-coupling time.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::couplings::ou_reflection::{ou_reflection_coupling, ReflectionStep};
use crate::environments::ou::STATIONARY_VAR;
use crate::error::{Error, Result};
use crate::estimators::report::{binomial_se, MixingCurve, SlopeFit};
use crate::estimators::stats::slope_fit_bootstrap;
use crate::parallel::{map_reduce, DEFAULT_BATCH};
use crate::rng::{Purpose, RngStream};

use super::layered_mixing::BOOTSTRAP_RESAMPLES;

/// Pilot attempts used to measure the acceptance rate of the conditioning.
pub const PILOT_ATTEMPTS: u64 = 10_000;

/// `sign(ξ_time) = sign`, with `time <= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignConstraint {
    pub time: f64,
    pub sign: i8,
}

/// `|P(ξ_t > 0 | ξ_0 > 0) - ½| = arcsin(e^{-t}) / π`.
pub fn ou_sign_tv_exact(t: f64) -> f64 {
    (-t).exp().asin() / std::f64::consts::PI
}

#[derive(Debug, Clone, PartialEq)]
pub struct OuMixingReport {
    /// `|P̂(ξ_t > 0 | A) - P̂(ξ_t > 0)|` on the grid.
    pub curve: MixingCurve,
    pub acceptance_rate: f64,
}

fn exact_step<R: Rng + ?Sized>(x: f64, s: f64, rng: &mut R) -> f64 {
    if s == 0.0 {
        return x;
    }
    let z: f64 = rng.sample(StandardNormal);
    (-s).exp() * x + (STATIONARY_VAR * -(-2.0 * s).exp_m1()).sqrt() * z
}

/// Stationary path at the sorted `times`.
fn stationary_path<R: Rng + ?Sized>(times: &[f64], rng: &mut R) -> Vec<f64> {
    let mut out = Vec::with_capacity(times.len());
    let z: f64 = rng.sample(StandardNormal);
    let mut x = STATIONARY_VAR.sqrt() * z;
    let mut prev = times.first().copied().unwrap_or(0.0);
    for &t in times {
        x = exact_step(x, t - prev, rng);
        out.push(x);
        prev = t;
    }
    out
}

/// Signs at the grid times of paths that satisfy `conditioning`, obtained by
/// rejection; unconditioned paths use an empty constraint list.
fn positive_counts(conditioning: &[SignConstraint], grid: &[f64], replicas: u64, master_seed: u64, family: u64) -> Result<Vec<u64>> {
    let mut times: Vec<f64> = conditioning.iter().map(|c| c.time).collect();
    times.extend_from_slice(grid);
    let k = conditioning.len();
    let max_attempts = 1_000_000u64;
    map_reduce(
        replicas,
        DEFAULT_BATCH,
        |range| -> Result<Vec<u64>> {
            let mut counts = vec![0u64; grid.len()];
            for r in range {
                let mut rng = RngStream::for_replica(master_seed, family, r, Purpose::Environment).rng();
                let mut accepted = None;
                for _ in 0..max_attempts {
                    let path = stationary_path(&times, &mut rng);
                    if conditioning.iter().zip(&path).all(|(c, &x)| (x > 0.0) == (c.sign > 0)) {
                        accepted = Some(path);
                        break;
                    }
                }
                let path = accepted.ok_or_else(|| Error::InvariantViolation("conditioning rejected every attempt".into()))?;
                for (c, &x) in counts.iter_mut().zip(&path[k..]) {
                    *c += u64::from(x > 0.0);
                }
            }
            Ok(counts)
        },
        |a, b| {
            let (mut a, b) = (a?, b?);
            a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
            Ok(a)
        },
    )
    .ok_or_else(|| Error::InvalidParameter("at least one replica is required".into()))?
}

/// Acceptance probability of the conditioning, from a pilot run.
pub fn acceptance_rate(conditioning: &[SignConstraint], master_seed: u64) -> f64 {
    let times: Vec<f64> = conditioning.iter().map(|c| c.time).collect();
    let mut rng = RngStream::for_replica(master_seed, 0, 0, Purpose::Pilot).rng();
    let hits = (0..PILOT_ATTEMPTS)
        .filter(|_| {
            let path = stationary_path(&times, &mut rng);
            conditioning.iter().zip(&path).all(|(c, &x)| (x > 0.0) == (c.sign > 0))
        })
        .count();
    hits as f64 / PILOT_ATTEMPTS as f64
}

/// Exponential rate fit: OLS of `ln TV` on `t` over grid points where the
/// estimate exceeds twice its error.
pub fn fit_exponential(grid: &[f64], values: &[f64], errors: &[f64], seed: u64) -> Option<SlopeFit> {
    let (x, y): (Vec<f64>, Vec<f64>) = grid
        .iter()
        .zip(values.iter().zip(errors))
        .filter(|(_, (v, e))| **v > 2.0 * **e && **v > 0.0)
        .map(|(t, (v, _))| (*t, v.ln()))
        .unzip();
    if x.len() < 3 {
        return None;
    }
    let mut rng = RngStream::for_replica(seed, 0, 0, Purpose::Bootstrap).rng();
    slope_fit_bootstrap(&x, &y, BOOTSTRAP_RESAMPLES, &mut rng).ok()
}

/// Sign-TV curve of the scalar OU process conditioned on past signs.
pub fn ou_mixing(conditioning: &[SignConstraint], grid: &[f64], replicas: u64, floor: f64, master_seed: u64) -> Result<OuMixingReport> {
    if conditioning.iter().any(|c| c.time > 0.0 || c.sign == 0) {
        return Err(Error::InvalidParameter("conditioning times must be <= 0 with signs ±1".into()));
    }
    if conditioning.windows(2).any(|w| w[1].time <= w[0].time) {
        return Err(Error::InvalidParameter("conditioning times must be strictly increasing".into()));
    }
    if grid.is_empty() || grid[0] <= 0.0 || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("time grid must be positive and strictly increasing".into()));
    }
    let rate = acceptance_rate(conditioning, master_seed);
    if rate < floor {
        return Err(Error::InfeasibleConditioning { rate, floor });
    }
    let conditioned = positive_counts(conditioning, grid, replicas, master_seed, 1)?;
    let reference = positive_counts(&[], grid, replicas, master_seed, 2)?;
    let n = replicas as f64;
    let mut values = Vec::with_capacity(grid.len());
    let mut errors = Vec::with_capacity(grid.len());
    for (&c, &r) in conditioned.iter().zip(&reference) {
        let (p, q) = (c as f64 / n, r as f64 / n);
        values.push((p - q).abs());
        errors.push((binomial_se(p, replicas).powi(2) + binomial_se(q, replicas).powi(2)).sqrt());
    }
    let fit = fit_exponential(grid, &values, &errors, master_seed);
    Ok(OuMixingReport {
        curve: MixingCurve {
            grid: grid.to_vec(),
            values,
            errors,
            fit,
        },
        acceptance_rate: rate,
    })
}

/// Tail curves `P(τ > r + ln g)` of the reflection-coupling time for copies
/// started at distance `g`.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingTailReport {
    pub gaps: Vec<f64>,
    pub r_grid: Vec<f64>,
    pub tails: Vec<Vec<f64>>,
    pub errors: Vec<Vec<f64>>,
    /// Slope of `ln P(τ > r + ln g)` against `r`.
    pub fits: Vec<Option<SlopeFit>>,
    /// Fraction of runs not coupled by the horizon.
    pub censored: Vec<f64>,
}

pub fn ou_coupling_tails(gaps: &[f64], dt: f64, horizon: f64, r_grid: &[f64], replicas: u64, master_seed: u64) -> Result<CouplingTailReport> {
    if gaps.iter().any(|&g| !(g > 0.0)) {
        return Err(Error::InvalidParameter("gaps must be positive".into()));
    }
    let step = ReflectionStep::new(dt)?;
    let mut report = CouplingTailReport {
        gaps: gaps.to_vec(),
        r_grid: r_grid.to_vec(),
        tails: Vec::new(),
        errors: Vec::new(),
        fits: Vec::new(),
        censored: Vec::new(),
    };
    for (family, &g) in gaps.iter().enumerate() {
        let shift = g.ln();
        if r_grid.iter().any(|r| r + shift > horizon) {
            return Err(Error::InvalidParameter(format!("r grid exceeds the horizon for gap {g}")));
        }
        let counts = map_reduce(
            replicas,
            DEFAULT_BATCH,
            |range| {
                let mut c = vec![0u64; r_grid.len() + 1];
                for r in range {
                    let mut rng = RngStream::for_replica(master_seed, family as u64, r, Purpose::Coupling).rng();
                    let tau = ou_reflection_coupling(g, 0.0, &step, horizon, &mut rng);
                    for (k, &rr) in r_grid.iter().enumerate() {
                        if tau.is_none_or(|t| t > rr + shift) {
                            c[k] += 1;
                        }
                    }
                    c[r_grid.len()] += u64::from(tau.is_none());
                }
                c
            },
            |mut a, b| {
                a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                a
            },
        )
        .ok_or_else(|| Error::InvalidParameter("at least one replica is required".into()))?;
        let n = replicas as f64;
        let tails: Vec<f64> = counts[..r_grid.len()].iter().map(|&c| c as f64 / n).collect();
        let errors: Vec<f64> = tails.iter().map(|&p| binomial_se(p, replicas)).collect();
        report.fits.push(fit_exponential(r_grid, &tails, &errors, master_seed));
        report.censored.push(counts[r_grid.len()] as f64 / n);
        report.tails.push(tails);
        report.errors.push(errors);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_sign_conditioning_matches_arcsine_law() {
        let cond = [SignConstraint { time: 0.0, sign: 1 }];
        let grid = [0.25, 0.5, 1.0, 2.0];
        let r = ou_mixing(&cond, &grid, 40_000, 0.01, 3).unwrap();
        for (i, &t) in grid.iter().enumerate() {
            let exact = ou_sign_tv_exact(t);
            assert!((r.curve.values[i] - exact).abs() < 4.0 * r.curve.errors[i], "t={t}: {} vs {exact}", r.curve.values[i]);
        }
        assert!((r.acceptance_rate - 0.5).abs() < 0.02);
    }

    #[test]
    fn infeasible_conditioning_is_reported() {
        // Alternating signs at very short spacing are rare.
        let cond: Vec<SignConstraint> = (0..8)
            .map(|k| SignConstraint {
                time: -0.001 * (7 - k) as f64,
                sign: if k % 2 == 0 { 1 } else { -1 },
            })
            .collect();
        match ou_mixing(&cond, &[1.0], 10, 0.05, 0) {
            Err(Error::InfeasibleConditioning { rate, floor }) => assert!(rate < floor),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn coupling_tails_collapse_with_unit_rate() {
        let r_grid = [1.0, 1.5, 2.0, 2.5, 3.0];
        let rep = ou_coupling_tails(&[2.0, 8.0], 0.01, 12.0, &r_grid, 20_000, 1).unwrap();
        for fit in &rep.fits {
            let f = fit.expect("fit");
            assert!(f.slope < -0.6 && f.slope > -1.6, "{f:?}");
        }
        assert!(rep.tails[0].iter().all(|&p| p <= 1.0));
        for (k, r) in r_grid.iter().enumerate() {
            let (a, b) = (rep.tails[0][k], rep.tails[1][k]);
            assert!((a - b).abs() < 0.1, "r={r}: {a} vs {b}");
        }
    }
}
