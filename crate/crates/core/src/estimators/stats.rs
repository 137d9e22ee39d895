//! Sufficient statistics and the classical tests used by the estimators.

use rand::RngCore;
use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::estimators::report::SlopeFit;
use crate::parallel::CompensatedSum;
use crate::rng::uniform_oc;

/// Count, sum and sum of squares with compensated accumulation; merging is
/// associative up to the compensated-sum guarantee.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    n: u64,
    sum: CompensatedSum,
    sumsq: CompensatedSum,
}

impl Moments {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        self.n += 1;
        self.sum.add(x);
        self.sumsq.add(x * x);
    }

    pub fn merge(&mut self, other: &Moments) {
        self.n += other.n;
        self.sum.merge(&other.sum);
        self.sumsq.merge(&other.sumsq);
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.sum.value() / self.n as f64
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        let n = self.n as f64;
        ((self.sumsq.value() - self.sum.value() * self.sum.value() / n) / (n - 1.0)).max(0.0)
    }

    /// Standard error of the mean.
    pub fn se(&self) -> f64 {
        (self.variance() / self.n as f64).sqrt()
    }
}

impl FromIterator<f64> for Moments {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut m = Moments::new();
        for x in iter {
            m.add(x);
        }
        m
    }
}

/// Pearson correlation of paired samples and its null standard error
/// `1/√n`.
pub fn correlation(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    let r = if sxx == 0.0 || syy == 0.0 { 0.0 } else { sxy / (sxx * syy).sqrt() };
    (r, 1.0 / n.sqrt())
}

/// Two-sided one-sample Kolmogorov-Smirnov statistic `sup |F_n - F|`.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i as f64 + 1.0) / n - f)
        })
        .fold(0.0, f64::max)
}

/// Asymptotic Kolmogorov p-value with the Stephens small-sample correction.
pub fn ks_p_value(d: f64, n: usize) -> f64 {
    let sn = (n as f64).sqrt();
    let lambda = (sn + 0.12 + 0.11 / sn) * d;
    if lambda < 1e-3 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * lambda * lambda).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// KS test of `samples` against the standard normal: `(D, p-value)`.
pub fn ks_standard_normal(samples: &[f64]) -> (f64, f64) {
    let normal = Normal::new(0.0, 1.0).expect("valid normal");
    let d = ks_statistic(samples, |x| normal.cdf(x));
    (d, ks_p_value(d, samples.len()))
}

/// Upper tail of the chi-square distribution.
pub fn chi_square_sf(stat: f64, df: f64) -> f64 {
    if df <= 0.0 {
        return 1.0;
    }
    1.0 - ChiSquared::new(df).expect("positive df").cdf(stat)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub df: f64,
    pub p_value: f64,
}

/// Goodness of fit of `counts` to `probs` (cells with zero expected count
/// must have zero observations and are dropped).
pub fn chi_square_gof(counts: &[u64], probs: &[f64]) -> Result<ChiSquareResult> {
    if counts.len() != probs.len() {
        return Err(Error::Shape("counts and probabilities differ in length".into()));
    }
    let n: u64 = counts.iter().sum();
    let mut stat = 0.0;
    let mut cells = 0usize;
    for (&c, &p) in counts.iter().zip(probs) {
        let e = p * n as f64;
        if e == 0.0 {
            if c > 0 {
                return Ok(ChiSquareResult {
                    statistic: f64::INFINITY,
                    df: 0.0,
                    p_value: 0.0,
                });
            }
            continue;
        }
        stat += (c as f64 - e).powi(2) / e;
        cells += 1;
    }
    let df = cells.saturating_sub(1) as f64;
    Ok(ChiSquareResult {
        statistic: stat,
        df,
        p_value: chi_square_sf(stat, df),
    })
}

/// Two-sample chi-square test of homogeneity over shared categories; cells
/// empty in both samples are dropped.
pub fn chi_square_homogeneity(a: &[u64], b: &[u64]) -> Result<ChiSquareResult> {
    if a.len() != b.len() {
        return Err(Error::Shape("samples have different category counts".into()));
    }
    let na: u64 = a.iter().sum();
    let nb: u64 = b.iter().sum();
    let total = (na + nb) as f64;
    let mut stat = 0.0;
    let mut cells = 0usize;
    for (&x, &y) in a.iter().zip(b) {
        let col = (x + y) as f64;
        if col == 0.0 {
            continue;
        }
        let ea = col * na as f64 / total;
        let eb = col * nb as f64 / total;
        stat += (x as f64 - ea).powi(2) / ea + (y as f64 - eb).powi(2) / eb;
        cells += 1;
    }
    let df = cells.saturating_sub(1) as f64;
    Ok(ChiSquareResult {
        statistic: stat,
        df,
        p_value: chi_square_sf(stat, df),
    })
}

/// Ordinary least squares `y ≈ intercept + slope · x`.
pub fn ols(x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::InvalidParameter("OLS needs at least two paired points".into()));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParameter("OLS needs distinct x values".into()));
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

/// OLS slope with a 95% percentile interval from a residual bootstrap.
pub fn slope_fit_bootstrap<R: RngCore + ?Sized>(x: &[f64], y: &[f64], resamples: usize, rng: &mut R) -> Result<SlopeFit> {
    let (slope, intercept) = ols(x, y)?;
    let fitted: Vec<f64> = x.iter().map(|a| intercept + slope * a).collect();
    let residuals: Vec<f64> = y.iter().zip(&fitted).map(|(b, f)| b - f).collect();
    let n = x.len();
    let mut slopes = Vec::with_capacity(resamples);
    let mut y_star = vec![0.0; n];
    for _ in 0..resamples {
        for (ys, f) in y_star.iter_mut().zip(&fitted) {
            let k = ((uniform_oc(rng) * n as f64).ceil() as usize).clamp(1, n) - 1;
            *ys = f + residuals[k];
        }
        slopes.push(ols(x, &y_star)?.0);
    }
    slopes.sort_by(f64::total_cmp);
    let q = |p: f64| {
        if slopes.is_empty() {
            return slope;
        }
        let idx = (p * (slopes.len() - 1) as f64).round() as usize;
        slopes[idx]
    };
    Ok(SlopeFit {
        slope,
        intercept,
        ci_low: q(0.025),
        ci_high: q(0.975),
        points: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;
    use approx::assert_abs_diff_eq;

    #[test]
    fn moments_merge() {
        let xs: Vec<f64> = (0..1000).map(|i| (i as f64).sin()).collect();
        let all: Moments = xs.iter().copied().collect();
        let mut a: Moments = xs[..300].iter().copied().collect();
        let b: Moments = xs[300..].iter().copied().collect();
        a.merge(&b);
        assert_abs_diff_eq!(a.mean(), all.mean(), epsilon = 1e-15);
        assert_abs_diff_eq!(a.variance(), all.variance(), epsilon = 1e-13);
    }

    #[test]
    fn ks_p_values() {
        // λ ≈ 1.36 is the 5% critical value
        assert!((ks_p_value(1.358 / 100.0, 10_000) - 0.05).abs() < 0.005);
        assert!(ks_p_value(0.001, 1000) > 0.99);
        let mut rng = RngStream::new(1, 0).rng();
        let normal = Normal::new(0.0, 1.0).unwrap();
        let xs: Vec<f64> = (0..5000).map(|_| normal.inverse_cdf(uniform_oc(&mut rng).min(1.0 - 1e-16))).collect();
        assert!(ks_standard_normal(&xs).1 > 0.001);
        let shifted: Vec<f64> = xs.iter().map(|x| x + 0.2).collect();
        assert!(ks_standard_normal(&shifted).1 < 1e-6);
    }

    #[test]
    fn chi_square_tests() {
        let fit = chi_square_gof(&[50, 50], &[0.5, 0.5]).unwrap();
        assert_eq!(fit.statistic, 0.0);
        assert!((fit.p_value - 1.0).abs() < 1e-12);
        let bad = chi_square_gof(&[90, 10], &[0.5, 0.5]).unwrap();
        assert!(bad.p_value < 1e-10);
        let same = chi_square_homogeneity(&[10, 20, 30, 0], &[10, 20, 30, 0]).unwrap();
        assert_eq!(same.df, 2.0);
        assert_eq!(same.statistic, 0.0);
        assert_abs_diff_eq!(chi_square_sf(3.841458820694124, 1.0), 0.05, epsilon = 1e-9);
    }

    #[test]
    fn ols_and_bootstrap() {
        let x: Vec<f64> = (0..10).map(f64::from).collect();
        let y: Vec<f64> = x.iter().map(|a| 2.0 - 0.5 * a).collect();
        let (s, i) = ols(&x, &y).unwrap();
        assert_abs_diff_eq!(s, -0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(i, 2.0, epsilon = 1e-14);
        let noisy: Vec<f64> = y.iter().enumerate().map(|(k, v)| v + 0.01 * ((k * 7 % 5) as f64 - 2.0)).collect();
        let fit = slope_fit_bootstrap(&x, &noisy, 200, &mut RngStream::new(2, 0).rng()).unwrap();
        assert!(fit.ci_low <= fit.slope && fit.slope <= fit.ci_high);
        assert!(fit.ci_excludes_zero());
    }

    #[test]
    fn correlation_of_independent_streams() {
        let mut a = RngStream::new(1, 0).rng();
        let mut b = RngStream::new(1, 1).rng();
        let xs: Vec<f64> = (0..20_000).map(|_| uniform_oc(&mut a)).collect();
        let ys: Vec<f64> = (0..20_000).map(|_| uniform_oc(&mut b)).collect();
        let (r, se) = correlation(&xs, &ys);
        assert!(r.abs() < 4.0 * se);
        let (r, _) = correlation(&xs, &xs);
        assert_abs_diff_eq!(r, 1.0, epsilon = 1e-12);
    }
}
