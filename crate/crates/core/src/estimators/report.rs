//! Result records shared by the estimators.

/// Standard error of a binomial proportion. At the boundary (`k = 0` or
/// `k = n`) the proportion is replaced by `(k + ½)/(n + 1)` so the error stays
/// positive.
pub fn binomial_se(p: f64, n: u64) -> f64 {
    if n == 0 {
        return f64::NAN;
    }
    let nf = n as f64;
    let q = if p <= 0.0 || p >= 1.0 {
        (p * nf + 0.5) / (nf + 1.0)
    } else {
        p
    };
    (q * (1.0 - q) / nf).sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimatorReport {
    pub estimate: Vec<f64>,
    pub std_error: Vec<f64>,
    pub replicas: u64,
    pub master_seed: u64,
    /// Filled in by the experiment runner.
    pub config_digest: String,
}

impl EstimatorReport {
    pub fn scalar(estimate: f64, std_error: f64, replicas: u64, master_seed: u64) -> Self {
        Self {
            estimate: vec![estimate],
            std_error: vec![std_error],
            replicas,
            master_seed,
            config_digest: String::new(),
        }
    }

    pub fn value(&self) -> f64 {
        self.estimate[0]
    }

    pub fn se(&self) -> f64 {
        self.std_error[0]
    }
}

/// OLS slope with a bootstrap confidence interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub points: usize,
}

impl SlopeFit {
    pub fn ci_excludes_zero(&self) -> bool {
        self.ci_high < 0.0 || self.ci_low > 0.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixingCurve {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub errors: Vec<f64>,
    pub fit: Option<SlopeFit>,
}

impl MixingCurve {
    /// Grid strictly increasing and every value in `[0, 1]`.
    pub fn is_well_formed(&self) -> bool {
        self.grid.windows(2).all(|w| w[1] > w[0])
            && self.values.iter().all(|v| (0.0..=1.0).contains(v))
            && self.values.len() == self.grid.len()
            && self.errors.len() == self.grid.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_se_positive_at_boundary() {
        assert!(binomial_se(0.0, 100) > 0.0);
        assert!(binomial_se(1.0, 100) > 0.0);
        assert_eq!(binomial_se(0.5, 100), 0.05);
    }
}
