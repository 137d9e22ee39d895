//! Products of independent stationary site chains: every site runs its own
//! copy of a finite Markov chain, independently of all other sites.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::lattice::CylinderEvent;

const ROW_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SiteChainSpec {
    transition: Vec<Vec<f64>>,
    stationary: Vec<f64>,
    row_cdf: Vec<Vec<f64>>,
    stationary_cdf: Vec<f64>,
}

fn cumulative(p: &[f64]) -> Vec<f64> {
    p.iter()
        .scan(0.0, |acc, &x| {
            *acc += x;
            Some(*acc)
        })
        .collect()
}

/// Smallest `j` with `u <= cdf[j]`; roundoff past the last entry falls back
/// to the last positive-probability symbol.
#[inline]
pub(crate) fn inverse_cdf(cdf: &[f64], u: f64) -> usize {
    match cdf.iter().position(|&c| u <= c) {
        Some(j) => j,
        None => {
            let mut j = cdf.len() - 1;
            while j > 0 && cdf[j] == cdf[j - 1] {
                j -= 1;
            }
            j
        }
    }
}

fn mat_mul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

/// Solves `π (P - I) = 0`, `Σ π = 1` by Gaussian elimination with partial
/// pivoting.
fn solve_stationary(p: &[Vec<f64>]) -> Result<Vec<f64>> {
    let n = p.len();
    // Rows of the system are the equations for each j: Σ_i π_i (P_ij - δ_ij) = 0,
    // with the last equation replaced by normalisation.
    let mut a: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let mut row: Vec<f64> = (0..n)
                .map(|i| p[i][j] - if i == j { 1.0 } else { 0.0 })
                .collect();
            row.push(0.0);
            row
        })
        .collect();
    a[n - 1] = vec![1.0; n + 1];
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
            .unwrap_or(col);
        if a[pivot][col].abs() < 1e-14 {
            return Err(Error::InvalidParameter(
                "site chain has no unique stationary distribution".into(),
            ));
        }
        a.swap(col, pivot);
        let pivot_row = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != col {
                let f = row[col] / pivot_row[col];
                for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *x -= f * p;
                }
            }
        }
    }
    Ok((0..n).map(|i| a[i][n] / a[i][i]).collect())
}

impl SiteChainSpec {
    pub fn new(transition: Vec<Vec<f64>>, stationary: Vec<f64>) -> Result<Self> {
        let n = transition.len();
        if n == 0 || n > u8::MAX as usize {
            return Err(Error::InvalidParameter(format!(
                "site chain alphabet size {n} out of range"
            )));
        }
        for (i, row) in transition.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Shape(format!("transition row {i} has {} entries, expected {n}", row.len())));
            }
            if row.iter().any(|&x| !(0.0..=1.0).contains(&x)) {
                return Err(Error::InvalidParameter(format!("transition row {i} has entries outside [0, 1]")));
            }
            let s: f64 = row.iter().sum();
            if (s - 1.0).abs() > ROW_TOL {
                return Err(Error::InvalidParameter(format!("transition row {i} sums to {s}")));
            }
        }
        if stationary.len() != n {
            return Err(Error::Shape("stationary vector length differs from alphabet".into()));
        }
        for j in 0..n {
            let pj: f64 = (0..n).map(|i| stationary[i] * transition[i][j]).sum();
            if (pj - stationary[j]).abs() > ROW_TOL {
                return Err(Error::InvalidParameter(format!(
                    "initial vector is not stationary at symbol {j}: (πP)_j = {pj}, π_j = {}",
                    stationary[j]
                )));
            }
        }
        let row_cdf = transition.iter().map(|r| cumulative(r)).collect();
        let stationary_cdf = cumulative(&stationary);
        Ok(Self {
            transition,
            stationary,
            row_cdf,
            stationary_cdf,
        })
    }

    /// Chain with the given transition matrix and its (unique) stationary law.
    pub fn from_transition(transition: Vec<Vec<f64>>) -> Result<Self> {
        if transition.is_empty() || transition.iter().any(|r| r.len() != transition.len()) {
            return Err(Error::Shape("transition matrix must be square and non-empty".into()));
        }
        let pi = solve_stationary(&transition)?;
        Self::new(transition, pi)
    }

    /// Two-state chain with `P(0→1) = p01` and `P(1→0) = p10`.
    pub fn two_state(p01: f64, p10: f64) -> Result<Self> {
        Self::from_transition(vec![vec![1.0 - p01, p01], vec![p10, 1.0 - p10]])
    }

    /// Chain whose rows all equal `pi`: independent in time.
    pub fn memoryless(pi: Vec<f64>) -> Result<Self> {
        let rows = vec![pi.clone(); pi.len()];
        Self::new(rows, pi)
    }

    pub fn alphabet(&self) -> u8 {
        self.transition.len() as u8
    }

    pub fn transition(&self) -> &[Vec<f64>] {
        &self.transition
    }

    pub fn stationary(&self) -> &[f64] {
        &self.stationary
    }

    pub fn transition_power(&self, n: u64) -> Vec<Vec<f64>> {
        let size = self.transition.len();
        let mut result: Vec<Vec<f64>> = (0..size)
            .map(|i| (0..size).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        let mut base = self.transition.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = mat_mul(&result, &base);
            }
            base = mat_mul(&base, &base);
            e >>= 1;
        }
        result
    }

    /// Exact probability of a cylinder event under the stationary product
    /// law. Each site's earliest constraint is drawn from `π`.
    pub fn cylinder_prob(&self, event: &CylinderEvent) -> Result<f64> {
        let alphabet = self.alphabet();
        let mut by_site: BTreeMap<&[i64], Vec<(i64, u8)>> = BTreeMap::new();
        for (site, t, v) in event.iter() {
            if v >= alphabet {
                return Err(Error::InvalidParameter(format!(
                    "symbol {v} outside alphabet of size {alphabet}"
                )));
            }
            by_site.entry(site).or_default().push((t, v));
        }
        let mut powers: HashMap<u64, Vec<Vec<f64>>> = HashMap::new();
        let mut prob = 1.0;
        for constraints in by_site.values() {
            // CylinderEvent iterates in time order, so each list is sorted.
            let (mut prev_t, mut prev_v) = constraints[0];
            prob *= self.stationary[prev_v as usize];
            for &(t, v) in &constraints[1..] {
                let gap = (t - prev_t) as u64;
                let m = powers
                    .entry(gap)
                    .or_insert_with(|| self.transition_power(gap));
                prob *= m[prev_v as usize][v as usize];
                prev_t = t;
                prev_v = v;
            }
            if prob == 0.0 {
                return Ok(0.0);
            }
        }
        Ok(prob)
    }

    pub(crate) fn sample_stationary(&self, u: f64) -> u8 {
        inverse_cdf(&self.stationary_cdf, u) as u8
    }

    pub(crate) fn sample_next(&self, current: u8, u: f64) -> u8 {
        inverse_cdf(&self.row_cdf[current as usize], u) as u8
    }

    /// Advances every site of a layer by one step, one uniform per site
    /// (`uniforms[site]`).
    pub fn step(&self, layer: &mut [u8], uniforms: &[f64]) {
        for (v, &u) in layer.iter_mut().zip(uniforms) {
            *v = self.sample_next(*v, u);
        }
    }
}
