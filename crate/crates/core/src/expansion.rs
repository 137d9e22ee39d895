//! Exact backward expansion of the environment process over products of
//! independent stationary site chains.
//!
//! For a walk started `k` steps in the past and arriving at the origin at
//! time 0,
//!
//! `P(η_k^{EP} ∈ B) = Σ_{γ ∈ Γ_k} Σ_σ P(B ∩ A(γ, σ)) · ∏_i α(σ_i, γ_{i+1} - γ_i)`
//!
//! where `A(γ, σ)` is the event that the environment shows patch `σ_i` around
//! `γ_i` at time `i`, for `i = -k..-1`. Every cylinder probability is exact
//! (matrix products), so the sum is an oracle for Monte Carlo estimates of
//! the environment process law.
//!
//! Enumeration is parallel over `γ`; each `γ` is summed sequentially with
//! compensated summation and the per-`γ` partial sums are merged in path
//! order, so results do not depend on the thread count.

use crate::environments::SiteChainSpec;
use crate::error::{Error, Result};
use crate::lattice::{increment_index_sequences, patch_offsets, CylinderEvent, JumpRange, Path};
use crate::parallel::{ordered_map, CompensatedSum};
use crate::walker::WalkKernel;

/// Default limit on `|ℛ|^k · |E|^{(2R+1)^d k}`.
pub const DEFAULT_BUDGET: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionInstance {
    pub env: SiteChainSpec,
    pub kernel: WalkKernel,
    pub k: usize,
    pub budget: u128,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionValue {
    pub value: f64,
    /// Number of `(γ, σ)` pairs enumerated.
    pub terms: u128,
}

/// Exact supremum ratios over observation events and a family of events.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioBounds {
    /// `sup |P(B | A) / P(B) - 1|`.
    pub m1: f64,
    /// `sup |P(B) / P(B | A) - 1|`; infinite when some `P(B | A) = 0 < P(B)`.
    pub m2: f64,
    pub m2_infinite: bool,
    /// Observation events with positive probability that were scanned.
    pub observation_events: u64,
}

/// One backward path with the absolute `(site, time)` cells its observation
/// event constrains, in step order and raster order within each step.
struct PathCells {
    jumps: Vec<usize>,
    cells: Vec<(Vec<i64>, i64)>,
}

impl ExpansionInstance {
    pub fn new(env: SiteChainSpec, kernel: WalkKernel, k: usize) -> Result<Self> {
        if env.alphabet() != kernel.alphabet() {
            return Err(Error::Shape(format!(
                "site chain alphabet {} differs from kernel alphabet {}",
                env.alphabet(),
                kernel.alphabet()
            )));
        }
        Ok(Self {
            env,
            kernel,
            k,
            budget: DEFAULT_BUDGET,
        })
    }

    pub fn with_budget(mut self, budget: u128) -> Self {
        self.budget = budget;
        self
    }

    fn cells_per_step(&self) -> usize {
        (2 * self.kernel.radius() + 1).pow(self.kernel.dim() as u32)
    }

    /// `|ℛ|^depth · |E|^{cells · depth}`, saturating.
    pub fn term_count_at(&self, depth: usize) -> u128 {
        let paths = (self.kernel.range().len() as u128).saturating_pow(depth as u32);
        let patches = (self.env.alphabet() as u128).saturating_pow((self.cells_per_step() * depth) as u32);
        paths.saturating_mul(patches)
    }

    pub fn term_count(&self) -> u128 {
        self.term_count_at(self.k)
    }

    fn check_budget(&self, terms: u128) -> Result<()> {
        if terms > self.budget {
            Err(Error::BudgetExceeded {
                terms,
                budget: self.budget,
            })
        } else {
            Ok(())
        }
    }

    fn paths(&self, depth: usize) -> Vec<PathCells> {
        let range: &JumpRange = self.kernel.range();
        let dim = self.kernel.dim();
        let offsets = patch_offsets(dim, self.kernel.radius());
        increment_index_sequences(depth, range.len())
            .into_iter()
            .map(|jumps| {
                let incs: Vec<&[i64]> = jumps.iter().map(|&j| range.get(j)).collect();
                let path = Path::from_increments(dim, &incs);
                let mut cells = Vec::with_capacity(depth * offsets.len());
                for step in 0..depth {
                    let t = step as i64 - depth as i64;
                    let centre = path.at(t);
                    for off in &offsets {
                        cells.push((centre.iter().zip(off).map(|(a, b)| a + b).collect(), t));
                    }
                }
                PathCells { jumps, cells }
            })
            .collect()
    }

    /// Calls `visit(A, weight)` for every patch sequence along one path.
    /// `skip_zero_weight` drops sequences whose walk weight vanishes.
    fn visit_observations<F>(&self, path: &PathCells, skip_zero_weight: bool, mut visit: F) -> Result<()>
    where
        F: FnMut(&CylinderEvent, f64) -> Result<()>,
    {
        let alphabet = self.env.alphabet();
        let base = alphabet as usize;
        let cells = self.cells_per_step();
        let depth = path.jumps.len();
        let per_step = base.pow(cells as u32);
        let total = per_step.pow(depth as u32);
        let mut step_codes = vec![0usize; depth];
        for code in 0..total {
            let mut rest = code;
            for slot in step_codes.iter_mut().rev() {
                *slot = rest % per_step;
                rest /= per_step;
            }
            let weight: f64 = step_codes
                .iter()
                .zip(&path.jumps)
                .map(|(&c, &j)| self.kernel.row(c)[j])
                .product();
            if skip_zero_weight && weight == 0.0 {
                continue;
            }
            let mut event = CylinderEvent::new();
            for (step, &c) in step_codes.iter().enumerate() {
                let mut rest = c;
                let mut values = vec![0u8; cells];
                for v in values.iter_mut().rev() {
                    *v = (rest % base) as u8;
                    rest /= base;
                }
                for (cell, v) in path.cells[step * cells..(step + 1) * cells].iter().zip(values) {
                    event.insert(cell.0.clone(), cell.1, v)?;
                }
            }
            visit(&event, weight)?;
        }
        Ok(())
    }

    fn sum_over_paths<F>(&self, term: F) -> Result<ExpansionValue>
    where
        F: Fn(&CylinderEvent, f64) -> Result<f64> + Sync,
    {
        let terms = self.term_count();
        self.check_budget(terms)?;
        let paths = self.paths(self.k);
        let partials = ordered_map(&paths, |p| {
            let mut acc = CompensatedSum::new();
            self.visit_observations(p, true, |a, w| {
                acc.add(term(a, w)?);
                Ok(())
            })
            .map(|_| acc)
        });
        let mut total = CompensatedSum::new();
        for p in partials {
            total.merge(&p?);
        }
        Ok(ExpansionValue {
            value: total.value(),
            terms,
        })
    }

    /// `P(η_k^{EP} ∈ B)` by exhaustive expansion.
    pub fn exact_backward_law(&self, b: &CylinderEvent) -> Result<ExpansionValue> {
        if self.k == 0 {
            return Ok(ExpansionValue {
                value: self.env.cylinder_prob(b)?,
                terms: 1,
            });
        }
        self.sum_over_paths(|a, w| match a.intersect(b) {
            Ok(ab) => Ok(self.env.cylinder_prob(&ab)? * w),
            Err(Error::Contradiction { .. }) => Ok(0.0),
            Err(e) => Err(e),
        })
    }

    /// `|Σ_γ Σ_σ P(A(γ, σ)) · weight - 1|`.
    pub fn partition_check(&self) -> Result<f64> {
        let total = self.sum_over_paths(|a, w| Ok(self.env.cylinder_prob(a)? * w))?;
        Ok((total.value - 1.0).abs())
    }

    /// `P(η_k^{EP} ∈ B) / P(B)`.
    pub fn rn_density(&self, b: &CylinderEvent) -> Result<f64> {
        let pb = self.env.cylinder_prob(b)?;
        if pb == 0.0 {
            return Err(Error::UndefinedRatio);
        }
        Ok(self.exact_backward_law(b)?.value / pb)
    }

    /// Exact `sup_{A, B} |P(B|A)/P(B) - 1|` and `|P(B)/P(B|A) - 1|` over all
    /// observation events of depth `l` with positive probability and every
    /// assignment `B` of the alphabet to `support`.
    pub fn ratio_bounds(&self, l: usize, support: &[(Vec<i64>, i64)]) -> Result<RatioBounds> {
        let family = CylinderEvent::all_on_support(support, self.env.alphabet())?;
        let family_p = family
            .iter()
            .map(|b| self.env.cylinder_prob(b))
            .collect::<Result<Vec<f64>>>()?;
        self.check_budget(self.term_count_at(l).saturating_mul(family.len() as u128))?;
        let paths = self.paths(l);
        let partials = ordered_map(&paths, |p| {
            let mut out = RatioBounds {
                m1: 0.0,
                m2: 0.0,
                m2_infinite: false,
                observation_events: 0,
            };
            self.visit_observations(p, false, |a, _| {
                let pa = self.env.cylinder_prob(a)?;
                if pa == 0.0 {
                    return Ok(());
                }
                out.observation_events += 1;
                for (b, &pb) in family.iter().zip(&family_p) {
                    if pb == 0.0 {
                        continue;
                    }
                    let pab = match a.intersect(b) {
                        Ok(ab) => self.env.cylinder_prob(&ab)?,
                        Err(Error::Contradiction { .. }) => 0.0,
                        Err(e) => return Err(e),
                    };
                    let cond = pab / pa;
                    out.m1 = out.m1.max((cond / pb - 1.0).abs());
                    if cond == 0.0 {
                        out.m2_infinite = true;
                    } else {
                        out.m2 = out.m2.max((pb / cond - 1.0).abs());
                    }
                }
                Ok(())
            })
            .map(|_| out)
        });
        let mut total = RatioBounds {
            m1: 0.0,
            m2: 0.0,
            m2_infinite: false,
            observation_events: 0,
        };
        for p in partials {
            let p = p?;
            total.m1 = total.m1.max(p.m1);
            total.m2 = total.m2.max(p.m2);
            total.m2_infinite |= p.m2_infinite;
            total.observation_events += p.observation_events;
        }
        if total.m2_infinite {
            total.m2 = f64::INFINITY;
        }
        Ok(total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{enumerate_paths, path_weight, ObservationEvent, Patch};
    use approx::assert_abs_diff_eq;

    fn chain() -> SiteChainSpec {
        SiteChainSpec::from_transition(vec![vec![0.7, 0.3], vec![0.4, 0.6]]).unwrap()
    }

    fn r0_kernel() -> WalkKernel {
        WalkKernel::new(1, 0, 2, JumpRange::nearest_neighbour(1), vec![vec![0.4, 0.4, 0.2], vec![0.1, 0.3, 0.6]]).unwrap()
    }

    fn r1_kernel() -> WalkKernel {
        WalkKernel::from_fn(1, 1, 2, JumpRange::nearest_neighbour(1), |p| {
            let left = f64::from(p.values()[0]);
            let right = f64::from(p.values()[2]);
            let centre = f64::from(p.centre());
            let stay = 0.2 + 0.3 * centre;
            let l = (1.0 - stay) * (0.3 + 0.4 * left) / (0.6 + 0.4 * left + 0.4 * right);
            vec![l, stay, 1.0 - stay - l]
        })
        .unwrap()
    }

    fn single(site: i64, t: i64, v: u8) -> CylinderEvent {
        CylinderEvent::from_constraints([(vec![site], t, v)]).unwrap()
    }

    #[test]
    fn depth_zero_is_the_environment_law() {
        let inst = ExpansionInstance::new(chain(), r0_kernel(), 0).unwrap();
        let b = single(0, 0, 1);
        assert_abs_diff_eq!(inst.exact_backward_law(&b).unwrap().value, 3.0 / 7.0, epsilon = 1e-15);
        assert_abs_diff_eq!(inst.rn_density(&b).unwrap(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn blind_kernel_reproduces_environment_law() {
        let blind = WalkKernel::environment_blind(1, 1, 2, JumpRange::nearest_neighbour(1), vec![0.2, 0.5, 0.3]).unwrap();
        for k in 1..=3 {
            let inst = ExpansionInstance::new(chain(), blind.clone(), k).unwrap();
            for b in [single(0, 0, 1), single(1, 0, 0), CylinderEvent::from_constraints([(vec![-1], 0, 1), (vec![0], -1, 0)]).unwrap()] {
                let law = inst.exact_backward_law(&b).unwrap().value;
                assert_abs_diff_eq!(law, chain().cylinder_prob(&b).unwrap(), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn partition_residuals() {
        let lazy = WalkKernel::lazy(1, 2, JumpRange::nearest_neighbour(1)).unwrap();
        assert!(ExpansionInstance::new(chain(), lazy, 3).unwrap().partition_check().unwrap() < 1e-12);
        let uniform = WalkKernel::environment_blind(1, 0, 2, JumpRange::nearest_neighbour(1), vec![1.0 / 3.0; 3]).unwrap();
        let sym = SiteChainSpec::two_state(0.3, 0.3).unwrap();
        assert!(ExpansionInstance::new(sym, uniform, 3).unwrap().partition_check().unwrap() < 1e-9);
        for kernel in [r0_kernel(), r1_kernel()] {
            for k in 1..=3 {
                let r = ExpansionInstance::new(chain(), kernel.clone(), k).unwrap().partition_check().unwrap();
                assert!(r < 1e-9, "k={k} residual {r}");
            }
        }
    }

    #[test]
    fn complement_sums_to_one() {
        let inst = ExpansionInstance::new(chain(), r1_kernel(), 2).unwrap();
        let support = vec![(vec![-1], 0), (vec![1], 0)];
        let total: f64 = CylinderEvent::all_on_support(&support, 2)
            .unwrap()
            .iter()
            .map(|b| inst.exact_backward_law(b).unwrap().value)
            .sum();
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn budget_guard() {
        let inst = ExpansionInstance::new(chain(), r1_kernel(), 3).unwrap().with_budget(100);
        assert!(matches!(inst.partition_check(), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn matches_explicit_sum_over_observation_events() {
        // Independent route: build every ObservationEvent explicitly and use
        // path_weight and cylinder probabilities.
        let kernel = r0_kernel();
        let k = 2;
        let inst = ExpansionInstance::new(chain(), kernel.clone(), k).unwrap();
        let b = CylinderEvent::from_constraints([(vec![0], 0, 1), (vec![1], 0, 0)]).unwrap();
        let mut direct = 0.0;
        for path in enumerate_paths(k, kernel.range()) {
            for code in 0..4usize {
                let patches = vec![
                    Patch::from_code(1, 0, 2, code >> 1),
                    Patch::from_code(1, 0, 2, code & 1),
                ];
                let obs = ObservationEvent::new(path.clone(), patches).unwrap();
                let w = path_weight(&kernel, &obs).unwrap();
                let p = match obs.to_cylinder().unwrap().intersect(&b) {
                    Ok(ab) => chain().cylinder_prob(&ab).unwrap(),
                    Err(_) => 0.0,
                };
                direct += p * w;
            }
        }
        assert_abs_diff_eq!(inst.exact_backward_law(&b).unwrap().value, direct, epsilon = 1e-15);
    }

    #[test]
    fn memoryless_chain_has_unit_density() {
        let memoryless = SiteChainSpec::memoryless(vec![0.35, 0.65]).unwrap();
        for k in 1..=3 {
            let inst = ExpansionInstance::new(memoryless.clone(), r1_kernel(), k).unwrap();
            let support = vec![(vec![-1], 0), (vec![0], 0), (vec![1], 0)];
            for b in CylinderEvent::all_on_support(&support, 2).unwrap() {
                assert_abs_diff_eq!(inst.rn_density(&b).unwrap(), 1.0, epsilon = 1e-12);
            }
        }
        let inst = ExpansionInstance::new(memoryless, r1_kernel(), 2).unwrap();
        let rb = inst.ratio_bounds(2, &[(vec![0], 0)]).unwrap();
        assert!(rb.m1 < 1e-12 && rb.m2 < 1e-12);
    }

    #[test]
    fn undefined_ratio() {
        let chain = SiteChainSpec::new(vec![vec![1.0, 0.0], vec![0.5, 0.5]], vec![1.0, 0.0]).unwrap();
        let inst = ExpansionInstance::new(chain, r0_kernel(), 1).unwrap();
        assert_eq!(inst.rn_density(&single(0, 0, 1)), Err(Error::UndefinedRatio));
    }

    #[test]
    fn density_tends_to_one_with_distance() {
        let inst = ExpansionInstance::new(chain(), r0_kernel(), 3).unwrap();
        let gaps: Vec<f64> = (1..=6)
            .map(|l| (inst.rn_density(&single(0, l, 1)).unwrap() - 1.0).abs())
            .collect();
        for w in gaps.windows(2) {
            assert!(w[1] <= w[0] + 1e-15, "{gaps:?}");
        }
        assert!(gaps[5] < gaps[0]);
    }

    #[test]
    fn deterministic_chain_gives_infinite_m2() {
        let identity = SiteChainSpec::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]], vec![0.5, 0.5]).unwrap();
        let lazy = WalkKernel::lazy(1, 2, JumpRange::nearest_neighbour(1)).unwrap();
        let inst = ExpansionInstance::new(identity, lazy, 1).unwrap();
        let rb = inst.ratio_bounds(1, &[(vec![0], 0)]).unwrap();
        assert!(rb.m2_infinite && rb.m2.is_infinite());
    }

    #[test]
    fn ratio_bounds_decrease_with_distance() {
        let c = SiteChainSpec::two_state(0.4, 0.6).unwrap();
        let inst = ExpansionInstance::new(c, r0_kernel(), 2).unwrap();
        let m1: Vec<f64> = (0..5)
            .map(|l| inst.ratio_bounds(2, &[(vec![0], l)]).unwrap().m1)
            .collect();
        for w in m1.windows(2) {
            assert!(w[1] <= w[0] + 1e-15, "{m1:?}");
        }
        assert!(m1.iter().all(|m| m.is_finite()));
    }

    #[test]
    fn relabelling_invariance() {
        let c = chain();
        let swapped = SiteChainSpec::from_transition(vec![vec![0.6, 0.4], vec![0.3, 0.7]]).unwrap();
        let k0 = r1_kernel();
        let k1 = WalkKernel::from_fn(1, 1, 2, JumpRange::nearest_neighbour(1), |p| {
            let flipped = Patch::new(1, 1, p.values().iter().map(|v| 1 - v).collect()).unwrap();
            k0.row(flipped.code(2)).to_vec()
        })
        .unwrap();
        let a = ExpansionInstance::new(c, k0.clone(), 2).unwrap();
        let b = ExpansionInstance::new(swapped, k1, 2).unwrap();
        for (site, v) in [(0, 1u8), (1, 0), (-1, 1)] {
            let ra = a.rn_density(&single(site, 0, v)).unwrap();
            let rb = b.rn_density(&single(site, 0, 1 - v)).unwrap();
            assert_abs_diff_eq!(ra, rb, epsilon = 1e-12);
        }
    }

    #[test]
    fn thread_count_invariance() {
        let inst = ExpansionInstance::new(chain(), r1_kernel(), 3).unwrap();
        let b = single(0, 0, 1);
        let one = crate::parallel::with_threads(1, || inst.exact_backward_law(&b).unwrap().value);
        let four = crate::parallel::with_threads(4, || inst.exact_backward_law(&b).unwrap().value);
        assert_eq!(one.to_bits(), four.to_bits());
    }
}
