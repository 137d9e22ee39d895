//! Stability of the law of the environment seen from the walker along a
//! family of models `(env_n, α_n)` converging to a limit `(env, α)`.

use crate::environments::EnvModel;
use crate::error::{Error, Result};
use crate::estimators::ep_law::{ep_histogram, EpHistogram};
use crate::lattice::{CylinderEvent, TorusGeometry};
use crate::walker::WalkKernel;

#[derive(Debug, Clone)]
pub struct FamilyMember {
    pub label: u64,
    pub model: EnvModel,
    pub kernel: WalkKernel,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityRow {
    pub label: u64,
    /// `sup_{m ≥ n} ‖α_m - α_n‖_∞` over the supplied later members, and
    /// against the limit.
    pub kernel_distance: f64,
    /// `|P̂_n(B) - P̂(B)|` per event.
    pub gaps: Vec<f64>,
    pub errors: Vec<f64>,
    pub max_gap: f64,
    pub max_gap_se: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityTable {
    pub steps: usize,
    pub replicas: u64,
    pub limit: Vec<f64>,
    pub rows: Vec<StabilityRow>,
}

/// Compares the EP law at time `steps` of every member with the limit on the
/// given events (time 0, inside the radius-`window` box). Members use stream
/// families `1, 2, ...` and the limit family 0, so all runs are independent.
#[allow(clippy::too_many_arguments)]
pub fn stability(
    members: &[FamilyMember],
    limit: &FamilyMember,
    geometry: &TorusGeometry,
    steps: usize,
    window: usize,
    events: &[CylinderEvent],
    replicas: u64,
    master_seed: u64,
) -> Result<StabilityTable> {
    if events.is_empty() {
        return Err(Error::InvalidParameter("at least one event is required".into()));
    }
    let probs = |h: &EpHistogram| -> Result<Vec<(f64, f64)>> {
        events
            .iter()
            .map(|e| h.probability(e).map(|p| (p.ep, p.ep_se)))
            .collect()
    };
    let limit_h = ep_histogram(&limit.model, geometry, &limit.kernel, steps, window, replicas, master_seed, 0)?;
    let limit_p = probs(&limit_h)?;
    let mut rows = Vec::with_capacity(members.len());
    for (i, m) in members.iter().enumerate() {
        let h = ep_histogram(&m.model, geometry, &m.kernel, steps, window, replicas, master_seed, i as u64 + 1)?;
        let p = probs(&h)?;
        let mut kernel_distance = m.kernel.sup_distance(&limit.kernel)?;
        for later in &members[i + 1..] {
            kernel_distance = kernel_distance.max(m.kernel.sup_distance(&later.kernel)?);
        }
        let gaps: Vec<f64> = p.iter().zip(&limit_p).map(|(a, b)| (a.0 - b.0).abs()).collect();
        let errors: Vec<f64> = p.iter().zip(&limit_p).map(|(a, b)| a.1.hypot(b.1)).collect();
        let (k, &max_gap) = gaps
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .expect("events non-empty");
        rows.push(StabilityRow {
            label: m.label,
            kernel_distance,
            max_gap,
            max_gap_se: errors[k],
            gaps,
            errors,
        });
    }
    Ok(StabilityTable {
        steps,
        replicas,
        limit: limit_p.iter().map(|p| p.0).collect(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::environments::SiteChainSpec;
    use crate::lattice::JumpRange;

    #[test]
    fn gaps_shrink_along_mixture_family() {
        let model = EnvModel::SiteChain(SiteChainSpec::two_state(0.1, 0.1).unwrap());
        let alpha = WalkKernel::new(1, 0, 2, JumpRange::nearest_neighbour(1), vec![vec![0.8, 0.1, 0.1], vec![0.1, 0.1, 0.8]]).unwrap();
        let uniform = WalkKernel::uniform(1, 2).unwrap();
        let members: Vec<FamilyMember> = [1u64, 2, 8]
            .iter()
            .map(|&n| FamilyMember {
                label: n,
                model: model.clone(),
                kernel: alpha.mix(&uniform, 1.0 / n as f64).unwrap(),
            })
            .collect();
        let limit = FamilyMember {
            label: 0,
            model: model.clone(),
            kernel: alpha.clone(),
        };
        let events = vec![CylinderEvent::from_constraints([(vec![0], 0, 1)]).unwrap()];
        let g = TorusGeometry::new(1, 41, 10).unwrap();
        let t = stability(&members, &limit, &g, 10, 0, &events, 20_000, 5).unwrap();
        assert!(t.rows[0].kernel_distance > t.rows[2].kernel_distance);
        assert!(t.rows[2].max_gap < t.rows[0].max_gap + 4.0 * t.rows[0].max_gap_se);
        assert!(t.rows[2].max_gap < 4.0 * t.rows[2].max_gap_se + 0.02);
    }
}
