//! Total-variation distance between two categorical samplers.

use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::estimators::report::EstimatorReport;
use crate::parallel::{map_reduce, DEFAULT_BATCH};
use crate::rng::{Purpose, RngStream};

/// `(master_seed, family)` selecting the replica streams of one sampler.
pub type StreamFamily = (u64, u64);

/// Plug-in TV `½ Σ |p̂ - q̂|` with a delta-method error: the TV is the linear
/// functional `½ Σ s_k (p̂_k - q̂_k)` for the observed signs `s_k`, whose
/// variance is the sum of two multinomial variances.
pub fn tv_from_counts(p: &[u64], q: &[u64]) -> Result<(f64, f64)> {
    if p.len() != q.len() {
        return Err(Error::Shape("count vectors differ in length".into()));
    }
    let np: u64 = p.iter().sum();
    let nq: u64 = q.iter().sum();
    if np == 0 || nq == 0 {
        return Err(Error::InvalidParameter("empty sample".into()));
    }
    let ph: Vec<f64> = p.iter().map(|&c| c as f64 / np as f64).collect();
    let qh: Vec<f64> = q.iter().map(|&c| c as f64 / nq as f64).collect();
    let signs: Vec<f64> = ph.iter().zip(&qh).map(|(a, b)| if a < b { -1.0 } else { 1.0 }).collect();
    let tv = 0.5 * ph.iter().zip(&qh).map(|(a, b)| (a - b).abs()).sum::<f64>();
    let var = |h: &[f64], n: u64| {
        let m: f64 = h.iter().zip(&signs).map(|(a, s)| a * s).sum();
        (1.0 - m * m).max(0.0) / n as f64
    };
    let mut se = 0.5 * (var(&ph, np) + var(&qh, nq)).sqrt();
    if se == 0.0 {
        // Both samples degenerate on one category.
        se = 0.5 * (1.0 / np as f64 + 1.0 / nq as f64).sqrt();
    }
    Ok((tv, se))
}

/// Category counts of `replicas` draws of `sampler`, replica `r` using the
/// stream `(family, r)`.
pub fn sample_counts<F>(sampler: &F, categories: usize, replicas: u64, (seed, family): StreamFamily) -> Result<Vec<u64>>
where
    F: Fn(&mut ChaCha8Rng) -> usize + Sync,
{
    map_reduce(
        replicas,
        DEFAULT_BATCH,
        |range| -> Result<Vec<u64>> {
            let mut c = vec![0u64; categories];
            for r in range {
                let mut rng = RngStream::for_replica(seed, family, r, Purpose::Aux).rng();
                let k = sampler(&mut rng);
                *c.get_mut(k)
                    .ok_or_else(|| Error::Shape(format!("sampler returned category {k} of {categories}")))? += 1;
            }
            Ok(c)
        },
        |a, b| {
            let (mut a, b) = (a?, b?);
            a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
            Ok(a)
        },
    )
    .ok_or_else(|| Error::InvalidParameter("at least one replica is required".into()))?
}

/// TV between the laws of two samplers. Giving both the same stream family
/// and the same sampler yields exactly 0.
pub fn tv_estimate<F1, F2>(s1: F1, s2: F2, categories: usize, replicas: u64, streams1: StreamFamily, streams2: StreamFamily) -> Result<EstimatorReport>
where
    F1: Fn(&mut ChaCha8Rng) -> usize + Sync,
    F2: Fn(&mut ChaCha8Rng) -> usize + Sync,
{
    let p = sample_counts(&s1, categories, replicas, streams1)?;
    let q = sample_counts(&s2, categories, replicas, streams2)?;
    let (tv, se) = tv_from_counts(&p, &q)?;
    Ok(EstimatorReport::scalar(tv, se, replicas, streams1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::uniform_oc;

    fn biased(p: f64) -> impl Fn(&mut ChaCha8Rng) -> usize + Sync {
        move |rng| usize::from(uniform_oc(rng) <= p)
    }

    #[test]
    fn identical_samplers_and_seeds_give_zero() {
        let r = tv_estimate(biased(0.3), biased(0.3), 2, 5000, (7, 0), (7, 0)).unwrap();
        assert_eq!(r.value(), 0.0);
        assert!(r.se() > 0.0);
    }

    #[test]
    fn bernoulli_tv() {
        let r = tv_estimate(biased(0.3), biased(0.5), 2, 50_000, (1, 0), (1, 1)).unwrap();
        assert!((r.value() - 0.2).abs() < 4.0 * r.se(), "{r:?}");
    }

    #[test]
    fn tv_bounded() {
        let (tv, _) = tv_from_counts(&[10, 0], &[0, 10]).unwrap();
        assert_eq!(tv, 1.0);
        assert!(tv_from_counts(&[1], &[1, 2]).is_err());
    }
}
