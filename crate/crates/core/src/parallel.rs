//! Deterministic replica parallelism.
//!
//! Replicas are split into fixed-size batches that depend only on the replica
//! count, each batch is mapped independently (in parallel via rayon) and the
//! batch results are merged sequentially in batch order. Because the batch
//! boundaries and the merge order are fixed, results are identical for any
//! thread count.

use std::ops::Range;

use rayon::prelude::*;

/// Default batch size for Monte Carlo replicas.
pub const DEFAULT_BATCH: u64 = 4096;

/// Maps `map` over fixed batches of `0..replicas` in parallel, then folds the
/// batch results in order with `merge`.
pub fn map_reduce<A, M, R>(replicas: u64, batch: u64, map: M, mut merge: R) -> Option<A>
where
    A: Send,
    M: Fn(Range<u64>) -> A + Sync,
    R: FnMut(A, A) -> A,
{
    let batch = batch.max(1);
    let n_batches = replicas.div_ceil(batch);
    let parts: Vec<A> = (0..n_batches)
        .into_par_iter()
        .map(|b| map(b * batch..((b + 1) * batch).min(replicas)))
        .collect();
    let mut iter = parts.into_iter();
    let first = iter.next()?;
    Some(iter.fold(first, &mut merge))
}

/// Maps `f` over `items` in parallel, preserving order.
pub fn ordered_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.par_iter().map(f).collect()
}

/// Runs `f` inside a dedicated pool with `threads` workers (0 = rayon's
/// default).
pub fn with_threads<T: Send, F: FnOnce() -> T + Send>(threads: usize, f: F) -> T {
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

/// Neumaier compensated sum.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn merge(&mut self, other: &CompensatedSum) {
        self.add(other.sum);
        self.add(other.comp);
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_reduce_is_thread_count_invariant() {
        let run = |threads| {
            with_threads(threads, || {
                map_reduce(
                    100_003,
                    1000,
                    |r| r.map(|i| 1.0 / (i as f64 + 1.0)).collect::<CompensatedSum>(),
                    |mut a, b| {
                        a.merge(&b);
                        a
                    },
                )
                .unwrap()
                .value()
            })
        };
        assert_eq!(run(1).to_bits(), run(4).to_bits());
    }

    #[test]
    fn empty_reduce_is_none() {
        assert!(map_reduce(0, 10, |_| 0u64, |a, b| a + b).is_none());
    }

    #[test]
    fn compensated_sum_recovers_cancellation() {
        let s: CompensatedSum = [1.0, 1e100, 1.0, -1e100].into_iter().collect();
        assert_eq!(s.value(), 2.0);
    }

    #[test]
    fn ordered_map_preserves_order() {
        let v: Vec<u32> = (0..1000).collect();
        assert_eq!(ordered_map(&v, |x| x * 2), v.iter().map(|x| x * 2).collect::<Vec<_>>());
    }
}
