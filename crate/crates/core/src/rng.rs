//! Counter-based splittable random streams.
//!
//! Every random quantity in the crate comes from a [`RngStream`], a pair
//! `(master_seed, stream_index)` that names one ChaCha8 keystream. ChaCha is
//! counter based: the value sequence of a stream is a pure function of the
//! pair, distinct stream indices give independent keystreams, and any
//! position in a stream can be reached in O(1). Simulations split streams per
//! `(replica, purpose)` so results do not depend on scheduling.
//!
//! Fields that evolve in time draw each time layer from its own block of the
//! stream ([`RngStream::layer`]), so the uniforms used at time `t` do not
//! depend on how many draws earlier layers consumed.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Words (32-bit) reserved for one time layer inside a stream.
const LAYER_WORDS_LOG2: u32 = 32;

/// What a stream is used for. Combined with a replica index into the
/// stream index so that purposes never share a keystream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u64)]
pub enum Purpose {
    Environment = 0,
    Walker = 1,
    Coupling = 2,
    Pilot = 3,
    Init = 4,
    Jitter = 5,
    Bootstrap = 6,
    Aux = 7,
}

const PURPOSE_SLOTS: u64 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngStream {
    master_seed: u64,
    stream_index: u64,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        Self {
            master_seed,
            stream_index,
        }
    }

    /// Stream for one replica and purpose. `family` separates independent
    /// runs sharing a master seed (e.g. the members of a perturbation family).
    pub fn for_replica(master_seed: u64, family: u64, replica: u64, purpose: Purpose) -> Self {
        // 2^40 replicas per family is far beyond any experiment here.
        let index = (family << 44) | (replica << 4) | (purpose as u64 % PURPOSE_SLOTS);
        Self::new(master_seed, index)
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_index(&self) -> u64 {
        self.stream_index
    }

    /// A generator positioned at the start of the stream.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_index);
        rng
    }

    /// A generator positioned at the start of time layer `t`.
    pub fn layer(&self, t: u64) -> ChaCha8Rng {
        let mut rng = self.rng();
        rng.set_word_pos(u128::from(t) << LAYER_WORDS_LOG2);
        rng
    }
}

/// Uniform on (0, 1] with 53 random bits. The closed upper end makes
/// `u <= p` an exact Bernoulli(p) test for p = 0 and p = 1.
#[inline]
pub fn uniform_oc<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    ((rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform on [a, b) with 53 random bits.
#[inline]
pub fn uniform_range<R: RngCore + ?Sized>(rng: &mut R, a: f64, b: f64) -> f64 {
    let u = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
    a + (b - a) * u
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_pairs_give_identical_bytes() {
        let a = RngStream::new(7, 3);
        let b = RngStream::new(7, 3);
        let mut ra = a.rng();
        let mut rb = b.rng();
        let mut ba = [0u8; 256];
        let mut bb = [0u8; 256];
        ra.fill_bytes(&mut ba);
        rb.fill_bytes(&mut bb);
        assert_eq!(ba, bb);
    }

    #[test]
    fn distinct_streams_differ() {
        let mut a = RngStream::new(7, 3).rng();
        let mut b = RngStream::new(7, 4).rng();
        let xs: Vec<u64> = (0..8).map(|_| a.next_u64()).collect();
        let ys: Vec<u64> = (0..8).map(|_| b.next_u64()).collect();
        assert_ne!(xs, ys);
    }

    #[test]
    fn layer_positions_are_independent_of_prior_consumption() {
        let s = RngStream::new(11, 0);
        let mut direct = s.layer(5);
        let mut walked = s.rng();
        walked.set_word_pos(5u128 << LAYER_WORDS_LOG2);
        assert_eq!(direct.next_u64(), walked.next_u64());
    }

    #[test]
    fn uniform_oc_bounds() {
        let mut rng = RngStream::new(1, 1).rng();
        for _ in 0..10_000 {
            let u = uniform_oc(&mut rng);
            assert!(u > 0.0 && u <= 1.0);
        }
    }

    #[test]
    fn replica_streams_do_not_collide_across_purposes() {
        let a = RngStream::for_replica(1, 0, 5, Purpose::Walker);
        let b = RngStream::for_replica(1, 0, 5, Purpose::Environment);
        let c = RngStream::for_replica(1, 1, 5, Purpose::Walker);
        assert_ne!(a.stream_index(), b.stream_index());
        assert_ne!(a.stream_index(), c.stream_index());
    }

    #[test]
    fn cross_stream_correlation_is_small() {
        let mut a = RngStream::new(99, 0).rng();
        let mut b = RngStream::new(99, 1).rng();
        let n = 100_000;
        let (mut sxy, mut sx, mut sy, mut sxx, mut syy) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for _ in 0..n {
            let x = uniform_oc(&mut a);
            let y = uniform_oc(&mut b);
            sx += x;
            sy += y;
            sxy += x * y;
            sxx += x * x;
            syy += y * y;
        }
        let nf = n as f64;
        let cov = sxy / nf - sx * sy / nf / nf;
        let corr = cov / ((sxx / nf - (sx / nf).powi(2)) * (syy / nf - (sy / nf).powi(2))).sqrt();
        assert!(corr.abs() < 4.0 / nf.sqrt(), "corr {corr}");
    }
}
