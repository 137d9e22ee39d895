//! Monte Carlo estimators. Every estimator takes a replica count and a
//! master seed, derives one stream per replica and merges batch results in a
//! fixed order, so its output does not depend on the thread count.

pub mod clt;
pub mod ep_gap;
pub mod ep_law;
pub mod layered_mixing;
pub mod ou_mixing;
pub mod report;
pub mod rn_empirical;
pub mod speed;
pub mod stability;
pub mod stats;
pub mod tv;

pub use clt::{clt_annealed, clt_quenched, CltConfig, CltReport};
pub use ep_gap::{ep_env_gap, EpGapReport};
pub use ep_law::{ep_histogram, EpHistogram, EventProbability};
pub use layered_mixing::{layered_mixing, LayeredMixingReport, LayeredMode};
pub use ou_mixing::{ou_coupling_tails, ou_mixing, CouplingTailReport, OuMixingReport, SignConstraint};
pub use report::{binomial_se, EstimatorReport, MixingCurve, SlopeFit};
pub use rn_empirical::{rn_empirical, RnTable};
pub use speed::speed_estimate;
pub use stability::{stability, FamilyMember, StabilityTable};
pub use tv::tv_estimate;
