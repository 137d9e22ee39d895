//! Coupling constructions: graphical, disagreement-percolation and strong
//! disagreement-percolation couplings of PCAs, the layered shared-resampling
//! coupling, the OU reflection coupling, and directed percolation tooling.

pub mod checks;
pub mod graphical;
pub mod layered;
pub mod ou_reflection;
pub mod percolation;

pub use checks::{dp_check, sdp_check, DpCheckReport, SdpCheckReport};
pub use graphical::{check_sdp_subcritical, ising_pca_threshold, CouplingTriple, PcaCoupler, SdpParams, SubcriticalCheck};
pub use layered::{layered_shared_step, sample_extremal, uncoupled_probabilities, ExtremalSums};
pub use ou_reflection::{ou_reflection_coupling, ReflectionStep};
pub use percolation::{estimate_threshold, percolation_survival, Adjacency, SeedSet, SurvivalEstimate};
