//! Discrete and pointwise realizations of the fractional operators on an interval.

pub mod cutoff;
pub mod lemmas;
pub mod lz;
pub mod pointwise;
pub mod profile;
pub mod stiffness;

pub use cutoff::{eta0, CutoffFunction, K1, K2};
pub use lemmas::{lemma22_bound, lemma23_bound, Lemma22Bound, Lemma23Bound};
pub use lz::{lz_apply, LzValue};
pub use pointwise::pointwise_fraclap;
pub use profile::{CompactProfile, SampledFunction, WindowedPlaneWave};
pub use stiffness::{
    assemble_exterior, assemble_mass, assemble_stiffness, assemble_stiffness_with, exterior_weight,
    stiffness_symbol,
};
