//! Seeded, reproducible samplers for the supported random closed sets.

mod gamma;
mod laws;
mod model;
mod rng;

pub use gamma::{eta_ball, gamma_lower_bound};
pub use laws::{CountLaw, DensitySpec, GrainLaw, LengthLaw, Nucleation};
pub use model::{
    extend_segment_to_min_length, growth_union, sample, sample_birth_growth, GrowthTarget,
    ModelSpec,
};
pub use rng::RngStream;

pub(crate) use model::draw_grain;
