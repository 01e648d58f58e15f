//! Monte Carlo estimators of mean densities, convergence sweeps and the
//! per-realization property checks.

mod config;
mod covering;
mod field;
mod pointwise;
mod prop9;
mod stats;
mod sweep;

pub use config::{EstimatorConfig, EstimatorKind};
pub use covering::{covering_bound_check, covering_resolution, CoveringCheck};
pub use field::{
    density_field, expected_measure_in, expected_measure_oracle, integrated_estimate,
    integrated_vs_oracle, DensityField, IntegratedComparison,
};
pub use pointwise::{delta_oplus, delta_scale, enlargement_normalizer, hit_prob};
pub use prop9::{prop9_triple, Prop9Triple};
pub use stats::PointEstimate;
pub use sweep::{closed_form_reference, r_sweep, SweepMeta, SweepReport, SweepRow};
