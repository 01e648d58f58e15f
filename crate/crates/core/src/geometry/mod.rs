//! Exact primitive sets, distance kernels, Hausdorff-measure clipping,
//! union-of-disks boundaries and grid quadrature of enlargement volumes.
//!
//! Supported ambient dimensions are d ∈ {1, 2}; one-dimensional geometry is
//! embedded on the x-axis of the plane.

mod arcs;
mod grain;
mod primitives;
mod raster;
mod realized;

pub use arcs::boundary_arcs;
pub use grain::Grain;
pub use primitives::{dilate_window, unit_ball_volume, Point, Window};
pub use raster::{enlargement_volume, quadrature_bound, Grid};
pub use realized::{distance_to_grains, distance_to_set, in_enlargement, RealizedSet};

pub(crate) use realized::hits_ball;

/// Exact distance from `x` to a grain. Dimension mismatch is an error.
pub fn distance(x: &Point, g: &Grain) -> crate::Result<f64> {
    g.distance(x)
}

/// Exact `H^n(g ∩ w)`.
pub fn clip_measure(g: &Grain, w: &Window) -> f64 {
    g.clip_measure(w)
}

/// Exact `H^n(g ∩ B_r(center))`.
pub fn measure_in_ball(g: &Grain, center: &Point, r: f64) -> f64 {
    g.measure_in_ball(center, r)
}
