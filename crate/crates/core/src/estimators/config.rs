use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Point, Window};

/// Settings shared by the field, integral and sweep estimators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimatorConfig {
    /// Enlargement radii, strictly descending, each in `(0, 1]`.
    pub radii: Vec<f64>,
    /// Number of independent realizations `M`.
    pub replicates: u64,
    /// Quadrature cells per axis on `region`.
    pub grid_per_axis: usize,
    pub seed: u64,
    /// Region `A` whose measure is estimated.
    pub region: Window,
    /// Sampling window `W`; must contain `A` in its interior.
    pub clip: Window,
    /// Evaluation point of the pointwise estimators; defaults to the
    /// center of `region`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<Point>,
}

impl EstimatorConfig {
    pub fn validate(&self) -> Result<()> {
        if self.radii.is_empty() {
            return Err(Error::invalid("radii", "at least one radius is required"));
        }
        for &r in &self.radii {
            if !(r > 0.0 && r <= 1.0) {
                return Err(Error::invalid(
                    "radii",
                    format!("radius {r} outside (0, 1]; the density bound only covers r in (0, 1)"),
                ));
            }
        }
        if self.radii.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::invalid("radii", "must be strictly descending"));
        }
        if self.replicates == 0 {
            return Err(Error::invalid("replicates", "must be at least 1"));
        }
        if self.grid_per_axis == 0 {
            return Err(Error::invalid("grid_per_axis", "must be at least 1"));
        }
        if self.region.dim() != self.clip.dim() {
            return Err(Error::invalid("region", "must have the dimension of clip"));
        }
        if !self.clip.strictly_contains(&self.region) {
            return Err(Error::invalid("region", "must lie in the interior of clip"));
        }
        if let Some(p) = &self.point {
            if p.dim() != self.region.dim() {
                return Err(Error::invalid("point", "must have the dimension of region"));
            }
        }
        Ok(())
    }

    pub fn eval_point(&self) -> Point {
        self.point.unwrap_or_else(|| self.region.center())
    }
}

/// Which approximation a sweep evaluates.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimatorKind {
    /// `P(x ∈ Θ⊕r) / (b_{d−n} r^{d−n})` at the evaluation point.
    #[default]
    Oplus,
    /// `E[H^n(Θ ∩ B_r(x))] / (b_d r^d)` at the evaluation point.
    Scale,
    /// `∫_A P(x ∈ Θ⊕r) / (b_{d−n} r^{d−n}) dx`.
    Integrated,
}

impl std::fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            EstimatorKind::Oplus => "oplus",
            EstimatorKind::Scale => "scale",
            EstimatorKind::Integrated => "integrated",
        })
    }
}
