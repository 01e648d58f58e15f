use serde::{Deserialize, Serialize};

use super::config::{EstimatorConfig, EstimatorKind};
use super::field::{expected_measure_in, integrated_estimate};
use super::pointwise::{delta_oplus, delta_scale};
use super::stats::PointEstimate;
use crate::error::{Error, Result};
use crate::geometry::Window;
use crate::processes::{DensitySpec, ModelSpec};

/// One row of a convergence sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub r: f64,
    pub estimate: PointEstimate,
    pub reference: Option<f64>,
    pub abs_error: Option<f64>,
}

impl SweepRow {
    pub fn new(r: f64, estimate: PointEstimate, reference: Option<f64>) -> Self {
        SweepRow {
            r,
            estimate,
            reference,
            abs_error: reference.map(|v| (estimate.value - v).abs()),
        }
    }
}

/// Provenance of a sweep. Not part of the CSV schema.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepMeta {
    pub estimator: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<EstimatorConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixture: Option<String>,
}

/// Rows in descending `r`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    pub meta: SweepMeta,
}

impl SweepReport {
    /// True when `|error|` never grows by more than `k` stderr from one
    /// row to the next (rows in descending `r`).
    pub fn errors_shrink(&self, k: f64) -> bool {
        self.rows.windows(2).all(|w| match (w[0].abs_error, w[1].abs_error) {
            (Some(a), Some(b)) => b < a + k * w[1].estimate.stderr,
            _ => true,
        })
    }
}

/// Limit value the estimator converges to, where a closed form exists.
///
/// Pointwise kinds use the mean density at the evaluation point; the
/// integrated kind uses `E[H^n(Θ ∩ A)]`.
pub fn closed_form_reference(model: &ModelSpec, config: &EstimatorConfig, kind: EstimatorKind) -> Option<f64> {
    if model.is_degenerate() {
        return Some(0.0);
    }
    let a = &config.region;
    match kind {
        EstimatorKind::Oplus | EstimatorKind::Scale => {
            if let Some(l) = model.stationary_density() {
                return Some(l);
            }
            match model {
                ModelSpec::RandomPoint { pdf } => pdf.pdf(&config.eval_point()),
                _ => None,
            }
        }
        EstimatorKind::Integrated => {
            if let Some(l) = model.stationary_density() {
                return Some(l * a.volume());
            }
            match model {
                ModelSpec::RandomPoint {
                    pdf: DensitySpec::UniformBox { window },
                } => Some(overlap_volume(a, window) / window.volume()),
                _ => None,
            }
        }
    }
}

fn overlap_volume(a: &Window, b: &Window) -> f64 {
    let (alo, ahi) = (a.lo().planar(), a.hi().planar());
    let (blo, bhi) = (b.lo().planar(), b.hi().planar());
    (0..a.dim())
        .map(|i| (ahi[i].min(bhi[i]) - alo[i].max(blo[i])).max(0.0))
        .product()
}

/// Evaluate one estimator kind along `config.radii`.
///
/// The reference column is the closed-form limit when the model has one,
/// otherwise (integrated kind only) the direct measure of `A` over the same
/// realizations. Pointwise kinds without a closed form leave it empty.
pub fn r_sweep(model: &ModelSpec, config: &EstimatorConfig, kind: EstimatorKind) -> Result<SweepReport> {
    config.validate()?;
    model.validate()?;
    if config.region.dim() != model.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: model.ambient_dim(),
            got: config.region.dim(),
        });
    }
    let x = config.eval_point();
    let (m, seed) = (config.replicates, config.seed);
    let reference = match closed_form_reference(model, config, kind) {
        Some(v) => Some(v),
        None if kind == EstimatorKind::Integrated => {
            Some(expected_measure_in(model, &config.region, &config.clip, m, seed)?.value)
        }
        None => None,
    };
    let rows = config
        .radii
        .iter()
        .map(|&r| {
            let est = match kind {
                EstimatorKind::Oplus => delta_oplus(model, &x, r, m, seed)?,
                EstimatorKind::Scale => delta_scale(model, &x, r, m, seed)?,
                EstimatorKind::Integrated => integrated_estimate(model, config, r)?,
            };
            Ok(SweepRow::new(r, est, reference))
        })
        .collect::<Result<_>>()?;
    Ok(SweepReport {
        rows,
        meta: SweepMeta {
            estimator: kind.to_string(),
            model: Some(*model),
            config: Some(config.clone()),
            fixture: None,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::processes::{GrowthTarget, Nucleation};

    fn cfg(radii: Vec<f64>) -> EstimatorConfig {
        EstimatorConfig {
            radii,
            replicates: 200,
            grid_per_axis: 16,
            seed: 2,
            region: Window::rect(0.0, 0.0, 1.0, 1.0),
            clip: Window::rect(-0.1, -0.1, 1.1, 1.1),
            point: None,
        }
    }

    #[test]
    fn empty_model_rows_are_zero() {
        let m = ModelSpec::BirthGrowth {
            nucleation: Nucleation::ConstantRate { a: 0.0 },
            growth_speed: 1.0,
            time: 1.0,
            target: GrowthTarget::Boundary,
        };
        for kind in [EstimatorKind::Oplus, EstimatorKind::Scale, EstimatorKind::Integrated] {
            let rep = r_sweep(&m, &cfg(vec![0.2, 0.1]), kind).unwrap();
            assert_eq!(rep.rows.len(), 2);
            for row in &rep.rows {
                assert_eq!(row.estimate.value, 0.0);
                assert_eq!(row.abs_error, Some(0.0));
            }
        }
    }

    #[test]
    fn poisson_line_reference_is_the_intensity() {
        let m = ModelSpec::PoissonLine { intensity: 1.5 };
        let c = cfg(vec![0.2]);
        assert_eq!(closed_form_reference(&m, &c, EstimatorKind::Oplus), Some(1.5));
        assert_eq!(closed_form_reference(&m, &c, EstimatorKind::Integrated), Some(1.5));
    }

    #[test]
    fn uniform_point_integrated_reference() {
        let m = ModelSpec::RandomPoint {
            pdf: DensitySpec::UniformBox {
                window: Window::rect(0.5, 0.0, 2.5, 1.0),
            },
        };
        let c = cfg(vec![0.2]);
        assert_eq!(closed_form_reference(&m, &c, EstimatorKind::Integrated), Some(0.25));
    }

    #[test]
    fn rejects_ascending_radii() {
        let m = ModelSpec::PoissonLine { intensity: 1.0 };
        assert!(r_sweep(&m, &cfg(vec![0.1, 0.2]), EstimatorKind::Oplus).is_err());
    }
}
