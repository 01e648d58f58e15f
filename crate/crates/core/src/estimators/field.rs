use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::EstimatorConfig;
use super::pointwise::{enlargement_normalizer, replicate_map};
use super::stats::PointEstimate;
use crate::error::{Error, Result};
use crate::geometry::{Grid, Window};
use crate::processes::{sample, ModelSpec, RngStream};

/// Pointwise weak approximation `δ^{⊕r}` of the mean density on a grid.
///
/// Values are cell-midpoint estimates in row-major order (x fastest). The
/// field converges to the mean density only in the integrated sense; pointwise
/// values carry no convergence claim for inhomogeneous models.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityField {
    pub region: Window,
    /// `[nx, ny]`; `ny = 1` in d = 1.
    pub shape: [usize; 2],
    pub r: f64,
    pub replicates: u64,
    pub values: Vec<f64>,
    pub stderrs: Vec<f64>,
}

impl DensityField {
    pub fn get(&self, i: usize, j: usize) -> PointEstimate {
        let k = j * self.shape[0] + i;
        PointEstimate {
            value: self.values[k],
            stderr: self.stderrs[k],
            replicates: self.replicates,
        }
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// True when no cell deviates from the field mean by more than
    /// `k · max stderr`.
    pub fn is_flat(&self, k: f64) -> bool {
        let mean = self.mean();
        let se = self.stderrs.iter().copied().fold(0.0, f64::max);
        self.values.iter().all(|v| (v - mean).abs() <= k * se)
    }

    /// Least-squares slope of the values along x.
    pub fn slope_x(&self) -> f64 {
        let grid = Grid::new(self.region, self.shape[0]);
        let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
        let n = self.values.len() as f64;
        for j in 0..self.shape[1] {
            for i in 0..self.shape[0] {
                let x = grid.midpoint(i, j)[0];
                let v = self.values[j * self.shape[0] + i];
                sx += x;
                sy += v;
                sxx += x * x;
                sxy += x * v;
            }
        }
        (n * sxy - sx * sy) / (n * sxx - sx * sx)
    }
}

/// Integrated estimate paired with the direct measure on the same
/// realizations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratedComparison {
    pub estimate: PointEstimate,
    pub oracle: PointEstimate,
    /// Per-realization difference `estimate − oracle`.
    pub difference: PointEstimate,
}

/// Realizations per work unit. Fixed so the reduction tree never depends on
/// the worker count.
const CHUNK: u64 = 256;

/// Per-chunk cell hit counts and per-realization `(integral, measure)`.
type ChunkResult = (Vec<u64>, Vec<(f64, f64)>);

struct FieldPass {
    counts: Vec<u64>,
    integrals: Vec<f64>,
    measures: Vec<f64>,
}

fn field_pass(model: &ModelSpec, config: &EstimatorConfig, r: f64) -> Result<FieldPass> {
    config.validate()?;
    model.validate()?;
    if config.region.dim() != model.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: model.ambient_dim(),
            got: config.region.dim(),
        });
    }
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::invalid("r", "must lie in (0, 1]"));
    }
    let grid = Grid::new(config.region, config.grid_per_axis);
    let norm = enlargement_normalizer(model.ambient_dim(), model.hausdorff_dim(), r);
    let cell = grid.cell_volume() / norm;
    let m = config.replicates;
    let chunks: Vec<ChunkResult> = (0..m.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| -> Result<_> {
            let mut counts = vec![0u64; grid.len()];
            let mut per_rep = Vec::with_capacity(CHUNK as usize);
            for i in c * CHUNK..((c + 1) * CHUNK).min(m) {
                let s = sample(model, &config.clip, RngStream::new(config.seed, i))?;
                let mask = grid.cover_mask(s.grains(), r);
                let mut covered = 0u64;
                for (k, hit) in mask.iter().enumerate() {
                    if *hit {
                        counts[k] += 1;
                        covered += 1;
                    }
                }
                per_rep.push((covered as f64 * cell, s.clip_measure(&config.region)));
            }
            Ok((counts, per_rep))
        })
        .collect::<Result<_>>()?;

    let mut counts = vec![0u64; grid.len()];
    let mut integrals = Vec::with_capacity(m as usize);
    let mut measures = Vec::with_capacity(m as usize);
    for (c, reps) in chunks {
        for (acc, k) in counts.iter_mut().zip(c) {
            *acc += k;
        }
        for (y, h) in reps {
            integrals.push(y);
            measures.push(h);
        }
    }
    Ok(FieldPass {
        counts,
        integrals,
        measures,
    })
}

/// `δ^{⊕r}` at every cell midpoint of `config.region`, all cells sharing the
/// same `M` realizations.
pub fn density_field(model: &ModelSpec, config: &EstimatorConfig, r: f64) -> Result<DensityField> {
    let pass = field_pass(model, config, r)?;
    let norm = enlargement_normalizer(model.ambient_dim(), model.hausdorff_dim(), r);
    let m = config.replicates;
    let (values, stderrs) = pass
        .counts
        .iter()
        .map(|&k| {
            let e = PointEstimate::binomial(k, m).scaled(1.0 / norm);
            (e.value, e.stderr)
        })
        .unzip();
    let (nx, ny) = Grid::new(config.region, config.grid_per_axis).shape();
    Ok(DensityField {
        region: config.region,
        shape: [nx, ny],
        r,
        replicates: m,
        values,
        stderrs,
    })
}

/// `∫_A P(x ∈ Θ⊕r) / (b_{d−n} r^{d−n}) dx` by midpoint quadrature on the
/// configured grid. The stderr is over per-realization integrals.
pub fn integrated_estimate(model: &ModelSpec, config: &EstimatorConfig, r: f64) -> Result<PointEstimate> {
    let pass = field_pass(model, config, r)?;
    Ok(PointEstimate::from_samples(&pass.integrals))
}

/// [`integrated_estimate`] and the direct measure `H^n(Θ ∩ A)` on the same
/// realizations, with the paired difference.
pub fn integrated_vs_oracle(
    model: &ModelSpec,
    config: &EstimatorConfig,
    r: f64,
) -> Result<IntegratedComparison> {
    let pass = field_pass(model, config, r)?;
    let diff: Vec<f64> = pass
        .integrals
        .iter()
        .zip(&pass.measures)
        .map(|(y, h)| y - h)
        .collect();
    Ok(IntegratedComparison {
        estimate: PointEstimate::from_samples(&pass.integrals),
        oracle: PointEstimate::from_samples(&pass.measures),
        difference: PointEstimate::from_samples(&diff),
    })
}

/// Direct Monte Carlo of `E[H^n(Θ ∩ A)]`, sampling on `A` itself.
pub fn expected_measure_oracle(model: &ModelSpec, a: &Window, m: u64, seed: u64) -> Result<PointEstimate> {
    expected_measure_in(model, a, a, m, seed)
}

/// Direct Monte Carlo of `E[H^n(Θ ∩ A)]` with realizations drawn on the
/// window `w ⊇ A`, matching the estimators run with `clip = w`.
pub fn expected_measure_in(
    model: &ModelSpec,
    a: &Window,
    w: &Window,
    m: u64,
    seed: u64,
) -> Result<PointEstimate> {
    if m == 0 {
        return Err(Error::invalid("replicates", "must be at least 1"));
    }
    let vals = replicate_map(model, w, m, seed, |_, s| s.clip_measure(a))?;
    Ok(PointEstimate::from_samples(&vals))
}
