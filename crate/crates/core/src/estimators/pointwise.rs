use rayon::prelude::*;

use super::stats::PointEstimate;
use crate::error::{Error, Result};
use crate::geometry::{hits_ball, unit_ball_volume, Point, RealizedSet, Window};
use crate::processes::{sample, ModelSpec, RngStream};

/// Evaluate `f` on realizations `0..m` in parallel; results come back in
/// index order, so any reduction over them is independent of the number of
/// workers.
pub(crate) fn replicate_map<T, F>(
    model: &ModelSpec,
    w: &Window,
    m: u64,
    seed: u64,
    f: F,
) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64, &RealizedSet) -> T + Sync,
{
    model.validate()?;
    if w.dim() != model.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: model.ambient_dim(),
            got: w.dim(),
        });
    }
    (0..m)
        .into_par_iter()
        .map(|i| sample(model, w, RngStream::new(seed, i)).map(|s| f(i, &s)))
        .collect()
}

/// `b_{d−n} r^{d−n}`, the normalizer of the enlargement estimators.
pub fn enlargement_normalizer(d: usize, n: usize, r: f64) -> f64 {
    unit_ball_volume(d - n) * r.powi((d - n) as i32)
}

fn check_point(model: &ModelSpec, x: &Point) -> Result<()> {
    if x.dim() != model.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: model.ambient_dim(),
            got: x.dim(),
        });
    }
    Ok(())
}

fn check_radius(r: f64) -> Result<()> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::invalid("r", "must be positive"));
    }
    Ok(())
}

/// Binomial estimate of the capacity functional `T(B_r(x)) = P(x ∈ Θ⊕r)`.
pub fn hit_prob(model: &ModelSpec, x: &Point, r: f64, m: u64, seed: u64) -> Result<PointEstimate> {
    check_radius(r)?;
    check_point(model, x)?;
    if m == 0 {
        return Err(Error::invalid("replicates", "must be at least 1"));
    }
    let w = Window::around(*x, r);
    let hits = replicate_map(model, &w, m, seed, |_, s| hits_ball(s.grains(), x, r))?;
    Ok(PointEstimate::binomial(hits.iter().filter(|h| **h).count() as u64, m))
}

/// `δ^{⊕r}(x) = P(x ∈ Θ⊕r) / (b_{d−n} r^{d−n})`.
pub fn delta_oplus(model: &ModelSpec, x: &Point, r: f64, m: u64, seed: u64) -> Result<PointEstimate> {
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::invalid("r", "must lie in (0, 1]"));
    }
    let p = hit_prob(model, x, r, m, seed)?;
    let norm = enlargement_normalizer(model.ambient_dim(), model.hausdorff_dim(), r);
    Ok(p.scaled(1.0 / norm))
}

/// `δ^{(r)}(x) = E[H^n(Θ ∩ B_r(x))] / (b_d r^d)`.
pub fn delta_scale(model: &ModelSpec, x: &Point, r: f64, m: u64, seed: u64) -> Result<PointEstimate> {
    check_radius(r)?;
    check_point(model, x)?;
    if m == 0 {
        return Err(Error::invalid("replicates", "must be at least 1"));
    }
    let d = model.ambient_dim();
    let norm = unit_ball_volume(d) * r.powi(d as i32);
    let w = Window::around(*x, r);
    let vals = replicate_map(model, &w, m, seed, |_, s| {
        s.grains().iter().map(|g| g.measure_in_ball(x, r)).sum::<f64>() / norm
    })?;
    Ok(PointEstimate::from_samples(&vals))
}
