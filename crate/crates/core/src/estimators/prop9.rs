use serde::{Deserialize, Serialize};

use super::pointwise::{enlargement_normalizer, replicate_map};
use super::stats::PointEstimate;
use crate::error::{Error, Result};
use crate::geometry::{Point, Window};
use crate::processes::{draw_grain, ModelSpec, RngStream};

/// The three ratios whose limits coincide for grain unions, plus the
/// normalized probability of multiple coverage.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prop9Triple {
    pub r: f64,
    /// `P(x ∈ Θ⊕r) / (b_{d−n} r^{d−n})`.
    pub theta_ratio: PointEstimate,
    /// `E[#{i : x ∈ E_i⊕r}] / (b_{d−n} r^{d−n})`.
    pub count_ratio: PointEstimate,
    /// `E[Φ] · P(x ∈ E⊕r) / (b_{d−n} r^{d−n})`.
    pub factored_ratio: PointEstimate,
    /// `P(x lies in at least two E_i⊕r) / r^{d−n}`.
    pub overlap_ratio: PointEstimate,
}

impl Prop9Triple {
    /// Largest pairwise gap among the three ratios, in units of the
    /// combined (independent) standard error of each pair.
    pub fn max_pairwise_z(&self) -> f64 {
        let rs = [self.theta_ratio, self.count_ratio, self.factored_ratio];
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in i + 1..3 {
                let gap = (rs[i].value - rs[j].value).abs();
                let se = rs[i].combined_stderr(&rs[j]);
                let z = if se > 0.0 {
                    gap / se
                } else if gap == 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                };
                worst = worst.max(z);
            }
        }
        worst
    }
}

/// Estimate the ratios from the same `M` realizations of a grain union.
///
/// The single-grain probability uses one grain per realization drawn from
/// the grain law on the realization's own stream, so with a deterministic
/// count it is the realization's first grain.
pub fn prop9_triple(model: &ModelSpec, x: &Point, r: f64, m: u64, seed: u64) -> Result<Prop9Triple> {
    let ModelSpec::GrainUnion { count, grain } = *model else {
        return Err(Error::invalid("model", "the count/grain factorization needs a grain_union model"));
    };
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::invalid("r", "must lie in (0, 1]"));
    }
    if m == 0 {
        return Err(Error::invalid("replicates", "must be at least 1"));
    }
    let d = model.ambient_dim();
    let n = model.hausdorff_dim();
    let w = Window::around(*x, r);
    let per_rep = replicate_map(model, &w, m, seed, |i, s| {
        let hits = s
            .grains()
            .iter()
            .filter(|g| g.distance(x).map(|v| v <= r).unwrap_or(false))
            .count();
        let single = draw_grain(&grain, &mut RngStream::new(seed, i).rng());
        let single_hit = single.distance(x).map(|v| v <= r).unwrap_or(false);
        (hits, single_hit)
    })?;

    let norm = enlargement_normalizer(d, n, r);
    let any = per_rep.iter().filter(|(h, _)| *h >= 1).count() as u64;
    let multi = per_rep.iter().filter(|(h, _)| *h >= 2).count() as u64;
    let single = per_rep.iter().filter(|(_, s)| *s).count() as u64;
    let counts: Vec<f64> = per_rep.iter().map(|(h, _)| *h as f64).collect();
    Ok(Prop9Triple {
        r,
        theta_ratio: PointEstimate::binomial(any, m).scaled(1.0 / norm),
        count_ratio: PointEstimate::from_samples(&counts).scaled(1.0 / norm),
        factored_ratio: PointEstimate::binomial(single, m).scaled(count.mean() / norm),
        overlap_ratio: PointEstimate::binomial(multi, m).scaled(1.0 / r.powi((d - n) as i32)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::processes::{CountLaw, DensitySpec, GrainLaw, LengthLaw};

    fn segments(k: u64) -> ModelSpec {
        ModelSpec::GrainUnion {
            count: CountLaw::Deterministic { k },
            grain: GrainLaw::Segment {
                center: DensitySpec::UniformBox {
                    window: Window::rect(0.0, 0.0, 1.0, 1.0),
                },
                length: LengthLaw::Fixed { length: 1.0 },
            },
        }
    }

    #[test]
    fn single_grain_ratios_coincide() {
        let t = prop9_triple(&segments(1), &Point::xy(0.5, 0.5), 0.05, 2000, 4).unwrap();
        assert_eq!(t.theta_ratio.value, t.count_ratio.value);
        assert_eq!(t.theta_ratio.value, t.factored_ratio.value);
        assert_eq!(t.overlap_ratio.value, 0.0);
    }

    #[test]
    fn needs_a_grain_union() {
        let m = ModelSpec::PoissonLine { intensity: 1.0 };
        assert!(prop9_triple(&m, &Point::xy(0.0, 0.0), 0.1, 10, 1).is_err());
    }
}
