use rand::Rng;
use serde::{Deserialize, Serialize};

use super::laws::{orientation, poisson, CountLaw, DensitySpec, GrainLaw, LengthLaw, Nucleation};
use super::rng::RngStream;
use crate::error::{Error, Result};
use crate::geometry::{boundary_arcs, dilate_window, Grain, Point, RealizedSet, Window};

/// Which set a birth-and-growth sample returns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GrowthTarget {
    /// `∂Θ^t`, dimension 1.
    Boundary,
    /// `Θ^t`, dimension 2.
    Solid,
}

/// Declarative law of a random closed set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelSpec {
    /// A single random point with the given density (n = 0).
    RandomPoint { pdf: DensitySpec },
    /// `Θ = E_1 ∪ … ∪ E_Φ` with i.i.d. grains independent of `Φ`.
    GrainUnion { count: CountLaw, grain: GrainLaw },
    /// Isotropic Poisson line process of mean length per unit area `intensity`.
    PoissonLine { intensity: f64 },
    /// Segments with Poisson midpoints of the given intensity per unit area
    /// and uniform orientations.
    PoissonSegment {
        center_intensity: f64,
        length: LengthLaw,
    },
    /// Union of disks grown at speed `growth_speed` from Poisson nuclei on
    /// `[0, time] × ℝ²`.
    BirthGrowth {
        nucleation: Nucleation,
        growth_speed: f64,
        time: f64,
        target: GrowthTarget,
    },
}

impl ModelSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            ModelSpec::RandomPoint { pdf } => pdf.validate("model.pdf"),
            ModelSpec::GrainUnion { count, grain } => {
                count.validate()?;
                grain.validate()
            }
            ModelSpec::PoissonLine { intensity } => positive("model.intensity", *intensity),
            ModelSpec::PoissonSegment {
                center_intensity,
                length,
            } => {
                positive("model.center_intensity", *center_intensity)?;
                length.validate("model.length")
            }
            ModelSpec::BirthGrowth {
                nucleation,
                growth_speed,
                time,
                ..
            } => {
                nucleation.validate()?;
                positive("model.growth_speed", *growth_speed)?;
                positive("model.time", *time)
            }
        }
    }

    /// Hausdorff dimension `n` of the sampled set.
    pub fn hausdorff_dim(&self) -> usize {
        match self {
            ModelSpec::RandomPoint { .. } => 0,
            ModelSpec::BirthGrowth {
                target: GrowthTarget::Solid,
                ..
            } => 2,
            _ => 1,
        }
    }

    /// Ambient dimension `d`.
    pub fn ambient_dim(&self) -> usize {
        match self {
            ModelSpec::RandomPoint { pdf } => pdf.dim(),
            _ => 2,
        }
    }

    /// Known constant mean density `L = E[H^n(Θ ∩ A)]/ν^d(A)` of stationary
    /// models.
    pub fn stationary_density(&self) -> Option<f64> {
        match *self {
            ModelSpec::PoissonLine { intensity } => Some(intensity),
            ModelSpec::PoissonSegment {
                center_intensity,
                length,
            } => Some(center_intensity * length.mean()),
            _ => None,
        }
    }

    /// True when no realization can contain a point.
    pub fn is_degenerate(&self) -> bool {
        matches!(
            self,
            ModelSpec::BirthGrowth { nucleation: Nucleation::ConstantRate { a }, .. }
                | ModelSpec::BirthGrowth { nucleation: Nucleation::AffineRate { a, .. }, .. }
                if *a == 0.0
        )
    }
}

fn positive(field: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(field, "must be positive and finite"))
    }
}

/// One realization of `model`, complete within `W⊕1`.
///
/// Every grain of the process meeting the box `W⊕1` is present and
/// `valid_window = W⊕1`. Draws are consumed from `stream` in a fixed
/// order: the grain count first, then per grain its location, size and
/// orientation.
pub fn sample(model: &ModelSpec, w: &Window, stream: RngStream) -> Result<RealizedSet> {
    model.validate()?;
    if w.dim() != model.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: model.ambient_dim(),
            got: w.dim(),
        });
    }
    let valid = dilate_window(w, 1.0);
    let mut rng = stream.rng();
    let n = model.hausdorff_dim();
    let grains = match *model {
        ModelSpec::RandomPoint { pdf } => {
            let p = pdf.sample(&mut rng);
            if valid.contains(&p) {
                vec![Grain::point(p)]
            } else {
                vec![]
            }
        }
        ModelSpec::GrainUnion { count, grain } => {
            let k = count.sample(&mut rng);
            (0..k)
                .map(|_| draw_grain(&grain, &mut rng))
                .filter(|g| hits(g, &valid))
                .collect()
        }
        ModelSpec::PoissonLine { intensity } => {
            let c = valid.center().planar();
            let rho = valid.circumradius();
            // Lines hitting B_ρ(c) number Poisson(2ρL), with offsets uniform
            // on (−ρ, ρ) and orientations uniform on (0, π].
            let k = poisson(2.0 * rho * intensity, &mut rng);
            (0..k)
                .map(|_| {
                    let u = rng.random_range(-rho..rho);
                    let alpha = orientation(&mut rng);
                    let p = c[0] * alpha.cos() + c[1] * alpha.sin() + u;
                    Grain::Line { p, alpha }
                })
                .filter(|g| hits(g, &valid))
                .collect()
        }
        ModelSpec::PoissonSegment {
            center_intensity,
            length,
        } => {
            let region = dilate_window(&valid, 0.5 * length.max());
            let k = poisson(center_intensity * region.volume(), &mut rng);
            let centers = DensitySpec::UniformBox { window: region };
            (0..k)
                .map(|_| {
                    let m = centers.sample(&mut rng);
                    let len = length.sample(&mut rng);
                    let theta = orientation(&mut rng);
                    segment_from(m, len, theta)
                })
                .filter(|g| hits(g, &valid))
                .collect()
        }
        ModelSpec::BirthGrowth { .. } => return sample_birth_growth(model, w, stream),
    };
    RealizedSet::new(grains, n, valid)
}

/// Birth-and-growth realization `Θ^t = ⋃_{T_i ≤ t} B_{G(t−T_i)}(X_i)`.
///
/// Nuclei are drawn from the Poisson process with intensity `α(s, x)` on
/// `[0, t] × (W ⊕ (1 + G t))` by thinning a homogeneous process. Nuclei in
/// already covered regions are kept; they change neither `Θ^t` nor its
/// boundary.
pub fn sample_birth_growth(model: &ModelSpec, w: &Window, stream: RngStream) -> Result<RealizedSet> {
    let ModelSpec::BirthGrowth {
        nucleation,
        growth_speed,
        time,
        target,
    } = *model
    else {
        return Err(Error::invalid("model", "expected a birth-and-growth model"));
    };
    model.validate()?;
    if w.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: w.dim(),
        });
    }
    let region = dilate_window(w, 1.0 + growth_speed * time);
    let top = nucleation.max_rate(&region)?;
    let mut rng = stream.rng();
    let k = poisson(top * time * region.volume(), &mut rng);
    let space = DensitySpec::UniformBox { window: region };
    let mut nuclei = Vec::with_capacity(k as usize);
    for _ in 0..k {
        let born = rng.random_range(0.0..time);
        let x = space.sample(&mut rng);
        if let Nucleation::AffineRate { .. } = nucleation {
            let u: f64 = rng.random();
            if u * top > nucleation.rate(&x) {
                continue;
            }
        }
        nuclei.push((born, x));
    }
    growth_union(&nuclei, growth_speed, time, target, dilate_window(w, 1.0))
}

/// The set grown from explicit nuclei `(birth time, location)` by time `t`,
/// restricted to grains meeting `valid`.
pub fn growth_union(
    nuclei: &[(f64, Point)],
    growth_speed: f64,
    t: f64,
    target: GrowthTarget,
    valid: Window,
) -> Result<RealizedSet> {
    let disks: Vec<Grain> = nuclei
        .iter()
        .filter(|(born, _)| *born < t)
        .map(|&(born, x)| Grain::disk(x, growth_speed * (t - born)))
        .collect::<Result<_>>()?;
    let (grains, n) = match target {
        GrowthTarget::Solid => (disks, 2),
        GrowthTarget::Boundary => (boundary_arcs(&disks), 1),
    };
    let grains = grains.into_iter().filter(|g| hits(g, &valid)).collect();
    RealizedSet::new(grains, n, valid)
}

pub(crate) fn draw_grain<R: Rng + ?Sized>(law: &GrainLaw, rng: &mut R) -> Grain {
    match *law {
        GrainLaw::Segment { center, length } => {
            let m = center.sample(rng);
            let len = length.sample(rng);
            let theta = orientation(rng);
            segment_from(m, len, theta)
        }
        GrainLaw::Circle { center, radius } => Grain::Circle {
            center: center.sample(rng),
            radius,
        },
    }
}

fn segment_from(m: Point, len: f64, theta: f64) -> Grain {
    let c = m.planar();
    let h = [0.5 * len * theta.cos(), 0.5 * len * theta.sin()];
    Grain::Segment {
        a: Point::xy(c[0] - h[0], c[1] - h[1]),
        b: Point::xy(c[0] + h[0], c[1] + h[1]),
    }
}

/// Hit test against the validity box; touching in a null set is a miss.
fn hits(g: &Grain, w: &Window) -> bool {
    match g {
        Grain::Point { location } => w.contains(location),
        _ => g.clip_measure(w) > 0.0,
    }
}

/// Extend a segment shorter than `min_len` homothetically about its
/// midpoint to length exactly `min_len`; longer segments are unchanged.
pub fn extend_segment_to_min_length(g: &Grain, min_len: f64) -> Result<Grain> {
    let Grain::Segment { a, b } = *g else {
        return Err(Error::invalid("grain", "expected a segment"));
    };
    if !(min_len > 0.0) {
        return Err(Error::invalid("min_len", "must be positive"));
    }
    let len = a.dist(&b);
    if len >= min_len {
        return Ok(*g);
    }
    let (pa, pb) = (a.planar(), b.planar());
    let m = [0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1])];
    let k = 0.5 * min_len / len;
    let h = [k * (pb[0] - pa[0]), k * (pb[1] - pa[1])];
    let d = a.dim();
    Ok(Grain::Segment {
        a: Point::from_planar([m[0] - h[0], m[1] - h[1]], d),
        b: Point::from_planar([m[0] + h[0], m[1] + h[1]], d),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::TAU;

    fn unit_box() -> Window {
        Window::rect(0.0, 0.0, 1.0, 1.0)
    }

    #[test]
    fn random_point_is_one_point_in_box() {
        let m = ModelSpec::RandomPoint {
            pdf: DensitySpec::UniformBox { window: unit_box() },
        };
        let s = sample(&m, &unit_box(), RngStream::new(1, 0)).unwrap();
        assert_eq!(s.grains().len(), 1);
        assert_eq!(s.n(), 0);
        let Grain::Point { location } = s.grains()[0] else { panic!() };
        assert!(unit_box().contains(&location));
        assert_eq!(*s.valid_window(), Window::rect(-1.0, -1.0, 2.0, 2.0));
    }

    #[test]
    fn deterministic_count_gives_exact_grains() {
        let m = ModelSpec::GrainUnion {
            count: CountLaw::Deterministic { k: 2 },
            grain: GrainLaw::Segment {
                center: DensitySpec::UniformBox { window: unit_box() },
                length: LengthLaw::Fixed { length: 1.0 },
            },
        };
        for i in 0..20 {
            let s = sample(&m, &unit_box(), RngStream::new(5, i)).unwrap();
            assert_eq!(s.grains().len(), 2);
            for g in s.grains() {
                assert_abs_diff_eq!(g.measure(), 1.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let m = ModelSpec::PoissonSegment {
            center_intensity: 3.0,
            length: LengthLaw::UniformInterval { lo: 0.1, hi: 0.8 },
        };
        let a = sample(&m, &unit_box(), RngStream::new(9, 4)).unwrap();
        let b = sample(&m, &unit_box(), RngStream::new(9, 4)).unwrap();
        let c = sample(&m, &unit_box(), RngStream::new(9, 5)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn zero_rate_growth_is_empty() {
        let m = ModelSpec::BirthGrowth {
            nucleation: Nucleation::ConstantRate { a: 0.0 },
            growth_speed: 1.0,
            time: 0.5,
            target: GrowthTarget::Boundary,
        };
        assert!(m.is_degenerate());
        let s = sample(&m, &unit_box(), RngStream::new(1, 1)).unwrap();
        assert!(s.is_empty());
    }

    #[test]
    fn forced_nucleus_gives_one_circle() {
        let s = growth_union(
            &[(0.0, Point::xy(0.0, 0.0))],
            1.0,
            0.5,
            GrowthTarget::Boundary,
            Window::rect(-2.0, -2.0, 2.0, 2.0),
        )
        .unwrap();
        assert_eq!(s.grains().len(), 1);
        assert_abs_diff_eq!(s.grains()[0].measure(), TAU * 0.5, epsilon = 1e-12);
        assert_eq!(s.n(), 1);
    }

    #[test]
    fn nucleus_count_matches_rate_times_time() {
        // a = 1, t = 0.5: 0.5 nuclei per unit area on average.
        let m = ModelSpec::BirthGrowth {
            nucleation: Nucleation::ConstantRate { a: 1.0 },
            growth_speed: 1.0,
            time: 0.5,
            target: GrowthTarget::Solid,
        };
        let w = unit_box();
        let region = dilate_window(&w, 1.5);
        let inner = Window::rect(-0.9, -0.9, 1.9, 1.9);
        let reps = 4000u64;
        let mut total = 0usize;
        for i in 0..reps {
            let s = sample(&m, &w, RngStream::new(11, i)).unwrap();
            // Disks whose centers fall in an inner box are always kept.
            total += s
                .grains()
                .iter()
                .filter(|g| matches!(g, Grain::Disk { center, .. } if inner.contains(center)))
                .count();
        }
        let mean = total as f64 / reps as f64;
        let expected = 0.5 * inner.volume();
        assert!(region.volume() > inner.volume());
        assert!((mean - expected).abs() < 4.0 * (expected / reps as f64).sqrt());
    }

    #[test]
    fn extension_examples() {
        let long = Grain::segment(Point::xy(0.0, 0.0), Point::xy(3.0, 0.0)).unwrap();
        assert_eq!(extend_segment_to_min_length(&long, 2.0).unwrap(), long);
        let unit = Grain::segment(Point::xy(0.0, 0.0), Point::xy(1.0, 0.0)).unwrap();
        let ext = extend_segment_to_min_length(&unit, 2.0).unwrap();
        assert_eq!(
            ext,
            Grain::segment(Point::xy(-0.5, 0.0), Point::xy(1.5, 0.0)).unwrap()
        );
        assert_eq!(extend_segment_to_min_length(&unit, 1.0).unwrap(), unit);
        assert!(extend_segment_to_min_length(&Grain::point(Point::xy(0.0, 0.0)), 1.0).is_err());
    }
}
