//! Distribution laws used by the random-set models.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Geometric, Normal, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Point, Window};

/// Law of the number of grains `Φ`, supported on the positive integers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CountLaw {
    Deterministic { k: u64 },
    /// `P(Φ = k) = (1 − p)^{k−1} p`.
    GeometricOnPositives { p: f64 },
    /// `Φ = 1 + Poisson(mean)`.
    OnePlusPoisson { mean: f64 },
}

impl CountLaw {
    pub fn validate(&self) -> Result<()> {
        match *self {
            CountLaw::Deterministic { k: 0 } => {
                Err(Error::invalid("count.k", "must be a positive integer"))
            }
            CountLaw::GeometricOnPositives { p } if !(p > 0.0 && p < 1.0) => {
                Err(Error::invalid("count.p", "must lie in (0, 1)"))
            }
            CountLaw::OnePlusPoisson { mean } if !(mean >= 0.0 && mean.is_finite()) => {
                Err(Error::invalid("count.mean", "must be finite and >= 0"))
            }
            _ => Ok(()),
        }
    }

    /// `E[Φ]`.
    pub fn mean(&self) -> f64 {
        match *self {
            CountLaw::Deterministic { k } => k as f64,
            CountLaw::GeometricOnPositives { p } => 1.0 / p,
            CountLaw::OnePlusPoisson { mean } => 1.0 + mean,
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        match *self {
            CountLaw::Deterministic { k } => k,
            CountLaw::GeometricOnPositives { p } => {
                1 + Geometric::new(p).expect("validated p").sample(rng)
            }
            CountLaw::OnePlusPoisson { mean } => 1 + poisson(mean, rng),
        }
    }
}

/// Poisson draw allowing a zero mean.
pub(crate) fn poisson<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    Poisson::new(mean).expect("finite positive mean").sample(rng) as u64
}

/// Law of segment lengths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum LengthLaw {
    Fixed { length: f64 },
    UniformInterval { lo: f64, hi: f64 },
}

impl LengthLaw {
    pub fn validate(&self, field: &str) -> Result<()> {
        match *self {
            LengthLaw::Fixed { length } if !(length > 0.0 && length.is_finite()) => Err(
                Error::invalid(format!("{field}.length"), "must be positive and finite"),
            ),
            LengthLaw::UniformInterval { lo, hi } if !(lo > 0.0 && hi > lo && hi.is_finite()) => {
                Err(Error::invalid(field, "need 0 < lo < hi < infinity"))
            }
            _ => Ok(()),
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            LengthLaw::Fixed { length } => length,
            LengthLaw::UniformInterval { lo, hi } => 0.5 * (lo + hi),
        }
    }

    pub fn max(&self) -> f64 {
        match *self {
            LengthLaw::Fixed { length } => length,
            LengthLaw::UniformInterval { hi, .. } => hi,
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            LengthLaw::Fixed { length } => length,
            LengthLaw::UniformInterval { lo, hi } => rng.random_range(lo..hi),
        }
    }
}

/// Probability density of a grain's reference point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DensitySpec {
    UniformBox {
        window: Window,
    },
    /// Density proportional to `1 + c (x_1 − m_1)` on the box, with `m_1`
    /// the box center. Requires `|c| · half-width ≤ 1`.
    AffineX {
        window: Window,
        c: f64,
    },
    /// Normal law with isotropic `sigma`, conditioned on the box.
    GaussianTruncated {
        mean: Point,
        sigma: f64,
        window: Window,
    },
}

impl DensitySpec {
    pub fn window(&self) -> &Window {
        match self {
            DensitySpec::UniformBox { window }
            | DensitySpec::AffineX { window, .. }
            | DensitySpec::GaussianTruncated { window, .. } => window,
        }
    }

    pub fn dim(&self) -> usize {
        self.window().dim()
    }

    pub fn validate(&self, field: &str) -> Result<()> {
        match *self {
            DensitySpec::UniformBox { .. } => Ok(()),
            DensitySpec::AffineX { window, c } => {
                if !c.is_finite() || c.abs() * 0.5 * window.side(0) > 1.0 {
                    Err(Error::invalid(
                        format!("{field}.c"),
                        "need |c| * half-width <= 1 so the density stays nonnegative",
                    ))
                } else {
                    Ok(())
                }
            }
            DensitySpec::GaussianTruncated {
                mean,
                sigma,
                window,
            } => {
                if !(sigma > 0.0 && sigma.is_finite()) {
                    Err(Error::invalid(format!("{field}.sigma"), "must be positive"))
                } else if mean.dim() != window.dim() || !window.contains(&mean) {
                    Err(Error::invalid(
                        format!("{field}.mean"),
                        "must lie inside the truncation window",
                    ))
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Normalized density at `x` for the closed-form families; `None` for
    /// the truncated Gaussian, whose normalizer has no closed form here.
    pub fn pdf(&self, x: &Point) -> Option<f64> {
        let w = self.window();
        if !w.contains(x) {
            return Some(0.0);
        }
        match *self {
            DensitySpec::UniformBox { window } => Some(1.0 / window.volume()),
            DensitySpec::AffineX { window, c } => {
                let m = window.center().planar()[0];
                Some((1.0 + c * (x.planar()[0] - m)) / window.volume())
            }
            DensitySpec::GaussianTruncated { .. } => None,
        }
    }

    /// Draw in a fixed order: axis 0 first, by rejection where needed.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        let w = self.window();
        let d = w.dim();
        let (lo, hi) = (w.lo().planar(), w.hi().planar());
        let uniform = |rng: &mut R| {
            let mut xy = [0.0; 2];
            for i in 0..d {
                xy[i] = rng.random_range(lo[i]..hi[i]);
            }
            xy
        };
        match *self {
            DensitySpec::UniformBox { .. } => Point::from_planar(uniform(rng), d),
            DensitySpec::AffineX { c, .. } => {
                let m = 0.5 * (lo[0] + hi[0]);
                let top = 1.0 + c.abs() * 0.5 * (hi[0] - lo[0]);
                loop {
                    let xy = uniform(rng);
                    let u: f64 = rng.random();
                    if u * top <= 1.0 + c * (xy[0] - m) {
                        return Point::from_planar(xy, d);
                    }
                }
            }
            DensitySpec::GaussianTruncated { mean, sigma, .. } => {
                let normal = Normal::new(0.0, sigma).expect("validated sigma");
                let m = mean.planar();
                loop {
                    let mut xy = [0.0; 2];
                    for i in 0..d {
                        xy[i] = m[i] + normal.sample(rng);
                    }
                    if w.contains_planar(xy) {
                        return Point::from_planar(xy, d);
                    }
                }
            }
        }
    }
}

/// Law of a single grain `E`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GrainLaw {
    /// Segment with the given midpoint density, length law and an
    /// orientation uniform on `(0, π]`.
    Segment {
        center: DensitySpec,
        length: LengthLaw,
    },
    /// Circle of fixed radius around a random center.
    Circle { center: DensitySpec, radius: f64 },
}

impl GrainLaw {
    pub fn validate(&self) -> Result<()> {
        match self {
            GrainLaw::Segment { center, length } => {
                center.validate("grain.center")?;
                length.validate("grain.length")?;
                if center.dim() != 2 {
                    return Err(Error::invalid("grain.center", "segment grains need d = 2"));
                }
                Ok(())
            }
            GrainLaw::Circle { center, radius } => {
                center.validate("grain.center")?;
                if center.dim() != 2 {
                    return Err(Error::invalid("grain.center", "circle grains need d = 2"));
                }
                if !(*radius > 0.0 && radius.is_finite()) {
                    return Err(Error::invalid("grain.radius", "must be positive"));
                }
                Ok(())
            }
        }
    }

}

/// Uniform orientation on `(0, π]`.
pub(crate) fn orientation<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    PI - rng.random_range(0.0..PI)
}

/// Nucleation intensity `α(s, x)` of the birth-and-growth model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Nucleation {
    /// `α(s, x) = a`.
    ConstantRate { a: f64 },
    /// `α(s, x) = a (1 + c x_1)`, which must stay nonnegative on the
    /// sampling region.
    AffineRate { a: f64, c: f64 },
}

impl Nucleation {
    pub fn validate(&self) -> Result<()> {
        let (a, c) = match *self {
            Nucleation::ConstantRate { a } => (a, 0.0),
            Nucleation::AffineRate { a, c } => (a, c),
        };
        if !(a >= 0.0 && a.is_finite()) {
            return Err(Error::invalid("nucleation.a", "must be finite and >= 0"));
        }
        if !c.is_finite() {
            return Err(Error::invalid("nucleation.c", "must be finite"));
        }
        Ok(())
    }

    pub fn rate(&self, x: &Point) -> f64 {
        match *self {
            Nucleation::ConstantRate { a } => a,
            Nucleation::AffineRate { a, c } => a * (1.0 + c * x.planar()[0]),
        }
    }

    /// Upper bound of the rate on `w`, or an error if it turns negative there.
    pub(crate) fn max_rate(&self, w: &Window) -> Result<f64> {
        match *self {
            Nucleation::ConstantRate { a } => Ok(a),
            Nucleation::AffineRate { a, c } => {
                let lo = 1.0 + c * w.lo().planar()[0];
                let hi = 1.0 + c * w.hi().planar()[0];
                if lo.min(hi) < 0.0 {
                    return Err(Error::invalid(
                        "nucleation.c",
                        "rate a(1 + c x_1) is negative on the sampling region",
                    ));
                }
                Ok(a * lo.max(hi))
            }
        }
    }
}
