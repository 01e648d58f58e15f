//! Local Minkowski content of explicit rectifiable sets.
//!
//! The ratio `ν^d(S⊕r ∩ A) / (b_{d−n} r^{d−n})` is computed by grid
//! quadrature and compared with the exact `H^n(S ∩ A)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::{enlargement_normalizer, PointEstimate, SweepMeta, SweepReport, SweepRow};
use crate::geometry::{enlargement_volume, Grain, Point, Window};

/// A fixed finite union of grains of common dimension `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeterministicSet {
    grains: Vec<Grain>,
    n: usize,
}

impl DeterministicSet {
    pub fn new(grains: Vec<Grain>, n: usize) -> Result<Self> {
        if grains.is_empty() {
            return Err(Error::invalid("grains", "at least one grain is required"));
        }
        if let Some(g) = grains.iter().find(|g| g.hausdorff_dim() != n) {
            return Err(Error::invalid(
                "grains",
                format!("grain of dimension {} in a set of dimension {n}", g.hausdorff_dim()),
            ));
        }
        let d = grains[0].ambient_dim();
        if let Some(g) = grains.iter().find(|g| g.ambient_dim() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: g.ambient_dim(),
            });
        }
        Ok(DeterministicSet { grains, n })
    }

    pub fn grains(&self) -> &[Grain] {
        &self.grains
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ambient_dim(&self) -> usize {
        self.grains[0].ambient_dim()
    }

    /// Exact `H^n(S ∩ a)`, counting overlaps between grains once per grain.
    pub fn measure_in(&self, a: &Window) -> f64 {
        self.grains.iter().map(|g| g.clip_measure(a)).sum()
    }
}

fn check(s: &DeterministicSet, a: &Window, r: f64) -> Result<()> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::invalid("r", "must be positive"));
    }
    if a.dim() != s.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: s.ambient_dim(),
            got: a.dim(),
        });
    }
    Ok(())
}

/// `ν^d(S⊕r ∩ A) / (b_{d−n} r^{d−n})` on `resolution` cells per axis.
pub fn minkowski_ratio(s: &DeterministicSet, a: &Window, r: f64, resolution: usize) -> Result<f64> {
    check(s, a, r)?;
    if resolution == 0 {
        return Err(Error::invalid("resolution", "must be at least 1"));
    }
    let vol = enlargement_volume(s.grains(), a, r, resolution);
    Ok(vol / enlargement_normalizer(s.ambient_dim(), s.n(), r))
}

/// Cells per axis giving at least twenty cells per `r` on `a`.
pub fn content_resolution(a: &Window, r: f64) -> usize {
    let side = (0..a.dim()).map(|i| a.side(i)).fold(0.0, f64::max);
    ((20.0 * side / r).ceil() as usize).max(1)
}

/// [`minkowski_ratio`] along `radii` against the exact `H^n(S ∩ A)`.
pub fn content_sweep(s: &DeterministicSet, a: &Window, radii: &[f64]) -> Result<SweepReport> {
    if radii.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::invalid("radii", "must be strictly descending"));
    }
    let reference = s.measure_in(a);
    let rows = radii
        .iter()
        .map(|&r| {
            let v = minkowski_ratio(s, a, r, content_resolution(a, r))?;
            Ok(SweepRow::new(r, PointEstimate::exact(v), Some(reference)))
        })
        .collect::<Result<_>>()?;
    Ok(SweepReport {
        rows,
        meta: SweepMeta {
            estimator: "minkowski_ratio".into(),
            ..SweepMeta::default()
        },
    })
}

/// A catalogue entry: a set, the region `A`, and whether `H^n(S ∩ ∂A) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Fixture {
    pub name: &'static str,
    pub set: DeterministicSet,
    pub region: Window,
    /// False for the negative example whose region boundary carries
    /// positive measure of the set; its ratio converges to the wrong value.
    pub null_boundary: bool,
}

pub const FIXTURE_NAMES: [&str; 7] = [
    "segment",
    "polyline",
    "circle",
    "point",
    "two_segments",
    "clipped_segment",
    "edge_aligned",
];

fn seg(ax: f64, ay: f64, bx: f64, by: f64) -> Grain {
    Grain::segment(Point::xy(ax, ay), Point::xy(bx, by)).expect("fixture segment")
}

/// Look up a catalogue fixture by name.
pub fn fixture(name: &str) -> Result<Fixture> {
    let unit = || seg(0.0, 0.0, 1.0, 0.0);
    let (grains, n, region, null_boundary) = match name {
        "segment" => (vec![unit()], 1, Window::rect(-1.5, -1.5, 2.5, 1.5), true),
        "polyline" => (
            vec![unit(), seg(1.0, 0.0, 1.0, 1.0)],
            1,
            Window::rect(-1.5, -1.5, 2.5, 2.5),
            true,
        ),
        "circle" => (
            vec![Grain::circle(Point::xy(0.0, 0.0), 1.0).expect("fixture circle")],
            1,
            Window::rect(-2.5, -2.5, 2.5, 2.5),
            true,
        ),
        "point" => (
            vec![Grain::point(Point::xy(0.0, 0.0))],
            0,
            Window::rect(-1.5, -1.5, 1.5, 1.5),
            true,
        ),
        "two_segments" => (
            vec![unit(), seg(0.0, 1.0, 1.0, 1.0)],
            1,
            Window::rect(-1.5, -1.5, 2.5, 2.5),
            true,
        ),
        "clipped_segment" => (vec![unit()], 1, Window::rect(0.25, -1.0, 0.75, 1.0), true),
        "edge_aligned" => (vec![unit()], 1, Window::rect(-1.5, 0.0, 2.5, 1.5), false),
        other => {
            return Err(Error::invalid(
                "fixture",
                format!("unknown fixture `{other}`; expected one of {}", FIXTURE_NAMES.join(", ")),
            ))
        }
    };
    Ok(Fixture {
        name: FIXTURE_NAMES.iter().find(|n| **n == name).copied().expect("matched above"),
        set: DeterministicSet::new(grains, n)?,
        region,
        null_boundary,
    })
}
