use serde::{Deserialize, Serialize};

use super::grain::Grain;
use super::primitives::{Point, Window};
use crate::error::{Error, Result};

/// One sampled realization of a random closed set, complete inside
/// `valid_window`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealizedSet {
    grains: Vec<Grain>,
    n: usize,
    valid_window: Window,
}

impl RealizedSet {
    pub fn new(grains: Vec<Grain>, n: usize, valid_window: Window) -> Result<Self> {
        if let Some(g) = grains.iter().find(|g| g.hausdorff_dim() != n) {
            return Err(Error::invalid(
                "grains",
                format!("grain of dimension {} in a set of dimension {n}", g.hausdorff_dim()),
            ));
        }
        if let Some(g) = grains.iter().find(|g| g.ambient_dim() != valid_window.dim()) {
            return Err(Error::DimensionMismatch {
                expected: valid_window.dim(),
                got: g.ambient_dim(),
            });
        }
        Ok(RealizedSet {
            grains,
            n,
            valid_window,
        })
    }

    pub fn empty(n: usize, valid_window: Window) -> Self {
        RealizedSet {
            grains: Vec::new(),
            n,
            valid_window,
        }
    }

    pub fn grains(&self) -> &[Grain] {
        &self.grains
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ambient_dim(&self) -> usize {
        self.valid_window.dim()
    }

    pub fn valid_window(&self) -> &Window {
        &self.valid_window
    }

    pub fn is_empty(&self) -> bool {
        self.grains.is_empty()
    }

    /// `Σ_g H^n(g ∩ a)`; equals `H^n(S ∩ a)` when grains overlap in null sets.
    pub fn clip_measure(&self, a: &Window) -> f64 {
        self.grains.iter().map(|g| g.clip_measure(a)).sum()
    }

    /// The set `S ∩ valid_window` with every grain cut to the window.
    pub fn restricted(&self) -> RealizedSet {
        let grains = self
            .grains
            .iter()
            .flat_map(|g| g.clip_to_window(&self.valid_window))
            .collect();
        RealizedSet {
            grains,
            n: self.n,
            valid_window: self.valid_window,
        }
    }
}

/// Distance from `x` to the union of `grains`; `None` for the empty set.
pub fn distance_to_grains(x: &Point, grains: &[Grain]) -> Option<f64> {
    let p = x.planar();
    grains
        .iter()
        .map(|g| g.distance_planar(p))
        .min_by(f64::total_cmp)
}

/// Distance from `x` to the set; `None` for the empty realization.
pub fn distance_to_set(x: &Point, s: &RealizedSet) -> Option<f64> {
    debug_assert_eq!(x.dim(), s.ambient_dim());
    distance_to_grains(x, s.grains())
}

/// Membership of `x` in the closed enlargement `S⊕r`.
pub fn in_enlargement(x: &Point, s: &RealizedSet, r: f64) -> bool {
    hits_ball(s.grains(), x, r)
}

/// True if some grain lies within distance `r` of `x`. Stops at the first hit.
pub(crate) fn hits_ball(grains: &[Grain], x: &Point, r: f64) -> bool {
    let p = x.planar();
    grains.iter().any(|g| g.distance_planar(p) <= r)
}
