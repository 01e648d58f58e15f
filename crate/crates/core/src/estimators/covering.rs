use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{dilate_window, enlargement_volume, unit_ball_volume, RealizedSet};
use crate::processes::gamma_lower_bound;

/// Outcome of the covering-volume bound on one realization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoveringCheck {
    pub r: f64,
    /// `ν(K⊕r) / (b_{d−n} r^{d−n})`.
    pub lhs: f64,
    /// `(1/γ) 2^n 4^d b_d / b_{d−n}`.
    pub rhs: f64,
    pub gamma: f64,
    pub ok: bool,
}

/// Cells per axis giving at least ten cells per `r` on `valid_window ⊕ r`.
pub fn covering_resolution(s: &RealizedSet, r: f64) -> usize {
    let w = dilate_window(s.valid_window(), r);
    let side = (0..w.dim()).map(|i| w.side(i)).fold(0.0, f64::max);
    ((10.0 * side / r).ceil() as usize).max(1)
}

/// Compare the enlargement volume of `K = S ∩ valid_window` against the
/// bound implied by its certified density constant. `None` for an empty set.
pub fn covering_bound_check(s: &RealizedSet, r: f64, resolution: usize) -> Result<Option<CoveringCheck>> {
    if !(r > 0.0 && r < 2.0) {
        return Err(Error::invalid("r", "must lie in (0, 2)"));
    }
    if resolution == 0 {
        return Err(Error::invalid("resolution", "must be at least 1"));
    }
    let Some(gamma) = gamma_lower_bound(s)? else {
        return Ok(None);
    };
    let (d, n) = (s.ambient_dim(), s.n());
    let k = s.restricted();
    let box_ = dilate_window(s.valid_window(), r);
    let vol = enlargement_volume(k.grains(), &box_, r, resolution);
    let norm = unit_ball_volume(d - n) * r.powi((d - n) as i32);
    let lhs = vol / norm;
    let rhs = 2f64.powi(n as i32) * 4f64.powi(d as i32) * unit_ball_volume(d) / (gamma * unit_ball_volume(d - n));
    Ok(Some(CoveringCheck {
        r,
        lhs,
        rhs,
        gamma,
        ok: lhs <= rhs,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Grain, Point, Window};
    use std::f64::consts::PI;

    fn w() -> Window {
        Window::rect(-2.0, -2.0, 2.0, 2.0)
    }

    #[test]
    fn unit_segment() {
        let g = Grain::segment(Point::xy(0.0, 0.0), Point::xy(1.0, 0.0)).unwrap();
        let s = RealizedSet::new(vec![g], 1, w()).unwrap();
        let c = covering_bound_check(&s, 0.1, covering_resolution(&s, 0.1)).unwrap().unwrap();
        assert!((c.rhs - 16.0 * PI).abs() < 1e-12);
        assert!((c.lhs - (0.2 + PI * 0.01) / 0.2).abs() < 5e-3, "{}", c.lhs);
        assert!(c.ok);
    }

    #[test]
    fn single_point() {
        let s = RealizedSet::new(vec![Grain::point(Point::xy(0.1, 0.2))], 0, w()).unwrap();
        let c = covering_bound_check(&s, 0.3, 400).unwrap().unwrap();
        assert!((c.rhs - 16.0).abs() < 1e-12);
        assert!((c.lhs - 1.0).abs() < 0.02);
        assert!(c.ok);
    }

    #[test]
    fn empty_and_bad_radius() {
        let s = RealizedSet::empty(1, w());
        assert_eq!(covering_bound_check(&s, 0.1, 10).unwrap(), None);
        assert!(covering_bound_check(&s, 2.0, 10).is_err());
    }
}
