use crate::error::{Error, Result};
use crate::geometry::{Grain, Point, RealizedSet};

/// Certified lower bound on the density constant of a realization.
///
/// Takes `η` as normalized `H^n` on `K = S ∩ valid_window` and returns a
/// `γ > 0` with `η(B_r(x)) ≥ γ r^n` for every `x ∈ K` and `r ∈ (0, 1)`, or
/// `None` for the empty set.
///
/// For `n = 1` each connected piece of `K` of length `ℓ` carries at least
/// `min(ℓ, r) ≥ min(ℓ, 1) r` inside any ball centred on it, and a full
/// circle of radius `R` at least `2 min(1, R) r`. Dividing the worst piece
/// constant by the total length gives the bound. For `n = 0`, `η` is the
/// normalized counting measure and `γ = 1 / #points`.
pub fn gamma_lower_bound(s: &RealizedSet) -> Result<Option<f64>> {
    let k = s.restricted();
    if k.is_empty() {
        return Ok(None);
    }
    match s.n() {
        0 => Ok(Some(1.0 / k.grains().len() as f64)),
        1 => {
            let total: f64 = k.grains().iter().map(Grain::measure).sum();
            let worst = k
                .grains()
                .iter()
                .map(piece_constant)
                .fold(f64::INFINITY, f64::min);
            if !(total > 0.0) {
                return Ok(None);
            }
            Ok(Some(worst / total))
        }
        n => Err(Error::invalid(
            "set",
            format!("density bound is only certified for n <= 1, got n = {n}"),
        )),
    }
}

fn piece_constant(g: &Grain) -> f64 {
    match *g {
        Grain::Circle { radius, .. } => 2.0 * radius.min(1.0),
        Grain::Line { .. } => 1.0,
        _ => g.measure().min(1.0),
    }
}

/// `η(B_r(x))` for the normalized measure used by [`gamma_lower_bound`].
pub fn eta_ball(s: &RealizedSet, x: &Point, r: f64) -> f64 {
    let k = s.restricted();
    let total: f64 = k.grains().iter().map(|g| if s.n() == 0 { 1.0 } else { g.measure() }).sum();
    if total == 0.0 {
        return 0.0;
    }
    k.grains().iter().map(|g| g.measure_in_ball(x, r)).sum::<f64>() / total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Window;

    fn w() -> Window {
        Window::rect(-5.0, -5.0, 5.0, 5.0)
    }

    fn seg(ax: f64, ay: f64, bx: f64, by: f64) -> Grain {
        Grain::segment(Point::xy(ax, ay), Point::xy(bx, by)).unwrap()
    }

    #[test]
    fn examples() {
        let one = RealizedSet::new(vec![seg(0.0, 0.0, 1.0, 0.0)], 1, w()).unwrap();
        assert_eq!(gamma_lower_bound(&one).unwrap(), Some(1.0));
        let two = RealizedSet::new(vec![seg(0.0, 0.0, 1.0, 0.0), seg(0.0, 1.0, 1.0, 1.0)], 1, w()).unwrap();
        assert_eq!(gamma_lower_bound(&two).unwrap(), Some(0.5));
        let pt = RealizedSet::new(vec![Grain::point(Point::xy(0.3, 0.3))], 0, w()).unwrap();
        assert_eq!(gamma_lower_bound(&pt).unwrap(), Some(1.0));
        assert_eq!(gamma_lower_bound(&RealizedSet::empty(1, w())).unwrap(), None);
    }

    #[test]
    fn clipped_pieces_use_their_own_length() {
        // Only 0.5 of this segment lies in the window.
        let s = RealizedSet::new(vec![seg(4.5, 0.0, 6.0, 0.0)], 1, w()).unwrap();
        assert_eq!(gamma_lower_bound(&s).unwrap(), Some(1.0));
        let s = RealizedSet::new(vec![seg(4.5, 0.0, 6.0, 0.0), seg(0.0, 0.0, 2.0, 0.0)], 1, w()).unwrap();
        assert_eq!(gamma_lower_bound(&s).unwrap(), Some(0.5 / 2.5));
    }

    #[test]
    fn solid_sets_are_rejected() {
        let d = Grain::disk(Point::xy(0.0, 0.0), 1.0).unwrap();
        let s = RealizedSet::new(vec![d], 2, w()).unwrap();
        assert!(gamma_lower_bound(&s).is_err());
    }
}
