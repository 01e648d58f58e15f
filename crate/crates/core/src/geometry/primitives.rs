use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest ambient dimension supported by the geometry kernels.
pub const MAX_DIM: usize = 2;

/// A point of ℝ^d, d ∈ {1, 2}.
///
/// One-dimensional points are stored embedded on the x-axis of the plane
/// (second coordinate zero), so every planar kernel is also exact in d = 1.
#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Point {
    xy: [f64; 2],
    dim: u8,
}

impl Point {
    pub fn new(coords: &[f64]) -> Result<Self> {
        if coords.is_empty() || coords.len() > MAX_DIM {
            return Err(Error::invalid(
                "coords",
                format!("length must be 1 or 2, got {}", coords.len()),
            ));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("coords", "all coordinates must be finite"));
        }
        let mut xy = [0.0; 2];
        xy[..coords.len()].copy_from_slice(coords);
        Ok(Point {
            xy,
            dim: coords.len() as u8,
        })
    }

    /// Planar point. Panics on non-finite input.
    pub fn xy(x: f64, y: f64) -> Self {
        assert!(x.is_finite() && y.is_finite(), "non-finite coordinate");
        Point { xy: [x, y], dim: 2 }
    }

    /// Point on the real line. Panics on non-finite input.
    pub fn x(x: f64) -> Self {
        assert!(x.is_finite(), "non-finite coordinate");
        Point {
            xy: [x, 0.0],
            dim: 1,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn coords(&self) -> &[f64] {
        &self.xy[..self.dim()]
    }

    /// Planar embedding (zero-padded for d = 1).
    #[inline]
    pub fn planar(&self) -> [f64; 2] {
        self.xy
    }

    pub(crate) fn from_planar(xy: [f64; 2], dim: usize) -> Self {
        Point {
            xy,
            dim: dim as u8,
        }
    }

    pub fn dist(&self, other: &Point) -> f64 {
        norm(sub(self.xy, other.xy))
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coords()).finish()
    }
}

impl TryFrom<Vec<f64>> for Point {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Point::new(&v)
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Self {
        p.coords().to_vec()
    }
}

/// Axis-aligned box `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "WindowRepr", into = "WindowRepr")]
pub struct Window {
    lo: Point,
    hi: Point,
}

#[derive(Serialize, Deserialize)]
struct WindowRepr {
    lo: Point,
    hi: Point,
}

impl TryFrom<WindowRepr> for Window {
    type Error = Error;

    fn try_from(w: WindowRepr) -> Result<Self> {
        Window::new(w.lo, w.hi)
    }
}

impl From<Window> for WindowRepr {
    fn from(w: Window) -> Self {
        WindowRepr { lo: w.lo, hi: w.hi }
    }
}

impl Window {
    pub fn new(lo: Point, hi: Point) -> Result<Self> {
        if lo.dim() != hi.dim() {
            return Err(Error::DimensionMismatch {
                expected: lo.dim(),
                got: hi.dim(),
            });
        }
        for (i, (a, b)) in lo.coords().iter().zip(hi.coords()).enumerate() {
            if !(a < b) {
                return Err(Error::invalid(
                    "window",
                    format!("lo[{i}] = {a} must be strictly below hi[{i}] = {b}"),
                ));
            }
        }
        Ok(Window { lo, hi })
    }

    /// `[x0, x1] × [y0, y1]`. Panics if the box is degenerate.
    pub fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        Window::new(Point::xy(x0, y0), Point::xy(x1, y1)).expect("degenerate rectangle")
    }

    /// `[x0, x1]` on the real line. Panics if the interval is degenerate.
    pub fn interval(x0: f64, x1: f64) -> Self {
        Window::new(Point::x(x0), Point::x(x1)).expect("degenerate interval")
    }

    /// The box `center ± half` in every coordinate.
    pub fn around(center: Point, half: f64) -> Self {
        let d = center.dim();
        let c = center.planar();
        let mut lo = [0.0; 2];
        let mut hi = [0.0; 2];
        for i in 0..d {
            lo[i] = c[i] - half;
            hi[i] = c[i] + half;
        }
        Window {
            lo: Point::from_planar(lo, d),
            hi: Point::from_planar(hi, d),
        }
    }

    pub fn dim(&self) -> usize {
        self.lo.dim()
    }

    pub fn lo(&self) -> Point {
        self.lo
    }

    pub fn hi(&self) -> Point {
        self.hi
    }

    /// Side length along axis `i`.
    pub fn side(&self, i: usize) -> f64 {
        self.hi.xy[i] - self.lo.xy[i]
    }

    /// Lebesgue measure ν^d of the box.
    pub fn volume(&self) -> f64 {
        (0..self.dim()).map(|i| self.side(i)).product()
    }

    pub fn center(&self) -> Point {
        let mut c = [0.0; 2];
        for (i, ci) in c.iter_mut().enumerate().take(self.dim()) {
            *ci = 0.5 * (self.lo.xy[i] + self.hi.xy[i]);
        }
        Point::from_planar(c, self.dim())
    }

    /// Radius of the smallest ball about [`Window::center`] containing the box.
    pub fn circumradius(&self) -> f64 {
        0.5 * (0..self.dim())
            .map(|i| self.side(i).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.contains_planar(p.planar())
    }

    #[inline]
    pub(crate) fn contains_planar(&self, p: [f64; 2]) -> bool {
        (0..self.dim()).all(|i| p[i] >= self.lo.xy[i] && p[i] <= self.hi.xy[i])
    }

    /// True when `other` lies in the interior of `self`.
    pub fn strictly_contains(&self, other: &Window) -> bool {
        self.dim() == other.dim()
            && (0..self.dim())
                .all(|i| self.lo.xy[i] < other.lo.xy[i] && other.hi.xy[i] < self.hi.xy[i])
    }

    pub(crate) fn bounds(&self) -> ([f64; 2], [f64; 2]) {
        (self.lo.xy, self.hi.xy)
    }
}

/// The box `[lo − s, hi + s]`.
///
/// This is a superset of the Euclidean dilation `w ⊕ B_s`; it is only ever
/// used as a containment or clipping region.
pub fn dilate_window(w: &Window, s: f64) -> Window {
    assert!(s >= 0.0, "dilation must be nonnegative");
    let d = w.dim();
    let (mut lo, mut hi) = w.bounds();
    for i in 0..d {
        lo[i] -= s;
        hi[i] += s;
    }
    Window {
        lo: Point::from_planar(lo, d),
        hi: Point::from_planar(hi, d),
    }
}

/// Volume `b_k = π^{k/2} / Γ(k/2 + 1)` of the unit ball in ℝ^k.
pub fn unit_ball_volume(k: usize) -> f64 {
    // b_k = b_{k-2} · 2π / k
    let mut b = if k.is_multiple_of(2) { 1.0 } else { 2.0 };
    let mut j = if k.is_multiple_of(2) { 2 } else { 3 };
    while j <= k {
        b *= 2.0 * PI / j as f64;
        j += 2;
    }
    b
}

#[inline]
pub(crate) fn sub(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

#[inline]
pub(crate) fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

#[inline]
pub(crate) fn norm(a: [f64; 2]) -> f64 {
    a[0].hypot(a[1])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_ball_volumes() {
        assert_eq!(unit_ball_volume(0), 1.0);
        assert_eq!(unit_ball_volume(1), 2.0);
        assert!((unit_ball_volume(2) - PI).abs() < 1e-15);
        assert!((unit_ball_volume(3) - 4.0 * PI / 3.0).abs() < 1e-14);
        assert!((unit_ball_volume(4) - PI * PI / 2.0).abs() < 1e-14);
    }

    #[test]
    fn dilation() {
        let w = Window::rect(0.0, 0.0, 1.0, 1.0);
        assert_eq!(dilate_window(&w, 1.0), Window::rect(-1.0, -1.0, 2.0, 2.0));
        assert_eq!(dilate_window(&w, 0.0), w);
        let i = Window::interval(0.0, 1.0);
        assert_eq!(dilate_window(&i, 0.5), Window::interval(-0.5, 1.5));
    }

    #[test]
    fn rejects_bad_points_and_windows() {
        assert!(Point::new(&[]).is_err());
        assert!(Point::new(&[1.0, 2.0, 3.0]).is_err());
        assert!(Point::new(&[f64::NAN]).is_err());
        assert!(Window::new(Point::xy(0.0, 0.0), Point::xy(1.0, 0.0)).is_err());
        assert!(Window::new(Point::x(0.0), Point::xy(1.0, 1.0)).is_err());
    }

    #[test]
    fn window_serde_validates() {
        let w: Window = serde_json::from_str(r#"{"lo":[0,0],"hi":[1,2]}"#).unwrap();
        assert_eq!(w.volume(), 2.0);
        assert!(serde_json::from_str::<Window>(r#"{"lo":[1],"hi":[0]}"#).is_err());
    }
}
