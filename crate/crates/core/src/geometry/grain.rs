use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use super::primitives::{dot, norm, sub, Point, Window};
use crate::error::{Error, Result};

/// A primitive closed set.
///
/// `Line` is the locus `{x : x·(cos α, sin α) = p}` with `α ∈ (0, π]`.
/// `Arc` covers the angles `theta_lo + [0, theta_hi − theta_lo]`, with a
/// span in `(0, 2π]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Grain {
    Point {
        location: Point,
    },
    Segment {
        a: Point,
        b: Point,
    },
    Line {
        p: f64,
        alpha: f64,
    },
    Circle {
        center: Point,
        radius: f64,
    },
    Arc {
        center: Point,
        radius: f64,
        theta_lo: f64,
        theta_hi: f64,
    },
    Disk {
        center: Point,
        radius: f64,
    },
}

impl Grain {
    pub fn point(location: Point) -> Self {
        Grain::Point { location }
    }

    pub fn segment(a: Point, b: Point) -> Result<Self> {
        if a.dim() != b.dim() {
            return Err(Error::DimensionMismatch {
                expected: a.dim(),
                got: b.dim(),
            });
        }
        if a == b {
            return Err(Error::invalid("segment", "endpoints must differ"));
        }
        Ok(Grain::Segment { a, b })
    }

    pub fn line(p: f64, alpha: f64) -> Result<Self> {
        if !p.is_finite() || !(alpha > 0.0 && alpha <= PI) {
            return Err(Error::invalid("line", "need finite p and alpha in (0, pi]"));
        }
        Ok(Grain::Line { p, alpha })
    }

    pub fn circle(center: Point, radius: f64) -> Result<Self> {
        check_planar_radius(&center, radius, "circle")?;
        Ok(Grain::Circle { center, radius })
    }

    pub fn arc(center: Point, radius: f64, theta_lo: f64, theta_hi: f64) -> Result<Self> {
        check_planar_radius(&center, radius, "arc")?;
        let span = theta_hi - theta_lo;
        if !(span > 0.0 && span <= TAU) || !theta_lo.is_finite() {
            return Err(Error::invalid("arc", "need 0 < theta_hi - theta_lo <= 2*pi"));
        }
        Ok(Grain::Arc {
            center,
            radius,
            theta_lo,
            theta_hi,
        })
    }

    pub fn disk(center: Point, radius: f64) -> Result<Self> {
        check_planar_radius(&center, radius, "disk")?;
        Ok(Grain::Disk { center, radius })
    }

    /// Hausdorff dimension of the grain as a point set.
    pub fn hausdorff_dim(&self) -> usize {
        match self {
            Grain::Point { .. } => 0,
            Grain::Disk { .. } => 2,
            _ => 1,
        }
    }

    /// Dimension of the ambient space.
    pub fn ambient_dim(&self) -> usize {
        match self {
            Grain::Point { location } => location.dim(),
            Grain::Segment { a, .. } => a.dim(),
            _ => 2,
        }
    }

    /// Total Hausdorff measure `H^n(g)`; infinite for lines.
    pub fn measure(&self) -> f64 {
        match *self {
            Grain::Point { .. } => 1.0,
            Grain::Segment { a, b } => a.dist(&b),
            Grain::Line { .. } => f64::INFINITY,
            Grain::Circle { radius, .. } => TAU * radius,
            Grain::Arc {
                radius,
                theta_lo,
                theta_hi,
                ..
            } => radius * (theta_hi - theta_lo),
            Grain::Disk { radius, .. } => PI * radius * radius,
        }
    }

    /// Exact Euclidean distance from `x` to the grain.
    pub fn distance(&self, x: &Point) -> Result<f64> {
        if x.dim() != self.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                got: x.dim(),
            });
        }
        Ok(self.distance_planar(x.planar()))
    }

    /// Distance kernel on the planar embedding; callers guarantee dimensions.
    #[inline]
    pub(crate) fn distance_planar(&self, x: [f64; 2]) -> f64 {
        match *self {
            Grain::Point { location } => norm(sub(x, location.planar())),
            Grain::Segment { a, b } => segment_distance(x, a.planar(), b.planar()),
            Grain::Line { p, alpha } => {
                let (n, _) = line_frame(alpha);
                (dot(x, n) - p).abs()
            }
            Grain::Circle { center, radius } => (norm(sub(x, center.planar())) - radius).abs(),
            Grain::Disk { center, radius } => (norm(sub(x, center.planar())) - radius).max(0.0),
            Grain::Arc {
                center,
                radius,
                theta_lo,
                theta_hi,
            } => {
                let c = center.planar();
                let v = sub(x, c);
                let rho = norm(v);
                if rho == 0.0 {
                    return radius;
                }
                let t = (v[1].atan2(v[0]) - theta_lo).rem_euclid(TAU);
                if t <= theta_hi - theta_lo {
                    (rho - radius).abs()
                } else {
                    let e0 = polar(c, radius, theta_lo);
                    let e1 = polar(c, radius, theta_hi);
                    norm(sub(x, e0)).min(norm(sub(x, e1)))
                }
            }
        }
    }

    /// Exact `H^n(g ∩ w)`.
    pub fn clip_measure(&self, w: &Window) -> f64 {
        match *self {
            Grain::Point { location } => {
                if w.contains(&location) {
                    1.0
                } else {
                    0.0
                }
            }
            Grain::Segment { a, b } => match clip_segment(a.planar(), b.planar(), w) {
                Some((t0, t1)) => (t1 - t0) * a.dist(&b),
                None => 0.0,
            },
            Grain::Line { p, alpha } => match line_chord(p, alpha, w) {
                Some((s0, s1)) => s1 - s0,
                None => 0.0,
            },
            Grain::Circle { .. } | Grain::Arc { .. } => {
                let (c, r, lo, span) = self.circle_params();
                let pieces = arc_pieces(c, r, lo, span, &box_crossings(c, r, w), |p| {
                    w.contains_planar(p)
                });
                r * pieces.iter().map(|(a, b)| b - a).sum::<f64>()
            }
            Grain::Disk { center, radius } => disk_box_area(center.planar(), radius, w),
        }
    }

    /// Exact `H^n(g ∩ B_r(center))`.
    pub fn measure_in_ball(&self, center: &Point, r: f64) -> f64 {
        let x = center.planar();
        match *self {
            Grain::Point { location } => {
                if norm(sub(location.planar(), x)) <= r {
                    1.0
                } else {
                    0.0
                }
            }
            Grain::Segment { a, b } => {
                let (pa, pb) = (a.planar(), b.planar());
                let d = sub(pb, pa);
                let len = norm(d);
                // |pa + t d - x|² <= r², t in [0, 1]
                let f = sub(pa, x);
                let qa = dot(d, d);
                let qb = dot(f, d);
                let qc = dot(f, f) - r * r;
                let disc = qb * qb - qa * qc;
                if disc <= 0.0 {
                    return 0.0;
                }
                let s = disc.sqrt();
                let t0 = ((-qb - s) / qa).max(0.0);
                let t1 = ((-qb + s) / qa).min(1.0);
                if t1 > t0 {
                    (t1 - t0) * len
                } else {
                    0.0
                }
            }
            Grain::Line { .. } => {
                let dist = self.distance_planar(x);
                if dist < r {
                    2.0 * (r * r - dist * dist).sqrt()
                } else {
                    0.0
                }
            }
            Grain::Circle { .. } | Grain::Arc { .. } => {
                let (c, rad, lo, span) = self.circle_params();
                let breaks = circle_crossings(c, rad, x, r);
                let pieces = arc_pieces(c, rad, lo, span, &breaks, |p| norm(sub(p, x)) <= r);
                rad * pieces.iter().map(|(a, b)| b - a).sum::<f64>()
            }
            Grain::Disk { center, radius } => lens_area(norm(sub(center.planar(), x)), radius, r),
        }
    }

    /// The pieces of `g ∩ w` as grains of the same dimension.
    ///
    /// Lines become chords, circles and arcs become arcs. A disk meeting the
    /// box is returned whole.
    pub fn clip_to_window(&self, w: &Window) -> Vec<Grain> {
        match *self {
            Grain::Point { location } => {
                if w.contains(&location) {
                    vec![*self]
                } else {
                    vec![]
                }
            }
            Grain::Segment { a, b } => {
                let (pa, pb) = (a.planar(), b.planar());
                match clip_segment(pa, pb, w) {
                    Some((t0, t1)) if t1 > t0 => {
                        if t0 == 0.0 && t1 == 1.0 {
                            return vec![*self];
                        }
                        let d = a.dim();
                        let lerp = |t: f64| {
                            Point::from_planar([pa[0] + t * (pb[0] - pa[0]), pa[1] + t * (pb[1] - pa[1])], d)
                        };
                        vec![Grain::Segment {
                            a: lerp(t0),
                            b: lerp(t1),
                        }]
                    }
                    _ => vec![],
                }
            }
            Grain::Line { p, alpha } => match line_chord(p, alpha, w) {
                Some((s0, s1)) if s1 > s0 => {
                    let (n, u) = line_frame(alpha);
                    let at = |s: f64| Point::xy(p * n[0] + s * u[0], p * n[1] + s * u[1]);
                    vec![Grain::Segment { a: at(s0), b: at(s1) }]
                }
                _ => vec![],
            },
            Grain::Circle { .. } | Grain::Arc { .. } => {
                let (c, r, lo, span) = self.circle_params();
                let pieces =
                    arc_pieces(c, r, lo, span, &box_crossings(c, r, w), |p| w.contains_planar(p));
                if pieces.len() == 1 && pieces[0] == (0.0, span) {
                    return vec![*self];
                }
                let center = Point::from_planar(c, 2);
                pieces
                    .into_iter()
                    .map(|(a, b)| Grain::Arc {
                        center,
                        radius: r,
                        theta_lo: lo + a,
                        theta_hi: lo + b,
                    })
                    .collect()
            }
            Grain::Disk { .. } => {
                if self.clip_measure(w) > 0.0 {
                    vec![*self]
                } else {
                    vec![]
                }
            }
        }
    }

    /// `(center, radius, start angle, angular span)` of a circle or arc.
    pub(crate) fn circle_params(&self) -> ([f64; 2], f64, f64, f64) {
        match *self {
            Grain::Circle { center, radius } => (center.planar(), radius, 0.0, TAU),
            Grain::Arc {
                center,
                radius,
                theta_lo,
                theta_hi,
            } => (center.planar(), radius, theta_lo, theta_hi - theta_lo),
            _ => unreachable!("circle_params on a non-circular grain"),
        }
    }
}

fn check_planar_radius(center: &Point, radius: f64, what: &str) -> Result<()> {
    if center.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: center.dim(),
        });
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::invalid(what, "radius must be positive and finite"));
    }
    Ok(())
}

#[inline]
pub(crate) fn polar(c: [f64; 2], r: f64, theta: f64) -> [f64; 2] {
    [c[0] + r * theta.cos(), c[1] + r * theta.sin()]
}

#[inline]
fn segment_distance(x: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let d = sub(b, a);
    let t = (dot(sub(x, a), d) / dot(d, d)).clamp(0.0, 1.0);
    norm(sub(x, [a[0] + t * d[0], a[1] + t * d[1]]))
}

/// Unit normal and unit direction of a line in normal form. Components
/// below rounding level are flushed to zero so axis-parallel lines stay
/// exactly axis-parallel.
#[inline]
pub(crate) fn line_frame(alpha: f64) -> ([f64; 2], [f64; 2]) {
    let flush = |v: f64| if v.abs() < 1e-15 { 0.0 } else { v };
    let (s, c) = alpha.sin_cos();
    let (s, c) = (flush(s), flush(c));
    ([c, s], [-s, c])
}

/// Liang–Barsky clipping of `a + t (b − a)` against the box, `t ∈ [t0, t1]`.
fn clip_param(a: [f64; 2], d: [f64; 2], w: &Window, mut t0: f64, mut t1: f64) -> Option<(f64, f64)> {
    let (lo, hi) = w.bounds();
    for i in 0..w.dim() {
        if d[i] == 0.0 {
            if a[i] < lo[i] || a[i] > hi[i] {
                return None;
            }
            continue;
        }
        let ta = (lo[i] - a[i]) / d[i];
        let tb = (hi[i] - a[i]) / d[i];
        let (ta, tb) = if ta < tb { (ta, tb) } else { (tb, ta) };
        t0 = t0.max(ta);
        t1 = t1.min(tb);
        if t0 > t1 {
            return None;
        }
    }
    Some((t0, t1))
}

fn clip_segment(a: [f64; 2], b: [f64; 2], w: &Window) -> Option<(f64, f64)> {
    clip_param(a, sub(b, a), w, 0.0, 1.0)
}

/// Arc-length parameters `(s0, s1)` of the chord of a line through the box,
/// measured from the foot point `p·n` along `(−sin α, cos α)`.
fn line_chord(p: f64, alpha: f64, w: &Window) -> Option<(f64, f64)> {
    let (n, u) = line_frame(alpha);
    clip_param([p * n[0], p * n[1]], u, w, f64::NEG_INFINITY, f64::INFINITY)
}

/// Angles at which the circle crosses the four edge lines of the box.
fn box_crossings(c: [f64; 2], r: f64, w: &Window) -> Vec<f64> {
    let (lo, hi) = w.bounds();
    let mut out = Vec::with_capacity(16);
    for &x in &[lo[0], hi[0]] {
        let v = (x - c[0]) / r;
        if v.abs() <= 1.0 {
            let a = v.acos();
            out.push(a);
            out.push(-a);
        }
    }
    for &y in &[lo[1], hi[1]] {
        let v = (y - c[1]) / r;
        if v.abs() <= 1.0 {
            let a = v.asin();
            out.push(a);
            out.push(PI - a);
        }
    }
    out
}

/// Angles at which the circle `(c, r)` crosses the circle `(x, rho)`.
pub(crate) fn circle_crossings(c: [f64; 2], r: f64, x: [f64; 2], rho: f64) -> Vec<f64> {
    let v = sub(x, c);
    let d = norm(v);
    if d == 0.0 || d >= r + rho || d <= (r - rho).abs() {
        return vec![];
    }
    let phi = v[1].atan2(v[0]);
    let beta = ((d * d + r * r - rho * rho) / (2.0 * d * r)).clamp(-1.0, 1.0).acos();
    vec![phi - beta, phi + beta]
}

/// Partition the arc `lo + [0, span]` at the given absolute angles and keep
/// the pieces whose midpoint satisfies `inside`. Returns sorted, merged
/// parameter intervals within `[0, span]`.
pub(crate) fn arc_pieces(
    c: [f64; 2],
    r: f64,
    lo: f64,
    span: f64,
    breaks: &[f64],
    inside: impl Fn([f64; 2]) -> bool,
) -> Vec<(f64, f64)> {
    let mut ts: Vec<f64> = breaks
        .iter()
        .map(|phi| (phi - lo).rem_euclid(TAU))
        .filter(|t| *t > 0.0 && *t < span)
        .collect();
    ts.push(0.0);
    ts.push(span);
    ts.sort_by(f64::total_cmp);
    ts.dedup();

    let mut out: Vec<(f64, f64)> = Vec::new();
    for win in ts.windows(2) {
        let (a, b) = (win[0], win[1]);
        if b <= a || !inside(polar(c, r, lo + 0.5 * (a + b))) {
            continue;
        }
        match out.last_mut() {
            Some(last) if last.1 == a => last.1 = b,
            _ => out.push((a, b)),
        }
    }
    out
}

/// Area of the intersection of two disks with radii `r1`, `r2` whose
/// centers are `d` apart.
pub(crate) fn lens_area(d: f64, r1: f64, r2: f64) -> f64 {
    if d >= r1 + r2 {
        return 0.0;
    }
    let small = r1.min(r2);
    if d <= (r1 - r2).abs() {
        return PI * small * small;
    }
    let a1 = ((d * d + r1 * r1 - r2 * r2) / (2.0 * d * r1)).clamp(-1.0, 1.0).acos();
    let a2 = ((d * d + r2 * r2 - r1 * r1) / (2.0 * d * r2)).clamp(-1.0, 1.0).acos();
    let k = (-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2);
    r1 * r1 * a1 + r2 * r2 * a2 - 0.5 * k.max(0.0).sqrt()
}

/// Exact area of a disk intersected with an axis-aligned rectangle.
fn disk_box_area(c: [f64; 2], r: f64, w: &Window) -> f64 {
    let (lo, hi) = w.bounds();
    let x0 = lo[0].max(c[0] - r);
    let x1 = hi[0].min(c[0] + r);
    if x1 <= x0 {
        return 0.0;
    }
    let mut xs = vec![x0, x1];
    for &y in &[lo[1], hi[1]] {
        let dy = y - c[1];
        if dy.abs() < r {
            let h = (r * r - dy * dy).sqrt();
            xs.extend([c[0] - h, c[0] + h].into_iter().filter(|&x| x > x0 && x < x1));
        }
    }
    xs.sort_by(f64::total_cmp);
    xs.dedup();

    let half = |s: f64| (r * r - s * s).max(0.0).sqrt();
    // ∫ sqrt(r² − s²) ds
    let prim = |s: f64| {
        let s = s.clamp(-r, r);
        0.5 * (s * half(s) + r * r * (s / r).asin())
    };
    let mut area = 0.0;
    for win in xs.windows(2) {
        let (u, v) = (win[0], win[1]);
        let m = 0.5 * (u + v) - c[0];
        let hm = half(m);
        let top_is_arc = c[1] + hm < hi[1];
        let bot_is_arc = c[1] - hm > lo[1];
        let top = if top_is_arc { c[1] + hm } else { hi[1] };
        let bot = if bot_is_arc { c[1] - hm } else { lo[1] };
        if top <= bot {
            continue;
        }
        let arc_int = prim(v - c[0]) - prim(u - c[0]);
        let width = v - u;
        let top_int = if top_is_arc { c[1] * width + arc_int } else { hi[1] * width };
        let bot_int = if bot_is_arc { c[1] * width - arc_int } else { lo[1] * width };
        area += top_int - bot_int;
    }
    area
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn seg(ax: f64, ay: f64, bx: f64, by: f64) -> Grain {
        Grain::segment(Point::xy(ax, ay), Point::xy(bx, by)).unwrap()
    }

    #[test]
    fn distance_examples() {
        let o = Point::xy(0.0, 0.0);
        assert_abs_diff_eq!(seg(1.0, 0.0, 2.0, 0.0).distance(&o).unwrap(), 1.0, epsilon = 1e-12);
        let x_axis = Grain::line(0.0, PI / 2.0).unwrap();
        assert_abs_diff_eq!(x_axis.distance(&Point::xy(0.0, 1.0)).unwrap(), 1.0, epsilon = 1e-12);
        let c = Grain::circle(Point::xy(3.0, 0.0), 1.0).unwrap();
        assert_abs_diff_eq!(c.distance(&o).unwrap(), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn distance_rejects_dimension_mismatch() {
        let g = seg(1.0, 0.0, 2.0, 0.0);
        assert!(matches!(
            g.distance(&Point::x(0.0)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn arc_distance_uses_endpoints_outside_span() {
        let a = Grain::arc(Point::xy(0.0, 0.0), 1.0, 0.0, PI / 2.0).unwrap();
        // Inside the angular span.
        assert_abs_diff_eq!(a.distance(&Point::xy(2.0, 2.0)).unwrap(), 8f64.sqrt() - 1.0, epsilon = 1e-12);
        // Outside: nearest endpoint is (1, 0).
        assert_abs_diff_eq!(a.distance(&Point::xy(1.0, -1.0)).unwrap(), 1.0, epsilon = 1e-12);
        // The center is at distance R.
        assert_abs_diff_eq!(a.distance(&Point::xy(0.0, 0.0)).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn clip_measure_examples() {
        let unit = Window::rect(0.0, 0.0, 1.0, 1.0);
        let x_axis = Grain::line(0.0, PI / 2.0).unwrap();
        assert_abs_diff_eq!(x_axis.clip_measure(&unit), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(seg(-1.0, 0.0, 2.0, 0.0).clip_measure(&unit), 1.0, epsilon = 1e-12);
        let c = Grain::circle(Point::xy(0.0, 0.0), 1.0).unwrap();
        assert_abs_diff_eq!(c.clip_measure(&Window::rect(-2.0, -2.0, 2.0, 2.0)), TAU, epsilon = 1e-12);
    }

    #[test]
    fn clip_measure_partial_circle() {
        // Upper half-plane box keeps half the circle.
        let c = Grain::circle(Point::xy(0.0, 0.0), 1.0).unwrap();
        assert_abs_diff_eq!(c.clip_measure(&Window::rect(-2.0, 0.0, 2.0, 2.0)), PI, epsilon = 1e-12);
        // First quadrant keeps a quarter.
        assert_abs_diff_eq!(c.clip_measure(&Window::rect(0.0, 0.0, 2.0, 2.0)), PI / 2.0, epsilon = 1e-12);
        // Box strictly inside the circle meets nothing.
        assert_eq!(c.clip_measure(&Window::rect(-0.5, -0.5, 0.5, 0.5)), 0.0);
        // Corner box keeps the angles with cos and sin both at least 1/2.
        let w = Window::rect(0.5, 0.5, 2.0, 2.0);
        let lo = (0.5f64).asin();
        let hi = (0.5f64).acos();
        assert_abs_diff_eq!(c.clip_measure(&w), hi - lo, epsilon = 1e-12);
    }

    #[test]
    fn measure_in_ball_examples() {
        let x_axis = Grain::line(0.0, PI / 2.0).unwrap();
        assert_abs_diff_eq!(x_axis.measure_in_ball(&Point::xy(0.3, 0.0), 0.25), 0.5, epsilon = 1e-12);
        assert_eq!(seg(5.0, 5.0, 6.0, 6.0).measure_in_ball(&Point::xy(0.0, 0.0), 1.0), 0.0);
        let c = Grain::circle(Point::xy(0.0, 0.0), 1.0).unwrap();
        assert_abs_diff_eq!(c.measure_in_ball(&Point::xy(1.0, 0.0), 1.0), TAU / 3.0, epsilon = 1e-12);
        // Segment partly inside.
        assert_abs_diff_eq!(seg(0.0, 0.0, 3.0, 0.0).measure_in_ball(&Point::xy(0.0, 0.0), 1.0), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn disk_measures() {
        let d = Grain::disk(Point::xy(0.0, 0.0), 1.0).unwrap();
        assert_abs_diff_eq!(d.clip_measure(&Window::rect(-2.0, -2.0, 2.0, 2.0)), PI, epsilon = 1e-12);
        assert_abs_diff_eq!(d.clip_measure(&Window::rect(0.0, 0.0, 2.0, 2.0)), PI / 4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(d.clip_measure(&Window::rect(-0.5, -0.5, 0.5, 0.5)), 1.0, epsilon = 1e-12);
        // Half-width strip through the center: 2 ∫_0^{1/2} 2 sqrt(1 − s²) ds.
        let strip = Window::rect(-0.5, -2.0, 0.5, 2.0);
        let expected = 2.0 * (0.5 * (0.75f64).sqrt() + (0.5f64).asin());
        assert_abs_diff_eq!(d.clip_measure(&strip), expected, epsilon = 1e-12);
        assert_abs_diff_eq!(d.measure_in_ball(&Point::xy(0.0, 0.0), 2.0), PI, epsilon = 1e-12);
        assert_eq!(d.measure_in_ball(&Point::xy(3.0, 0.0), 1.0), 0.0);
    }

    #[test]
    fn clip_to_window_pieces() {
        let w = Window::rect(0.0, 0.0, 1.0, 1.0);
        let x_axis = Grain::line(0.5, PI / 2.0).unwrap();
        let pieces = x_axis.clip_to_window(&w);
        assert_eq!(pieces.len(), 1);
        assert_abs_diff_eq!(pieces[0].measure(), 1.0, epsilon = 1e-12);

        // A circle crossing the box twice on each of two edges leaves arcs
        // whose total length equals clip_measure.
        let c = Grain::circle(Point::xy(0.5, -0.3), 0.6).unwrap();
        let total: f64 = c.clip_to_window(&w).iter().map(Grain::measure).sum();
        assert_abs_diff_eq!(total, c.clip_measure(&w), epsilon = 1e-12);
        assert!(total > 0.0);
    }
}
