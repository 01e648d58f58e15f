//! Midpoint-rule quadrature of enlargement indicators on uniform grids.
//!
//! The grid has `nx × ny` cells on a window (`ny = 1` in d = 1, where the
//! single row lies on the embedded x-axis). A cell counts as covered when
//! its midpoint lies in `S⊕r`. Only the cells a grain can reach are visited:
//! segments and lines get their exact row interval, round grains their
//! bounding disk, and every candidate is confirmed with the exact distance.
//!
//! For a set whose enlargement has boundary length `P` made of `K`
//! closed curves, every misclassified cell meets the boundary, so the
//! quadrature error is at most the area of the boundary's tube of radius
//! `δ` (the cell diagonal): `2 δ P + K π δ²`. See [`quadrature_bound`].

use std::f64::consts::PI;

use rayon::prelude::*;

use super::grain::{line_frame, Grain};
use super::primitives::Window;

/// Uniform grid of cells over a window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    window: Window,
    nx: usize,
    ny: usize,
}

impl Grid {
    /// `per_axis` cells along every axis of `window`.
    pub fn new(window: Window, per_axis: usize) -> Self {
        assert!(per_axis > 0, "grid needs at least one cell per axis");
        let ny = if window.dim() == 1 { 1 } else { per_axis };
        Grid {
            window,
            nx: per_axis,
            ny,
        }
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn hx(&self) -> f64 {
        self.window.side(0) / self.nx as f64
    }

    pub fn hy(&self) -> f64 {
        if self.window.dim() == 1 {
            1.0
        } else {
            self.window.side(1) / self.ny as f64
        }
    }

    /// Lebesgue measure of one cell.
    pub fn cell_volume(&self) -> f64 {
        self.window.volume() / self.len() as f64
    }

    /// Cell diagonal (cell side in d = 1).
    pub fn cell_diameter(&self) -> f64 {
        if self.window.dim() == 1 {
            self.hx()
        } else {
            self.hx().hypot(self.hy())
        }
    }

    #[inline]
    fn x_mid(&self, i: usize) -> f64 {
        self.window.lo().planar()[0] + (i as f64 + 0.5) * self.hx()
    }

    #[inline]
    fn y_mid(&self, j: usize) -> f64 {
        if self.window.dim() == 1 {
            0.0
        } else {
            self.window.lo().planar()[1] + (j as f64 + 0.5) * self.hy()
        }
    }

    /// Midpoint of cell `(i, j)` in planar coordinates.
    pub fn midpoint(&self, i: usize, j: usize) -> [f64; 2] {
        [self.x_mid(i), self.y_mid(j)]
    }

    /// Column indices whose midpoints may lie in `[u, v]`, padded by one.
    fn columns(&self, u: f64, v: f64) -> Option<(usize, usize)> {
        let x0 = self.window.lo().planar()[0];
        let hx = self.hx();
        let a = ((u - x0) / hx - 0.5).ceil() - 1.0;
        let b = ((v - x0) / hx - 0.5).floor() + 1.0;
        if b < 0.0 || a > (self.nx - 1) as f64 {
            return None;
        }
        Some((a.max(0.0) as usize, (b as usize).min(self.nx - 1)))
    }

    /// Mark the cells of row `j` whose midpoints lie within `r` of some grain.
    pub(crate) fn cover_row(&self, grains: &[Grain], r: f64, j: usize, row: &mut [bool]) {
        debug_assert_eq!(row.len(), self.nx);
        let y = self.y_mid(j);
        for g in grains {
            for (u, v) in row_candidates(g, y, r).into_iter().flatten() {
                let Some((a, b)) = self.columns(u, v) else {
                    continue;
                };
                for (i, cell) in row.iter_mut().enumerate().take(b + 1).skip(a) {
                    if !*cell && g.distance_planar([self.x_mid(i), y]) <= r {
                        *cell = true;
                    }
                }
            }
        }
    }

    /// Row-major coverage mask of `grains⊕r` at the cell midpoints.
    pub fn cover_mask(&self, grains: &[Grain], r: f64) -> Vec<bool> {
        let mut mask = vec![false; self.len()];
        if grains.is_empty() {
            return mask;
        }
        for (j, row) in mask.chunks_mut(self.nx).enumerate() {
            self.cover_row(grains, r, j, row);
        }
        mask
    }

    /// Number of cells whose midpoints lie in `grains⊕r`. Rows are
    /// processed in parallel; the count is an exact integer.
    pub fn cover_count(&self, grains: &[Grain], r: f64) -> usize {
        if grains.is_empty() {
            return 0;
        }
        (0..self.ny)
            .into_par_iter()
            .map_init(
                || vec![false; self.nx],
                |row, j| {
                    row.fill(false);
                    self.cover_row(grains, r, j, row);
                    row.iter().filter(|c| **c).count()
                },
            )
            .sum()
    }
}

/// Up to two x-intervals containing `{x : dist((x, y), g) ≤ r}`.
fn row_candidates(g: &Grain, y: f64, r: f64) -> [Option<(f64, f64)>; 2] {
    match *g {
        Grain::Segment { a, b } => [segment_row(a.planar(), b.planar(), y, r), None],
        Grain::Line { p, alpha } => {
            let (n, _) = line_frame(alpha);
            if n[0].abs() < 1e-12 {
                // Horizontal line: the whole row or nothing.
                if (y * n[1] - p).abs() <= r + 1e-12 {
                    [Some((f64::NEG_INFINITY, f64::INFINITY)), None]
                } else {
                    [None, None]
                }
            } else {
                let u = (p - r - y * n[1]) / n[0];
                let v = (p + r - y * n[1]) / n[0];
                [Some((u.min(v), u.max(v))), None]
            }
        }
        Grain::Point { location } => [disk_row(location.planar(), r, y), None],
        Grain::Disk { center, radius } | Grain::Arc { center, radius, .. } => {
            [disk_row(center.planar(), radius + r, y), None]
        }
        Grain::Circle { center, radius } => {
            let c = center.planar();
            let Some((u, v)) = disk_row(c, radius + r, y) else {
                return [None, None];
            };
            // Midpoints strictly inside the inner disk are farther than r.
            match disk_row(c, radius - r, y) {
                Some((iu, iv)) if radius > r && iv > iu => [Some((u, iu)), Some((iv, v))],
                _ => [Some((u, v)), None],
            }
        }
    }
}

fn disk_row(c: [f64; 2], rad: f64, y: f64) -> Option<(f64, f64)> {
    let dy = y - c[1];
    if rad <= 0.0 || dy.abs() > rad {
        return None;
    }
    let h = (rad * rad - dy * dy).sqrt();
    Some((c[0] - h, c[0] + h))
}

/// Row interval of the stadium `[a, b]⊕r` at height `y`.
fn segment_row(a: [f64; 2], b: [f64; 2], y: f64, r: f64) -> Option<(f64, f64)> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut take = |x: f64| {
        lo = lo.min(x);
        hi = hi.max(x);
    };
    for e in [a, b] {
        if let Some((u, v)) = disk_row(e, r, y) {
            take(u);
            take(v);
        }
    }
    let d = [b[0] - a[0], b[1] - a[1]];
    let len = d[0].hypot(d[1]);
    let nrm = [-d[1] / len * r, d[0] / len * r];
    let quad = [
        [a[0] + nrm[0], a[1] + nrm[1]],
        [b[0] + nrm[0], b[1] + nrm[1]],
        [b[0] - nrm[0], b[1] - nrm[1]],
        [a[0] - nrm[0], a[1] - nrm[1]],
    ];
    for k in 0..4 {
        let p = quad[k];
        let q = quad[(k + 1) % 4];
        if (p[1] - y) * (q[1] - y) > 0.0 {
            continue;
        }
        if p[1] == q[1] {
            take(p[0]);
            take(q[0]);
        } else {
            take(p[0] + (y - p[1]) / (q[1] - p[1]) * (q[0] - p[0]));
        }
    }
    (lo <= hi).then_some((lo, hi))
}

/// Midpoint-rule estimate of `ν^d((⋃ grains)⊕r ∩ a)` on `resolution` cells
/// per axis.
pub fn enlargement_volume(grains: &[Grain], a: &Window, r: f64, resolution: usize) -> f64 {
    assert!(r > 0.0, "enlargement radius must be positive");
    let grid = Grid::new(*a, resolution);
    grid.cover_count(grains, r) as f64 * grid.cell_volume()
}

/// Worst-case midpoint-rule error for an enlargement whose boundary inside
/// the window has length `perimeter` and consists of `components` curves.
pub fn quadrature_bound(perimeter: f64, components: usize, a: &Window, resolution: usize) -> f64 {
    let grid = Grid::new(*a, resolution);
    let delta = grid.cell_diameter();
    if a.dim() == 1 {
        // Each boundary point can misclassify at most one cell.
        return perimeter * delta;
    }
    2.0 * delta * perimeter + components as f64 * PI * delta * delta
}
