//! Boundary of a finite union of disks as a list of circular arcs.

use std::f64::consts::TAU;

use super::grain::Grain;
use super::primitives::{norm, sub, Point};

/// Arcs of `∂(∪ disks)`.
///
/// For each circle, the open angular intervals lying strictly inside some
/// other disk are merged and complemented; what remains is returned as
/// `Grain::Arc` values. A circle strictly inside another disk contributes
/// nothing, and of several identical disks only the first is kept. The
/// union of the output equals the boundary of the union up to finitely
/// many points. Non-disk inputs are ignored.
pub fn boundary_arcs(disks: &[Grain]) -> Vec<Grain> {
    let circles: Vec<([f64; 2], f64)> = disks
        .iter()
        .filter_map(|g| match *g {
            Grain::Disk { center, radius } => Some((center.planar(), radius)),
            _ => None,
        })
        .collect();

    let mut out = Vec::new();
    'outer: for (i, &(ci, ri)) in circles.iter().enumerate() {
        let mut covered: Vec<(f64, f64)> = Vec::new();
        for (j, &(cj, rj)) in circles.iter().enumerate() {
            if i == j {
                continue;
            }
            let v = sub(cj, ci);
            let d = norm(v);
            if d == 0.0 && rj == ri {
                if j < i {
                    continue 'outer;
                }
                continue;
            }
            if d + ri < rj {
                continue 'outer;
            }
            if d >= ri + rj || d + rj <= ri || d + ri == rj {
                continue;
            }
            let phi = v[1].atan2(v[0]);
            let beta = ((d * d + ri * ri - rj * rj) / (2.0 * d * ri))
                .clamp(-1.0, 1.0)
                .acos();
            push_wrapped(&mut covered, phi - beta, 2.0 * beta);
        }
        let center = Point::from_planar(ci, 2);
        for (lo, hi) in complement(&mut covered) {
            out.push(Grain::Arc {
                center,
                radius: ri,
                theta_lo: lo,
                theta_hi: hi,
            });
        }
    }
    out
}

/// Add the angular interval `[start, start + len)` to `acc`, split into
/// pieces of `[0, 2π)`.
fn push_wrapped(acc: &mut Vec<(f64, f64)>, start: f64, len: f64) {
    if len >= TAU {
        acc.push((0.0, TAU));
        return;
    }
    let s = start.rem_euclid(TAU);
    let e = s + len;
    if e <= TAU {
        acc.push((s, e));
    } else {
        acc.push((s, TAU));
        acc.push((0.0, e - TAU));
    }
}

/// Complement of a union of intervals in `[0, 2π)`, returned as arcs with
/// `theta_lo < theta_hi`, joining the piece that wraps through angle zero.
fn complement(covered: &mut [(f64, f64)]) -> Vec<(f64, f64)> {
    if covered.is_empty() {
        return vec![(0.0, TAU)];
    }
    covered.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut merged: Vec<(f64, f64)> = Vec::with_capacity(covered.len());
    for &(a, b) in covered.iter() {
        match merged.last_mut() {
            Some(last) if a <= last.1 => last.1 = last.1.max(b),
            _ => merged.push((a, b)),
        }
    }
    let mut gaps = Vec::with_capacity(merged.len() + 1);
    let mut cursor = 0.0;
    for &(a, b) in &merged {
        if a > cursor {
            gaps.push((cursor, a));
        }
        cursor = cursor.max(b);
    }
    if cursor < TAU {
        gaps.push((cursor, TAU));
    }
    // Join [x, 2π) with [0, y) into one arc [x, 2π + y).
    if gaps.len() >= 2 && gaps[0].0 == 0.0 && gaps[gaps.len() - 1].1 == TAU {
        let first = gaps.remove(0);
        let last = gaps.last_mut().unwrap();
        last.1 = TAU + first.1;
    }
    gaps
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn disk(x: f64, y: f64, r: f64) -> Grain {
        Grain::disk(Point::xy(x, y), r).unwrap()
    }

    fn total_length(arcs: &[Grain]) -> f64 {
        arcs.iter().map(Grain::measure).sum()
    }

    #[test]
    fn single_disk_is_full_circle() {
        let arcs = boundary_arcs(&[disk(0.0, 0.0, 1.0)]);
        assert_eq!(arcs.len(), 1);
        assert_abs_diff_eq!(total_length(&arcs), TAU, epsilon = 1e-12);
    }

    #[test]
    fn two_overlapping_unit_disks() {
        let arcs = boundary_arcs(&[disk(0.0, 0.0, 1.0), disk(1.0, 0.0, 1.0)]);
        assert_eq!(arcs.len(), 2);
        for a in &arcs {
            let (_, _, _, span) = a.circle_params();
            assert_abs_diff_eq!(span, 4.0 * PI / 3.0, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(total_length(&arcs), 8.0 * PI / 3.0, epsilon = 1e-9);
    }

    #[test]
    fn swallowed_disk_contributes_nothing() {
        let arcs = boundary_arcs(&[disk(0.0, 0.0, 1.0), disk(0.0, 0.0, 3.0)]);
        assert_eq!(arcs.len(), 1);
        assert_abs_diff_eq!(total_length(&arcs), 6.0 * PI, epsilon = 1e-12);
    }

    #[test]
    fn duplicates_are_counted_once() {
        let arcs = boundary_arcs(&[disk(0.0, 0.0, 1.0), disk(0.0, 0.0, 1.0)]);
        assert_abs_diff_eq!(total_length(&arcs), TAU, epsilon = 1e-12);
    }

    #[test]
    fn wraparound_arc_is_joined() {
        // The second disk covers angles around π/2, so the exposed arc of the
        // first circle runs through angle 0.
        let arcs = boundary_arcs(&[disk(0.0, 0.0, 1.0), disk(0.0, 1.0, 1.0)]);
        let first: Vec<_> = arcs
            .iter()
            .filter(|a| matches!(a, Grain::Arc { center, .. } if center.planar() == [0.0, 0.0]))
            .collect();
        assert_eq!(first.len(), 1);
        assert_abs_diff_eq!(first[0].measure(), 4.0 * PI / 3.0, epsilon = 1e-12);
        // Points of the exposed arc are on the union boundary: outside the other disk.
        assert!(first[0].distance(&Point::xy(1.0, 0.0)).unwrap() < 1e-12);
        assert!(first[0].distance(&Point::xy(0.0, -1.0)).unwrap() < 1e-12);
    }
}
