//! Point-in-region tests on the closed boundary (cylinder plus two caps) by
//! crossing parity against each Jordan component.

use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use super::geom::{orient, window_edge};
use super::{poincare_to_klein, BoundaryCurve, Cap, Segment};
use crate::kernel::{ccw_delta, normalize_angle, strictly_inside_arc};

/// A point of `∂∞(H² × ℝ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoundaryPoint {
    /// Interior cap point in Klein coordinates.
    Cap { cap: Cap, klein: [f64; 2] },
    Cylinder { theta: f64, t: f64 },
}

/// Cap point from Poincaré coordinates.
pub fn boundary_point_klein(cap: Cap, poincare: [f64; 2]) -> BoundaryPoint {
    BoundaryPoint::Cap {
        cap,
        klein: poincare_to_klein(poincare),
    }
}

struct Reference {
    theta: f64,
    t: f64,
}

fn reference(curve: &BoundaryCurve) -> Reference {
    let mut angles: Vec<f64> = Vec::new();
    let mut heights: Vec<f64> = Vec::new();
    for s in curve.segments() {
        match s {
            Segment::CylinderArc { points } => {
                for p in points {
                    angles.push(normalize_angle(p.theta));
                    heights.push(p.t);
                }
            }
            Segment::VerticalRay { theta, t_start, .. } => {
                angles.push(normalize_angle(*theta));
                heights.push(*t_start);
            }
            Segment::CapGeodesic { endpoints, .. } => angles.extend(endpoints.iter().map(|&a| normalize_angle(a))),
            Segment::CapArc { points, .. } => {
                for p in points {
                    angles.push(normalize_angle(p[1].atan2(p[0])));
                }
            }
            Segment::CornerPoint { theta, .. } => angles.push(normalize_angle(*theta)),
            Segment::CornerArc { interval, .. } => angles.extend(interval.iter().map(|&a| normalize_angle(a))),
        }
    }
    // middle of the widest angular gap, offset by an irrational-looking fraction
    angles.sort_by(f64::total_cmp);
    let theta = if angles.is_empty() {
        0.318_309_886
    } else {
        let mut best = (angles[0] + TAU - angles[angles.len() - 1], angles[angles.len() - 1]);
        for w in angles.windows(2) {
            if w[1] - w[0] > best.0 {
                best = (w[1] - w[0], w[0]);
            }
        }
        normalize_angle(best.1 + best.0 * 0.414_213_562)
    };
    heights.sort_by(f64::total_cmp);
    let t = match (heights.first(), heights.last()) {
        (Some(lo), Some(hi)) => {
            let mut best = (f64::NEG_INFINITY, lo - 1.0);
            for w in heights.windows(2) {
                if w[1] - w[0] > best.0 {
                    best = (w[1] - w[0], w[0] + (w[1] - w[0]) * 0.414_213_562);
                }
            }
            if best.0 > 0.0 {
                best.1
            } else {
                hi + 1.0
            }
        }
        _ => 0.577_215_664,
    };
    Reference { theta, t }
}

/// Crossings of the horizontal path at height `t` from `theta` ccw by `delta`.
fn horizontal(seg: &Segment, theta: f64, t: f64, delta: f64) -> usize {
    let inside = |c: f64| {
        let d = ccw_delta(theta, c);
        d > 0.0 && d < delta
    };
    match seg {
        Segment::CylinderArc { points } => points
            .windows(2)
            .flat_map(|w| window_edge([w[0].theta, w[0].t], [w[1].theta, w[1].t]))
            .filter(|(a, b)| {
                let (lo, hi) = (a[1].min(b[1]), a[1].max(b[1]));
                if !(lo <= t && t < hi) {
                    return false;
                }
                let c = a[0] + (t - a[1]) / (b[1] - a[1]) * (b[0] - a[0]);
                inside(normalize_angle(c))
            })
            .count(),
        Segment::VerticalRay { theta: rt, t_start, cap } => {
            let on = match cap {
                Cap::Plus => *t_start <= t,
                Cap::Minus => *t_start > t,
            };
            usize::from(on && inside(normalize_angle(*rt)))
        }
        _ => 0,
    }
}

/// Crossings of the vertical segment at the reference angle between `t0` and `t1`
/// (either may be infinite).
fn vertical(seg: &Segment, theta: f64, t0: f64, t1: f64) -> usize {
    let (lo, hi) = (t0.min(t1), t0.max(t1));
    match seg {
        Segment::CylinderArc { points } => points
            .windows(2)
            .flat_map(|w| window_edge([w[0].theta, w[0].t], [w[1].theta, w[1].t]))
            .filter(|(a, b)| {
                let (l, h) = (a[0].min(b[0]), a[0].max(b[0]));
                if a[0] == b[0] || !(l <= theta && theta < h) {
                    return false;
                }
                let v = a[1] + (theta - a[0]) / (b[0] - a[0]) * (b[1] - a[1]);
                lo <= v && v < hi
            })
            .count(),
        _ => 0,
    }
}

fn chords(seg: &Segment, cap: Cap) -> Vec<([f64; 2], [f64; 2])> {
    match seg {
        Segment::CapGeodesic { cap: c, endpoints } if *c == cap => {
            let k = |a: f64| [a.cos(), a.sin()];
            vec![(k(endpoints[0]), k(endpoints[1]))]
        }
        Segment::CapArc { cap: c, points } if *c == cap => points
            .windows(2)
            .map(|w| (poincare_to_klein(w[0]), poincare_to_klein(w[1])))
            .collect(),
        _ => Vec::new(),
    }
}

fn proper_cross(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> bool {
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

fn crossings(seg: &Segment, p: &BoundaryPoint, r: &Reference) -> usize {
    match *p {
        BoundaryPoint::Cylinder { theta, t } => {
            let theta = normalize_angle(theta);
            let delta = ccw_delta(theta, r.theta);
            horizontal(seg, theta, t, delta) + vertical(seg, r.theta, t, r.t)
        }
        BoundaryPoint::Cap { cap, klein } => {
            let target = [r.theta.cos(), r.theta.sin()];
            let in_cap = chords(seg, cap)
                .into_iter()
                .filter(|&(c, d)| proper_cross(klein, target, c, d))
                .count();
            let corner = match seg {
                Segment::CornerArc { cap: c, interval } if *c == cap => {
                    usize::from(strictly_inside_arc(r.theta, interval[0], interval[1]))
                }
                _ => 0,
            };
            let far = match cap {
                Cap::Plus => f64::INFINITY,
                Cap::Minus => f64::NEG_INFINITY,
            };
            in_cap + corner + vertical(seg, r.theta, far, r.t)
        }
    }
}

/// Parity of crossings between `p` and a fixed generic reference point, one
/// flag per component.
pub fn crossing_parity(curve: &BoundaryCurve, p: &BoundaryPoint) -> Vec<bool> {
    let r = reference(curve);
    curve
        .components
        .iter()
        .map(|c| c.segments.iter().map(|s| crossings(s, p, &r)).sum::<usize>() % 2 == 1)
        .collect()
}

/// `true` when no component of the curve separates `p` from `q`.
pub fn same_region(curve: &BoundaryCurve, p: &BoundaryPoint, q: &BoundaryPoint) -> bool {
    crossing_parity(curve, p) == crossing_parity(curve, q)
}
