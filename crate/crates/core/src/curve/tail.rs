//! One-sided thin-tail detector.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::{BoundaryCurve, CylPoint, Segment};
use crate::kernel::normalize_angle;

/// A subarc touching the vertical line at `theta` from one side only and
/// contained in the open band `band[0] < t < band[1]` of height π.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThinTail {
    pub component: usize,
    pub arc: Vec<[f64; 2]>,
    pub theta: f64,
    pub band: [f64; 2],
}

/// Scan strict θ-extrema of every cylinder polyline.
///
/// Finding a witness proves a thin tail exists; `None` proves nothing.
pub fn thin_tail_scan(curve: &BoundaryCurve) -> Option<ThinTail> {
    for (ci, comp) in curve.components.iter().enumerate() {
        let cyclic = comp.segments.len() == 1;
        for s in &comp.segments {
            if let Segment::CylinderArc { points } = s {
                if let Some(w) = scan_polyline(points, cyclic) {
                    return Some(ThinTail { component: ci, ..w });
                }
            }
        }
    }
    None
}

fn scan_polyline(points: &[CylPoint], cyclic: bool) -> Option<ThinTail> {
    let closed = cyclic
        && points.len() > 3
        && points[0].t == points[points.len() - 1].t
        && (points[0].theta - points[points.len() - 1].theta).abs() < 1e-9;
    let mut pts: Vec<CylPoint> = if closed {
        points[..points.len() - 1].to_vec()
    } else {
        points.to_vec()
    };
    let n = pts.len();
    if closed {
        // start at a θ change so no run straddles the seam
        let k = (0..n).find(|&k| pts[k].theta != pts[(k + n - 1) % n].theta)?;
        pts.rotate_left(k);
    }
    if n < 3 {
        return None;
    }
    let at = |i: isize| -> Option<CylPoint> {
        if closed {
            Some(pts[i.rem_euclid(n as isize) as usize])
        } else if i >= 0 && (i as usize) < n {
            Some(pts[i as usize])
        } else {
            None
        }
    };
    let mut i = 0usize;
    while i < n {
        // maximal run of equal θ starting at i
        let th = pts[i].theta;
        let mut j = i;
        while j + 1 < n && pts[j + 1].theta == th {
            j += 1;
        }
        let next_start = j + 1;
        let (Some(prev), Some(next)) = (at(i as isize - 1), at(j as isize + 1)) else {
            i = next_start;
            continue;
        };
        let side_prev = (prev.theta - th).signum();
        let side_next = (next.theta - th).signum();
        if side_prev != 0.0 && side_prev == side_next {
            let run = &pts[i..=j];
            let lo = run.iter().map(|p| p.t).fold(f64::INFINITY, f64::min);
            let hi = run.iter().map(|p| p.t).fold(f64::NEG_INFINITY, f64::max);
            let extent = hi - lo;
            if extent < PI {
                let first = run[0];
                let last = run[run.len() - 1];
                let dt = (prev.t - first.t).abs().max((next.t - last.t).abs()).max(1e-300);
                let f = (0.5f64).min((PI - extent) / (4.0 * dt));
                let lerp = |a: CylPoint, b: CylPoint| [a.theta + f * (b.theta - a.theta), a.t + f * (b.t - a.t)];
                let mut arc = vec![lerp(first, prev)];
                arc.extend(run.iter().map(|p| [p.theta, p.t]));
                arc.push(lerp(last, next));
                let a_lo = arc.iter().map(|p| p[1]).fold(f64::INFINITY, f64::min);
                let a_hi = arc.iter().map(|p| p[1]).fold(f64::NEG_INFINITY, f64::max);
                let c = a_lo - (PI - (a_hi - a_lo)) / 2.0;
                return Some(ThinTail {
                    component: 0,
                    arc,
                    theta: normalize_angle(th),
                    band: [c, c + PI],
                });
            }
        }
        i = next_start;
    }
    None
}
