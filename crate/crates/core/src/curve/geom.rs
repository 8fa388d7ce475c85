//! Planar predicates shared by validation, sweeps and region tests.

use std::f64::consts::TAU;

/// How two closed segments meet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Contact {
    None,
    Point([f64; 2]),
    /// Collinear overlap of positive length.
    Overlap,
}

pub fn orient(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

fn scale(pts: &[[f64; 2]]) -> f64 {
    pts.iter()
        .fold(1.0f64, |m, p| m.max(p[0].abs()).max(p[1].abs()))
}

fn on_segment(p: [f64; 2], a: [f64; 2], b: [f64; 2], eps: f64) -> bool {
    p[0] >= a[0].min(b[0]) - eps
        && p[0] <= a[0].max(b[0]) + eps
        && p[1] >= a[1].min(b[1]) - eps
        && p[1] <= a[1].max(b[1]) + eps
}

/// Contact between segments `ab` and `cd`.
pub fn segment_contact(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> Contact {
    let s = scale(&[a, b, c, d]);
    let lin = 1e-12 * s;
    let area = 1e-12 * s * s;
    // cheap bounding-box rejection
    if a[0].max(b[0]) < c[0].min(d[0]) - lin
        || c[0].max(d[0]) < a[0].min(b[0]) - lin
        || a[1].max(b[1]) < c[1].min(d[1]) - lin
        || c[1].max(d[1]) < a[1].min(b[1]) - lin
    {
        return Contact::None;
    }
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    let z1 = d1.abs() <= area;
    let z2 = d2.abs() <= area;
    let z3 = d3.abs() <= area;
    let z4 = d4.abs() <= area;
    if z1 && z2 && z3 && z4 {
        // collinear: project on the dominant axis
        let ax = if (b[0] - a[0]).abs() + (d[0] - c[0]).abs() >= (b[1] - a[1]).abs() + (d[1] - c[1]).abs() {
            0
        } else {
            1
        };
        let (lo1, hi1) = (a[ax].min(b[ax]), a[ax].max(b[ax]));
        let (lo2, hi2) = (c[ax].min(d[ax]), c[ax].max(d[ax]));
        let lo = lo1.max(lo2);
        let hi = hi1.min(hi2);
        if hi < lo - lin {
            return Contact::None;
        }
        if hi - lo > lin {
            return Contact::Overlap;
        }
        // single touching point: the shared extreme
        for p in [a, b] {
            if (p[ax] - lo).abs() <= lin && on_segment(p, c, d, lin) {
                return Contact::Point(p);
            }
        }
        for p in [c, d] {
            if (p[ax] - lo).abs() <= lin {
                return Contact::Point(p);
            }
        }
        return Contact::None;
    }
    if ((d1 > area && d2 < -area) || (d1 < -area && d2 > area))
        && ((d3 > area && d4 < -area) || (d3 < -area && d4 > area))
    {
        let t = d1 / (d1 - d2);
        return Contact::Point([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
    }
    if z1 && on_segment(a, c, d, lin) {
        return Contact::Point(a);
    }
    if z2 && on_segment(b, c, d, lin) {
        return Contact::Point(b);
    }
    if z3 && on_segment(c, a, b, lin) {
        return Contact::Point(c);
    }
    if z4 && on_segment(d, a, b, lin) {
        return Contact::Point(d);
    }
    Contact::None
}

/// Split a cylinder edge with unwrapped θ into pieces lying in `[0, 2π]`.
pub fn window_edge(a: [f64; 2], b: [f64; 2]) -> Vec<([f64; 2], [f64; 2])> {
    let k = (a[0] / TAU).floor();
    let shift = k * TAU;
    let a = [a[0] - shift, a[1]];
    let b = [b[0] - shift, b[1]];
    if a[0] == b[0] {
        return vec![(a, b)];
    }
    let (lo, hi) = (a[0].min(b[0]), a[0].max(b[0]));
    let mut cuts: Vec<f64> = Vec::new();
    let mut j = (lo / TAU).floor() + 1.0;
    while j * TAU < hi {
        cuts.push(j * TAU);
        j += 1.0;
    }
    if b[0] < a[0] {
        cuts.reverse();
    }
    let at = |theta: f64| a[1] + (theta - a[0]) * (b[1] - a[1]) / (b[0] - a[0]);
    let mut pts = vec![a];
    for c in cuts {
        pts.push([c, at(c)]);
    }
    pts.push(b);
    pts.windows(2)
        .map(|w| {
            let mid = 0.5 * (w[0][0] + w[1][0]);
            let s = (mid / TAU).floor() * TAU;
            ([w[0][0] - s, w[0][1]], [w[1][0] - s, w[1][1]])
        })
        .collect()
}
