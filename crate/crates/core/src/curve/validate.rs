use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use std::fmt;

use super::geom::{segment_contact, window_edge, Contact};
use super::{poincare_to_klein, BoundaryCurve, Cap, JordanComponent, Junction, Segment, JUNCTION_TOL};
use crate::kernel::{ccw_delta, circular_distance, normalize_angle};
use crate::TOL_GEOM;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    Empty,
    MalformedSegment,
    Discontinuous,
    SelfIntersecting,
    NotDisjoint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub component: usize,
    pub kind: ViolationKind,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.kind {
            ViolationKind::Empty => "empty",
            ViolationKind::MalformedSegment => "malformed segment",
            ViolationKind::Discontinuous => "discontinuous",
            ViolationKind::SelfIntersecting => "not simple",
            ViolationKind::NotDisjoint => "not disjoint",
        };
        write!(f, "component {}: {}: {}", self.component, what, self.detail)
    }
}

/// Check segment invariants, continuity, simplicity and pairwise disjointness.
/// At most one violation is reported per component.
pub fn validate(curve: &BoundaryCurve) -> Result<(), Vec<Violation>> {
    let mut first: Vec<Option<Violation>> = vec![None; curve.components.len()];
    for (ci, comp) in curve.components.iter().enumerate() {
        if let Err(v) = check_component_shape(ci, comp) {
            first[ci] = Some(v);
        }
    }
    let prims: Vec<Vec<Vec<Prim>>> = curve
        .components
        .iter()
        .map(|c| c.segments.iter().map(prims_of).collect())
        .collect();
    let flat: Vec<(usize, usize)> = curve
        .components
        .iter()
        .enumerate()
        .flat_map(|(ci, c)| (0..c.segments.len()).map(move |si| (ci, si)))
        .collect();
    for (ci, comp) in curve.components.iter().enumerate() {
        if first[ci].is_some() {
            continue;
        }
        let closed_single = comp.segments.len() == 1;
        for (si, seg) in comp.segments.iter().enumerate() {
            if let Some(detail) = polyline_self_contact(seg, closed_single) {
                first[ci] = Some(Violation {
                    component: ci,
                    kind: ViolationKind::SelfIntersecting,
                    detail: format!("segment {si}: {detail}"),
                });
                break;
            }
        }
    }
    for x in 0..flat.len() {
        for y in x + 1..flat.len() {
            let (c1, s1) = flat[x];
            let (c2, s2) = flat[y];
            if first[c1].is_some() || first[c2].is_some() {
                continue;
            }
            let a = &curve.components[c1].segments[s1];
            let b = &curve.components[c2].segments[s2];
            let mut allowed: Vec<Junction> = Vec::new();
            if c1 == c2 {
                let comp = &curve.components[c1];
                let n = comp.segments.len();
                if cusp_pair(comp, s1, s2) {
                    if ray_start(a) == ray_start(b) {
                        first[c1] = Some(Violation {
                            component: c1,
                            kind: ViolationKind::SelfIntersecting,
                            detail: format!("cusp rays {s1} and {s2} start at the same point"),
                        });
                    }
                    continue;
                }
                if adjacent(n, s1, s2) {
                    allowed = shared_ends(a, b);
                }
                // a cusp ray passes through the start of its partner
                for (x, other) in [(s1, s2), (s2, s1)] {
                    if let Some(p) = cusp_partner(comp, x) {
                        if adjacent(n, other, p) {
                            allowed.extend(shared_ends(&comp.segments[p], &comp.segments[other]));
                        }
                    }
                }
            }
            let hits = prims[c1][s1]
                .iter()
                .flat_map(|p| prims[c2][s2].iter().flat_map(move |q| contacts(p, q)))
                .collect::<Vec<_>>();
            let bad = hits.iter().find(|h| match h {
                Hit::Overlap => true,
                Hit::At(j) => !allowed.iter().any(|k| k.same(j)),
            });
            if let Some(h) = bad {
                let detail = format!(
                    "segment {s1} ({}) meets component {c2} segment {s2} ({}) at {}",
                    a.kind_name(),
                    b.kind_name(),
                    match h {
                        Hit::Overlap => "an overlap".to_string(),
                        Hit::At(j) => format!("{j:?}"),
                    }
                );
                let kind = if c1 == c2 {
                    ViolationKind::SelfIntersecting
                } else {
                    ViolationKind::NotDisjoint
                };
                first[c1] = Some(Violation {
                    component: c1,
                    kind,
                    detail,
                });
            }
        }
    }
    let out: Vec<Violation> = first.into_iter().flatten().collect();
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

fn malformed(ci: usize, si: usize, what: &str) -> Violation {
    Violation {
        component: ci,
        kind: ViolationKind::MalformedSegment,
        detail: format!("segment {si}: {what}"),
    }
}

fn finite(xs: &[f64]) -> bool {
    xs.iter().all(|x| x.is_finite())
}

fn check_segment(ci: usize, si: usize, s: &Segment) -> Result<(), Violation> {
    match s {
        Segment::CylinderArc { points } => {
            if points.len() < 2 {
                return Err(malformed(ci, si, "cylinder arc needs at least 2 points"));
            }
            for w in points.windows(2) {
                if !finite(&[w[0].theta, w[0].t, w[1].theta, w[1].t]) {
                    return Err(malformed(ci, si, "non-finite coordinate"));
                }
                let dt = (w[1].theta - w[0].theta).abs();
                if dt + (w[1].t - w[0].t).abs() <= TOL_GEOM {
                    return Err(malformed(ci, si, "zero-length edge"));
                }
                if dt > TAU + TOL_GEOM {
                    return Err(malformed(ci, si, "edge winds more than once around the cylinder"));
                }
            }
        }
        Segment::VerticalRay { theta, t_start, .. } => {
            if !finite(&[*theta, *t_start]) {
                return Err(malformed(ci, si, "non-finite ray"));
            }
        }
        Segment::CapGeodesic { endpoints, .. } => {
            if !finite(endpoints) {
                return Err(malformed(ci, si, "non-finite endpoint"));
            }
            if circular_distance(endpoints[0], endpoints[1]) <= TOL_GEOM {
                return Err(malformed(ci, si, "geodesic endpoints coincide"));
            }
        }
        Segment::CapArc { points, .. } => {
            if points.len() < 2 {
                return Err(malformed(ci, si, "cap arc needs at least 2 points"));
            }
            for (k, p) in points.iter().enumerate() {
                if !finite(p) {
                    return Err(malformed(ci, si, "non-finite point"));
                }
                let r2 = p[0] * p[0] + p[1] * p[1];
                let end = k == 0 || k + 1 == points.len();
                if (end && r2 > 1.0 + 1e-12) || (!end && r2 >= 1.0) {
                    return Err(malformed(ci, si, "cap arc leaves the disk"));
                }
            }
            for w in points.windows(2) {
                if (w[0][0] - w[1][0]).hypot(w[0][1] - w[1][1]) <= TOL_GEOM {
                    return Err(malformed(ci, si, "zero-length edge"));
                }
            }
        }
        Segment::CornerPoint { theta, .. } => {
            if !theta.is_finite() {
                return Err(malformed(ci, si, "non-finite corner point"));
            }
        }
        Segment::CornerArc { interval, .. } => {
            if !finite(interval) {
                return Err(malformed(ci, si, "non-finite corner arc"));
            }
            let span = ccw_delta(interval[0], interval[1]);
            if span <= TOL_GEOM {
                return Err(malformed(ci, si, "degenerate corner arc"));
            }
        }
    }
    Ok(())
}

fn check_component_shape(ci: usize, comp: &JordanComponent) -> Result<(), Violation> {
    if comp.segments.is_empty() {
        return Err(Violation {
            component: ci,
            kind: ViolationKind::Empty,
            detail: "no segments".into(),
        });
    }
    for (si, s) in comp.segments.iter().enumerate() {
        check_segment(ci, si, s)?;
    }
    let disc = |detail: String| Violation {
        component: ci,
        kind: ViolationKind::Discontinuous,
        detail,
    };
    let n = comp.segments.len();
    if n == 1 {
        let s = &comp.segments[0];
        if !matches!(s, Segment::CylinderArc { .. } | Segment::CapArc { .. }) {
            return Err(disc(format!("a lone {} is not a closed curve", s.kind_name())));
        }
        let (a, b) = s.ends().expect("checked non-empty");
        if !a.same(&b) {
            return Err(disc("polyline does not close".into()));
        }
        return Ok(());
    }
    let ends: Vec<(Junction, Junction)> = comp.segments.iter().map(|s| s.ends().unwrap()).collect();
    let mut last_err = String::new();
    let is_ray = |k: usize| matches!(comp.segments[k], Segment::VerticalRay { .. });
    let corner = |j: &Junction| matches!(j, Junction::Corner { .. });
    'orient: for flip in [false, true] {
        let (start, mut cur) = if flip {
            (ends[0].1, ends[0].0)
        } else {
            (ends[0].0, ends[0].1)
        };
        let mut into_corner = is_ray(0) && corner(&cur);
        for k in 1..n {
            let (a, b) = ends[k];
            let (entry, exit) = if a.same(&cur) {
                (a, b)
            } else if b.same(&cur) {
                (b, a)
            } else {
                last_err = format!(
                    "segment {} ({}) does not continue into segment {k} ({})",
                    k - 1,
                    comp.segments[k - 1].kind_name(),
                    comp.segments[k].kind_name()
                );
                continue 'orient;
            };
            if is_ray(k) && corner(&entry) && into_corner {
                last_err = format!("rays {} and {k} meet at the corner without a corner piece", k - 1);
                continue 'orient;
            }
            into_corner = is_ray(k) && corner(&exit);
            cur = exit;
        }
        if !cur.same(&start) {
            last_err = "the segment cycle does not close".into();
            continue;
        }
        if into_corner && is_ray(0) && corner(&start) {
            last_err = "rays meet at the corner without a corner piece".into();
            continue;
        }
        return Ok(());
    }
    Err(disc(last_err))
}

fn adjacent(n: usize, i: usize, j: usize) -> bool {
    n >= 2 && ((i + 1) % n == j || (j + 1) % n == i)
}

/// Two rays at one angle toward the same cap, joined through a corner point.
fn cusp_pair(comp: &JordanComponent, i: usize, j: usize) -> bool {
    let n = comp.segments.len();
    let (Segment::VerticalRay { theta: a, cap: c1, .. }, Segment::VerticalRay { theta: b, cap: c2, .. }) =
        (&comp.segments[i], &comp.segments[j])
    else {
        return false;
    };
    if c1 != c2 || circular_distance(*a, *b) > JUNCTION_TOL || n < 3 {
        return false;
    }
    let between = |k: usize| matches!(comp.segments[k], Segment::CornerPoint { .. });
    ((i + 2) % n == j && between((i + 1) % n)) || ((j + 2) % n == i && between((j + 1) % n))
}

fn cusp_partner(comp: &JordanComponent, k: usize) -> Option<usize> {
    let n = comp.segments.len();
    if n < 3 {
        return None;
    }
    [(k + 2) % n, (k + n - 2) % n]
        .into_iter()
        .find(|&j| j != k && cusp_pair(comp, k, j))
}

fn ray_start(s: &Segment) -> Option<f64> {
    match s {
        Segment::VerticalRay { t_start, .. } => Some(*t_start),
        _ => None,
    }
}

fn shared_ends(a: &Segment, b: &Segment) -> Vec<Junction> {
    let (a0, a1) = a.ends().unwrap();
    let (b0, b1) = b.ends().unwrap();
    [a0, a1]
        .into_iter()
        .filter(|x| x.same(&b0) || x.same(&b1))
        .collect()
}

#[derive(Debug, Clone, Copy)]
enum Prim {
    Edge { a: [f64; 2], b: [f64; 2] },
    Ray { theta: f64, t: f64, cap: Cap },
    Corner { cap: Cap, start: f64, span: f64 },
    Chord { cap: Cap, a: [f64; 2], b: [f64; 2] },
}

#[derive(Debug, Clone, Copy)]
enum Hit {
    At(Junction),
    Overlap,
}

fn prims_of(s: &Segment) -> Vec<Prim> {
    let corner = |cap: Cap, theta: f64| Prim::Corner {
        cap,
        start: normalize_angle(theta),
        span: 0.0,
    };
    match s {
        Segment::CylinderArc { points } => points
            .windows(2)
            .flat_map(|w| window_edge([w[0].theta, w[0].t], [w[1].theta, w[1].t]))
            .map(|(a, b)| Prim::Edge { a, b })
            .collect(),
        Segment::VerticalRay {
            theta,
            t_start,
            cap,
        } => vec![
            Prim::Ray {
                theta: normalize_angle(*theta),
                t: *t_start,
                cap: *cap,
            },
            corner(*cap, *theta),
        ],
        Segment::CapGeodesic { cap, endpoints } => {
            let k = |t: f64| [t.cos(), t.sin()];
            vec![
                Prim::Chord {
                    cap: *cap,
                    a: k(endpoints[0]),
                    b: k(endpoints[1]),
                },
                corner(*cap, endpoints[0]),
                corner(*cap, endpoints[1]),
            ]
        }
        Segment::CapArc { cap, points } => {
            let mut v: Vec<Prim> = points
                .windows(2)
                .map(|w| Prim::Chord {
                    cap: *cap,
                    a: poincare_to_klein(w[0]),
                    b: poincare_to_klein(w[1]),
                })
                .collect();
            for p in [points[0], points[points.len() - 1]] {
                if p[0] * p[0] + p[1] * p[1] >= 1.0 - 1e-12 {
                    v.push(corner(*cap, p[1].atan2(p[0])));
                }
            }
            v
        }
        Segment::CornerPoint { cap, theta } => vec![corner(*cap, *theta)],
        Segment::CornerArc { cap, interval } => vec![Prim::Corner {
            cap: *cap,
            start: normalize_angle(interval[0]),
            span: ccw_delta(interval[0], interval[1]),
        }],
    }
}

fn ray_range(t: f64, cap: Cap) -> (f64, f64) {
    match cap {
        Cap::Plus => (t, f64::INFINITY),
        Cap::Minus => (f64::NEG_INFINITY, t),
    }
}

fn contacts(p: &Prim, q: &Prim) -> Vec<Hit> {
    use Prim::*;
    let tol = JUNCTION_TOL;
    match (*p, *q) {
        (Edge { a, b }, Edge { a: c, b: d }) => {
            let mut out = Vec::new();
            for shift in [0.0, TAU, -TAU] {
                let c2 = [c[0] + shift, c[1]];
                let d2 = [d[0] + shift, d[1]];
                match segment_contact(a, b, c2, d2) {
                    Contact::None => {}
                    Contact::Point(x) => out.push(Hit::At(Junction::cyl(x[0], x[1]))),
                    Contact::Overlap => out.push(Hit::Overlap),
                }
            }
            out
        }
        (Edge { a, b }, Ray { theta, t, cap }) | (Ray { theta, t, cap }, Edge { a, b }) => {
            let (rlo, rhi) = ray_range(t, cap);
            let mut out = Vec::new();
            for th in [theta, theta + TAU] {
                let (lo, hi) = (a[0].min(b[0]), a[0].max(b[0]));
                if th < lo - tol || th > hi + tol {
                    continue;
                }
                if (a[0] - b[0]).abs() <= tol {
                    let (elo, ehi) = (a[1].min(b[1]), a[1].max(b[1]));
                    let olo = elo.max(rlo);
                    let ohi = ehi.min(rhi);
                    if ohi < olo - tol {
                        continue;
                    }
                    if ohi - olo > tol {
                        out.push(Hit::Overlap);
                    } else {
                        out.push(Hit::At(Junction::cyl(theta, olo)));
                    }
                } else {
                    let s = ((th - a[0]) / (b[0] - a[0])).clamp(0.0, 1.0);
                    let tt = a[1] + s * (b[1] - a[1]);
                    if tt >= rlo - tol && tt <= rhi + tol {
                        out.push(Hit::At(Junction::cyl(theta, tt)));
                    }
                }
            }
            out
        }
        (Ray { theta: a, t: s, cap: c1 }, Ray { theta: b, t: u, cap: c2 }) => {
            if circular_distance(a, b) > tol {
                return vec![];
            }
            if c1 == c2 {
                return vec![Hit::Overlap];
            }
            let (tp, tm) = if c1 == Cap::Plus { (s, u) } else { (u, s) };
            if tp < tm - tol {
                vec![Hit::Overlap]
            } else if (tp - tm).abs() <= tol {
                vec![Hit::At(Junction::cyl(a, tp))]
            } else {
                vec![]
            }
        }
        (Corner { cap: c1, start: s1, span: w1 }, Corner { cap: c2, start: s2, span: w2 }) => {
            if c1 != c2 {
                return vec![];
            }
            corner_contacts(c1, s1, w1, s2, w2)
        }
        (Chord { cap: c1, a, b }, Chord { cap: c2, a: c, b: d }) => {
            if c1 != c2 {
                return vec![];
            }
            match segment_contact(a, b, c, d) {
                Contact::None => vec![],
                Contact::Point(x) => vec![Hit::At(Junction::in_cap_klein(c1, x))],
                Contact::Overlap => vec![Hit::Overlap],
            }
        }
        _ => vec![],
    }
}

fn corner_contacts(cap: Cap, s1: f64, w1: f64, s2: f64, w2: f64) -> Vec<Hit> {
    let tol = JUNCTION_TOL;
    let in_arc = |x: f64, s: f64, w: f64| {
        let o = ccw_delta(s, x);
        o <= w + tol || TAU - o <= tol
    };
    if w1 == 0.0 && w2 == 0.0 {
        return if circular_distance(s1, s2) <= tol {
            vec![Hit::At(Junction::corner(cap, s1))]
        } else {
            vec![]
        };
    }
    if w1 == 0.0 {
        return if in_arc(s1, s2, w2) {
            vec![Hit::At(Junction::corner(cap, s1))]
        } else {
            vec![]
        };
    }
    if w2 == 0.0 {
        return if in_arc(s2, s1, w1) {
            vec![Hit::At(Junction::corner(cap, s2))]
        } else {
            vec![]
        };
    }
    // both arcs: measure the overlap after putting arc 1 at [0, w1]
    let o = ccw_delta(s1, s2);
    let mut overlap = 0.0f64;
    for base in [o, o - TAU] {
        let lo = base.max(0.0);
        let hi = (base + w2).min(w1);
        overlap = overlap.max(hi - lo);
    }
    if overlap > tol {
        return vec![Hit::Overlap];
    }
    let mut out = Vec::new();
    for (x, s, w) in [(s1, s2, w2), (s1 + w1, s2, w2), (s2, s1, w1), (s2 + w2, s1, w1)] {
        if in_arc(x, s, w) {
            out.push(Hit::At(Junction::corner(cap, x)));
        }
    }
    out
}

/// Self-contacts inside one polyline segment.
fn polyline_self_contact(s: &Segment, closed: bool) -> Option<String> {
    let edges: Vec<Vec<([f64; 2], [f64; 2])>> = match s {
        Segment::CylinderArc { points } => points
            .windows(2)
            .map(|w| window_edge([w[0].theta, w[0].t], [w[1].theta, w[1].t]))
            .collect(),
        Segment::CapArc { points, .. } => points
            .windows(2)
            .map(|w| vec![(poincare_to_klein(w[0]), poincare_to_klein(w[1]))])
            .collect(),
        _ => return None,
    };
    let cylinder = matches!(s, Segment::CylinderArc { .. });
    let m = edges.len();
    let shifts: &[f64] = if cylinder { &[0.0, TAU, -TAU] } else { &[0.0] };
    let same_point = |x: [f64; 2], y: [f64; 2]| {
        if cylinder {
            circular_distance(x[0], y[0]) <= JUNCTION_TOL && (x[1] - y[1]).abs() <= JUNCTION_TOL
        } else {
            (x[0] - y[0]).hypot(x[1] - y[1]) <= JUNCTION_TOL
        }
    };
    for i in 0..m {
        for j in i + 1..m {
            let adj = j == i + 1 || (closed && i == 0 && j == m - 1 && m > 2);
            let shared: Option<[f64; 2]> = if j == i + 1 {
                edges[i].last().map(|e| e.1)
            } else if adj {
                edges[i].first().map(|e| e.0)
            } else {
                None
            };
            // closed two-edge loops share both end vertices
            let shared2: Option<[f64; 2]> = if closed && m == 2 { edges[0].first().map(|e| e.0) } else { None };
            for &(a, b) in &edges[i] {
                for &(c, d) in &edges[j] {
                    for &sh in shifts {
                        let c2 = [c[0] + sh, c[1]];
                        let d2 = [d[0] + sh, d[1]];
                        match segment_contact(a, b, c2, d2) {
                            Contact::None => {}
                            Contact::Overlap => return Some(format!("edges {i} and {j} overlap")),
                            Contact::Point(x) => {
                                let ok = shared.is_some_and(|y| same_point(x, y))
                                    || shared2.is_some_and(|y| same_point(x, y));
                                if !ok {
                                    return Some(format!("edges {i} and {j} cross"));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    None
}
