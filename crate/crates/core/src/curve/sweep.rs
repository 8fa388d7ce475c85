//! Height sweep over the cylinder development and tall-rectangle covers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

use super::geom::window_edge;
use super::{BoundaryCurve, Cap, CurveError, Segment};
use crate::kernel::normalize_angle;
use crate::TOL_GEOM;

/// A cylinder edge piece with `θ ∈ [0, 2π]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubEdge {
    pub a: [f64; 2],
    pub b: [f64; 2],
    pub component: usize,
}

impl SubEdge {
    pub fn theta_range(&self) -> (f64, f64) {
        (self.a[0].min(self.b[0]), self.a[0].max(self.b[0]))
    }

    pub fn is_vertical(&self) -> bool {
        self.a[0] == self.b[0]
    }

    /// Height at `theta` on the supporting line (non-vertical edges only).
    /// Endpoints return their stored heights, so edges sharing a vertex agree there.
    pub fn height_at(&self, theta: f64) -> f64 {
        if theta == self.a[0] {
            return self.a[1];
        }
        if theta == self.b[0] {
            return self.b[1];
        }
        self.a[1] + (theta - self.a[0]) * (self.b[1] - self.a[1]) / (self.b[0] - self.a[0])
    }

    pub fn slope(&self) -> f64 {
        ((self.b[1] - self.a[1]) / (self.b[0] - self.a[0])).abs()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct RayInfo {
    theta: f64,
    t: f64,
    cap: Cap,
}

/// All cylinder edges of the curve, split into `[0, 2π]` windows.
pub fn cylinder_edges(curve: &BoundaryCurve) -> Vec<SubEdge> {
    let mut out = Vec::new();
    for (ci, comp) in curve.components.iter().enumerate() {
        for s in &comp.segments {
            if let Segment::CylinderArc { points } = s {
                for w in points.windows(2) {
                    for (a, b) in window_edge([w[0].theta, w[0].t], [w[1].theta, w[1].t]) {
                        out.push(SubEdge { a, b, component: ci });
                    }
                }
            }
        }
    }
    snap_angles(&mut out);
    out
}

/// Merge endpoint angles closer than `TOL_GEOM`, so a vertex reached along two
/// unwrapping paths is one event rather than a sliver between two.
fn snap_angles(edges: &mut [SubEdge]) {
    let mut all: Vec<f64> = vec![0.0, TAU];
    for e in edges.iter() {
        all.push(e.a[0]);
        all.push(e.b[0]);
    }
    all.sort_by(f64::total_cmp);
    let mut reps: Vec<f64> = Vec::new();
    for x in all {
        match reps.last() {
            Some(&r) if x - r <= TOL_GEOM => {}
            _ => reps.push(x),
        }
    }
    if reps.len() > 1 && TAU - reps[reps.len() - 2] <= TOL_GEOM {
        // a cluster just below 2π belongs to 2π
        let n = reps.len();
        reps[n - 2] = TAU;
        reps.pop();
    }
    let snap = |x: f64| {
        let i = reps.partition_point(|&r| r <= x + TOL_GEOM);
        let r = reps[i.saturating_sub(1)];
        if (x - r).abs() <= TOL_GEOM {
            r
        } else {
            x
        }
    };
    for e in edges.iter_mut() {
        e.a[0] = snap(e.a[0]);
        e.b[0] = snap(e.b[0]);
    }
}

/// Vertical rays, with angles snapped onto nearby edge endpoints.
fn rays(curve: &BoundaryCurve) -> Vec<RayInfo> {
    let ends: Vec<f64> = cylinder_edges(curve)
        .iter()
        .flat_map(|e| [e.a[0], e.b[0]])
        .filter(|&x| x < TAU)
        .collect();
    let mut out = raw_rays(curve);
    for r in &mut out {
        if TAU - r.theta <= TOL_GEOM {
            r.theta = 0.0;
        }
        if let Some(&x) = ends.iter().find(|&&x| (x - r.theta).abs() <= TOL_GEOM) {
            r.theta = x;
        }
    }
    out
}

fn raw_rays(curve: &BoundaryCurve) -> Vec<RayInfo> {
    curve
        .segments()
        .filter_map(|s| match s {
            Segment::VerticalRay {
                theta,
                t_start,
                cap,
            } => Some(RayInfo {
                theta: normalize_angle(*theta),
                t: *t_start,
                cap: *cap,
            }),
            _ => None,
        })
        .collect()
}

fn events(edges: &[SubEdge], rays: &[RayInfo]) -> Vec<f64> {
    let mut ev: Vec<f64> = vec![0.0, TAU];
    for e in edges {
        ev.push(e.a[0]);
        ev.push(e.b[0]);
    }
    for r in rays {
        ev.push(r.theta);
    }
    ev.sort_by(f64::total_cmp);
    ev.dedup();
    ev
}

fn active(edges: &[SubEdge], lo: f64, hi: f64) -> Vec<SubEdge> {
    edges
        .iter()
        .filter(|e| {
            let (a, b) = e.theta_range();
            !e.is_vertical() && a <= lo && b >= hi
        })
        .copied()
        .collect()
}

/// Smallest bounded vertical gap of the cylinder complement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeightReport {
    /// `None` encodes `+∞` (no bounded component on any vertical line).
    pub h: Option<f64>,
    pub witness_theta: Option<f64>,
    pub witness_interval: Option<[f64; 2]>,
}

impl HeightReport {
    pub fn value(&self) -> f64 {
        self.h.unwrap_or(f64::INFINITY)
    }

    fn offer(&mut self, gap: f64, theta: f64, lo: f64, hi: f64) {
        if gap < self.value() {
            self.h = Some(gap);
            self.witness_theta = Some(normalize_angle(theta));
            self.witness_interval = Some([lo, hi]);
        }
    }
}

/// Bounded gaps on the exact vertical line at `theta`.
fn line_gaps(edges: &[SubEdge], rays: &[RayInfo], theta: f64) -> Vec<(f64, f64)> {
    let mut iv: Vec<(f64, f64)> = Vec::new();
    let candidates: &[f64] = if theta == 0.0 { &[0.0, TAU] } else { &[theta] };
    for e in edges {
        let (lo, hi) = e.theta_range();
        for &th in candidates {
            if th < lo || th > hi {
                continue;
            }
            if e.is_vertical() {
                iv.push((e.a[1].min(e.b[1]), e.a[1].max(e.b[1])));
            } else {
                let t = e.height_at(th);
                iv.push((t, t));
            }
        }
    }
    for r in rays {
        if r.theta == theta {
            iv.push(match r.cap {
                Cap::Plus => (r.t, f64::INFINITY),
                Cap::Minus => (f64::NEG_INFINITY, r.t),
            });
        }
    }
    iv.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut gaps = Vec::new();
    let mut top = f64::NEG_INFINITY;
    for (lo, hi) in iv {
        if top > f64::NEG_INFINITY && lo > top {
            gaps.push((top, lo));
        }
        top = top.max(hi);
    }
    gaps
}

/// `h(Γ)`: the infimum over θ of bounded component lengths of `({θ} × ℝ) − Γ̃`.
///
/// Between consecutive event angles every crossing height is linear and their
/// order is fixed, so gaps are linear and their infimum is a one-sided limit at
/// an event. Event lines themselves are measured exactly.
pub fn height(curve: &BoundaryCurve) -> HeightReport {
    let edges = cylinder_edges(curve);
    let rays = rays(curve);
    let ev = events(&edges, &rays);
    let mut rep = HeightReport {
        h: None,
        witness_theta: None,
        witness_interval: None,
    };
    for w in ev.windows(2) {
        let (e0, e1) = (w[0], w[1]);
        if e1 - e0 <= 0.0 {
            continue;
        }
        let mut act = active(&edges, e0, e1);
        let mid = 0.5 * (e0 + e1);
        act.sort_by(|x, y| x.height_at(mid).total_cmp(&y.height_at(mid)));
        for pair in act.windows(2) {
            for th in [e0, e1] {
                let lo = pair[0].height_at(th);
                let hi = pair[1].height_at(th);
                rep.offer((hi - lo).max(0.0), th, lo, hi);
            }
        }
    }
    for &e in &ev {
        if e >= TAU {
            continue;
        }
        for (lo, hi) in line_gaps(&edges, &rays, e) {
            rep.offer(hi - lo, e, lo, hi);
        }
    }
    rep
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TallStatus {
    Tall,
    NotTall,
    Borderline,
}

pub fn tall_status(h: f64) -> TallStatus {
    if h > PI + TOL_GEOM {
        TallStatus::Tall
    } else if h < PI - TOL_GEOM {
        TallStatus::NotTall
    } else {
        TallStatus::Borderline
    }
}

pub fn is_tall(curve: &BoundaryCurve) -> TallStatus {
    tall_status(height(curve).value())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TallRectangle {
    pub theta_interval: [f64; 2],
    pub t_interval: [f64; 2],
}

/// Rectangles sharing one θ-interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TallStrip {
    pub theta: [f64; 2],
    pub t_intervals: Vec<[f64; 2]>,
}

/// A finite family of tall rectangles covering the band `|t| < band` off the curve.
///
/// Points within `resolution` (vertically) of the curve are not claimed: near
/// corners of the curve no finite family of rectangles can reach them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TallCover {
    pub band: f64,
    pub resolution: f64,
    pub strips: Vec<TallStrip>,
}

impl TallCover {
    pub fn rectangles(&self) -> impl Iterator<Item = TallRectangle> + '_ {
        self.strips.iter().flat_map(|s| {
            s.t_intervals.iter().map(move |t| TallRectangle {
                theta_interval: s.theta,
                t_interval: *t,
            })
        })
    }

    pub fn len(&self) -> usize {
        self.strips.iter().map(|s| s.t_intervals.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

const MAX_STRIPS_PER_INTERVAL: usize = 200_000;

/// Default band half-height for a curve.
pub fn default_band(curve: &BoundaryCurve) -> f64 {
    curve.max_abs_t() + PI + 1.0
}

pub fn tall_cover(curve: &BoundaryCurve, band: f64) -> Result<TallCover, CurveError> {
    let h = height(curve).value();
    let res = if h.is_finite() {
        ((h - PI) / 4.0).min(1e-3)
    } else {
        1e-3
    };
    tall_cover_with(curve, band, res)
}

/// Sweep-built cover with strips narrow enough that no edge moves more than
/// `resolution` across a strip.
pub fn tall_cover_with(curve: &BoundaryCurve, band: f64, resolution: f64) -> Result<TallCover, CurveError> {
    let h = height(curve).value();
    if tall_status(h) != TallStatus::Tall {
        return Err(CurveError::NotTall(h));
    }
    let required = default_band(curve);
    if band < required {
        return Err(CurveError::BandTooSmall { band, required });
    }
    let edges = cylinder_edges(curve);
    let rays = rays(curve);
    let ev = events(&edges, &rays);
    let mut strips = Vec::new();
    let mut achieved = 0.0f64;
    for w in ev.windows(2) {
        let (e0, e1) = (w[0], w[1]);
        if e1 - e0 <= 0.0 {
            continue;
        }
        let mut act = active(&edges, e0, e1);
        let mid = 0.5 * (e0 + e1);
        act.sort_by(|x, y| x.height_at(mid).total_cmp(&y.height_at(mid)));
        let slope = act.iter().map(|e| e.slope()).fold(0.0, f64::max);
        let k = ((slope * (e1 - e0) / resolution).ceil() as usize).clamp(1, MAX_STRIPS_PER_INTERVAL);
        achieved = achieved.max(slope * (e1 - e0) / k as f64);
        for i in 0..k {
            let a = e0 + (e1 - e0) * i as f64 / k as f64;
            let b = if i + 1 == k {
                e1
            } else {
                e0 + (e1 - e0) * (i + 1) as f64 / k as f64
            };
            let lo_hi: Vec<(f64, f64)> = act
                .iter()
                .map(|e| {
                    let (x, y) = (e.height_at(a), e.height_at(b));
                    (x.min(y), x.max(y))
                })
                .collect();
            let mut t_intervals = Vec::with_capacity(lo_hi.len() + 1);
            let mut floor = -band;
            for &(lo, hi) in &lo_hi {
                t_intervals.push([floor, lo]);
                floor = hi;
            }
            t_intervals.push([floor, band]);
            strips.push(TallStrip {
                theta: [a, b],
                t_intervals,
            });
        }
    }
    Ok(TallCover {
        band,
        resolution: achieved.max(0.0),
        strips,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TallCoverReport {
    pub rectangles: usize,
    pub all_tall: bool,
    pub min_height: f64,
    pub avoids_curve: bool,
    pub sampled: usize,
    pub rejected: usize,
    pub covered: usize,
    pub coverage: f64,
}

impl TallCoverReport {
    pub fn passed(&self) -> bool {
        self.all_tall && self.avoids_curve && self.covered + self.rejected == self.sampled
    }
}

/// Independent check of a cover: tallness, avoidance of the curve and
/// coverage of uniformly sampled band points.
pub fn verify_tall_cover(
    curve: &BoundaryCurve,
    cover: &TallCover,
    samples: usize,
    seed: u64,
) -> TallCoverReport {
    let edges = cylinder_edges(curve);
    let rays = rays(curve);
    let mut min_height = f64::INFINITY;
    for r in cover.rectangles() {
        min_height = min_height.min(r.t_interval[1] - r.t_interval[0]);
    }
    let starts: Vec<f64> = cover.strips.iter().map(|s| s.theta[0]).collect();
    let mut avoids = true;
    'edges: for e in &edges {
        let (lo, hi) = e.theta_range();
        let first = starts.partition_point(|&s| s < lo).saturating_sub(1);
        for strip in cover.strips[first..].iter() {
            if strip.theta[0] >= hi && !(e.is_vertical() && strip.theta[0] < lo) {
                break;
            }
            let (sa, sb) = (strip.theta[0], strip.theta[1]);
            let (ov_lo, ov_hi) = (lo.max(sa), hi.min(sb));
            let (tmin, tmax) = if e.is_vertical() {
                if !(lo > sa && lo < sb) {
                    continue;
                }
                (e.a[1].min(e.b[1]), e.a[1].max(e.b[1]))
            } else {
                if ov_hi <= ov_lo {
                    continue;
                }
                let (x, y) = (e.height_at(ov_lo), e.height_at(ov_hi));
                (x.min(y), x.max(y))
            };
            for t in &strip.t_intervals {
                if tmax > t[0] && tmin < t[1] {
                    avoids = false;
                    break 'edges;
                }
            }
        }
    }
    if avoids {
        'rays: for r in &rays {
            let idx = starts.partition_point(|&s| s < r.theta).saturating_sub(1);
            for strip in cover.strips.iter().skip(idx).take(2) {
                if r.theta > strip.theta[0] && r.theta < strip.theta[1] {
                    let (rlo, rhi) = match r.cap {
                        Cap::Plus => (r.t, f64::INFINITY),
                        Cap::Minus => (f64::NEG_INFINITY, r.t),
                    };
                    if strip.t_intervals.iter().any(|t| rhi > t[0] && rlo < t[1]) {
                        avoids = false;
                        break 'rays;
                    }
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut rejected, mut covered) = (0, 0);
    for _ in 0..samples {
        let th: f64 = rng.gen_range(0.0..TAU);
        let t: f64 = rng.gen_range(-cover.band..cover.band);
        let near = edges.iter().any(|e| {
            let (lo, hi) = e.theta_range();
            !e.is_vertical() && th >= lo && th <= hi && (e.height_at(th) - t).abs() <= cover.resolution
        });
        if near {
            rejected += 1;
            continue;
        }
        let idx = starts.partition_point(|&s| s <= th).saturating_sub(1);
        let hit = cover.strips.get(idx).is_some_and(|s| {
            th > s.theta[0] && th < s.theta[1] && s.t_intervals.iter().any(|iv| t > iv[0] && t < iv[1])
        });
        if hit {
            covered += 1;
        }
    }
    let accepted = samples - rejected;
    TallCoverReport {
        rectangles: cover.len(),
        all_tall: min_height > PI,
        min_height,
        avoids_curve: avoids,
        sampled: samples,
        rejected,
        covered,
        coverage: if accepted == 0 {
            1.0
        } else {
            covered as f64 / accepted as f64
        },
    }
}
