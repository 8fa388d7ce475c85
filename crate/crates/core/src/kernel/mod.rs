//! Primitives of the hyperbolic plane.
//!
//! Points are stored in the Poincaré disk. Truncated lengths are evaluated in a
//! half-plane chart whose pole sits away from every operand point.

mod isometry;

pub use isometry::{apply_isometry, random_isometry, MobiusMap};

use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};
use thiserror::Error;

use crate::TOL_GEOM;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KernelError {
    #[error("non-finite angle {0}")]
    NonFinite(f64),
    #[error("geodesic endpoints coincide at theta = {0}")]
    DegenerateGeodesic(f64),
    #[error("ideal point theta = {theta} coincides with chart pole {pole}")]
    ChartPoleCollision { theta: f64, pole: f64 },
    #[error("point ({x}, {y}) is not inside the open unit disk")]
    OutsideDisk { x: f64, y: f64 },
    #[error("horoball size must be positive and finite, got {0}")]
    BadSize(f64),
    #[error("ideal polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
}

/// Reduce an angle into `[0, 2π)`.
pub fn normalize_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Counterclockwise arc length from `from` to `to`, in `[0, 2π)`.
pub fn ccw_delta(from: f64, to: f64) -> f64 {
    normalize_angle(to - from)
}

/// Distance between two angles measured on the circle, in `[0, π]`.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    let d = ccw_delta(a, b);
    d.min(TAU - d)
}

/// `true` if `theta` lies strictly inside the counterclockwise arc from `start` to `end`.
pub fn strictly_inside_arc(theta: f64, start: f64, end: f64) -> bool {
    let span = ccw_delta(start, end);
    let off = ccw_delta(start, theta);
    off > 0.0 && off < span
}

/// A point of the circle at infinity.
///
/// Equality is tolerant: two points are equal when their circular distance is at
/// most [`TOL_GEOM`]. This relation is not transitive and is meant for
/// coincidence tests, not hashing.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IdealPoint {
    theta: f64,
}

impl IdealPoint {
    pub fn new(theta: f64) -> Result<Self, KernelError> {
        if !theta.is_finite() {
            return Err(KernelError::NonFinite(theta));
        }
        Ok(IdealPoint {
            theta: normalize_angle(theta),
        })
    }

    /// Panicking constructor for literals known to be finite.
    pub fn at(theta: f64) -> Self {
        Self::new(theta).expect("finite angle")
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn to_disk(&self) -> [f64; 2] {
        [self.theta.cos(), self.theta.sin()]
    }

    pub fn distance(&self, other: &IdealPoint) -> f64 {
        circular_distance(self.theta, other.theta)
    }
}

impl PartialEq for IdealPoint {
    fn eq(&self, other: &Self) -> bool {
        self.distance(other) <= TOL_GEOM
    }
}

/// Outcome of an endpoint-interleaving test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Crossing {
    Cross,
    /// The geodesics share an endpoint (or coincide).
    Touching,
    Disjoint,
}

impl Crossing {
    pub fn crosses(self) -> bool {
        self == Crossing::Cross
    }
}

/// A complete geodesic, stored with `p.theta() < q.theta()`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Geodesic {
    p: IdealPoint,
    q: IdealPoint,
}

impl Geodesic {
    pub fn new(a: IdealPoint, b: IdealPoint) -> Result<Self, KernelError> {
        if a == b {
            return Err(KernelError::DegenerateGeodesic(a.theta));
        }
        let (p, q) = if a.theta < b.theta { (a, b) } else { (b, a) };
        Ok(Geodesic { p, q })
    }

    pub fn from_angles(a: f64, b: f64) -> Result<Self, KernelError> {
        Self::new(IdealPoint::new(a)?, IdealPoint::new(b)?)
    }

    pub fn p(&self) -> IdealPoint {
        self.p
    }

    pub fn q(&self) -> IdealPoint {
        self.q
    }

    pub fn endpoints(&self) -> [IdealPoint; 2] {
        [self.p, self.q]
    }

    pub fn has_endpoint(&self, x: &IdealPoint) -> bool {
        self.p == *x || self.q == *x
    }

    /// Angular width of the counterclockwise arc from `p` to `q`.
    pub fn width(&self) -> f64 {
        self.q.theta - self.p.theta
    }

    /// Shorter boundary arc as a counterclockwise `(start, end)` pair.
    /// A diameter resolves to the arc from `p` to `q`.
    pub fn short_arc(&self) -> (f64, f64) {
        if self.width() <= PI {
            (self.p.theta, self.q.theta)
        } else {
            (self.q.theta, self.p.theta)
        }
    }

    pub fn crossing(&self, other: &Geodesic) -> Crossing {
        if self.has_endpoint(&other.p) || self.has_endpoint(&other.q) {
            return Crossing::Touching;
        }
        let a = strictly_inside_arc(other.p.theta, self.p.theta, self.q.theta);
        let b = strictly_inside_arc(other.q.theta, self.p.theta, self.q.theta);
        if a != b {
            Crossing::Cross
        } else {
            Crossing::Disjoint
        }
    }

    pub fn same_as(&self, other: &Geodesic) -> bool {
        self.p == other.p && self.q == other.q
    }
}

/// `true` iff the endpoint pairs strictly interleave.
pub fn geodesics_cross(g1: &Geodesic, g2: &Geodesic) -> bool {
    g1.crossing(g2).crosses()
}

/// Upper half-plane chart `x = tan((θ - pole)/2 - π/2)`, sending the pole to ∞.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfPlaneChart {
    pole: f64,
}

impl HalfPlaneChart {
    pub fn new(pole: f64) -> Self {
        HalfPlaneChart {
            pole: normalize_angle(pole),
        }
    }

    /// Pole at the midpoint of the widest gap between the given points.
    pub fn for_points(points: &[IdealPoint]) -> Self {
        if points.is_empty() {
            return Self::new(0.0);
        }
        let mut thetas: Vec<f64> = points.iter().map(|p| p.theta).collect();
        thetas.sort_by(f64::total_cmp);
        let mut best = (TAU - thetas[thetas.len() - 1] + thetas[0], thetas[thetas.len() - 1]);
        for w in thetas.windows(2) {
            let gap = w[1] - w[0];
            if gap > best.0 {
                best = (gap, w[0]);
            }
        }
        Self::new(best.1 + best.0 / 2.0)
    }

    pub fn pole(&self) -> f64 {
        self.pole
    }

    fn offset(&self, p: &IdealPoint) -> Result<f64, KernelError> {
        let phi = ccw_delta(self.pole, p.theta);
        if phi <= TOL_GEOM || TAU - phi <= TOL_GEOM {
            return Err(KernelError::ChartPoleCollision {
                theta: p.theta,
                pole: self.pole,
            });
        }
        Ok(phi)
    }

    /// Boundary coordinate of an ideal point.
    pub fn coordinate(&self, p: &IdealPoint) -> Result<f64, KernelError> {
        let phi = self.offset(p)?;
        Ok(-1.0 / (phi / 2.0).tan())
    }

    /// Derivative `dx/dθ` of the chart at `p`.
    pub fn stretch(&self, p: &IdealPoint) -> Result<f64, KernelError> {
        let phi = self.offset(p)?;
        let s = (phi / 2.0).sin();
        Ok(0.5 / (s * s))
    }
}

/// Horoball sizes attached to ideal points.
///
/// `σ` is the Euclidean diameter of the horocycle in the chart the decoration is
/// used with. Points without an entry have `σ = 1`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Decoration {
    sizes: Vec<(IdealPoint, f64)>,
}

impl Decoration {
    pub fn canonical() -> Self {
        Self::default()
    }

    pub fn size(&self, p: &IdealPoint) -> f64 {
        self.sizes
            .iter()
            .find(|(q, _)| q == p)
            .map(|(_, s)| *s)
            .unwrap_or(1.0)
    }

    pub fn set(&mut self, p: IdealPoint, sigma: f64) -> Result<(), KernelError> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(KernelError::BadSize(sigma));
        }
        match self.sizes.iter_mut().find(|(q, _)| *q == p) {
            Some(entry) => entry.1 = sigma,
            None => self.sizes.push((p, sigma)),
        }
        Ok(())
    }

    pub fn with(mut self, p: IdealPoint, sigma: f64) -> Result<Self, KernelError> {
        self.set(p, sigma)?;
        Ok(self)
    }

    /// Shrink the horoball at `p` by hyperbolic distance `s`.
    pub fn shrink(&mut self, p: IdealPoint, s: f64) -> Result<(), KernelError> {
        let sigma = self.size(&p) * (-s).exp();
        self.set(p, sigma)
    }

    pub fn uniform(points: &[IdealPoint], sigma: f64) -> Result<Self, KernelError> {
        let mut d = Self::default();
        for p in points {
            d.set(*p, sigma)?;
        }
        Ok(d)
    }

    /// Express the same horoballs in another chart.
    pub fn transport(
        &self,
        points: &[IdealPoint],
        from: &HalfPlaneChart,
        to: &HalfPlaneChart,
    ) -> Result<Self, KernelError> {
        let mut d = Self::default();
        for p in points {
            let factor = to.stretch(p)? / from.stretch(p)?;
            d.set(*p, self.size(p) * factor)?;
        }
        Ok(d)
    }
}

/// Signed distance along `g` between the horoballs at its endpoints.
pub fn truncated_length(
    g: &Geodesic,
    d: &Decoration,
    chart: &HalfPlaneChart,
) -> Result<f64, KernelError> {
    let x = chart.coordinate(&g.p)?;
    let y = chart.coordinate(&g.q)?;
    Ok(truncated_length_coords(x, y, d.size(&g.p), d.size(&g.q)))
}

/// The half-plane formula `log((x - y)² / (σx σy))`.
pub fn truncated_length_coords(x: f64, y: f64, sx: f64, sy: f64) -> f64 {
    2.0 * (x - y).abs().ln() - sx.ln() - sy.ln()
}

/// A point of the open unit disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanePoint {
    x: f64,
    y: f64,
}

impl PlanePoint {
    pub fn new(x: f64, y: f64) -> Result<Self, KernelError> {
        if !(x.is_finite() && y.is_finite()) || x * x + y * y >= 1.0 {
            return Err(KernelError::OutsideDisk { x, y });
        }
        Ok(PlanePoint { x, y })
    }

    pub fn origin() -> Self {
        PlanePoint { x: 0.0, y: 0.0 }
    }

    /// Point at hyperbolic distance `r` from the origin in direction `phi`.
    pub fn polar(r: f64, phi: f64) -> Self {
        let e = (r / 2.0).tanh();
        PlanePoint {
            x: e * phi.cos(),
            y: e * phi.sin(),
        }
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn norm_sq(&self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    /// Projective (Klein) coordinates of the same point.
    pub fn to_klein(&self) -> [f64; 2] {
        let f = 2.0 / (1.0 + self.norm_sq());
        [f * self.x, f * self.y]
    }

    pub fn from_klein(k: [f64; 2]) -> Result<Self, KernelError> {
        let n = k[0] * k[0] + k[1] * k[1];
        if n >= 1.0 {
            return Err(KernelError::OutsideDisk { x: k[0], y: k[1] });
        }
        let f = 1.0 / (1.0 + (1.0 - n).sqrt());
        Self::new(f * k[0], f * k[1])
    }
}

/// Hyperbolic distance in the disk model.
pub fn point_distance(u: &PlanePoint, v: &PlanePoint) -> f64 {
    let dx = u.x - v.x;
    let dy = u.y - v.y;
    let chord = (dx * dx + dy * dy).sqrt();
    let denom = ((1.0 - u.norm_sq()) * (1.0 - v.norm_sq())).sqrt();
    2.0 * (chord / denom).asinh()
}

/// Distance from the origin to the geodesic.
pub fn origin_distance(g: &Geodesic) -> f64 {
    (1.0 / (g.width() / 2.0).sin()).acosh()
}

/// Length of `g` inside the hyperbolic disk of radius `m` about the origin.
pub fn clipped_length(g: &Geodesic, m: f64) -> f64 {
    let arg = m.cosh() * (g.width() / 2.0).sin();
    if arg <= 1.0 {
        0.0
    } else {
        2.0 * arg.acosh()
    }
}

/// How a geodesic meets the circle of radius `m` about the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CircleHit {
    /// Polar angles of the two crossings: the first nearer `p`, the second nearer `q`.
    Pair { near_p: f64, near_q: f64 },
    Tangent { angle: f64 },
    Miss,
}

/// Crossings of `g` with `∂B_m`, as polar angles on the circle of radius `m`.
pub fn circle_intersection_angles(g: &Geodesic, m: f64) -> CircleHit {
    let d = origin_distance(g);
    let ratio = d.tanh() / m.tanh();
    let (start, end) = g.short_arc();
    let mu = start + ccw_delta(start, end) / 2.0;
    if ratio > 1.0 {
        return CircleHit::Miss;
    }
    if (ratio - 1.0).abs() <= TOL_GEOM {
        return CircleHit::Tangent {
            angle: normalize_angle(mu),
        };
    }
    let psi = ratio.acos();
    let (lo, hi) = (normalize_angle(mu - psi), normalize_angle(mu + psi));
    // the crossing at mu - psi sits on the start side of the short arc
    if start == g.p.theta {
        CircleHit::Pair {
            near_p: lo,
            near_q: hi,
        }
    } else {
        CircleHit::Pair {
            near_p: hi,
            near_q: lo,
        }
    }
}

/// The two points of `g ∩ ∂B_m` in circular order (near `p`, then near `q`).
pub fn circle_intersections(g: &Geodesic, m: f64) -> Option<(PlanePoint, PlanePoint)> {
    match circle_intersection_angles(g, m) {
        CircleHit::Pair { near_p, near_q } => {
            Some((PlanePoint::polar(m, near_p), PlanePoint::polar(m, near_q)))
        }
        _ => None,
    }
}

/// Hyperbolic distance between points at radius `m` with polar angles `a`, `b`.
/// Stable for large `m`, unlike the disk-coordinate formula.
pub fn distance_on_circle(m: f64, a: f64, b: f64) -> f64 {
    let s = ((a - b) / 2.0).sin();
    let sh = m.sinh();
    (1.0 + 2.0 * sh * sh * s * s).acosh()
}

/// Area of an ideal `n`-gon.
pub fn ideal_polygon_area(n: usize) -> Result<f64, KernelError> {
    if n < 3 {
        return Err(KernelError::TooFewVertices(n));
    }
    Ok((n as f64 - 2.0) * PI)
}
