//! Jordan curves on the boundary at infinity of `H² × ℝ`.
//!
//! The boundary is the cylinder `S¹ × ℝ` closed off by two caps (copies of the
//! closed disk at `t = ±∞`). The cylinder part is stored as polylines in the
//! development `(θ, t)`, with θ unwrapped along each polyline; the caps hold
//! geodesics, general polylines in Poincaré coordinates and corner pieces on the
//! circles where cylinder and caps meet.

pub mod geom;
mod region;
mod sweep;
mod tail;
mod validate;

pub use region::{boundary_point_klein, crossing_parity, same_region, BoundaryPoint};
pub use sweep::{
    cylinder_edges, default_band, height, is_tall, tall_cover, tall_status, tall_cover_with, verify_tall_cover, HeightReport,
    SubEdge, TallCover, TallCoverReport, TallRectangle, TallStatus, TallStrip,
};
pub use tail::{thin_tail_scan, ThinTail};
pub use validate::{validate, Violation, ViolationKind};

use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use thiserror::Error;

use crate::kernel::{circular_distance, normalize_angle, Geodesic, KernelError};

/// Tolerance for matching segment endpoints and intersection points.
pub const JUNCTION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CurveError {
    #[error("curve failed validation: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("curve is not tall (h = {0})")]
    NotTall(f64),
    #[error("band half-height {band} is below the required {required}")]
    BandTooSmall { band: f64, required: f64 },
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// Which cap: `t = +∞` or `t = -∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Cap {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Cap {
    pub fn opposite(self) -> Cap {
        match self {
            Cap::Plus => Cap::Minus,
            Cap::Minus => Cap::Plus,
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            Cap::Plus => 1.0,
            Cap::Minus => -1.0,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Cap::Plus => "+",
            Cap::Minus => "-",
        }
    }

    pub fn both() -> [Cap; 2] {
        [Cap::Plus, Cap::Minus]
    }
}

/// A point of the cylinder development.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct CylPoint {
    pub theta: f64,
    pub t: f64,
}

impl CylPoint {
    pub fn new(theta: f64, t: f64) -> Self {
        CylPoint { theta, t }
    }
}

impl From<[f64; 2]> for CylPoint {
    fn from(a: [f64; 2]) -> Self {
        CylPoint {
            theta: a[0],
            t: a[1],
        }
    }
}

impl From<CylPoint> for [f64; 2] {
    fn from(p: CylPoint) -> Self {
        [p.theta, p.t]
    }
}

/// One piece of a Jordan component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Segment {
    /// Polyline on the cylinder, θ unwrapped along the polyline.
    CylinderArc { points: Vec<CylPoint> },
    /// Vertical half-line from `(theta, t_start)` to the corner of `cap`.
    VerticalRay { theta: f64, t_start: f64, cap: Cap },
    /// Geodesic in a cap, traversed from `endpoints[0]` to `endpoints[1]`.
    CapGeodesic { cap: Cap, endpoints: [f64; 2] },
    /// Polyline in a cap, Poincaré coordinates. End points may sit on the unit circle.
    CapArc { cap: Cap, points: Vec<[f64; 2]> },
    CornerPoint { cap: Cap, theta: f64 },
    /// Counterclockwise arc of the corner circle from `interval[0]` to `interval[1]`.
    CornerArc { cap: Cap, interval: [f64; 2] },
}

impl Segment {
    pub fn cylinder(points: &[(f64, f64)]) -> Segment {
        Segment::CylinderArc {
            points: points.iter().map(|&(a, b)| CylPoint::new(a, b)).collect(),
        }
    }

    pub fn ray(theta: f64, t_start: f64, cap: Cap) -> Segment {
        Segment::VerticalRay {
            theta,
            t_start,
            cap,
        }
    }

    pub fn geodesic(cap: Cap, from: f64, to: f64) -> Segment {
        Segment::CapGeodesic {
            cap,
            endpoints: [from, to],
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Segment::CylinderArc { .. } => "cylinder_arc",
            Segment::VerticalRay { .. } => "vertical_ray",
            Segment::CapGeodesic { .. } => "cap_geodesic",
            Segment::CapArc { .. } => "cap_arc",
            Segment::CornerPoint { .. } => "corner_point",
            Segment::CornerArc { .. } => "corner_arc",
        }
    }

    pub fn cap(&self) -> Option<Cap> {
        match self {
            Segment::CylinderArc { .. } => None,
            Segment::VerticalRay { cap, .. }
            | Segment::CapGeodesic { cap, .. }
            | Segment::CapArc { cap, .. }
            | Segment::CornerPoint { cap, .. }
            | Segment::CornerArc { cap, .. } => Some(*cap),
        }
    }

    /// The two end junctions in traversal order (rays go from `t_start` to the corner).
    pub fn ends(&self) -> Option<(Junction, Junction)> {
        Some(match self {
            Segment::CylinderArc { points } => {
                let a = points.first()?;
                let b = points.last()?;
                (Junction::cyl(a.theta, a.t), Junction::cyl(b.theta, b.t))
            }
            Segment::VerticalRay {
                theta,
                t_start,
                cap,
            } => (Junction::cyl(*theta, *t_start), Junction::corner(*cap, *theta)),
            Segment::CapGeodesic { cap, endpoints } => (
                Junction::corner(*cap, endpoints[0]),
                Junction::corner(*cap, endpoints[1]),
            ),
            Segment::CapArc { cap, points } => {
                let a = points.first()?;
                let b = points.last()?;
                (Junction::in_cap(*cap, *a), Junction::in_cap(*cap, *b))
            }
            Segment::CornerPoint { cap, theta } => {
                (Junction::corner(*cap, *theta), Junction::corner(*cap, *theta))
            }
            Segment::CornerArc { cap, interval } => (
                Junction::corner(*cap, interval[0]),
                Junction::corner(*cap, interval[1]),
            ),
        })
    }

    fn map_angles(&self, f: &dyn Fn(f64) -> f64, g: &dyn Fn(f64) -> f64) -> Segment {
        match self {
            Segment::CylinderArc { points } => Segment::CylinderArc {
                points: points.iter().map(|p| CylPoint::new(f(p.theta), g(p.t))).collect(),
            },
            Segment::VerticalRay {
                theta,
                t_start,
                cap,
            } => Segment::VerticalRay {
                theta: f(*theta),
                t_start: g(*t_start),
                cap: *cap,
            },
            Segment::CapGeodesic { cap, endpoints } => Segment::CapGeodesic {
                cap: *cap,
                endpoints: [f(endpoints[0]), f(endpoints[1])],
            },
            Segment::CapArc { cap, points } => Segment::CapArc {
                cap: *cap,
                points: points
                    .iter()
                    .map(|p| {
                        let r = p[0].hypot(p[1]);
                        let a = f(p[1].atan2(p[0]));
                        [r * a.cos(), r * a.sin()]
                    })
                    .collect(),
            },
            Segment::CornerPoint { cap, theta } => Segment::CornerPoint {
                cap: *cap,
                theta: f(*theta),
            },
            Segment::CornerArc { cap, interval } => Segment::CornerArc {
                cap: *cap,
                interval: [f(interval[0]), f(interval[1])],
            },
        }
    }
}

/// A point where consecutive segments meet.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "at", rename_all = "snake_case")]
pub enum Junction {
    Cylinder { theta: f64, t: f64 },
    Corner { cap: Cap, theta: f64 },
    /// Interior cap point in Klein coordinates.
    Cap { cap: Cap, klein: [f64; 2] },
}

impl Junction {
    pub fn cyl(theta: f64, t: f64) -> Self {
        Junction::Cylinder {
            theta: normalize_angle(theta),
            t,
        }
    }

    pub fn corner(cap: Cap, theta: f64) -> Self {
        Junction::Corner {
            cap,
            theta: normalize_angle(theta),
        }
    }

    /// A cap point from Poincaré coordinates; points on the unit circle become corners.
    pub fn in_cap(cap: Cap, p: [f64; 2]) -> Self {
        let r2 = p[0] * p[0] + p[1] * p[1];
        if r2 >= 1.0 - 1e-12 {
            Junction::corner(cap, p[1].atan2(p[0]))
        } else {
            Junction::Cap {
                cap,
                klein: poincare_to_klein(p),
            }
        }
    }

    /// A cap point from Klein coordinates.
    pub fn in_cap_klein(cap: Cap, k: [f64; 2]) -> Self {
        let r2 = k[0] * k[0] + k[1] * k[1];
        if r2 >= 1.0 - 1e-12 {
            Junction::corner(cap, k[1].atan2(k[0]))
        } else {
            Junction::Cap { cap, klein: k }
        }
    }

    pub fn same(&self, other: &Junction) -> bool {
        match (self, other) {
            (Junction::Cylinder { theta: a, t: s }, Junction::Cylinder { theta: b, t: u }) => {
                circular_distance(*a, *b) <= JUNCTION_TOL && (s - u).abs() <= JUNCTION_TOL
            }
            (Junction::Corner { cap: c1, theta: a }, Junction::Corner { cap: c2, theta: b }) => {
                c1 == c2 && circular_distance(*a, *b) <= JUNCTION_TOL
            }
            (Junction::Cap { cap: c1, klein: a }, Junction::Cap { cap: c2, klein: b }) => {
                c1 == c2 && (a[0] - b[0]).hypot(a[1] - b[1]) <= JUNCTION_TOL
            }
            _ => false,
        }
    }
}

pub fn poincare_to_klein(p: [f64; 2]) -> [f64; 2] {
    let f = 2.0 / (1.0 + p[0] * p[0] + p[1] * p[1]);
    [f * p[0], f * p[1]]
}

pub fn klein_to_poincare(k: [f64; 2]) -> [f64; 2] {
    let n = (k[0] * k[0] + k[1] * k[1]).min(1.0);
    let f = 1.0 / (1.0 + (1.0 - n).sqrt());
    [f * k[0], f * k[1]]
}

/// A closed curve given as a cyclic list of segments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JordanComponent {
    pub segments: Vec<Segment>,
}

impl JordanComponent {
    pub fn new(segments: Vec<Segment>) -> Self {
        JordanComponent { segments }
    }

    /// Horizontal circle at height `t`.
    pub fn circle(t: f64) -> Self {
        Self::new(vec![Segment::cylinder(&[(0.0, t), (TAU, t)])])
    }

    /// Closed cylinder polyline; the first point is repeated at the end.
    pub fn closed_polyline(points: &[(f64, f64)]) -> Self {
        let mut pts = points.to_vec();
        pts.push(points[0]);
        Self::new(vec![Segment::cylinder(&pts)])
    }

    /// `true` when the component never reaches a cap.
    pub fn is_finite(&self) -> bool {
        self.segments
            .iter()
            .all(|s| matches!(s, Segment::CylinderArc { .. }))
    }

    /// Range of `t` over the cylinder vertices.
    pub fn t_range(&self) -> Option<(f64, f64)> {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for s in &self.segments {
            match s {
                Segment::CylinderArc { points } => {
                    for p in points {
                        lo = lo.min(p.t);
                        hi = hi.max(p.t);
                    }
                }
                Segment::VerticalRay { t_start, .. } => {
                    lo = lo.min(*t_start);
                    hi = hi.max(*t_start);
                }
                _ => {}
            }
        }
        (lo <= hi).then_some((lo, hi))
    }
}

/// A finite collection of disjoint Jordan components.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCurve {
    pub components: Vec<JordanComponent>,
}

impl BoundaryCurve {
    pub fn new(components: Vec<JordanComponent>) -> Self {
        BoundaryCurve { components }
    }

    pub fn segments(&self) -> impl Iterator<Item = &Segment> {
        self.components.iter().flat_map(|c| c.segments.iter())
    }

    pub fn segment_count(&self) -> usize {
        self.components.iter().map(|c| c.segments.len()).sum()
    }

    /// Rotate every angle by `phi`.
    pub fn rotated(&self, phi: f64) -> Self {
        let f = move |a: f64| a + phi;
        let g = |t: f64| t;
        self.mapped(&f, &g)
    }

    /// Shift every cylinder height by `s`.
    pub fn translated(&self, s: f64) -> Self {
        let f = |a: f64| a;
        let g = move |t: f64| t + s;
        self.mapped(&f, &g)
    }

    fn mapped(&self, f: &dyn Fn(f64) -> f64, g: &dyn Fn(f64) -> f64) -> Self {
        BoundaryCurve {
            components: self
                .components
                .iter()
                .map(|c| JordanComponent::new(c.segments.iter().map(|s| s.map_angles(f, g)).collect()))
                .collect(),
        }
    }

    /// The curve with one component only.
    pub fn component(&self, i: usize) -> BoundaryCurve {
        BoundaryCurve::new(vec![self.components[i].clone()])
    }

    pub fn max_abs_t(&self) -> f64 {
        self.components
            .iter()
            .filter_map(|c| c.t_range())
            .fold(0.0f64, |m, (lo, hi)| m.max(lo.abs()).max(hi.abs()))
    }
}

/// The curve split into cylinder part, cap geodesics, other cap paths and corner sets.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    pub gamma_tilde: Vec<Segment>,
    pub gamma_g_plus: Vec<Geodesic>,
    pub gamma_g_minus: Vec<Geodesic>,
    pub cap_arcs_plus: Vec<Vec<[f64; 2]>>,
    pub cap_arcs_minus: Vec<Vec<[f64; 2]>>,
    pub corner_points_plus: Vec<f64>,
    pub corner_points_minus: Vec<f64>,
    pub corner_arcs_plus: Vec<[f64; 2]>,
    pub corner_arcs_minus: Vec<[f64; 2]>,
}

impl Decomposition {
    pub fn geodesics(&self, cap: Cap) -> &[Geodesic] {
        match cap {
            Cap::Plus => &self.gamma_g_plus,
            Cap::Minus => &self.gamma_g_minus,
        }
    }

    pub fn corner_points(&self, cap: Cap) -> &[f64] {
        match cap {
            Cap::Plus => &self.corner_points_plus,
            Cap::Minus => &self.corner_points_minus,
        }
    }

    pub fn cap_arcs(&self, cap: Cap) -> &[Vec<[f64; 2]>] {
        match cap {
            Cap::Plus => &self.cap_arcs_plus,
            Cap::Minus => &self.cap_arcs_minus,
        }
    }

    pub fn corner_arcs(&self, cap: Cap) -> &[[f64; 2]] {
        match cap {
            Cap::Plus => &self.corner_arcs_plus,
            Cap::Minus => &self.corner_arcs_minus,
        }
    }

    /// Number of segments placed in some bucket.
    pub fn bucket_total(&self) -> usize {
        self.gamma_tilde.len()
            + self.gamma_g_plus.len()
            + self.gamma_g_minus.len()
            + self.cap_arcs_plus.len()
            + self.cap_arcs_minus.len()
            + self.corner_points_plus.len()
            + self.corner_points_minus.len()
            + self.corner_arcs_plus.len()
            + self.corner_arcs_minus.len()
    }
}

/// Partition the segments by kind and cap.
pub fn decompose(curve: &BoundaryCurve) -> Result<Decomposition, KernelError> {
    let mut d = Decomposition::default();
    for s in curve.segments() {
        match s {
            Segment::CylinderArc { .. } | Segment::VerticalRay { .. } => d.gamma_tilde.push(s.clone()),
            Segment::CapGeodesic { cap, endpoints } => {
                let g = Geodesic::from_angles(endpoints[0], endpoints[1])?;
                match cap {
                    Cap::Plus => d.gamma_g_plus.push(g),
                    Cap::Minus => d.gamma_g_minus.push(g),
                }
            }
            Segment::CapArc { cap, points } => match cap {
                Cap::Plus => d.cap_arcs_plus.push(points.clone()),
                Cap::Minus => d.cap_arcs_minus.push(points.clone()),
            },
            Segment::CornerPoint { cap, theta } => match cap {
                Cap::Plus => d.corner_points_plus.push(normalize_angle(*theta)),
                Cap::Minus => d.corner_points_minus.push(normalize_angle(*theta)),
            },
            Segment::CornerArc { cap, interval } => match cap {
                Cap::Plus => d.corner_arcs_plus.push(*interval),
                Cap::Minus => d.corner_arcs_minus.push(*interval),
            },
        }
    }
    Ok(d)
}

/// `false` iff the curve contains a corner arc.
pub fn corner_check(curve: &BoundaryCurve) -> bool {
    !curve
        .segments()
        .any(|s| matches!(s, Segment::CornerArc { .. }))
}

/// `false` iff some cap path is not a geodesic.
pub fn cap_geodesic_check(curve: &BoundaryCurve) -> bool {
    !curve.segments().any(|s| matches!(s, Segment::CapArc { .. }))
}

/// Cap geodesics within one cap have pairwise distinct endpoints and do not cross.
pub fn endpoints_distinct_check(curve: &BoundaryCurve) -> bool {
    let Ok(d) = decompose(curve) else {
        return false;
    };
    Cap::both().iter().all(|&cap| {
        let gs = d.geodesics(cap);
        (0..gs.len()).all(|i| {
            (i + 1..gs.len()).all(|j| {
                matches!(gs[i].crossing(&gs[j]), crate::kernel::Crossing::Disjoint)
            })
        })
    })
}
