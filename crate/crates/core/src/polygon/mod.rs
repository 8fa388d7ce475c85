//! Ideal polygons with α/β side labels and truncated-length sums.

mod regularity;

pub use regularity::{
    enumerate_inscribed, is_exact, is_regular, is_regular_at_scale, Inequality, InscribedPolygon,
    Regularity, RegularityViolation, MAX_HALF_SIDES,
};

use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use thiserror::Error;

use crate::kernel::{
    ccw_delta, truncated_length, Decoration, Geodesic, HalfPlaneChart, IdealPoint, KernelError,
    MobiusMap,
};
use crate::TOL_GEOM;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolygonError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("ideal polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("vertices {0} and {1} coincide")]
    DuplicateVertex(usize, usize),
    #[error("vertices are not in strict counterclockwise order")]
    NotCircularOrder,
    #[error("side labels do not alternate between alpha and beta")]
    NotAlternating,
    #[error("polygon has {vertices} vertices; enumeration is limited to {limit}")]
    TooLarge { vertices: usize, limit: usize },
}

/// An ideal polygon: distinct ideal points in strict counterclockwise order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdealPolygon {
    vertices: Vec<IdealPoint>,
}

impl IdealPolygon {
    pub fn new(vertices: Vec<IdealPoint>) -> Result<Self, PolygonError> {
        let n = vertices.len();
        if n < 3 {
            return Err(PolygonError::TooFewVertices(n));
        }
        let mut total = 0.0;
        for i in 0..n {
            let j = (i + 1) % n;
            let gap = ccw_delta(vertices[i].theta(), vertices[j].theta());
            if gap <= TOL_GEOM || TAU - gap <= TOL_GEOM {
                return Err(PolygonError::DuplicateVertex(i, j));
            }
            total += gap;
        }
        if (total - TAU).abs() > 1e-9 {
            return Err(PolygonError::NotCircularOrder);
        }
        Ok(IdealPolygon { vertices })
    }

    pub fn from_angles(thetas: &[f64]) -> Result<Self, PolygonError> {
        let v = thetas
            .iter()
            .map(|&t| IdealPoint::new(t))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(v)
    }

    /// Sort the points counterclockwise from angle 0, merging coincident ones.
    pub fn hull_of(points: &[IdealPoint]) -> Result<Self, PolygonError> {
        let mut pts = points.to_vec();
        pts.sort_by(|a, b| a.theta().total_cmp(&b.theta()));
        let mut out: Vec<IdealPoint> = Vec::with_capacity(pts.len());
        for p in pts {
            if out.last().map_or(true, |q| *q != p) {
                out.push(p);
            }
        }
        if out.len() >= 2 && out[0] == out[out.len() - 1] {
            out.pop();
        }
        Self::new(out)
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[IdealPoint] {
        &self.vertices
    }

    pub fn angles(&self) -> Vec<f64> {
        self.vertices.iter().map(|v| v.theta()).collect()
    }

    /// Side from vertex `i` to vertex `i + 1`.
    pub fn side(&self, i: usize) -> Geodesic {
        let n = self.len();
        Geodesic::new(self.vertices[i % n], self.vertices[(i + 1) % n]).expect("distinct vertices")
    }

    pub fn sides(&self) -> Vec<Geodesic> {
        (0..self.len()).map(|i| self.side(i)).collect()
    }

    pub fn index_of(&self, p: &IdealPoint) -> Option<usize> {
        self.vertices.iter().position(|v| v == p)
    }

    pub fn klein_vertices(&self) -> Vec<[f64; 2]> {
        self.vertices.iter().map(|v| v.to_disk()).collect()
    }

    /// Signed-area test: `> 0` when `k` is on the inner side of side `i`.
    pub fn side_orientation(&self, i: usize, k: [f64; 2]) -> f64 {
        let n = self.len();
        let a = self.vertices[i].to_disk();
        let b = self.vertices[(i + 1) % n].to_disk();
        (b[0] - a[0]) * (k[1] - a[1]) - (b[1] - a[1]) * (k[0] - a[0])
    }

    /// Strict interior test for a point given in Klein coordinates.
    pub fn contains_klein(&self, k: [f64; 2]) -> bool {
        (0..self.len()).all(|i| self.side_orientation(i, k) > 0.0)
    }

    pub fn centroid_klein(&self) -> [f64; 2] {
        let n = self.len() as f64;
        let (sx, sy) = self
            .klein_vertices()
            .iter()
            .fold((0.0, 0.0), |(x, y), k| (x + k[0], y + k[1]));
        [sx / n, sy / n]
    }

    pub fn transformed(&self, map: &MobiusMap) -> Self {
        IdealPolygon {
            vertices: self.vertices.iter().map(|v| map.apply_ideal(v)).collect(),
        }
    }
}

/// Side label of a polygon inscribed in an alternating polygon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SideLabel {
    Alpha,
    Beta,
    Gamma,
}

/// Anything with vertices and per-side labels.
pub trait Labeled {
    fn vertices(&self) -> &[IdealPoint];
    /// Label of the side from vertex `i` to vertex `i + 1`.
    fn label(&self, i: usize) -> SideLabel;
}

/// Ideal `2n`-gon whose sides alternate between α and β.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlternatingPolygon {
    polygon: IdealPolygon,
    alpha_sides: Vec<bool>,
}

impl AlternatingPolygon {
    pub fn new(polygon: IdealPolygon, alpha_sides: Vec<bool>) -> Result<Self, PolygonError> {
        let n = polygon.len();
        if n % 2 != 0 || alpha_sides.len() != n {
            return Err(PolygonError::NotAlternating);
        }
        for i in 0..n {
            if alpha_sides[i] == alpha_sides[(i + 1) % n] {
                return Err(PolygonError::NotAlternating);
            }
        }
        Ok(AlternatingPolygon {
            polygon,
            alpha_sides,
        })
    }

    /// Side 0 (from the first vertex to the second) is α.
    pub fn alpha_first(vertices: Vec<IdealPoint>) -> Result<Self, PolygonError> {
        let n = vertices.len();
        let polygon = IdealPolygon::new(vertices)?;
        Self::new(polygon, (0..n).map(|i| i % 2 == 0).collect())
    }

    pub fn alpha_first_angles(thetas: &[f64]) -> Result<Self, PolygonError> {
        let n = thetas.len();
        Self::new(
            IdealPolygon::from_angles(thetas)?,
            (0..n).map(|i| i % 2 == 0).collect(),
        )
    }

    pub fn polygon(&self) -> &IdealPolygon {
        &self.polygon
    }

    pub fn len(&self) -> usize {
        self.polygon.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polygon.is_empty()
    }

    /// Number of α sides.
    pub fn half(&self) -> usize {
        self.len() / 2
    }

    pub fn is_alpha(&self, i: usize) -> bool {
        self.alpha_sides[i % self.len()]
    }

    pub fn alpha_flags(&self) -> &[bool] {
        &self.alpha_sides
    }

    pub fn labels(&self) -> Vec<SideLabel> {
        (0..self.len()).map(|i| self.label(i)).collect()
    }

    pub fn alpha_geodesics(&self) -> Vec<Geodesic> {
        (0..self.len())
            .filter(|&i| self.is_alpha(i))
            .map(|i| self.polygon.side(i))
            .collect()
    }

    pub fn beta_geodesics(&self) -> Vec<Geodesic> {
        (0..self.len())
            .filter(|&i| !self.is_alpha(i))
            .map(|i| self.polygon.side(i))
            .collect()
    }

    /// Exchange α and β.
    pub fn swapped(&self) -> Self {
        AlternatingPolygon {
            polygon: self.polygon.clone(),
            alpha_sides: self.alpha_sides.iter().map(|a| !a).collect(),
        }
    }

    /// Same polygon, vertex list rotated so that side 0 is α. Returns the shift used.
    pub fn rotated_alpha_first(&self) -> (Self, usize) {
        let shift = if self.alpha_sides[0] { 0 } else { 1 };
        let n = self.len();
        let v = (0..n).map(|i| self.polygon.vertices[(i + shift) % n]).collect();
        let a = (0..n).map(|i| self.alpha_sides[(i + shift) % n]).collect();
        (
            AlternatingPolygon {
                polygon: IdealPolygon { vertices: v },
                alpha_sides: a,
            },
            shift,
        )
    }

    pub fn transformed(&self, map: &MobiusMap) -> Self {
        AlternatingPolygon {
            polygon: self.polygon.transformed(map),
            alpha_sides: self.alpha_sides.clone(),
        }
    }

    pub fn with_vertices(&self, vertices: Vec<IdealPoint>) -> Result<Self, PolygonError> {
        Self::new(IdealPolygon::new(vertices)?, self.alpha_sides.clone())
    }
}

impl Labeled for AlternatingPolygon {
    fn vertices(&self) -> &[IdealPoint] {
        self.polygon.vertices()
    }

    fn label(&self, i: usize) -> SideLabel {
        if self.is_alpha(i) {
            SideLabel::Alpha
        } else {
            SideLabel::Beta
        }
    }
}

/// Truncated-length totals by label.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncatedSums {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub total: f64,
}

/// Sums of truncated lengths over the sides of `poly`, evaluated in `chart`.
pub fn truncated_sums_in<P: Labeled + ?Sized>(
    poly: &P,
    d: &Decoration,
    chart: &HalfPlaneChart,
) -> Result<TruncatedSums, KernelError> {
    let v = poly.vertices();
    let n = v.len();
    let (mut a, mut b, mut c) = (0.0, 0.0, 0.0);
    for i in 0..n {
        let g = Geodesic::new(v[i], v[(i + 1) % n])?;
        let len = truncated_length(&g, d, chart)?;
        match poly.label(i) {
            SideLabel::Alpha => a += len,
            SideLabel::Beta => b += len,
            SideLabel::Gamma => c += len,
        }
    }
    Ok(TruncatedSums {
        a,
        b,
        c,
        total: a + b + c,
    })
}

/// [`truncated_sums_in`] with the default chart for the polygon's own vertices.
pub fn truncated_sums<P: Labeled + ?Sized>(
    poly: &P,
    d: &Decoration,
) -> Result<TruncatedSums, KernelError> {
    let chart = HalfPlaneChart::for_points(poly.vertices());
    truncated_sums_in(poly, d, &chart)
}

/// `a - b` under the canonical decoration. Independent of decoration and chart.
pub fn ab_gap(p: &AlternatingPolygon) -> f64 {
    let s = truncated_sums(p, &Decoration::canonical()).expect("default chart avoids vertices");
    s.a - s.b
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Fatness {
    Fat,
    Skinny,
    Exact,
}

pub fn classify_fatness(p: &AlternatingPolygon, tol_exact: f64) -> Fatness {
    let gap = ab_gap(p);
    if gap < -tol_exact {
        Fatness::Fat
    } else if gap > tol_exact {
        Fatness::Skinny
    } else {
        Fatness::Exact
    }
}
