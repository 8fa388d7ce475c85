use serde::{Deserialize, Serialize};

use super::{
    classify_fatness, truncated_sums_in, AlternatingPolygon, Fatness, Labeled, PolygonError,
    SideLabel,
};
use crate::kernel::{Decoration, HalfPlaneChart, IdealPoint};

/// Largest number of α sides accepted by the subset enumeration.
pub const MAX_HALF_SIDES: usize = 8;

/// A polygon on a subset of an alternating polygon's vertices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InscribedPolygon {
    /// Indices into the ambient vertex list, increasing.
    pub indices: Vec<usize>,
    pub vertices: Vec<IdealPoint>,
    pub labels: Vec<SideLabel>,
}

impl InscribedPolygon {
    /// Number of sides with the given label incident to vertex `i` of this polygon.
    pub fn degree(&self, i: usize, label: SideLabel) -> usize {
        let n = self.labels.len();
        let before = self.labels[(i + n - 1) % n];
        let after = self.labels[i];
        (before == label) as usize + (after == label) as usize
    }
}

impl Labeled for InscribedPolygon {
    fn vertices(&self) -> &[IdealPoint] {
        &self.vertices
    }

    fn label(&self, i: usize) -> SideLabel {
        self.labels[i]
    }
}

/// Every proper inscribed polygon (3 to `2n - 1` vertices).
pub fn enumerate_inscribed(p: &AlternatingPolygon) -> Result<Vec<InscribedPolygon>, PolygonError> {
    let n = p.len();
    if n > 2 * MAX_HALF_SIDES {
        return Err(PolygonError::TooLarge {
            vertices: n,
            limit: 2 * MAX_HALF_SIDES,
        });
    }
    let full: u32 = (1u32 << n) - 1;
    let mut out = Vec::new();
    for mask in 1..full {
        if mask.count_ones() < 3 {
            continue;
        }
        let indices: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let k = indices.len();
        let labels: Vec<SideLabel> = (0..k)
            .map(|j| {
                let u = indices[j];
                let w = indices[(j + 1) % k];
                if w == (u + 1) % n {
                    p.label(u)
                } else {
                    SideLabel::Gamma
                }
            })
            .collect();
        let d = InscribedPolygon {
            vertices: indices.iter().map(|&i| p.polygon().vertices()[i]).collect(),
            indices,
            labels,
        };
        for i in 0..k {
            assert!(d.degree(i, SideLabel::Alpha) <= 1 && d.degree(i, SideLabel::Beta) <= 1);
        }
        out.push(d);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Inequality {
    /// `2a(D) < |D|`
    Alpha,
    /// `2b(D) < |D|`
    Beta,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularityViolation {
    pub inscribed: InscribedPolygon,
    pub inequality: Inequality,
    /// `|D| - 2a(D)` (or with `b`); non-positive for a violation.
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Regularity {
    pub regular: bool,
    pub checked: usize,
    pub violation: Option<RegularityViolation>,
}

fn margins(
    d: &InscribedPolygon,
    deco: &Decoration,
    chart: &HalfPlaneChart,
) -> (f64, f64) {
    let s = truncated_sums_in(d, deco, chart).expect("ambient chart avoids every vertex");
    (s.total - 2.0 * s.a, s.total - 2.0 * s.b)
}

/// Regularity in the small-horoball limit.
///
/// If some vertex of `D` has no incident α side, shrinking its horoball drives
/// `2a(D) - |D|` to `-∞`, so the α inequality holds. Otherwise every vertex has
/// exactly one α side, the quantity does not depend on the decoration and is
/// evaluated at `σ ≡ 1`. Same for β.
pub fn is_regular(p: &AlternatingPolygon) -> Result<Regularity, PolygonError> {
    let all = enumerate_inscribed(p)?;
    let chart = HalfPlaneChart::for_points(p.polygon().vertices());
    let deco = Decoration::canonical();
    let checked = all.len();
    for d in all {
        let k = d.vertices.len();
        let every_alpha = (0..k).all(|i| d.degree(i, SideLabel::Alpha) == 1);
        let every_beta = (0..k).all(|i| d.degree(i, SideLabel::Beta) == 1);
        if !(every_alpha || every_beta) {
            continue;
        }
        let (ma, mb) = margins(&d, &deco, &chart);
        if every_alpha && ma <= 0.0 {
            return Ok(violation(d, Inequality::Alpha, ma, checked));
        }
        if every_beta && mb <= 0.0 {
            return Ok(violation(d, Inequality::Beta, mb, checked));
        }
    }
    Ok(Regularity {
        regular: true,
        checked,
        violation: None,
    })
}

fn violation(d: InscribedPolygon, inequality: Inequality, margin: f64, checked: usize) -> Regularity {
    Regularity {
        regular: false,
        checked,
        violation: Some(RegularityViolation {
            inscribed: d,
            inequality,
            margin,
        }),
    }
}

/// Both inequalities at the fixed decoration `σ ≡ scale` in the default chart.
pub fn is_regular_at_scale(p: &AlternatingPolygon, scale: f64) -> Result<Regularity, PolygonError> {
    let all = enumerate_inscribed(p)?;
    let chart = HalfPlaneChart::for_points(p.polygon().vertices());
    let deco = Decoration::uniform(p.polygon().vertices(), scale)?;
    let checked = all.len();
    for d in all {
        let (ma, mb) = margins(&d, &deco, &chart);
        if ma <= 0.0 {
            return Ok(violation(d, Inequality::Alpha, ma, checked));
        }
        if mb <= 0.0 {
            return Ok(violation(d, Inequality::Beta, mb, checked));
        }
    }
    Ok(Regularity {
        regular: true,
        checked,
        violation: None,
    })
}

pub fn is_exact(p: &AlternatingPolygon, tol_exact: f64) -> Result<bool, PolygonError> {
    Ok(is_regular(p)?.regular && classify_fatness(p, tol_exact) == Fatness::Exact)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygon::ab_gap;
    use std::f64::consts::PI;

    fn regular_gon(k: usize, offset: f64) -> AlternatingPolygon {
        let v: Vec<f64> = (0..k).map(|i| offset + i as f64 * 2.0 * PI / k as f64).collect();
        AlternatingPolygon::alpha_first_angles(&v).unwrap()
    }

    #[test]
    fn counts() {
        let sq = regular_gon(4, 0.0);
        let ins = enumerate_inscribed(&sq).unwrap();
        assert_eq!(ins.len(), 4);
        for d in &ins {
            assert_eq!(d.labels.iter().filter(|l| **l == SideLabel::Gamma).count(), 1);
        }
        assert_eq!(enumerate_inscribed(&regular_gon(6, 0.0)).unwrap().len(), 41);
    }

    #[test]
    fn too_large() {
        assert!(matches!(
            enumerate_inscribed(&regular_gon(18, 0.0)),
            Err(PolygonError::TooLarge { .. })
        ));
        assert!(enumerate_inscribed(&regular_gon(16, 0.0)).is_ok());
    }

    #[test]
    fn square_triangles_have_a_vertex_off_alpha() {
        // each triangle of the square has a vertex with no alpha side and one with no beta side
        for d in enumerate_inscribed(&regular_gon(4, 0.0)).unwrap() {
            assert!((0..3).any(|i| d.degree(i, SideLabel::Alpha) == 0));
            assert!((0..3).any(|i| d.degree(i, SideLabel::Beta) == 0));
        }
        assert!(is_regular(&regular_gon(4, 0.0)).unwrap().regular);
    }

    #[test]
    fn exact_examples() {
        assert!(is_exact(&regular_gon(4, 0.3), 1e-9).unwrap());
        assert!(is_exact(&regular_gon(6, 0.0), 1e-9).unwrap());
        let skew = AlternatingPolygon::alpha_first_angles(&[0.0, 0.2, PI, PI + 0.2]).unwrap();
        assert!(is_regular(&skew).unwrap().regular);
        assert!(!is_exact(&skew, 1e-9).unwrap());
        assert!(ab_gap(&skew) < 0.0);
    }

    #[test]
    fn finite_scale_can_differ() {
        // large horoballs overlap and break inequalities that hold in the limit
        let sq = regular_gon(4, 0.0);
        let big = is_regular_at_scale(&sq, 1e6).unwrap();
        assert!(!big.regular);
        let small = is_regular_at_scale(&sq, 1e-6).unwrap();
        assert!(small.regular);
    }
}
