//! Cap hulls, face decomposition and the strong-fillability verdict.

use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use thiserror::Error;

use crate::cover::{
    corner_cover, exact_cover_per_vertex, verify_corner_cover, verify_cover, CornerRegionSpec,
    CoverReport, ExactCovering,
};
use crate::curve::{
    cap_geodesic_check, corner_check, decompose, default_band, height, tall_cover, tall_status,
    thin_tail_scan, validate, verify_tall_cover, BoundaryCurve, Cap, Decomposition, HeightReport,
    TallCover, TallCoverReport, TallStatus, ThinTail, Violation,
};
use crate::kernel::{ccw_delta, strictly_inside_arc, Geodesic, IdealPoint, KernelError};
use crate::polygon::{
    ab_gap, is_regular, is_regular_at_scale, AlternatingPolygon, Fatness, IdealPolygon,
    PolygonError, Regularity, SideLabel,
};
use crate::TOL_EXACT;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClassifyError {
    #[error("cap {cap:?} hull needs at least 3 points, got {points}")]
    Degenerate { cap: Cap, points: usize },
    #[error("chords {0} and {1} cross")]
    CrossingChords(usize, usize),
    #[error("chord endpoint at theta = {0} is not a hull vertex")]
    ChordOffHull(f64),
    #[error("face {0} does not alternate between curve and non-curve sides")]
    NotAlternating(usize),
    #[error("precheck failed: {0}")]
    PrecheckFailed(String),
    #[error("invalid curve: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidCurve(Vec<Violation>),
    #[error(transparent)]
    Polygon(#[from] PolygonError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// Hull of the cap geodesic endpoints and the hull extended by corner points.
pub fn cap_hull(dec: &Decomposition, cap: Cap) -> Result<(IdealPolygon, IdealPolygon), ClassifyError> {
    let pts = endpoint_set(dec, cap);
    if pts.len() < 3 {
        return Err(ClassifyError::Degenerate {
            cap,
            points: pts.len(),
        });
    }
    let hull = IdealPolygon::hull_of(&pts)?;
    let extended = extended_hull(dec, cap).expect("at least as many points as the hull");
    Ok((hull, extended))
}

fn endpoint_set(dec: &Decomposition, cap: Cap) -> Vec<IdealPoint> {
    dec.geodesics(cap).iter().flat_map(|g| g.endpoints()).collect()
}

/// Hull of geodesic endpoints together with corner points, when it has ≥ 3 vertices.
pub fn extended_hull(dec: &Decomposition, cap: Cap) -> Option<IdealPolygon> {
    let mut pts = endpoint_set(dec, cap);
    for &t in dec.corner_points(cap) {
        pts.push(IdealPoint::new(t).ok()?);
    }
    IdealPolygon::hull_of(&pts).ok()
}

/// Faces of the subdivision of `hull` by non-crossing `chords`; a side is α
/// exactly when it is one of the chords.
pub fn faces(hull: &IdealPolygon, chords: &[Geodesic]) -> Result<Vec<AlternatingPolygon>, ClassifyError> {
    let n = hull.len();
    for i in 0..chords.len() {
        for j in i + 1..chords.len() {
            if chords[i].crossing(&chords[j]).crosses() {
                return Err(ClassifyError::CrossingChords(i, j));
            }
        }
    }
    let mut set: HashSet<(usize, usize)> = HashSet::new();
    for g in chords {
        let a = hull.index_of(&g.p()).ok_or(ClassifyError::ChordOffHull(g.p().theta()))?;
        let b = hull.index_of(&g.q()).ok_or(ClassifyError::ChordOffHull(g.q().theta()))?;
        set.insert((a.min(b), a.max(b)));
    }
    let is_chord = |a: usize, b: usize| set.contains(&(a.min(b), a.max(b)));
    let mut stack: Vec<Vec<usize>> = vec![(0..n).collect()];
    let mut out = Vec::new();
    while let Some(face) = stack.pop() {
        let k = face.len();
        // split along the first chord joining non-adjacent vertices of the face
        let split = (0..k).find_map(|i| {
            (i + 2..k)
                .filter(|&j| !(i == 0 && j == k - 1))
                .find(|&j| is_chord(face[i], face[j]))
                .map(|j| (i, j))
        });
        if let Some((i, j)) = split {
            stack.push(face[i..=j].to_vec());
            let mut rest = face[j..].to_vec();
            rest.extend_from_slice(&face[..=i]);
            stack.push(rest);
            continue;
        }
        let verts: Vec<IdealPoint> = face.iter().map(|&i| hull.vertices()[i]).collect();
        let flags: Vec<bool> = (0..k).map(|i| is_chord(face[i], face[(i + 1) % k])).collect();
        let poly = IdealPolygon::new(verts)?;
        let alt = AlternatingPolygon::new(poly, flags).map_err(|_| ClassifyError::NotAlternating(out.len()))?;
        out.push(alt);
    }
    // deterministic order: by first vertex angle
    out.sort_by(|a, b| {
        let ka = a.polygon().angles().into_iter().fold(f64::INFINITY, f64::min);
        let kb = b.polygon().angles().into_iter().fold(f64::INFINITY, f64::min);
        ka.total_cmp(&kb)
    });
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FatStatus {
    Fat,
    Skinny,
    Exceptional,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FaceReport {
    pub cap: Cap,
    pub index: usize,
    pub polygon: AlternatingPolygon,
    pub ab_gap: f64,
    pub fatness: Fatness,
    /// `None` when the face is too large for inscribed-polygon enumeration.
    pub regularity: Option<Regularity>,
}

impl FaceReport {
    pub fn is_regular(&self) -> bool {
        self.regularity.as_ref().is_some_and(|r| r.regular)
    }

    fn witness(&self) -> Witness {
        Witness::Face {
            cap: self.cap,
            face: self.index,
            vertices: self.polygon.polygon().angles(),
            labels: self.polygon.labels(),
            ab_gap: self.ab_gap,
            violation: self
                .regularity
                .as_ref()
                .and_then(|r| r.violation.as_ref())
                .map(|v| format!("{:?} inequality fails on vertices {:?} (margin {:.3e})", v.inequality, v.inscribed.indices, v.margin)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapAnalysis {
    pub cap: Cap,
    pub geodesics: Vec<Geodesic>,
    pub hull: Option<IdealPolygon>,
    pub extended_hull: Option<IdealPolygon>,
    pub faces: Vec<FaceReport>,
    pub status: FatStatus,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassifyOptions {
    pub tol_exact: f64,
    /// Evaluate regularity at `σ ≡ scale` instead of the small-horoball limit.
    pub horoball_scale: Option<f64>,
    pub certificate: bool,
    pub seed: u64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            tol_exact: TOL_EXACT,
            horoball_scale: None,
            certificate: true,
            seed: 0,
        }
    }
}

fn face_report(cap: Cap, index: usize, polygon: AlternatingPolygon, opts: &ClassifyOptions) -> FaceReport {
    let gap = ab_gap(&polygon);
    let fatness = if gap < -opts.tol_exact {
        Fatness::Fat
    } else if gap > opts.tol_exact {
        Fatness::Skinny
    } else {
        Fatness::Exact
    };
    let regularity = match opts.horoball_scale {
        Some(s) => is_regular_at_scale(&polygon, s).ok(),
        None => is_regular(&polygon).ok(),
    };
    FaceReport {
        cap,
        index,
        polygon,
        ab_gap: gap,
        fatness,
        regularity,
    }
}

/// Hull, faces and fatness status of one cap. Empty caps and single-geodesic
/// caps count as fat.
pub fn analyze_cap(dec: &Decomposition, cap: Cap, opts: &ClassifyOptions) -> Result<CapAnalysis, ClassifyError> {
    let geodesics = dec.geodesics(cap).to_vec();
    let extended = extended_hull(dec, cap);
    if geodesics.len() <= 1 {
        return Ok(CapAnalysis {
            cap,
            geodesics,
            hull: None,
            extended_hull: extended,
            faces: Vec::new(),
            status: FatStatus::Fat,
        });
    }
    let (hull, extended) = cap_hull(dec, cap)?;
    let faces: Vec<FaceReport> = faces(&hull, &geodesics)?
        .into_iter()
        .enumerate()
        .map(|(i, f)| face_report(cap, i, f, opts))
        .collect();
    let status = if faces.iter().any(|f| f.fatness == Fatness::Skinny) {
        FatStatus::Skinny
    } else if faces.iter().all(|f| f.fatness == Fatness::Fat && f.is_regular()) {
        FatStatus::Fat
    } else {
        FatStatus::Exceptional
    };
    Ok(CapAnalysis {
        cap,
        geodesics,
        hull: Some(hull),
        extended_hull: Some(extended),
        faces,
        status,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FatReport {
    pub caps: Vec<CapAnalysis>,
    pub status: FatStatus,
}

/// Fat / skinny / exceptional at infinity, with both cap analyses.
pub fn fat_at_infinity(curve: &BoundaryCurve, opts: &ClassifyOptions) -> Result<FatReport, ClassifyError> {
    if !cap_geodesic_check(curve) {
        return Err(ClassifyError::PrecheckFailed("a cap path is not a geodesic".into()));
    }
    if !crate::curve::endpoints_distinct_check(curve) {
        return Err(ClassifyError::PrecheckFailed("cap geodesics share endpoints".into()));
    }
    let dec = decompose(curve)?;
    let caps = Cap::both()
        .iter()
        .map(|&c| analyze_cap(&dec, c, opts))
        .collect::<Result<Vec<_>, _>>()?;
    let status = if caps.iter().any(|c| c.status == FatStatus::Skinny) {
        FatStatus::Skinny
    } else if caps.iter().all(|c| c.status == FatStatus::Fat) {
        FatStatus::Fat
    } else {
        FatStatus::Exceptional
    };
    Ok(FatReport { caps, status })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    StronglyFillable,
    NotStronglyFillable,
    Borderline,
    Exceptional,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reason {
    NonGeodesicCap,
    SharedCapEndpoints,
    NotTall,
    CornerOverlap,
    SkinnyFace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExceptionalCause {
    ExactFace,
    NonRegularFace,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    CapArc {
        cap: Cap,
    },
    SharedEndpoint {
        cap: Cap,
        theta: f64,
    },
    Height {
        h: Option<f64>,
        theta: Option<f64>,
        interval: Option<[f64; 2]>,
    },
    ThinTail(ThinTail),
    CornerArc {
        cap: Cap,
        interval: [f64; 2],
    },
    Face {
        cap: Cap,
        face: usize,
        vertices: Vec<f64>,
        labels: Vec<SideLabel>,
        ab_gap: f64,
        violation: Option<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FaceCertificate {
    pub cap: Cap,
    pub face: usize,
    pub covering: ExactCovering,
    pub report: CoverReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CornerCertificate {
    pub cap: Cap,
    pub spec: CornerRegionSpec,
    pub covering: ExactCovering,
    pub report: CoverReport,
}

/// Independently checkable pieces backing a positive verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub tall_cover: TallCover,
    pub tall_report: TallCoverReport,
    pub faces: Vec<FaceCertificate>,
    pub corners: Vec<CornerCertificate>,
    /// Every piece was built and verified.
    pub complete: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub verdict: Verdict,
    pub reasons: Vec<Reason>,
    pub cause: Option<ExceptionalCause>,
    pub witnesses: Vec<Witness>,
    pub diagnostics: Vec<String>,
    pub height: HeightReport,
    pub tall: TallStatus,
    pub fatness: Option<FatStatus>,
    pub caps: Vec<CapAnalysis>,
    pub certificate: Option<Certificate>,
}

impl Classification {
    pub fn has_reason(&self, r: Reason) -> bool {
        self.reasons.contains(&r)
    }
}

/// [`classify_with`] under default options.
pub fn classify(curve: &BoundaryCurve) -> Result<Classification, ClassifyError> {
    classify_with(curve, &ClassifyOptions::default())
}

fn shared_endpoints(dec: &Decomposition) -> Vec<Witness> {
    let mut out = Vec::new();
    for cap in Cap::both() {
        let pts = endpoint_set(dec, cap);
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                if pts[i] == pts[j] {
                    out.push(Witness::SharedEndpoint {
                        cap,
                        theta: pts[i].theta(),
                    });
                }
            }
        }
    }
    out
}

/// Evaluate every condition (no short-circuit) and combine them into a verdict.
pub fn classify_with(curve: &BoundaryCurve, opts: &ClassifyOptions) -> Result<Classification, ClassifyError> {
    validate(curve).map_err(ClassifyError::InvalidCurve)?;
    let dec = decompose(curve)?;
    let mut reasons = Vec::new();
    let mut witnesses = Vec::new();
    let mut diagnostics = Vec::new();

    let geodesic_caps = cap_geodesic_check(curve);
    if !geodesic_caps {
        reasons.push(Reason::NonGeodesicCap);
        for cap in Cap::both() {
            if !dec.cap_arcs(cap).is_empty() {
                witnesses.push(Witness::CapArc { cap });
            }
        }
        diagnostics.push("a cap path is not a geodesic: not even fillable".into());
    }

    let shared = shared_endpoints(&dec);
    let distinct = crate::curve::endpoints_distinct_check(curve);
    if !distinct {
        reasons.push(Reason::SharedCapEndpoints);
        witnesses.extend(shared);
    }

    let h = height(curve);
    let tall = tall_status(h.value());
    if tall == TallStatus::NotTall {
        reasons.push(Reason::NotTall);
        witnesses.push(Witness::Height {
            h: h.h,
            theta: h.witness_theta,
            interval: h.witness_interval,
        });
        if let Some(tail) = thin_tail_scan(curve) {
            diagnostics.push("contains a thin tail: not fillable".into());
            witnesses.push(Witness::ThinTail(tail));
        }
    } else if tall == TallStatus::Borderline {
        diagnostics.push("height equals pi: excluded borderline case".into());
    }

    if !corner_check(curve) {
        reasons.push(Reason::CornerOverlap);
        for cap in Cap::both() {
            for iv in dec.corner_arcs(cap) {
                witnesses.push(Witness::CornerArc { cap, interval: *iv });
            }
        }
        diagnostics.push("corner arc present: the curve does not bound even a minimal surface".into());
    }

    let mut cause = None;
    let mut fatness = None;
    let mut caps = Vec::new();
    if geodesic_caps && distinct {
        let fat = fat_at_infinity(curve, opts)?;
        fatness = Some(fat.status);
        let all_faces = || fat.caps.iter().flat_map(|c| c.faces.iter());
        match fat.status {
            FatStatus::Skinny => {
                reasons.push(Reason::SkinnyFace);
                for f in all_faces().filter(|f| f.fatness == Fatness::Skinny) {
                    witnesses.push(f.witness());
                }
            }
            FatStatus::Exceptional => {
                let exact: Vec<&FaceReport> = all_faces().filter(|f| f.fatness == Fatness::Exact).collect();
                if exact.is_empty() {
                    cause = Some(ExceptionalCause::NonRegularFace);
                    for f in all_faces().filter(|f| !f.is_regular()) {
                        if f.regularity.is_none() {
                            diagnostics.push(format!(
                                "face {} of cap {} is too large for the regularity check",
                                f.index,
                                f.cap.symbol()
                            ));
                        }
                        witnesses.push(f.witness());
                    }
                } else {
                    cause = Some(ExceptionalCause::ExactFace);
                    witnesses.extend(exact.iter().map(|f| f.witness()));
                }
            }
            FatStatus::Fat => {}
        }
        caps = fat.caps;
    }
    reasons.sort();
    reasons.dedup();

    let verdict = if !reasons.is_empty() {
        Verdict::NotStronglyFillable
    } else if tall == TallStatus::Borderline {
        Verdict::Borderline
    } else if fatness == Some(FatStatus::Exceptional) {
        Verdict::Exceptional
    } else {
        Verdict::StronglyFillable
    };

    let certificate = if verdict == Verdict::StronglyFillable && opts.certificate {
        Some(build_certificate(curve, &dec, &caps, opts.seed, &mut diagnostics))
    } else {
        None
    };

    Ok(Classification {
        verdict,
        reasons,
        cause,
        witnesses,
        diagnostics,
        height: h,
        tall,
        fatness,
        caps,
        certificate,
    })
}

/// Corner regions: arcs between consecutive geodesic endpoints that hold corner points.
pub fn corner_regions(dec: &Decomposition, cap: Cap) -> Vec<CornerRegionSpec> {
    let mut ends: Vec<f64> = endpoint_set(dec, cap).iter().map(|p| p.theta()).collect();
    ends.sort_by(f64::total_cmp);
    ends.dedup();
    let corners = dec.corner_points(cap);
    if ends.len() < 2 || corners.is_empty() {
        return Vec::new();
    }
    let m = ends.len();
    (0..m)
        .filter_map(|i| {
            let (a, b) = (ends[i], ends[(i + 1) % m]);
            let inside: Vec<f64> = corners
                .iter()
                .copied()
                .filter(|&q| strictly_inside_arc(q, a, b))
                .collect();
            if inside.is_empty() || ccw_delta(a, b) <= 0.0 {
                None
            } else {
                CornerRegionSpec::new(a, b, inside).ok()
            }
        })
        .collect()
}

fn build_certificate(
    curve: &BoundaryCurve,
    dec: &Decomposition,
    caps: &[CapAnalysis],
    seed: u64,
    diagnostics: &mut Vec<String>,
) -> Certificate {
    let mut complete = true;
    let band = default_band(curve);
    let cover = tall_cover(curve, band).expect("tall curve");
    let tall_report = verify_tall_cover(curve, &cover, 10_000, seed);
    if !tall_report.passed() {
        complete = false;
        diagnostics.push("tall cover failed verification".into());
    }
    let mut faces = Vec::new();
    for c in caps {
        for f in &c.faces {
            match exact_cover_per_vertex(&f.polygon) {
                Ok(covering) => {
                    let report = verify_cover(&f.polygon, &covering, 10_000, seed);
                    if report.coverage < 1.0 || !report.side_avoidance || report.max_residual > TOL_EXACT {
                        complete = false;
                    }
                    faces.push(FaceCertificate {
                        cap: c.cap,
                        face: f.index,
                        covering,
                        report,
                    });
                }
                Err(e) => {
                    complete = false;
                    diagnostics.push(format!("face {} of cap {}: {e}", f.index, c.cap.symbol()));
                }
            }
        }
    }
    let mut corners = Vec::new();
    for cap in Cap::both() {
        for spec in corner_regions(dec, cap) {
            match corner_cover(&spec).and_then(|cov| {
                let rep = verify_corner_cover(&spec, &cov, 2_000, seed)?;
                Ok((cov, rep))
            }) {
                Ok((covering, report)) => corners.push(CornerCertificate {
                    cap,
                    spec,
                    covering,
                    report,
                }),
                Err(e) => {
                    complete = false;
                    diagnostics.push(format!("corner region on cap {}: {e}", cap.symbol()));
                }
            }
        }
    }
    Certificate {
        tall_cover: cover,
        tall_report,
        faces,
        corners,
        complete,
    }
}

/// Sufficient condition for fillability of a union: every component alone is
/// strongly fillable.
pub fn fillable_union_check(curve: &BoundaryCurve) -> bool {
    let opts = ClassifyOptions {
        certificate: false,
        ..ClassifyOptions::default()
    };
    !curve.components.is_empty()
        && (0..curve.components.len()).all(|i| {
            classify_with(&curve.component(i), &opts).is_ok_and(|c| c.verdict == Verdict::StronglyFillable)
        })
}
