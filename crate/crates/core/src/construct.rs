//! Curve generators, the Scherk trap test, vertical separation and the
//! area-comparison table.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};
use thiserror::Error;

use crate::classify::{faces, ClassifyError};
use crate::curve::{
    same_region, validate, BoundaryCurve, BoundaryPoint, Cap, JordanComponent, Segment, Violation,
};
use crate::kernel::{
    ccw_delta, circle_intersection_angles, clipped_length, distance_on_circle, strictly_inside_arc,
    CircleHit, Geodesic, IdealPoint, KernelError,
};
use crate::polygon::{ab_gap, is_exact, AlternatingPolygon, IdealPolygon, PolygonError};
use crate::TOL_EXACT;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConstructError {
    #[error("invalid cap spec: {0}")]
    SpecInvalid(String),
    #[error("trap polygon is not exact (a - b = {0})")]
    NotExact(f64),
    #[error("need at least {need} geodesics, got {got}")]
    TooFew { need: usize, got: usize },
    #[error("geodesics are not the alternate sides of their hull")]
    NotAlternating,
    #[error("generated curve is invalid: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error(transparent)]
    Polygon(#[from] PolygonError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

impl From<ClassifyError> for ConstructError {
    fn from(e: ClassifyError) -> Self {
        match e {
            ClassifyError::Polygon(p) => ConstructError::Polygon(p),
            ClassifyError::Kernel(k) => ConstructError::Kernel(k),
            _ => ConstructError::NotAlternating,
        }
    }
}

/// Which boundary arc of a geodesic carries the horizontal edge of an infinite rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArcSide {
    #[default]
    Short,
    Long,
}

/// Cap geodesic, two rays from height `t0` to the cap, and the horizontal arc
/// at `t0` joining their feet.
pub fn infinite_rectangle(g: &Geodesic, t0: f64, cap: Cap, side: ArcSide) -> JordanComponent {
    let (start, end) = g.short_arc();
    let (a, b) = match side {
        ArcSide::Short => (start, end),
        ArcSide::Long => (end, start),
    };
    let span = ccw_delta(a, b);
    JordanComponent::new(vec![
        Segment::geodesic(cap, a, b),
        Segment::ray(b, t0, cap),
        Segment::cylinder(&[(b, t0), (b - span, t0)]),
        Segment::ray(a, t0, cap),
    ])
}

/// Boundary of the vertical plane `g × ℝ`: the geodesic on both caps and full
/// vertical lines over its endpoints.
pub fn vertical_plane(g: &Geodesic) -> JordanComponent {
    let (p, q) = (g.p().theta(), g.q().theta());
    JordanComponent::new(vec![
        Segment::geodesic(Cap::Plus, p, q),
        Segment::ray(q, 0.0, Cap::Plus),
        Segment::ray(q, 0.0, Cap::Minus),
        Segment::geodesic(Cap::Minus, q, p),
        Segment::ray(p, 0.0, Cap::Minus),
        Segment::ray(p, 0.0, Cap::Plus),
    ])
}

/// `k` vertical planes in rotational symmetry, each spanning `fraction` of its
/// `2π/k` sector. Skinny at infinity when `fraction > 1/2`.
pub fn knoid(k: usize, fraction: f64) -> Result<BoundaryCurve, ConstructError> {
    if k < 2 || !(fraction > 0.0 && fraction < 1.0) {
        return Err(ConstructError::BadParameter(format!("k = {k}, fraction = {fraction}")));
    }
    let sector = TAU / k as f64;
    let half = fraction * sector / 2.0;
    let comps = (0..k)
        .map(|i| {
            let c = i as f64 * sector;
            Geodesic::from_angles(c - half, c + half).map(|g| vertical_plane(&g))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(BoundaryCurve::new(comps))
}

/// Scherk curve over `xi`: α sides on `cap`, β sides on the other cap, full
/// vertical lines at the vertices.
pub fn scherk_curve(xi: &AlternatingPolygon, cap: Cap) -> JordanComponent {
    let th = xi.polygon().angles();
    let n = th.len();
    let on = |i: usize| if xi.is_alpha(i) { cap } else { cap.opposite() };
    let mut segs = Vec::with_capacity(3 * n);
    for i in 0..n {
        let j = (i + 1) % n;
        segs.push(Segment::geodesic(on(i), th[i], th[j]));
        segs.push(Segment::ray(th[j], 0.0, on(i)));
        segs.push(Segment::ray(th[j], 0.0, on(j)));
    }
    JordanComponent::new(segs)
}

/// Regular ideal `2n`-gon with vertices at multiples of `π/n`, α side first. Exact.
pub fn regular_polygon(n: usize) -> Result<AlternatingPolygon, ConstructError> {
    if n < 2 {
        return Err(ConstructError::BadParameter(format!("n = {n}")));
    }
    let th: Vec<f64> = (0..2 * n).map(|j| j as f64 * PI / n as f64).collect();
    Ok(AlternatingPolygon::alpha_first_angles(&th)?)
}

/// Disjoint geodesics on each cap.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CapSpec {
    pub plus: Vec<Geodesic>,
    pub minus: Vec<Geodesic>,
}

impl CapSpec {
    pub fn geodesics(&self, cap: Cap) -> &[Geodesic] {
        match cap {
            Cap::Plus => &self.plus,
            Cap::Minus => &self.minus,
        }
    }

    pub fn check(&self) -> Result<(), ConstructError> {
        for cap in Cap::both() {
            let gs = self.geodesics(cap);
            for i in 0..gs.len() {
                for j in i + 1..gs.len() {
                    if !matches!(gs[i].crossing(&gs[j]), crate::kernel::Crossing::Disjoint) {
                        return Err(ConstructError::SpecInvalid(format!(
                            "geodesics {i} and {j} on cap {} cross or share an endpoint",
                            cap.symbol()
                        )));
                    }
                }
            }
        }
        if self.plus.is_empty() && self.minus.is_empty() {
            return Err(ConstructError::SpecInvalid("no geodesics".into()));
        }
        Ok(())
    }
}

/// `true` when the short arc of `inner` lies inside the short arc of `outer`.
pub fn arc_contains(outer: &Geodesic, inner: &Geodesic) -> bool {
    let (a, b) = outer.short_arc();
    let (c, d) = inner.short_arc();
    let span = ccw_delta(a, b);
    ccw_delta(a, c) < span && ccw_delta(a, d) <= span && ccw_delta(a, c) < ccw_delta(a, d)
}

/// Cylinder levels for the rectangles of one cap: `1 + rank` by decreasing
/// short-arc length, so nested arcs sit further out.
pub fn cap_levels(gs: &[Geodesic]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..gs.len()).collect();
    let len = |g: &Geodesic| {
        let (a, b) = g.short_arc();
        ccw_delta(a, b)
    };
    order.sort_by(|&i, &j| len(&gs[j]).total_cmp(&len(&gs[i])).then(i.cmp(&j)));
    let mut levels = vec![0.0; gs.len()];
    for (rank, &i) in order.iter().enumerate() {
        levels[i] = 1.0 + rank as f64;
    }
    levels
}

/// A fillable curve with the given cap geodesics: one infinite rectangle per
/// geodesic, nested arcs at higher `|t|`.
pub fn generate_from_caps(spec: &CapSpec) -> Result<BoundaryCurve, ConstructError> {
    spec.check()?;
    let mut comps = Vec::new();
    for cap in Cap::both() {
        let gs = spec.geodesics(cap);
        for (g, t) in gs.iter().zip(cap_levels(gs)) {
            comps.push(infinite_rectangle(g, cap.sign() * t, cap, ArcSide::Short));
        }
    }
    let curve = BoundaryCurve::new(comps);
    validate(&curve).map_err(ConstructError::Invalid)?;
    Ok(curve)
}

fn random_matching(lo: usize, hi: usize, rng: &mut ChaCha8Rng, out: &mut Vec<(usize, usize)>) {
    if lo >= hi {
        return;
    }
    // pair lo with an odd offset so both sides hold an even count
    let pairs = (hi - lo) / 2;
    let j = lo + 2 * rng.gen_range(0..pairs) + 1;
    out.push((lo, j));
    random_matching(lo + 1, j, rng, out);
    random_matching(j + 1, hi, rng, out);
}

fn random_cap(rng: &mut ChaCha8Rng, n: usize) -> Vec<Geodesic> {
    if n == 0 {
        return Vec::new();
    }
    let mut th: Vec<f64> = loop {
        let mut v: Vec<f64> = (0..2 * n).map(|_| rng.gen_range(0.0..TAU)).collect();
        v.sort_by(f64::total_cmp);
        let min_gap = (0..v.len())
            .map(|i| ccw_delta(v[i], v[(i + 1) % v.len()]))
            .fold(f64::INFINITY, f64::min);
        if min_gap > 0.05 {
            break v;
        }
    };
    th.rotate_left(rng.gen_range(0..2 * n));
    let mut pairs = Vec::new();
    random_matching(0, 2 * n, rng, &mut pairs);
    pairs
        .into_iter()
        .map(|(a, b)| Geodesic::from_angles(th[a], th[b]).expect("distinct angles"))
        .collect()
}

/// Random valid spec with at most `max_per_cap` geodesics on each cap.
pub fn random_cap_spec(seed: u64, max_per_cap: usize) -> CapSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let n_plus = rng.gen_range(0..=max_per_cap);
        let n_minus = rng.gen_range(0..=max_per_cap);
        if n_plus + n_minus == 0 {
            continue;
        }
        let spec = CapSpec {
            plus: random_cap(&mut rng, n_plus),
            minus: random_cap(&mut rng, n_minus),
        };
        if spec.check().is_ok() {
            return spec;
        }
    }
}

/// An exact polygon whose Scherk curve has its α sides on `cap`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrapRegion {
    pub xi: AlternatingPolygon,
    pub cap: Cap,
}

impl TrapRegion {
    pub fn new(xi: AlternatingPolygon, cap: Cap) -> Result<Self, ConstructError> {
        if !is_exact(&xi, TOL_EXACT)? {
            return Err(ConstructError::NotExact(ab_gap(&xi)));
        }
        Ok(TrapRegion { xi, cap })
    }

    pub fn scherk(&self) -> JordanComponent {
        scherk_curve(&self.xi, self.cap)
    }

    /// Membership in the side of the Scherk curve that contains the interior
    /// of `xi` on `cap`.
    pub fn xi_side_contains(&self, p: &BoundaryPoint) -> bool {
        let poly = self.xi.polygon();
        let n = poly.len();
        match *p {
            BoundaryPoint::Cap { cap, klein } if cap == self.cap => {
                (0..n).filter(|&i| self.xi.is_alpha(i)).all(|i| poly.side_orientation(i, klein) >= 0.0)
            }
            BoundaryPoint::Cap { klein, .. } => {
                (0..n).filter(|&i| !self.xi.is_alpha(i)).any(|i| poly.side_orientation(i, klein) < 0.0)
            }
            BoundaryPoint::Cylinder { theta, .. } => {
                let th = poly.angles();
                (0..n)
                    .filter(|&i| !self.xi.is_alpha(i))
                    .any(|i| strictly_inside_arc(theta, th[i], th[(i + 1) % n]))
            }
        }
    }

    /// Points of the Scherk curve: vertical-line points and chord midpoints.
    fn sample_points(&self, reach: f64) -> Vec<BoundaryPoint> {
        let poly = self.xi.polygon();
        let th = poly.angles();
        let n = th.len();
        let mut out = Vec::new();
        for &v in &th {
            for t in [-reach, 0.0, reach] {
                out.push(BoundaryPoint::Cylinder { theta: v, t });
            }
        }
        for i in 0..n {
            let a = IdealPoint::at(th[i]).to_disk();
            let b = IdealPoint::at(th[(i + 1) % n]).to_disk();
            let cap = if self.xi.is_alpha(i) { self.cap } else { self.cap.opposite() };
            out.push(BoundaryPoint::Cap {
                cap,
                klein: [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0],
            });
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrapReport {
    pub trapped: bool,
    /// Curve and Scherk curve are disjoint.
    pub disjoint: bool,
    /// No sampled point of the Scherk curve lies in the region of the seed.
    pub xi_outside_region: bool,
    pub seed: Option<[f64; 2]>,
    pub seed_in_xi_side: bool,
}

/// Interior point of the curve's cap hull on `cap`, in Klein coordinates.
pub fn hull_seed(curve: &BoundaryCurve, cap: Cap) -> Option<[f64; 2]> {
    let dec = crate::curve::decompose(curve).ok()?;
    let gs = dec.geodesics(cap);
    match gs.len() {
        0 => None,
        1 => {
            let a = gs[0].p().to_disk();
            let b = gs[0].q().to_disk();
            let mid = [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0];
            (mid[0].hypot(mid[1]) > 1e-9).then(|| [0.9 * mid[0], 0.9 * mid[1]])
        }
        _ => {
            let pts: Vec<IdealPoint> = gs.iter().flat_map(|g| g.endpoints()).collect();
            IdealPolygon::hull_of(&pts).ok().map(|h| h.centroid_klein())
        }
    }
}

/// Full trap test with the intermediate facts.
pub fn trap_report(curve: &BoundaryCurve, trap: &TrapRegion) -> TrapReport {
    let mut joint = curve.components.clone();
    joint.push(trap.scherk());
    let disjoint = validate(curve).is_ok() && validate(&BoundaryCurve::new(joint)).is_ok();
    let seed = hull_seed(curve, trap.cap);
    let mut report = TrapReport {
        trapped: false,
        disjoint,
        xi_outside_region: false,
        seed,
        seed_in_xi_side: false,
    };
    let (true, Some(k)) = (disjoint, seed) else {
        return report;
    };
    let seed_pt = BoundaryPoint::Cap { cap: trap.cap, klein: k };
    report.xi_outside_region = trap
        .sample_points(curve.max_abs_t() + 1.0)
        .iter()
        .all(|x| !same_region(curve, x, &seed_pt));
    report.seed_in_xi_side = trap.xi_side_contains(&seed_pt);
    report.trapped = report.xi_outside_region && report.seed_in_xi_side;
    report
}

/// `true` when the curve's region on `trap.cap` sits inside the Scherk side of `trap.xi`.
pub fn trapped_by(curve: &BoundaryCurve, trap: &TrapRegion) -> bool {
    trap_report(curve, trap).trapped
}

/// Regular hexagon trap on cap `+` and a curve trapped by it. The cap geodesics
/// overhang each α side of the hexagon by `overhang` (in `(0, π/6)`); the
/// horizontal edges sit at height `t0` inside the β arcs.
pub fn trap_fixture(overhang: f64, t0: f64) -> Result<(TrapRegion, BoundaryCurve), ConstructError> {
    if !(overhang > 0.0 && overhang < PI / 6.0) {
        return Err(ConstructError::BadParameter(format!("overhang = {overhang}")));
    }
    let trap = TrapRegion::new(regular_polygon(3)?, Cap::Plus)?;
    let x = |k: usize| 2.0 * k as f64 * PI / 3.0 - overhang;
    let y = |k: usize| 2.0 * k as f64 * PI / 3.0 + PI / 3.0 + overhang;
    let mut segs = Vec::new();
    for k in 0..3 {
        segs.push(Segment::geodesic(Cap::Plus, x(k), y(k)));
        segs.push(Segment::ray(y(k), t0, Cap::Plus));
        segs.push(Segment::cylinder(&[(y(k), t0), (x(k + 1), t0)]));
        segs.push(Segment::ray(x(k + 1), t0, Cap::Plus));
    }
    Ok((trap, BoundaryCurve::new(vec![JordanComponent::new(segs)])))
}

/// Split of the components into those below `c` and those above `c + π`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeparationWitness {
    pub c: f64,
    /// Number of components below the split.
    pub below: usize,
}

/// First gap wider than π between the t-ranges of finite components.
pub fn vertical_separation_check(curve: &BoundaryCurve) -> Option<SeparationWitness> {
    if curve.components.len() < 2 || !curve.components.iter().all(|c| c.is_finite()) {
        return None;
    }
    let mut ranges: Vec<(f64, f64)> = curve.components.iter().filter_map(|c| c.t_range()).collect();
    ranges.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut top = ranges[0].1;
    for (i, r) in ranges.iter().enumerate().skip(1) {
        let gap = r.0 - top;
        if gap > PI {
            return Some(SeparationWitness {
                c: top + (gap - PI) / 2.0,
                below: i,
            });
        }
        top = top.max(r.1);
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AreaRow {
    pub m: f64,
    pub a_m: f64,
    pub b_m: f64,
    pub c_m: f64,
    /// `2m·a_m`: area of the vertical pieces.
    pub lhs: f64,
    /// `2m·b_m + 4(k−1)π`: area bound for the competitor.
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AreaDemo {
    pub k: usize,
    pub rows: Vec<AreaRow>,
    pub crossover_m: Option<f64>,
    pub c_limit: f64,
    /// Radii at which some geodesic misses the disk; no row is produced.
    pub skipped: Vec<f64>,
}

impl AreaDemo {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("m,a_m,b_m,c_m,lhs,bound\n");
        for r in &self.rows {
            s.push_str(&format!("{},{},{},{},{},{}\n", r.m, r.a_m, r.b_m, r.c_m, r.lhs, r.bound));
        }
        s
    }

    pub fn is_monotone(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].c_m >= w[0].c_m)
    }
}

/// The alternating polygon whose α sides are `gs`.
pub fn alternating_hull(gs: &[Geodesic]) -> Result<AlternatingPolygon, ConstructError> {
    if gs.len() < 2 {
        return Err(ConstructError::TooFew { need: 2, got: gs.len() });
    }
    let pts: Vec<IdealPoint> = gs.iter().flat_map(|g| g.endpoints()).collect();
    let hull = IdealPolygon::hull_of(&pts)?;
    if hull.len() != pts.len() {
        return Err(ConstructError::NotAlternating);
    }
    let mut fs = faces(&hull, gs)?;
    if fs.len() != 1 {
        return Err(ConstructError::NotAlternating);
    }
    Ok(fs.remove(0))
}

/// Truncations of the cap geodesics to the disk of radius `m` against the
/// chords joining consecutive truncation points.
pub fn area_demo(gs: &[Geodesic], m_values: &[f64]) -> Result<AreaDemo, ConstructError> {
    let poly = alternating_hull(gs)?;
    let k = gs.len();
    let th = poly.polygon().angles();
    let n = th.len();
    let mut ms: Vec<f64> = m_values.to_vec();
    if ms.iter().any(|m| !(m.is_finite() && *m > 0.0)) {
        return Err(ConstructError::BadParameter("radii must be positive".into()));
    }
    ms.sort_by(f64::total_cmp);
    let sides: Vec<Geodesic> = poly.polygon().sides();
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    'radii: for &m in &ms {
        // crossing angle of each α side near each of its endpoints
        let mut near = vec![[0.0f64; 2]; n];
        for i in (0..n).filter(|&i| poly.is_alpha(i)) {
            let g = sides[i];
            let CircleHit::Pair { near_p, near_q } = circle_intersection_angles(&g, m) else {
                skipped.push(m);
                continue 'radii;
            };
            let at = |theta: f64| if g.p() == IdealPoint::at(theta) { near_p } else { near_q };
            near[i] = [at(th[i]), at(th[(i + 1) % n])];
        }
        let a_m: f64 = (0..n).filter(|&i| poly.is_alpha(i)).map(|i| clipped_length(&sides[i], m)).sum();
        let b_m: f64 = (0..n)
            .filter(|&i| !poly.is_alpha(i))
            .map(|i| {
                let prev = (i + n - 1) % n;
                let next = (i + 1) % n;
                distance_on_circle(m, near[prev][1], near[next][0])
            })
            .sum();
        rows.push(AreaRow {
            m,
            a_m,
            b_m,
            c_m: a_m - b_m,
            lhs: 2.0 * m * a_m,
            bound: 2.0 * m * b_m + 4.0 * (k as f64 - 1.0) * PI,
        });
    }
    let crossover_m = rows.iter().find(|r| r.lhs > r.bound).map(|r| r.m);
    Ok(AreaDemo {
        k,
        rows,
        crossover_m,
        c_limit: ab_gap(&poly),
        skipped,
    })
}
