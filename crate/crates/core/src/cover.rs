//! Coverings of fat polygons and corner regions by exact polygons.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kernel::{ccw_delta, normalize_angle, Geodesic, IdealPoint};
use crate::polygon::{
    ab_gap, classify_fatness, AlternatingPolygon, Fatness, IdealPolygon, PolygonError,
};
use crate::solve::{bisect, bracket_unit, Root};
use crate::{TOL_EXACT, TOL_GEOM};

/// Most fill-in pieces the special covering may add.
pub const MAX_FILL_INS: usize = 8;

/// Samples used while choosing fill-in pieces.
const FILL_IN_SAMPLES: usize = 4000;
const FILL_IN_SEED: u64 = 0x5eed_f111;

/// Points of the search arc checked for monotonicity before bisecting.
const MONOTONE_SAMPLES: usize = 32;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoverError {
    #[error("polygon is not fat (a - b = {gap})")]
    NotFat { gap: f64 },
    #[error("no sign change found for piece {piece}")]
    BisectionFailed { piece: usize },
    #[error("exactness equation of piece {piece} is not monotone along its search arc")]
    NonMonotone { piece: usize },
    #[error("{} sample points remain uncovered after {pieces} pieces", uncovered.len())]
    CoverageIncomplete { uncovered: Vec<[f64; 2]>, pieces: usize },
    #[error("alpha side index {index} out of range (polygon has {sides} alpha sides)")]
    IndexOutOfRange { index: usize, sides: usize },
    #[error("corner region needs at least one corner point")]
    NoCornerPoints,
    #[error("corner point {0} is not strictly inside the arc beyond the base side")]
    CornerOutsideArc(f64),
    #[error(transparent)]
    Polygon(#[from] PolygonError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoverStyle {
    PerVertex,
    Special,
    Corner,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VertexMove {
    pub vertex: usize,
    pub from: f64,
    pub to: f64,
}

/// How one piece was obtained from the covered polygon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PieceMove {
    pub piece: usize,
    pub parameter: f64,
    pub residual: f64,
    pub iterations: usize,
    pub displaced: Vec<VertexMove>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactCovering {
    pub style: CoverStyle,
    pub pieces: Vec<AlternatingPolygon>,
    pub moves: Vec<PieceMove>,
    /// Trailing pieces added to fill uncovered middle parts.
    pub fill_ins: usize,
}

impl ExactCovering {
    pub fn max_residual(&self) -> f64 {
        self.moves.iter().map(|m| m.residual).fold(0.0, f64::max)
    }

    pub fn without_piece(&self, i: usize) -> Self {
        let mut c = self.clone();
        c.pieces.remove(i);
        c.moves.remove(i);
        c
    }
}

/// Solve `ab_gap(build(s)) = 0` on `s ∈ (0, 1)`.
fn solve_piece<F>(piece: usize, build: F) -> Result<(AlternatingPolygon, Root), CoverError>
where
    F: Fn(f64) -> Option<AlternatingPolygon>,
{
    let f = |s: f64| build(s).map(|p| ab_gap(&p)).unwrap_or(f64::NAN);
    let vals: Vec<f64> = (1..=MONOTONE_SAMPLES)
        .map(|k| f(k as f64 / (MONOTONE_SAMPLES + 1) as f64))
        .filter(|v| v.is_finite())
        .collect();
    if vals.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CoverError::NonMonotone { piece });
    }
    let (lo, hi) = bracket_unit(f).ok_or(CoverError::BisectionFailed { piece })?;
    let root = bisect(f, lo, hi, TOL_EXACT * 0.5);
    if root.residual > TOL_EXACT {
        return Err(CoverError::BisectionFailed { piece });
    }
    let poly = build(root.x).ok_or(CoverError::BisectionFailed { piece })?;
    Ok((poly, root))
}

fn require_fat(p: &AlternatingPolygon) -> Result<(), CoverError> {
    if classify_fatness(p, TOL_EXACT) != Fatness::Fat {
        return Err(CoverError::NotFat { gap: ab_gap(p) });
    }
    Ok(())
}

fn moved(p: &AlternatingPolygon, changes: &[(usize, f64)]) -> Option<AlternatingPolygon> {
    let mut v: Vec<IdealPoint> = p.polygon().vertices().to_vec();
    for &(i, theta) in changes {
        v[i] = IdealPoint::new(theta).ok()?;
    }
    p.with_vertices(v).ok()
}

/// One exact piece per vertex: the vertex slides into the neighbouring β arc
/// until `a = b`.
pub fn exact_cover_per_vertex(p: &AlternatingPolygon) -> Result<ExactCovering, CoverError> {
    require_fat(p)?;
    let n = p.len();
    let th = p.polygon().angles();
    let mut pieces = Vec::with_capacity(n);
    let mut moves = Vec::with_capacity(n);
    for j in 0..n {
        // the start of an α side moves clockwise, the end counterclockwise
        let d = if p.is_alpha(j) {
            -ccw_delta(th[(j + n - 1) % n], th[j])
        } else {
            ccw_delta(th[j], th[(j + 1) % n])
        };
        let build = |s: f64| moved(p, &[(j, th[j] + s * d)]);
        let (piece, root) = solve_piece(j, build)?;
        moves.push(PieceMove {
            piece: j,
            parameter: root.x,
            residual: root.residual,
            iterations: root.iterations,
            displaced: vec![VertexMove {
                vertex: j,
                from: th[j],
                to: piece.polygon().vertices()[j].theta(),
            }],
        });
        pieces.push(piece);
    }
    Ok(ExactCovering {
        style: CoverStyle::PerVertex,
        pieces,
        moves,
        fill_ins: 0,
    })
}

/// α side index owning vertex `v`.
fn alpha_of(p: &AlternatingPolygon, v: usize) -> usize {
    let n = p.len();
    let start = if p.is_alpha(v) { v } else { (v + n - 1) % n };
    // α sides are every other side; number them from the first α side
    let first = if p.is_alpha(0) { 0 } else { 1 };
    ((start + n - first) % n) / 2
}

/// Piece where every β side shrinks: its two endpoints move toward each other,
/// splitting the arc in proportion to the weights of their α sides. `λ = 1`
/// collapses every β side whose weights are not both zero.
fn weighted_piece(p: &AlternatingPolygon, weights: &[f64], lambda: f64) -> Option<AlternatingPolygon> {
    let n = p.len();
    let th = p.polygon().angles();
    let mut changes = Vec::new();
    for e in 0..n {
        if p.is_alpha(e) {
            continue;
        }
        // β side from vertex e to e + 1
        let f = (e + 1) % n;
        let (wa, wb) = (weights[alpha_of(p, e)], weights[alpha_of(p, f)]);
        if wa + wb == 0.0 {
            continue;
        }
        let len = ccw_delta(th[e], th[f]);
        if wa > 0.0 {
            changes.push((e, th[e] + lambda * len * wa / (wa + wb)));
        }
        if wb > 0.0 {
            changes.push((f, th[f] - lambda * len * wb / (wa + wb)));
        }
    }
    moved(p, &changes)
}

fn solve_weighted(p: &AlternatingPolygon, weights: &[f64], piece: usize) -> Result<(AlternatingPolygon, PieceMove), CoverError> {
    let (poly, root) = solve_piece(piece, |l| weighted_piece(p, weights, l))?;
    let before = p.polygon().angles();
    let after = poly.polygon().angles();
    let displaced = (0..p.len())
        .filter(|&i| before[i] != after[i])
        .map(|i| VertexMove {
            vertex: i,
            from: before[i],
            to: after[i],
        })
        .collect();
    Ok((
        poly,
        PieceMove {
            piece,
            parameter: root.x,
            residual: root.residual,
            iterations: root.iterations,
            displaced,
        },
    ))
}

/// Interior samples: half uniform in the Klein model, half uniform for
/// hyperbolic area, which puts real weight on the cusps.
fn sample_interior<R: Rng>(region: &IdealPolygon, rng: &mut R, count: usize) -> Vec<[f64; 2]> {
    let mut out = Vec::with_capacity(count);
    let klein = count / 2;
    let mut tries = 0usize;
    while out.len() < klein && tries < klein.saturating_mul(10_000) {
        tries += 1;
        let k = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        if k[0] * k[0] + k[1] * k[1] < 1.0 && region.contains_klein(k) {
            out.push(k);
        }
    }
    let v = region.vertices();
    while out.len() < count && v.len() >= 3 {
        // fan triangle (v0, v_i, v_i+1); every ideal triangle has area π
        let i = rng.gen_range(1..v.len() - 1);
        let k = sample_ideal_triangle(rng, [v[0].theta(), v[i].theta(), v[i + 1].theta()]);
        if region.contains_klein(k) {
            out.push(k);
        }
    }
    out
}

/// Area-uniform point of the ideal triangle with counterclockwise vertices at
/// `th`, drawn in the half-plane triangle `(0, 1, ∞)` and mapped to the disk.
/// Depth into the cusp at `∞` is capped at a factor of `1e4`.
fn sample_ideal_triangle<R: Rng>(rng: &mut R, th: [f64; 3]) -> [f64; 2] {
    // area over dx is dx / sqrt(x(1-x)): arcsine law; then y above the arc with density ∝ 1/y²
    let x = (std::f64::consts::FRAC_PI_2 * rng.gen_range(0.0..1.0f64)).sin().powi(2);
    let floor = (x * (1.0 - x)).sqrt();
    let y = floor / rng.gen_range(1e-4..1.0f64);
    let [a, b, c] = th.map(|t| Complex64::from_polar(1.0, t));
    let d = (c - b) / (b - a);
    let z = Complex64::new(x, y);
    let w = (c * z + a * d) / (z + d);
    let s = 2.0 / (1.0 + w.norm_sqr());
    [w.re * s, w.im * s]
}

fn covered_by(pieces: &[AlternatingPolygon], k: [f64; 2]) -> bool {
    pieces.iter().any(|d| d.polygon().contains_klein(k))
}

/// Covering with one primary piece per α side: that side stays fixed while the
/// other vertices move into the β arcs, so every β side of every piece lies
/// outside the polygon. Fill-in pieces are added greedily for uncovered parts.
/// Pieces are listed starting from α side `i0`.
pub fn exact_cover_special(p: &AlternatingPolygon, i0: usize) -> Result<ExactCovering, CoverError> {
    let n = p.half();
    if i0 >= n {
        return Err(CoverError::IndexOutOfRange { index: i0, sides: n });
    }
    require_fat(p)?;
    let mut pieces = Vec::new();
    let mut moves = Vec::new();
    for r in 0..n {
        let i = (i0 + r) % n;
        let mut w = vec![1.0; n];
        w[i] = 0.0;
        let (poly, mv) = solve_weighted(p, &w, pieces.len())?;
        pieces.push(poly);
        moves.push(mv);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(FILL_IN_SEED);
    let samples = sample_interior(p.polygon(), &mut rng, FILL_IN_SAMPLES);
    let mut uncovered: Vec<[f64; 2]> = samples.into_iter().filter(|&k| !covered_by(&pieces, k)).collect();
    let mut candidates: Vec<Vec<f64>> = vec![vec![1.0; n]];
    for scale in [0.5, 2.0, 0.25, 4.0] {
        for i in 0..n {
            let mut w = vec![1.0; n];
            w[i] = scale;
            candidates.push(w);
        }
    }
    let mut fill_ins = 0;
    while !uncovered.is_empty() && fill_ins < MAX_FILL_INS {
        let mut best: Option<(usize, AlternatingPolygon, PieceMove)> = None;
        for w in &candidates {
            let Ok((poly, mv)) = solve_weighted(p, w, pieces.len()) else {
                continue;
            };
            let gain = uncovered.iter().filter(|&&k| poly.polygon().contains_klein(k)).count();
            if gain > 0 && best.as_ref().map_or(true, |b| gain > b.0) {
                best = Some((gain, poly, mv));
            }
        }
        let Some((_, poly, mv)) = best else { break };
        uncovered.retain(|&k| !poly.polygon().contains_klein(k));
        pieces.push(poly);
        moves.push(mv);
        fill_ins += 1;
    }
    if !uncovered.is_empty() {
        return Err(CoverError::CoverageIncomplete {
            uncovered,
            pieces: pieces.len(),
        });
    }
    Ok(ExactCovering {
        style: CoverStyle::Special,
        pieces,
        moves,
        fill_ins,
    })
}

/// A base side `τ` together with corner points in the arc beyond it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CornerRegionSpec {
    /// Counterclockwise arc `(from, to)` beyond the base side.
    pub from: f64,
    pub to: f64,
    pub corners: Vec<f64>,
}

impl CornerRegionSpec {
    pub fn new(from: f64, to: f64, corners: Vec<f64>) -> Result<Self, CoverError> {
        let (from, to) = (normalize_angle(from), normalize_angle(to));
        let span = ccw_delta(from, to);
        let mut cs: Vec<f64> = corners.into_iter().map(normalize_angle).collect();
        for &c in &cs {
            let d = ccw_delta(from, c);
            if d <= TOL_GEOM || d >= span - TOL_GEOM {
                return Err(CoverError::CornerOutsideArc(c));
            }
        }
        cs.sort_by(|a, b| ccw_delta(from, *a).total_cmp(&ccw_delta(from, *b)));
        cs.dedup_by(|a, b| (*a - *b).abs() <= TOL_GEOM);
        Ok(CornerRegionSpec { from, to, corners: cs })
    }

    pub fn base(&self) -> Geodesic {
        Geodesic::from_angles(self.from, self.to).expect("distinct base endpoints")
    }

    /// Hull of the base endpoints and the corner points.
    pub fn region(&self) -> Result<IdealPolygon, PolygonError> {
        let mut v = vec![self.from];
        v.extend(&self.corners);
        v.push(self.to);
        IdealPolygon::from_angles(&v)
    }
}

/// Asymmetry values of the corner family: where each inner β side collapses.
pub const CORNER_SPLITS: [f64; 3] = [0.5, 0.3, 0.7];

fn corner_piece(spec: &CornerRegionSpec, kappa: f64, rho: f64) -> Option<AlternatingPolygon> {
    let e = spec.corners.len();
    let mut o = vec![0.0];
    o.extend(spec.corners.iter().map(|&c| ccw_delta(spec.from, c)));
    o.push(ccw_delta(spec.from, spec.to));
    let mut x = vec![0.0; 2 * e];
    x[0] = o[1] - rho * (o[1] - o[0]);
    x[2 * e - 1] = o[e] + rho * (o[e + 1] - o[e]);
    for j in 1..e {
        let len = o[j + 1] - o[j];
        x[2 * j - 1] = o[j] + rho * kappa * len;
        x[2 * j] = o[j + 1] - rho * (1.0 - kappa) * len;
    }
    let mut angles = vec![spec.from];
    angles.extend(x.iter().map(|d| spec.from + d));
    angles.push(spec.from + o[e + 1]);
    let poly = IdealPolygon::from_angles(&angles).ok()?;
    // side 0 runs from the base endpoint into the first interval: β
    let flags = (0..2 * e + 2).map(|k| k % 2 == 1).collect();
    AlternatingPolygon::new(poly, flags).ok()
}

/// Exact `(2e + 2)`-gons with the base side as an α side, each pair of new
/// vertices straddling one corner point at a common spread.
pub fn corner_cover(spec: &CornerRegionSpec) -> Result<ExactCovering, CoverError> {
    if spec.corners.is_empty() {
        return Err(CoverError::NoCornerPoints);
    }
    let mut pieces = Vec::new();
    let mut moves = Vec::new();
    for (i, &kappa) in CORNER_SPLITS.iter().enumerate() {
        let (poly, root) = solve_piece(i, |rho| corner_piece(spec, kappa, rho))?;
        let angles = poly.polygon().angles();
        moves.push(PieceMove {
            piece: i,
            parameter: root.x,
            residual: root.residual,
            iterations: root.iterations,
            displaced: (1..angles.len() - 1)
                .map(|v| VertexMove {
                    vertex: v,
                    from: spec.corners[(v - 1) / 2],
                    to: angles[v],
                })
                .collect(),
        });
        pieces.push(poly);
    }
    Ok(ExactCovering {
        style: CoverStyle::Corner,
        pieces,
        moves,
        fill_ins: 0,
    })
}

/// Certificate check of a covering.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverReport {
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    pub samples: usize,
    pub covered: usize,
    pub coverage: f64,
    /// No piece interior meets an α side of the covered region.
    pub side_avoidance: bool,
    /// Every β side of every piece avoids the interior of the covered region.
    pub beta_outside: bool,
    pub uncovered: Vec<[f64; 2]>,
}

fn in_closed_arc(x: f64, a: f64, b: f64) -> bool {
    let span = ccw_delta(a, b);
    let d = ccw_delta(a, x);
    d <= span + TOL_GEOM || d >= TAU_MINUS_TOL
}

const TAU_MINUS_TOL: f64 = std::f64::consts::TAU - TOL_GEOM;

/// `true` when `g` misses the open interior of `poly`: both endpoints sit in
/// one closed arc between consecutive vertices.
pub fn avoids_interior(poly: &IdealPolygon, g: &Geodesic) -> bool {
    let th = poly.angles();
    let n = th.len();
    (0..n).any(|i| {
        let (a, b) = (th[i], th[(i + 1) % n]);
        in_closed_arc(g.p().theta(), a, b) && in_closed_arc(g.q().theta(), a, b)
    })
}

fn verify_pieces(
    region: &IdealPolygon,
    alphas: &[Geodesic],
    cov: &ExactCovering,
    samples: usize,
    seed: u64,
) -> CoverReport {
    let residuals: Vec<f64> = cov.pieces.iter().map(|d| ab_gap(d).abs()).collect();
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts = sample_interior(region, &mut rng, samples);
    let mut uncovered = Vec::new();
    let mut covered = 0;
    for k in &pts {
        if covered_by(&cov.pieces, *k) {
            covered += 1;
        } else if uncovered.len() < 16 {
            uncovered.push(*k);
        }
    }
    let side_avoidance = cov
        .pieces
        .iter()
        .all(|d| alphas.iter().all(|a| avoids_interior(d.polygon(), a)));
    let beta_outside = cov
        .pieces
        .iter()
        .all(|d| d.beta_geodesics().iter().all(|b| avoids_interior(region, b)));
    CoverReport {
        residuals,
        max_residual,
        samples: pts.len(),
        covered,
        coverage: if pts.is_empty() {
            1.0
        } else {
            covered as f64 / pts.len() as f64
        },
        side_avoidance,
        beta_outside,
        uncovered,
    }
}

/// Residuals, sampled coverage of `p` and α-side avoidance.
pub fn verify_cover(p: &AlternatingPolygon, cov: &ExactCovering, samples: usize, seed: u64) -> CoverReport {
    verify_pieces(p.polygon(), &p.alpha_geodesics(), cov, samples, seed)
}

/// Same checks against the hull of a corner region, with the base side as the only α side.
pub fn verify_corner_cover(
    spec: &CornerRegionSpec,
    cov: &ExactCovering,
    samples: usize,
    seed: u64,
) -> Result<CoverReport, CoverError> {
    Ok(verify_pieces(&spec.region()?, &[spec.base()], cov, samples, seed))
}
