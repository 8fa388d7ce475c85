//! Random inputs and brute-force oracles shared by the integration suites.
#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use plateau_core::curve::validate;
use plateau_core::kernel::{Decoration, IdealPoint};
use plateau_core::polygon::{ab_gap, is_regular, AlternatingPolygon, IdealPolygon};
use plateau_core::{BoundaryCurve, JordanComponent, Segment};
use rand::Rng;

/// Sorted random angles with every circular gap above `min_gap`.
pub fn random_angles<R: Rng>(rng: &mut R, n: usize, min_gap: f64) -> Vec<f64> {
    loop {
        let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..TAU)).collect();
        v.sort_by(f64::total_cmp);
        let ok = (0..n).all(|i| {
            let next = if i + 1 < n { v[i + 1] } else { v[0] + TAU };
            next - v[i] > min_gap
        });
        if ok {
            return v;
        }
    }
}

pub fn random_alternating<R: Rng>(rng: &mut R, half: usize) -> AlternatingPolygon {
    AlternatingPolygon::alpha_first_angles(&random_angles(rng, 2 * half, 0.02)).unwrap()
}

/// Random fat polygon that is also regular, with the number of fat but
/// non-regular draws that were rejected on the way.
pub fn random_fat_regular<R: Rng>(rng: &mut R, half: usize) -> (AlternatingPolygon, usize) {
    let mut rejected = 0;
    loop {
        let p = random_alternating(rng, half);
        let p = if ab_gap(&p) > 0.0 { p.swapped() } else { p };
        if ab_gap(&p) > -1e-6 {
            continue;
        }
        if is_regular(&p).unwrap().regular {
            return (p, rejected);
        }
        rejected += 1;
    }
}

pub fn random_decoration<R: Rng>(rng: &mut R, pts: &[IdealPoint]) -> Decoration {
    let mut d = Decoration::canonical();
    for p in pts {
        d.set(*p, rng.gen_range(-3.0f64..3.0).exp()).unwrap();
    }
    d
}

fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

fn midpoint<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    (0..n).map(|i| f(a + (i as f64 + 0.5) * h)).sum::<f64>() * h
}

/// `∫_a^{π/2} dφ / sin φ` by quadrature in `log φ`.
fn tail_integral(a: f64) -> f64 {
    simpson(|v: f64| v.exp() / v.exp().sin(), a.ln(), FRAC_PI_2.ln(), 4000)
}

/// Signed `∫_a^b dφ / sin φ` over `(0, π)`.
fn inv_sin_integral(a: f64, b: f64) -> f64 {
    let prim = |x: f64| {
        if x <= FRAC_PI_2 {
            -tail_integral(x)
        } else {
            tail_integral(PI - x)
        }
    };
    prim(b) - prim(a)
}

/// Angle on the semicircle over `[lo, hi]` where it leaves the horoball of
/// Euclidean diameter `sigma` at the left (`φ = π`) or right (`φ = 0`) endpoint.
fn horocycle_exit(lo: f64, hi: f64, left: bool, sigma: f64) -> f64 {
    let c = (lo + hi) / 2.0;
    let r = (hi - lo) / 2.0;
    let at = if left { lo } else { hi };
    let g = |phi: f64| {
        let (px, py) = (c + r * phi.cos(), r * phi.sin());
        (px - at).powi(2) + (py - sigma / 2.0).powi(2) - sigma * sigma / 4.0
    };
    // the semicircle meets the horocycle once besides the tangency, and the
    // opposite endpoint is always outside
    let (mut inside, mut outside) = if left { (PI, 0.0) } else { (0.0, PI) };
    for _ in 0..200 {
        let mid = 0.5 * (inside + outside);
        if g(mid) < 0.0 {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    0.5 * (inside + outside)
}

/// Signed hyperbolic length of the geodesic between boundary coordinates `x`
/// and `y` outside horoballs of diameters `sx`, `sy`, by quadrature.
pub fn truncated_length_numeric(x: f64, y: f64, sx: f64, sy: f64) -> f64 {
    let (lo, s_lo, hi, s_hi) = if x < y { (x, sx, y, sy) } else { (y, sy, x, sx) };
    let phi_left = horocycle_exit(lo, hi, true, s_lo);
    let phi_right = horocycle_exit(lo, hi, false, s_hi);
    inv_sin_integral(phi_right, phi_left)
}

/// Hyperbolic area of an ideal polygon containing the origin, by integrating
/// the Klein-model area form over the fan of Euclidean triangles from the origin.
pub fn polygon_area_numeric(p: &IdealPolygon) -> f64 {
    let th = p.angles();
    let n = th.len();
    let mut total = 0.0;
    for i in 0..n {
        let a = th[i];
        let mut b = th[(i + 1) % n];
        if b <= a {
            b += TAU;
        }
        let half = (b - a) / 2.0;
        assert!(half < FRAC_PI_2, "origin must be inside the polygon");
        // radial integral of ρ/(1-ρ²)^{3/2} up to the chord is 1/sqrt(1-ρ²) - 1;
        // ψ = half·sin(πs/2) removes the endpoint singularities, and the
        // factors half ∓ ψ are formed without cancellation
        let f = |s: f64| {
            let x = FRAC_PI_2 * s;
            let psi = half * x.sin();
            let dpsi = half * FRAC_PI_2 * x.cos();
            let below = 2.0 * half * ((FRAC_PI_2 - x) / 2.0).sin().powi(2);
            let above = 2.0 * half * ((FRAC_PI_2 + x) / 2.0).sin().powi(2);
            (psi.cos() * dpsi / (below.sin() * above.sin()).sqrt()) - dpsi
        };
        total += midpoint(f, -1.0, 1.0, 20000);
    }
    total
}

/// Angular step of the height grid; random curves put their vertices on every
/// tenth grid line.
pub const GRID: usize = 10_000;
pub fn grid_theta(k: i64) -> f64 {
    k as f64 * (TAU / GRID as f64)
}

fn lattice_index<R: Rng>(rng: &mut R) -> i64 {
    10 * rng.gen_range(0..(GRID as i64 / 10))
}

/// Random finite curve: wavy horizontal circles in separate bands, plus star
/// polygons above them, all vertices on the θ lattice.
pub fn random_pl_curve<R: Rng>(rng: &mut R) -> BoundaryCurve {
    loop {
        let mut comps = Vec::new();
        let circles = rng.gen_range(1..=3);
        let mut base = 0.0;
        for _ in 0..circles {
            let amp: f64 = rng.gen_range(0.0..1.0);
            let q = rng.gen_range(3..=12);
            let mut idx: Vec<i64> = (0..q).map(|_| lattice_index(rng)).collect();
            idx.push(0);
            idx.sort();
            idx.dedup();
            let mut pts: Vec<(f64, f64)> = idx
                .iter()
                .map(|&k| (grid_theta(k), base + rng.gen_range(-amp..=amp)))
                .collect();
            pts.push((TAU, pts[0].1));
            comps.push(JordanComponent::new(vec![Segment::cylinder(&pts)]));
            base += 2.0 * amp + rng.gen_range(0.5..6.0);
        }
        let stars = rng.gen_range(0..=2);
        for _ in 0..stars {
            let r_theta: f64 = rng.gen_range(0.2..2.0);
            let r_t: f64 = rng.gen_range(0.2..2.0);
            let centre = lattice_index(rng);
            let tc = base + r_t + rng.gen_range(0.5..3.0);
            let q = rng.gen_range(3..=10);
            let mut pts: Vec<(f64, f64)> = Vec::new();
            for j in 0..q {
                let psi = TAU * (j as f64 + rng.gen_range(-0.3..0.3)) / q as f64;
                let f: f64 = rng.gen_range(0.4..1.0);
                let dk = (r_theta * f * psi.cos() / (TAU / GRID as f64) / 10.0).round() as i64 * 10;
                let p = (grid_theta(centre + dk), tc + r_t * f * psi.sin());
                if pts.last() != Some(&p) {
                    pts.push(p);
                }
            }
            if pts.len() >= 3 {
                comps.push(JordanComponent::closed_polyline(&pts));
            }
            base = tc + r_t + 0.1;
        }
        let c = BoundaryCurve::new(comps);
        if validate(&c).is_ok() {
            return c;
        }
    }
}

fn cylinder_edges(curve: &BoundaryCurve) -> Vec<([f64; 2], [f64; 2])> {
    let mut out = Vec::new();
    for s in curve.segments() {
        if let Segment::CylinderArc { points } = s {
            for w in points.windows(2) {
                out.push(([w[0].theta, w[0].t], [w[1].theta, w[1].t]));
            }
        }
    }
    out
}

pub fn max_slope(curve: &BoundaryCurve) -> f64 {
    cylinder_edges(curve)
        .iter()
        .filter(|(a, b)| a[0] != b[0])
        .map(|(a, b)| ((b[1] - a[1]) / (b[0] - a[0])).abs())
        .fold(0.0, f64::max)
}

/// Smallest bounded gap on the vertical line at `theta`, measured directly.
pub fn gap_at(curve: &BoundaryCurve, theta: f64) -> Option<f64> {
    let mut hits: Vec<(f64, f64)> = Vec::new();
    for (a, b) in cylinder_edges(curve) {
        let (lo, hi) = (a[0].min(b[0]), a[0].max(b[0]));
        let mut s = ((lo - theta) / TAU).ceil();
        while theta + s * TAU <= hi {
            let x = theta + s * TAU;
            if x >= lo {
                if a[0] == b[0] {
                    hits.push((a[1].min(b[1]), a[1].max(b[1])));
                } else {
                    let t = a[1] + (x - a[0]) / (b[0] - a[0]) * (b[1] - a[1]);
                    hits.push((t, t));
                }
            }
            s += 1.0;
        }
    }
    for s in curve.segments() {
        if let Segment::VerticalRay { theta: rt, t_start, cap } = s {
            let d = (rt - theta).rem_euclid(TAU);
            if d < 1e-12 || TAU - d < 1e-12 {
                hits.push(match cap {
                    plateau_core::Cap::Plus => (*t_start, f64::INFINITY),
                    plateau_core::Cap::Minus => (f64::NEG_INFINITY, *t_start),
                });
            }
        }
    }
    hits.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for h in hits {
        match merged.last_mut() {
            Some(m) if h.0 <= m.1 + 1e-12 => m.1 = m.1.max(h.1),
            _ => merged.push(h),
        }
    }
    merged
        .windows(2)
        .map(|w| w[1].0 - w[0].1)
        .fold(None, |acc: Option<f64>, g| Some(acc.map_or(g, |a| a.min(g))))
}

/// Grid estimate of the height over `GRID` uniform lines.
pub fn grid_height(curve: &BoundaryCurve) -> Option<f64> {
    (0..GRID as i64)
        .filter_map(|k| gap_at(curve, grid_theta(k)))
        .fold(None, |acc: Option<f64>, g| Some(acc.map_or(g, |a| a.min(g))))
}

pub fn two_circles(gap: f64) -> BoundaryCurve {
    BoundaryCurve::new(vec![JordanComponent::circle(0.0), JordanComponent::circle(gap)])
}
