//! Deterministic SVG: the two caps as Poincaré disks and the cylinder
//! development `[0, 2π] × [-T, T]`.

use std::f64::consts::TAU;
use std::fmt::Write;

use anyhow::{anyhow, bail};

use plateau_core::classify::{classify_with, ClassifyOptions, Witness};
use plateau_core::curve::geom::window_edge;
use plateau_core::curve::{default_band, klein_to_poincare, tall_cover, tall_status, TallStatus};
use plateau_core::kernel::ccw_delta;
use plateau_core::polygon::Fatness;
use plateau_core::{BoundaryCurve, Cap, IdealPolygon, Segment};

const WIDTH: f64 = 1240.0;
const HEIGHT: f64 = 360.0;
const DISK_R: f64 = 140.0;
const CYL_X0: f64 = 660.0;
const CYL_W: f64 = 560.0;
const CYL_Y0: f64 = 30.0;
const CYL_H: f64 = 300.0;
/// Upper bound on drawn tall rectangles.
const MAX_RECTS: usize = 4000;

#[derive(Debug, Default, Clone, Copy)]
pub struct Layers {
    pub curve: bool,
    pub hulls: bool,
    pub faces: bool,
    pub coverings: bool,
    pub tall: bool,
    pub witnesses: bool,
}

impl Layers {
    pub fn parse(names: &[String]) -> anyhow::Result<Self> {
        let mut l = Layers::default();
        for n in names {
            match n.trim() {
                "curve" => l.curve = true,
                "hulls" => l.hulls = true,
                "faces" => l.faces = true,
                "coverings" => l.coverings = true,
                "tall" => l.tall = true,
                "witnesses" => l.witnesses = true,
                "all" => {
                    l = Layers {
                        curve: true,
                        hulls: true,
                        faces: true,
                        coverings: true,
                        tall: true,
                        witnesses: true,
                    }
                }
                other => bail!("unknown layer {other:?}"),
            }
        }
        Ok(l)
    }
}

struct Canvas {
    out: String,
    band: f64,
}

impl Canvas {
    fn disk(&self, cap: Cap, p: [f64; 2]) -> (f64, f64) {
        let cx = match cap {
            Cap::Plus => 160.0,
            Cap::Minus => 480.0,
        };
        (cx + DISK_R * p[0], 180.0 - DISK_R * p[1])
    }

    fn cyl(&self, theta: f64, t: f64) -> (f64, f64) {
        let t = t.clamp(-self.band, self.band);
        (CYL_X0 + CYL_W * theta / TAU, CYL_Y0 + CYL_H * (self.band - t) / (2.0 * self.band))
    }

    fn path(&mut self, pts: &[(f64, f64)], closed: bool, style: &str) {
        if pts.len() < 2 {
            return;
        }
        let mut d = String::new();
        for (i, (x, y)) in pts.iter().enumerate() {
            let _ = write!(d, "{}{:.2} {:.2}", if i == 0 { "M" } else { " L" }, x, y);
        }
        if closed {
            d.push_str(" Z");
        }
        let _ = writeln!(self.out, r#"<path d="{d}" {style}/>"#);
    }

    fn dot(&mut self, (x, y): (f64, f64), r: f64, fill: &str) {
        let _ = writeln!(self.out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="{r}" fill="{fill}"/>"#);
    }

    /// Geodesic between Klein points, sampled in the Poincaré picture.
    fn chord(&self, cap: Cap, a: [f64; 2], b: [f64; 2]) -> Vec<(f64, f64)> {
        (0..=32)
            .map(|i| {
                let s = i as f64 / 32.0;
                let k = [a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])];
                self.disk(cap, klein_to_poincare(k))
            })
            .collect()
    }

    fn ideal_polygon(&self, cap: Cap, poly: &IdealPolygon) -> Vec<(f64, f64)> {
        let k = poly.klein_vertices();
        let n = k.len();
        (0..n).flat_map(|i| self.chord(cap, k[i], k[(i + 1) % n])).collect()
    }

    fn corner_arc(&self, cap: Cap, from: f64, to: f64) -> Vec<(f64, f64)> {
        let span = ccw_delta(from, to);
        (0..=48)
            .map(|i| {
                let a = from + span * i as f64 / 48.0;
                self.disk(cap, [a.cos(), a.sin()])
            })
            .collect()
    }

    fn cylinder_polyline(&mut self, pts: &[[f64; 2]], style: &str) {
        for w in pts.windows(2) {
            for (a, b) in window_edge(w[0], w[1]) {
                let p = [self.cyl(a[0], a[1]), self.cyl(b[0], b[1])];
                self.path(&p, false, style);
            }
        }
    }
}

fn frame(c: &mut Canvas) {
    for cap in Cap::both() {
        let (x, y) = c.disk(cap, [0.0, 0.0]);
        let _ = writeln!(
            c.out,
            r##"<circle cx="{x:.2}" cy="{y:.2}" r="{DISK_R}" fill="none" stroke="#888"/>"##
        );
        let _ = writeln!(
            c.out,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle" font-size="14">cap {}</text>"#,
            y + DISK_R + 24.0,
            cap.symbol()
        );
    }
    let _ = writeln!(
        c.out,
        r##"<rect x="{CYL_X0}" y="{CYL_Y0}" width="{CYL_W}" height="{CYL_H}" fill="none" stroke="#888"/>"##
    );
    let _ = writeln!(
        c.out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="14">cylinder, |t| &lt;= {:.3}</text>"#,
        CYL_X0 + CYL_W / 2.0,
        CYL_Y0 + CYL_H + 24.0,
        c.band
    );
}

fn draw_curve(c: &mut Canvas, curve: &BoundaryCurve) {
    let style = r#"fill="none" stroke="black" stroke-width="2""#;
    for s in curve.segments() {
        match s {
            Segment::CylinderArc { points } => {
                let pts: Vec<[f64; 2]> = points.iter().map(|p| [p.theta, p.t]).collect();
                c.cylinder_polyline(&pts, style);
            }
            Segment::VerticalRay { theta, t_start, cap } => {
                let end = cap.sign() * c.band;
                c.cylinder_polyline(&[[*theta, *t_start], [*theta, end]], style);
                let p = c.disk(*cap, [theta.cos(), theta.sin()]);
                c.dot(p, 3.0, "black");
            }
            Segment::CapGeodesic { cap, endpoints } => {
                let k = |a: f64| [a.cos(), a.sin()];
                let pts = c.chord(*cap, k(endpoints[0]), k(endpoints[1]));
                c.path(&pts, false, style);
            }
            Segment::CapArc { cap, points } => {
                let pts: Vec<(f64, f64)> = points.iter().map(|p| c.disk(*cap, *p)).collect();
                c.path(&pts, false, style);
            }
            Segment::CornerPoint { cap, theta } => {
                let p = c.disk(*cap, [theta.cos(), theta.sin()]);
                c.dot(p, 4.0, "black");
            }
            Segment::CornerArc { cap, interval } => {
                let pts = c.corner_arc(*cap, interval[0], interval[1]);
                c.path(&pts, false, r#"fill="none" stroke="black" stroke-width="4""#);
            }
        }
    }
}

fn fill_for(f: Fatness) -> &'static str {
    match f {
        Fatness::Fat => "#9c9",
        Fatness::Skinny => "#e99",
        Fatness::Exact => "#fc8",
    }
}

/// Render the selected layers. Output depends only on the inputs.
pub fn render(curve: &BoundaryCurve, band: Option<f64>, layers: &Layers, seed: u64) -> anyhow::Result<String> {
    let band = band.unwrap_or_else(|| default_band(curve));
    if !(band.is_finite() && band > 0.0) {
        return Err(anyhow!("band must be positive"));
    }
    let mut c = Canvas {
        out: String::new(),
        band,
    };
    let _ = writeln!(
        c.out,
        r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">
<rect width="100%" height="100%" fill="white"/>"#
    );
    frame(&mut c);

    let opts = ClassifyOptions {
        certificate: layers.coverings,
        seed,
        ..ClassifyOptions::default()
    };
    let cls = classify_with(curve, &opts).ok();

    if layers.tall && tall_status(plateau_core::curve::height(curve).value()) == TallStatus::Tall {
        if let Ok(cover) = tall_cover(curve, band) {
            let _ = writeln!(c.out, r#"<g id="tall">"#);
            for r in cover.rectangles().take(MAX_RECTS) {
                let (x0, y0) = c.cyl(r.theta_interval[0], r.t_interval[1]);
                let (x1, y1) = c.cyl(r.theta_interval[1], r.t_interval[0]);
                let _ = writeln!(
                    c.out,
                    r##"<rect x="{x0:.2}" y="{y0:.2}" width="{:.2}" height="{:.2}" fill="#cde" stroke="none" fill-opacity="0.5"/>"##,
                    x1 - x0,
                    y1 - y0
                );
            }
            let _ = writeln!(c.out, "</g>");
        }
    }
    if let Some(cls) = &cls {
        if layers.faces {
            let _ = writeln!(c.out, r#"<g id="faces">"#);
            for cap in &cls.caps {
                for f in &cap.faces {
                    let pts = c.ideal_polygon(cap.cap, f.polygon.polygon());
                    let style = format!(r#"fill="{}" stroke="none""#, fill_for(f.fatness));
                    c.path(&pts, true, &style);
                }
            }
            let _ = writeln!(c.out, "</g>");
        }
        if layers.hulls {
            let _ = writeln!(c.out, r#"<g id="hulls">"#);
            for cap in &cls.caps {
                if let Some(h) = cap.extended_hull.as_ref().or(cap.hull.as_ref()) {
                    let pts = c.ideal_polygon(cap.cap, h);
                    c.path(&pts, true, r##"fill="none" stroke="#666" stroke-dasharray="4 3""##);
                }
            }
            let _ = writeln!(c.out, "</g>");
        }
        if layers.coverings {
            if let Some(cert) = &cls.certificate {
                let _ = writeln!(c.out, r#"<g id="coverings">"#);
                for fc in &cert.faces {
                    for piece in &fc.covering.pieces {
                        let pts = c.ideal_polygon(fc.cap, piece.polygon());
                        c.path(&pts, true, r##"fill="none" stroke="#36c" stroke-width="0.8""##);
                    }
                }
                for cc in &cert.corners {
                    for piece in &cc.covering.pieces {
                        let pts = c.ideal_polygon(cc.cap, piece.polygon());
                        c.path(&pts, true, r##"fill="none" stroke="#93c" stroke-width="0.8""##);
                    }
                }
                let _ = writeln!(c.out, "</g>");
            }
        }
    }
    if layers.curve {
        let _ = writeln!(c.out, r#"<g id="curve">"#);
        draw_curve(&mut c, curve);
        let _ = writeln!(c.out, "</g>");
    }
    if let (true, Some(cls)) = (layers.witnesses, &cls) {
        let _ = writeln!(c.out, r#"<g id="witnesses">"#);
        let red = r##"fill="none" stroke="#d00" stroke-width="3""##;
        for w in &cls.witnesses {
            match w {
                Witness::Height {
                    theta: Some(th),
                    interval: Some(iv),
                    ..
                } => c.cylinder_polyline(&[[*th, iv[0]], [*th, iv[1]]], red),
                Witness::ThinTail(tail) => c.cylinder_polyline(&tail.arc, red),
                Witness::CornerArc { cap, interval } => {
                    let pts = c.corner_arc(*cap, interval[0], interval[1]);
                    c.path(&pts, false, red);
                }
                Witness::SharedEndpoint { cap, theta } => {
                    let p = c.disk(*cap, [theta.cos(), theta.sin()]);
                    c.dot(p, 6.0, "#d00");
                }
                Witness::Face { cap, vertices, .. } => {
                    if let Ok(poly) = IdealPolygon::from_angles(vertices) {
                        let pts = c.ideal_polygon(*cap, &poly);
                        c.path(&pts, true, red);
                    }
                }
                _ => {}
            }
        }
        let _ = writeln!(c.out, "</g>");
    }
    c.out.push_str("</svg>\n");
    Ok(c.out)
}
