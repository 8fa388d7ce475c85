//! `plateau`: classify curves at infinity, emit certificates, generate fixtures,
//! run the area table and render figures.
//!
//! Exit codes: 0 strongly fillable / success, 1 not strongly fillable, 2
//! exceptional or borderline, 3 invalid input.

/// Write to stdout; a closed pipe is not an error worth a panic.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout().lock(), $($arg)*);
    }};
}

mod render;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use plateau_core::classify::{
    classify_with, fillable_union_check, CapAnalysis, ClassifyOptions, ExceptionalCause, FatStatus, Witness,
};
use plateau_core::construct::{
    area_demo, generate_from_caps, infinite_rectangle, knoid, random_cap_spec, regular_polygon, scherk_curve,
    trap_report, vertical_separation_check, ArcSide, CapSpec, TrapRegion,
};
use plateau_core::cover::{exact_cover_per_vertex, exact_cover_special, verify_cover, CoverError};
use plateau_core::curve::{HeightReport, TallStatus};
use plateau_core::document::{parse_cap_spec, parse_curve, parse_polygon, CurveDocument, PolygonDocument};
use plateau_core::{BoundaryCurve, Cap, Geodesic, Reason, Verdict};

#[derive(Parser)]
#[command(name = "plateau", version, about = "Strong fillability of curves at infinity of H2xR")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a curve document.
    Classify(ClassifyArgs),
    /// Emit a curve document on stdout.
    #[command(subcommand)]
    Generate(Generate),
    /// Demonstrators.
    #[command(subcommand)]
    Demo(Demo),
    /// Exact covering of a fat polygon.
    Cover(CoverArgs),
    /// Three-panel SVG of a curve.
    Render(RenderArgs),
    /// Test whether a curve is trapped by a Scherk curve.
    Trap(TrapArgs),
}

#[derive(Args)]
struct ClassifyArgs {
    input: PathBuf,
    #[arg(long, default_value_t = plateau_core::TOL_EXACT)]
    tol_exact: f64,
    /// Evaluate regularity with every horoball at this size instead of the small-horoball limit.
    #[arg(long)]
    horoball_scale: Option<f64>,
    #[arg(long, conflicts_with = "text")]
    json: bool,
    #[arg(long)]
    text: bool,
    /// Write the certificate (or the obstruction witnesses) to this file.
    #[arg(long)]
    certificate: Option<PathBuf>,
    /// Also run the trap test against this exact polygon (α sides on cap +).
    #[arg(long)]
    trap: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum CapArg {
    #[value(name = "+", alias = "plus")]
    Plus,
    #[value(name = "-", alias = "minus")]
    Minus,
}

impl From<CapArg> for Cap {
    fn from(c: CapArg) -> Cap {
        match c {
            CapArg::Plus => Cap::Plus,
            CapArg::Minus => Cap::Minus,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Short,
    Long,
}

#[derive(Subcommand)]
enum Generate {
    /// One infinite rectangle per cap geodesic.
    FromCaps {
        /// Cap spec JSON: {"plus": [[a, b], ...], "minus": [...]}.
        #[arg(long, conflicts_with = "random")]
        spec: Option<PathBuf>,
        /// Random spec seeded from PLATEAU_SEED.
        #[arg(long)]
        random: bool,
        #[arg(long, default_value_t = 5)]
        max_per_cap: usize,
    },
    Rectangle {
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        from: f64,
        #[arg(long, default_value_t = 1.2, allow_hyphen_values = true)]
        to: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        t0: f64,
        #[arg(long, value_enum, default_value = "+")]
        cap: CapArg,
        #[arg(long, value_enum, default_value = "short")]
        side: SideArg,
    },
    /// Scherk curve over the regular 2n-gon.
    Scherk {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, value_enum, default_value = "+")]
        cap: CapArg,
    },
    /// Boundary of k symmetric vertical planes.
    Knoid {
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 0.8)]
        fraction: f64,
    },
}

#[derive(Subcommand)]
enum Demo {
    /// Truncated areas of vertical pieces against the competitor bound.
    Area {
        /// Number of geodesics for the built-in symmetric configuration.
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Fraction of each sector spanned by a geodesic (built-in configuration).
        #[arg(long, default_value_t = 0.9)]
        fraction: f64,
        /// Explicit endpoint pairs a1,b1,a2,b2,...
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        angles: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',', default_value = "2,4,6,8,10,12,14,16,18,20")]
        m_list: Vec<f64>,
        #[arg(long, value_enum, default_value = "csv")]
        format: TableFormat,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum StyleArg {
    PerVertex,
    Special,
}

#[derive(Args)]
struct CoverArgs {
    input: PathBuf,
    #[arg(long, value_enum, default_value = "per-vertex")]
    style: StyleArg,
    /// α side listed first in the special covering.
    #[arg(long, default_value_t = 0)]
    i0: usize,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
}

#[derive(Args)]
struct RenderArgs {
    input: PathBuf,
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Half-height of the cylinder panel.
    #[arg(short = 'T', long = "band")]
    band: Option<f64>,
    /// Comma-separated layers: curve, hulls, faces, coverings, tall, witnesses.
    #[arg(long, value_delimiter = ',', default_value = "curve,hulls,faces,witnesses")]
    layers: Vec<String>,
}

#[derive(Args)]
struct TrapArgs {
    input: PathBuf,
    /// Exact polygon document for the Scherk curve.
    #[arg(long)]
    xi: PathBuf,
    #[arg(long, value_enum, default_value = "+")]
    cap: CapArg,
}

/// Failure carrying its exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

fn invalid(e: impl Into<anyhow::Error>) -> Failure {
    Failure {
        code: 3,
        error: e.into(),
    }
}

type Outcome = Result<u8, Failure>;

fn seed() -> u64 {
    std::env::var("PLATEAU_SEED")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(0)
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))
        .map_err(invalid)
}

fn read_curve(path: &Path) -> Result<BoundaryCurve, Failure> {
    parse_curve(&read(path)?)
        .with_context(|| format!("{}", path.display()))
        .map_err(invalid)
}

fn write_out(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text)
        .with_context(|| format!("cannot write {}", path.display()))
        .map_err(invalid)
}

fn verdict_code(v: Verdict) -> u8 {
    match v {
        Verdict::StronglyFillable => 0,
        Verdict::NotStronglyFillable => 1,
        Verdict::Exceptional | Verdict::Borderline => 2,
    }
}

fn snake<T: Serialize>(v: &T) -> String {
    serde_json::to_value(v)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

#[derive(Serialize)]
struct ClassifyReport<'a> {
    verdict: Verdict,
    reasons: &'a [Reason],
    cause: Option<ExceptionalCause>,
    witnesses: &'a [Witness],
    diagnostics: &'a [String],
    height: &'a HeightReport,
    tall: TallStatus,
    fatness: Option<FatStatus>,
    caps: &'a [CapAnalysis],
    certificate_complete: Option<bool>,
}

fn cmd_classify(a: &ClassifyArgs) -> Outcome {
    let curve = read_curve(&a.input)?;
    let opts = ClassifyOptions {
        tol_exact: a.tol_exact,
        horoball_scale: a.horoball_scale,
        certificate: a.certificate.is_some(),
        seed: seed(),
    };
    let mut c = classify_with(&curve, &opts).map_err(invalid)?;
    if c.verdict != Verdict::StronglyFillable && curve.components.len() > 1 && fillable_union_check(&curve) {
        c.diagnostics
            .push("every component is strongly fillable: the union is fillable".into());
    }
    if vertical_separation_check(&curve).is_some() {
        c.diagnostics.push("components are vertically pi-apart: not con-fillable".into());
    }
    if let Some(xi_path) = &a.trap {
        let xi = parse_polygon(&read(xi_path)?).map_err(invalid)?;
        let trap = TrapRegion::new(xi, Cap::Plus).map_err(invalid)?;
        if trap_report(&curve, &trap).trapped {
            c.diagnostics.push("not fillable (trapped)".into());
        }
    }
    if let Some(path) = &a.certificate {
        let body = serde_json::json!({
            "verdict": c.verdict,
            "reasons": c.reasons,
            "witnesses": c.witnesses,
            "certificate": c.certificate,
        });
        write_out(path, &serde_json::to_string_pretty(&body).expect("serializable"))?;
    }
    let report = ClassifyReport {
        verdict: c.verdict,
        reasons: &c.reasons,
        cause: c.cause,
        witnesses: &c.witnesses,
        diagnostics: &c.diagnostics,
        height: &c.height,
        tall: c.tall,
        fatness: c.fatness,
        caps: &c.caps,
        certificate_complete: c.certificate.as_ref().map(|x| x.complete),
    };
    if a.json {
        out!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
    } else {
        out!("verdict: {}", snake(&c.verdict));
        let reasons: Vec<String> = c.reasons.iter().map(snake).collect();
        out!(
            "reasons: {}",
            if reasons.is_empty() {
                "none".to_string()
            } else {
                reasons.join(", ")
            }
        );
        if let Some(cause) = c.cause {
            out!("cause: {}", snake(&cause));
        }
        match c.height.h {
            Some(h) => out!("height: {h} ({})", snake(&c.tall)),
            None => out!("height: inf ({})", snake(&c.tall)),
        }
        if let Some(f) = c.fatness {
            out!("fatness: {}", snake(&f));
        }
        for cap in &c.caps {
            for f in &cap.faces {
                out!(
                    "face {}{}: {} sides, a - b = {:.6e}, {}",
                    cap.cap.symbol(),
                    f.index,
                    f.polygon.len(),
                    f.ab_gap,
                    snake(&f.fatness)
                );
            }
        }
        for w in &c.witnesses {
            out!("witness: {}", serde_json::to_string(w).expect("serializable"));
        }
        for d in &c.diagnostics {
            out!("note: {d}");
        }
        if let Some(cert) = &c.certificate {
            out!("certificate: {}", if cert.complete { "complete" } else { "incomplete" });
        }
    }
    Ok(verdict_code(c.verdict))
}

/// Nested caps on both sides, used when no spec is given.
fn default_spec() -> CapSpec {
    let g = |a: f64, b: f64| Geodesic::from_angles(a, b).expect("distinct");
    CapSpec {
        plus: vec![g(0.2, 0.9), g(1.3, 2.0), g(2.6, 4.2), g(3.0, 3.7)],
        minus: vec![g(0.5, 1.6), g(2.4, 3.5), g(4.4, 5.6)],
    }
}

fn cmd_generate(g: &Generate) -> Outcome {
    let (curve, name) = match g {
        Generate::FromCaps {
            spec,
            random,
            max_per_cap,
        } => {
            let spec = match (spec, random) {
                (Some(p), _) => parse_cap_spec(&read(p)?).map_err(invalid)?,
                (None, true) => random_cap_spec(seed(), *max_per_cap),
                (None, false) => default_spec(),
            };
            (generate_from_caps(&spec).map_err(invalid)?, "from-caps")
        }
        Generate::Rectangle {
            from,
            to,
            t0,
            cap,
            side,
        } => {
            let geo = Geodesic::from_angles(*from, *to).map_err(invalid)?;
            if !t0.is_finite() {
                return Err(invalid(anyhow!("t0 must be finite")));
            }
            let side = match side {
                SideArg::Short => ArcSide::Short,
                SideArg::Long => ArcSide::Long,
            };
            (
                BoundaryCurve::new(vec![infinite_rectangle(&geo, *t0, (*cap).into(), side)]),
                "rectangle",
            )
        }
        Generate::Scherk { n, cap } => {
            let xi = regular_polygon(*n).map_err(invalid)?;
            (BoundaryCurve::new(vec![scherk_curve(&xi, (*cap).into())]), "scherk")
        }
        Generate::Knoid { k, fraction } => (knoid(*k, *fraction).map_err(invalid)?, "knoid"),
    };
    out!("{}", CurveDocument::new(&curve).with_meta("generator", name).to_json());
    Ok(0)
}

fn cmd_demo(d: &Demo) -> Outcome {
    let Demo::Area {
        k,
        fraction,
        angles,
        m_list,
        format,
    } = d;
    let gs: Vec<Geodesic> = match angles {
        Some(v) => {
            if v.len() % 2 != 0 {
                return Err(invalid(anyhow!("--angles needs an even number of values")));
            }
            v.chunks(2)
                .map(|c| Geodesic::from_angles(c[0], c[1]))
                .collect::<Result<_, _>>()
                .map_err(invalid)?
        }
        None => {
            if *k < 2 || !(*fraction > 0.0 && *fraction < 1.0) {
                return Err(invalid(anyhow!("need k >= 2 and 0 < fraction < 1")));
            }
            let sector = std::f64::consts::TAU / *k as f64;
            (0..*k)
                .map(|i| {
                    let c = i as f64 * sector;
                    Geodesic::from_angles(c - fraction * sector / 2.0, c + fraction * sector / 2.0)
                })
                .collect::<Result<_, _>>()
                .map_err(invalid)?
        }
    };
    let demo = area_demo(&gs, m_list).map_err(invalid)?;
    match format {
        TableFormat::Json => out!("{}", serde_json::to_string_pretty(&demo).expect("serializable")),
        TableFormat::Csv => {
            out!("{}", demo.to_csv());
            match demo.crossover_m {
                Some(m) => out!("# crossover at m = {m}"),
                None => out!("# no crossover"),
            }
            out!("# c_limit = {}", demo.c_limit);
        }
    }
    Ok(0)
}

fn cmd_cover(a: &CoverArgs) -> Outcome {
    let poly = parse_polygon(&read(&a.input)?).map_err(invalid)?;
    let cov = match a.style {
        StyleArg::PerVertex => exact_cover_per_vertex(&poly),
        StyleArg::Special => exact_cover_special(&poly, a.i0),
    };
    let cov = match cov {
        Ok(c) => c,
        Err(e @ CoverError::NotFat { .. }) => {
            eprintln!("error: {e}");
            return Ok(1);
        }
        Err(e @ CoverError::IndexOutOfRange { .. }) => return Err(invalid(e)),
        Err(e) => {
            eprintln!("error: {e}");
            return Ok(2);
        }
    };
    let report = verify_cover(&poly, &cov, a.samples, seed());
    let pieces: Vec<_> = cov
        .pieces
        .iter()
        .zip(&report.residuals)
        .map(|(p, r)| serde_json::json!({ "polygon": PolygonDocument::new(p), "residual": r }))
        .collect();
    let out = serde_json::json!({
        "style": cov.style,
        "pieces": pieces,
        "moves": cov.moves,
        "fill_ins": cov.fill_ins,
        "max_residual": report.max_residual,
        "coverage": report.coverage,
        "samples": report.samples,
        "side_avoidance": report.side_avoidance,
    });
    out!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
    Ok(0)
}

fn cmd_render(a: &RenderArgs) -> Outcome {
    let curve = read_curve(&a.input)?;
    let layers = render::Layers::parse(&a.layers).map_err(invalid)?;
    let svg = render::render(&curve, a.band, &layers, seed()).map_err(invalid)?;
    match &a.svg {
        Some(p) => write_out(p, &svg)?,
        None => out!("{svg}"),
    }
    Ok(0)
}

fn cmd_trap(a: &TrapArgs) -> Outcome {
    let curve = read_curve(&a.input)?;
    let xi = parse_polygon(&read(&a.xi)?).map_err(invalid)?;
    let trap = TrapRegion::new(xi, a.cap.into()).map_err(invalid)?;
    let rep = trap_report(&curve, &trap);
    if rep.trapped {
        out!("not fillable (trapped)");
        Ok(1)
    } else {
        let why = if !rep.disjoint {
            "curve meets the Scherk curve"
        } else if rep.seed.is_none() {
            "no cap geodesics on the trap cap"
        } else if !rep.xi_outside_region {
            "the Scherk curve enters the curve's region"
        } else {
            "the curve's region is not on the Scherk side"
        };
        out!("not trapped: {why}");
        Ok(0)
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Classify(a) => cmd_classify(a),
        Command::Generate(g) => cmd_generate(g),
        Command::Demo(d) => cmd_demo(d),
        Command::Cover(a) => cmd_cover(a),
        Command::Render(a) => cmd_render(a),
        Command::Trap(a) => cmd_trap(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
