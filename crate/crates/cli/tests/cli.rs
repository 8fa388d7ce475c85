use std::path::PathBuf;
use std::process::{Command, Output};

use plateau_core::construct::{infinite_rectangle, knoid, regular_polygon, scherk_curve, ArcSide};
use plateau_core::document::parse_curve;
use plateau_core::{BoundaryCurve, Cap, Geodesic};

fn plateau(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plateau"))
        .args(args)
        .env_remove("PLATEAU_SEED")
        .output()
        .expect("binary runs")
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn scratch(name: &str, body: &[u8]) -> String {
    let p = std::env::temp_dir().join(format!("plateau-cli-{}-{name}", std::process::id()));
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn generators_round_trip() {
    let out = plateau(&["generate", "rectangle", "--from", "0.3", "--to", "1.9", "--t0", "-0.5"]);
    assert_eq!(code(&out), 0);
    let g = Geodesic::from_angles(0.3, 1.9).unwrap();
    let want = BoundaryCurve::new(vec![infinite_rectangle(&g, -0.5, Cap::Plus, ArcSide::Short)]);
    assert_eq!(parse_curve(&stdout(&out)).unwrap(), want);

    let out = plateau(&["generate", "knoid", "--k", "3", "--fraction", "0.9"]);
    assert_eq!(parse_curve(&stdout(&out)).unwrap(), knoid(3, 0.9).unwrap());

    let out = plateau(&["generate", "scherk", "--n", "3", "--cap", "-"]);
    let want = BoundaryCurve::new(vec![scherk_curve(&regular_polygon(3).unwrap(), Cap::Minus)]);
    assert_eq!(parse_curve(&stdout(&out)).unwrap(), want);

    let out = plateau(&["generate", "from-caps", "--spec", &fixture("nested_spec.json")]);
    assert_eq!(code(&out), 0);
    assert!(parse_curve(&stdout(&out)).is_ok());
}

#[test]
fn classify_exit_codes() {
    let cases = [
        ("infinite_rectangle.json", 0),
        ("knoid_k2.json", 1),
        ("two_circles_gap3.json", 1),
        ("scherk_hexagon.json", 2),
        ("two_circles_gap_pi.json", 2),
        ("two_circles_gap_pi_plus.json", 0),
    ];
    for (name, want) in cases {
        assert_eq!(code(&plateau(&["classify", &fixture(name)])), want, "{name}");
    }
}

#[test]
fn generated_curves_classify_through_a_pipe() {
    let out = plateau(&["generate", "scherk", "--n", "3"]);
    let path = scratch("scherk.json", &out.stdout);
    let res = plateau(&["classify", &path, "--json"]);
    assert_eq!(code(&res), 2);
    let v: serde_json::Value = serde_json::from_slice(&res.stdout).unwrap();
    assert_eq!(v["verdict"], "exceptional");
    assert_eq!(v["cause"], "exact_face");
}

#[test]
fn invalid_input_exits_3() {
    assert_eq!(code(&plateau(&["classify", "/nonexistent/curve.json"])), 3);
    let bad = scratch("bad.json", b"{ not json");
    assert_eq!(code(&plateau(&["classify", &bad])), 3);
    let open = scratch(
        "open.json",
        br#"{"components": [{"segments": [{"kind": "vertical_ray", "theta": 1.0, "t_start": 0.0, "cap": "+"}]}]}"#,
    );
    let out = plateau(&["classify", &open]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("invalid"));
    assert_eq!(code(&plateau(&["no-such-command"])), 3);
    assert_eq!(code(&plateau(&["--help"])), 0);
    assert_eq!(code(&plateau(&["cover", &fixture("fat_quadrilateral.json"), "--style", "special", "--i0", "7"])), 3);
}

#[test]
fn certificate_file_is_written() {
    let cert = std::env::temp_dir().join(format!("plateau-cli-{}-cert.json", std::process::id()));
    let cert_s = cert.to_string_lossy().into_owned();
    let out = plateau(&["classify", &fixture("infinite_rectangle.json"), "--certificate", &cert_s]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(v["verdict"], "strongly_fillable");
    assert_eq!(v["certificate"]["complete"], true);
}

#[test]
fn cover_reports_and_rejects() {
    let out = plateau(&["cover", &fixture("fat_quadrilateral.json")]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["coverage"], 1.0);
    assert!(v["max_residual"].as_f64().unwrap() <= 1e-9);
    assert_eq!(code(&plateau(&["cover", &fixture("skinny_quadrilateral.json")])), 1);
}

#[test]
fn area_demo_table() {
    let out = plateau(&["demo", "area", "--m-list", "2,4,6"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("m,a_m,b_m,c_m,lhs,bound"));
    assert_eq!(lines.filter(|l| !l.starts_with('#') && !l.is_empty()).count(), 3);
    assert!(text.contains("# crossover at m = 2"));
}

#[test]
fn trap_command() {
    let xi = fixture("regular_hexagon.json");
    let out = plateau(&["trap", &fixture("trapped_curve.json"), "--xi", &xi]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("not fillable (trapped)"));
    let out = plateau(&["trap", &fixture("infinite_rectangle.json"), "--xi", &xi]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("not trapped"));
}

#[test]
fn random_caps_follow_the_seed() {
    let run = |seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_plateau"))
            .args(["generate", "from-caps", "--random"])
            .env("PLATEAU_SEED", seed)
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run("11"), run("11"));
    assert_ne!(run("11"), run("12"));
}

#[test]
fn svg_is_deterministic() {
    let a = std::env::temp_dir().join(format!("plateau-cli-{}-a.svg", std::process::id()));
    let b = std::env::temp_dir().join(format!("plateau-cli-{}-b.svg", std::process::id()));
    for p in [&a, &b] {
        let out = plateau(&[
            "render",
            &fixture("nested_caps.json"),
            "--svg",
            &p.to_string_lossy(),
            "--layers",
            "all",
        ]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    }
    let (sa, sb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(sa, sb);
    let text = String::from_utf8_lossy(&sa);
    assert!(text.starts_with("<?xml") && text.contains("<svg"));
    assert!(text.trim_end().ends_with("</svg>"));
}
