mod support;

use std::f64::consts::{PI, TAU};

use plateau_core::classify::{classify_with, fillable_union_check, ClassifyOptions};
use plateau_core::construct::{area_demo, generate_from_caps, random_cap_spec};
use plateau_core::cover::{exact_cover_per_vertex, exact_cover_special, verify_cover, CoverError};
use plateau_core::curve::{decompose, height, validate};
use plateau_core::document::{emit_curve, parse_curve};
use plateau_core::kernel::{clipped_length, point_distance, truncated_length, MobiusMap};
use plateau_core::polygon::{ab_gap, is_regular, truncated_sums, truncated_sums_in};
use plateau_core::{Decoration, Geodesic, HalfPlaneChart, IdealPoint, PlanePoint, Verdict};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn far_apart(a: f64, b: f64) -> bool {
    IdealPoint::at(a).distance(&IdealPoint::at(b)) > 1e-2
}

fn opts() -> ClassifyOptions {
    ClassifyOptions {
        certificate: false,
        ..ClassifyOptions::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn truncated_length_is_chart_free(a in 0.0..TAU, b in 0.0..TAU, p1 in 0.0..TAU, p2 in 0.0..TAU, seed: u64) {
        prop_assume!(far_apart(a, b) && [a, b].iter().all(|&x| far_apart(x, p1) && far_apart(x, p2)));
        let pts = [IdealPoint::at(a), IdealPoint::at(b)];
        let g = Geodesic::new(pts[0], pts[1]).unwrap();
        let (c1, c2) = (HalfPlaneChart::new(p1), HalfPlaneChart::new(p2));
        let d = support::random_decoration(&mut rng(seed), &pts);
        let moved = d.transport(&pts, &c1, &c2).unwrap();
        let l1 = truncated_length(&g, &d, &c1).unwrap();
        let l2 = truncated_length(&g, &moved, &c2).unwrap();
        prop_assert!((l1 - l2).abs() < 1e-8, "{l1} vs {l2}");
    }

    #[test]
    fn shrinking_adds_distance(a in 0.0..TAU, b in 0.0..TAU, s in 0.0..5.0f64) {
        prop_assume!(far_apart(a, b));
        let g = Geodesic::from_angles(a, b).unwrap();
        let chart = HalfPlaneChart::for_points(&g.endpoints());
        let mut d = Decoration::canonical();
        let before = truncated_length(&g, &d, &chart).unwrap();
        d.shrink(g.p(), s).unwrap();
        let after = truncated_length(&g, &d, &chart).unwrap();
        prop_assert!((after - before - s).abs() < 1e-9);
    }

    #[test]
    fn clipped_length_grows_with_radius(a in 0.0..TAU, b in 0.0..TAU, m in 0.0..10.0f64, dm in 0.0..3.0f64) {
        prop_assume!(far_apart(a, b));
        let g = Geodesic::from_angles(a, b).unwrap();
        prop_assert!(clipped_length(&g, m + dm) >= clipped_length(&g, m) - 1e-12);
    }

    #[test]
    fn point_distance_is_a_metric(
        r in proptest::array::uniform3(0.0..0.95f64),
        phi in proptest::array::uniform3(0.0..TAU),
    ) {
        let p: Vec<PlanePoint> = (0..3).map(|i| PlanePoint::polar(r[i], phi[i])).collect();
        let d = |i: usize, j: usize| point_distance(&p[i], &p[j]);
        prop_assert!((d(0, 1) - d(1, 0)).abs() < 1e-9);
        prop_assert!(d(0, 2) <= d(0, 1) + d(1, 2) + 1e-9);
        prop_assert!(d(0, 0).abs() < 1e-9);
    }

    #[test]
    fn isometries_preserve_distance(r in 0.0..0.9f64, phi in 0.0..TAU, seed: u64) {
        let map = MobiusMap::random(seed);
        let (u, v) = (PlanePoint::origin(), PlanePoint::polar(r, phi));
        let (mu, mv) = (map.apply_point(&u).unwrap(), map.apply_point(&v).unwrap());
        prop_assert!((point_distance(&u, &v) - point_distance(&mu, &mv)).abs() < 1e-7);
    }

    #[test]
    fn swapping_labels_negates_gap(seed: u64, half in 2usize..6) {
        let p = support::random_alternating(&mut rng(seed), half);
        prop_assert!((ab_gap(&p) + ab_gap(&p.swapped())).abs() < 1e-9);
    }

    #[test]
    fn label_sums_add_up(seed: u64, half in 2usize..6) {
        let mut r = rng(seed);
        let p = support::random_alternating(&mut r, half);
        let d = support::random_decoration(&mut r, p.polygon().vertices());
        let s = truncated_sums(&p, &d).unwrap();
        let chart = HalfPlaneChart::for_points(p.polygon().vertices());
        let per_side: f64 = p
            .polygon()
            .sides()
            .iter()
            .map(|g| truncated_length(g, &d, &chart).unwrap())
            .sum();
        prop_assert!((s.total - (s.a + s.b + s.c)).abs() < 1e-9);
        prop_assert!((s.total - per_side).abs() < 1e-9);
        prop_assert!(s.c == 0.0);
    }

    #[test]
    fn gap_survives_isometries(seed: u64, half in 2usize..5) {
        let mut r = rng(seed);
        let p = support::random_alternating(&mut r, half);
        let q = p.transformed(&MobiusMap::random_with(&mut r));
        prop_assert!((ab_gap(&p) - ab_gap(&q)).abs() < 1e-8);
    }

    #[test]
    fn gap_is_decoration_free(seed: u64, half in 2usize..6, pole in 0.0..TAU) {
        let mut r = rng(seed);
        let p = support::random_alternating(&mut r, half);
        prop_assume!(p.polygon().angles().iter().all(|&a| far_apart(a, pole)));
        let d = support::random_decoration(&mut r, p.polygon().vertices());
        let s = truncated_sums_in(&p, &d, &HalfPlaneChart::new(pole)).unwrap();
        prop_assert!((s.a - s.b - ab_gap(&p)).abs() < 1e-8);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn height_ignores_rotation_and_translation(seed: u64, k in 0i64..1000, s in -5.0..5.0f64) {
        let c = support::random_pl_curve(&mut rng(seed));
        let h = height(&c).value();
        // lattice rotations keep the vertices on exactly representable angles
        let turned = c.rotated(support::grid_theta(10 * k));
        let shifted = c.translated(s);
        let close = |x: f64, y: f64| x == y || (x - y).abs() < 1e-9;
        prop_assert!(close(h, height(&turned).value()), "{h} vs {}", height(&turned).value());
        prop_assert!(close(h, height(&shifted).value()));
    }

    #[test]
    fn decomposition_is_a_partition(seed in 0u64..1000) {
        let curve = generate_from_caps(&random_cap_spec(seed, 5)).unwrap();
        let dec = decompose(&curve).unwrap();
        prop_assert_eq!(dec.bucket_total(), curve.segment_count());
    }

    #[test]
    fn generated_components_carry_certificates(seed in 0u64..1000) {
        let curve = generate_from_caps(&random_cap_spec(seed, 4)).unwrap();
        prop_assert!(validate(&curve).is_ok());
        prop_assert!(fillable_union_check(&curve));
        for i in 0..curve.components.len() {
            let c = classify_with(&curve.component(i), &ClassifyOptions::default()).unwrap();
            prop_assert_eq!(c.verdict, Verdict::StronglyFillable);
            let cert = c.certificate.unwrap();
            prop_assert!(cert.complete && cert.tall_report.passed());
            for f in &cert.faces {
                prop_assert!(f.report.max_residual <= 1e-9 && f.report.coverage == 1.0);
            }
        }
    }

    #[test]
    fn verdict_ignores_rotation_and_translation(seed in 0u64..1000, phi in 0.0..TAU, s in -3.0..3.0f64) {
        let curve = generate_from_caps(&random_cap_spec(seed, 4)).unwrap();
        let base = classify_with(&curve, &opts()).unwrap();
        let turned = classify_with(&curve.rotated(phi), &opts()).unwrap();
        let shifted = classify_with(&curve.translated(s), &opts()).unwrap();
        prop_assert_eq!(base.verdict, turned.verdict);
        prop_assert_eq!(base.verdict, shifted.verdict);
        prop_assert_eq!(&base.reasons, &turned.reasons);
    }

    #[test]
    fn covers_are_exact_and_regular(seed: u64, i0 in 0usize..2) {
        let (p, _) = support::random_fat_regular(&mut rng(seed), 2);
        let mut covers = vec![exact_cover_per_vertex(&p).unwrap()];
        match exact_cover_special(&p, i0) {
            Ok(c) => covers.push(c),
            // very fat shapes can leave a cusp uncovered; the samples must be genuine
            Err(CoverError::CoverageIncomplete { uncovered, .. }) => {
                prop_assert!(!uncovered.is_empty());
                prop_assert!(uncovered.iter().all(|&k| p.polygon().contains_klein(k)));
            }
            Err(e) => prop_assert!(false, "{e}"),
        }
        for cov in covers {
            let rep = verify_cover(&p, &cov, 2000, seed);
            prop_assert!(rep.max_residual <= 1e-9);
            prop_assert!(rep.coverage == 1.0 && rep.side_avoidance);
            for d in &cov.pieces {
                prop_assert!(is_regular(d).unwrap().regular);
            }
        }
    }

    #[test]
    fn area_gap_is_nondecreasing(a in 0.0..PI, w1 in 0.2..2.5f64, b in 0.0..PI, w2 in 0.2..2.5f64) {
        let g1 = Geodesic::from_angles(a, a + w1).unwrap();
        let g2 = Geodesic::from_angles(PI + b, PI + b + w2).unwrap();
        prop_assume!(!g1.crossing(&g2).crosses());
        let ms: Vec<f64> = (1..=20).map(f64::from).collect();
        if let Ok(d) = area_demo(&[g1, g2], &ms) {
            prop_assert!(d.is_monotone(), "{}", d.to_csv());
        }
    }

    #[test]
    fn documents_round_trip(seed in 0u64..1000) {
        let curve = generate_from_caps(&random_cap_spec(seed, 5)).unwrap();
        prop_assert_eq!(parse_curve(&emit_curve(&curve)).unwrap(), curve);
        let pl = support::random_pl_curve(&mut rng(seed));
        prop_assert_eq!(parse_curve(&emit_curve(&pl)).unwrap(), pl);
    }
}
