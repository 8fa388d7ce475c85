//! Shared inputs for the benchmarks.

use plateau_core::construct::{generate_from_caps, knoid, random_cap_spec};
use plateau_core::{AlternatingPolygon, BoundaryCurve};

/// Fat quadrilateral with one short side of each label.
pub fn fat_quadrilateral() -> AlternatingPolygon {
    let v = [0.0, 0.9, std::f64::consts::PI, std::f64::consts::PI + 0.9];
    AlternatingPolygon::alpha_first_angles(&v).expect("distinct vertices")
}

/// Curves of growing size, labelled for benchmark ids.
pub fn curves() -> Vec<(String, BoundaryCurve)> {
    let mut out = vec![
        ("knoid3".to_string(), knoid(3, 0.8).expect("valid knoid")),
        ("knoid8".to_string(), knoid(8, 0.8).expect("valid knoid")),
    ];
    for (seed, per_cap) in [(7, 2), (7, 5), (19, 8)] {
        let c = generate_from_caps(&random_cap_spec(seed, per_cap)).expect("generated spec");
        out.push((format!("caps{}", c.segment_count()), c));
    }
    out
}
