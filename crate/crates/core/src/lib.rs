//! Boundary curves at infinity of `H² × ℝ`.
//!
//! The crate is layered bottom-up:
//!
//! * [`kernel`]: ideal points, geodesics, horoball decorations, truncated lengths
//!   and metric-disk clipping in the Poincaré disk.
//! * [`polygon`]: ideal polygons with α/β labels, truncated-length sums and the
//!   regular / exact / fat / skinny taxonomy.
//! * [`curve`]: Jordan curves on the boundary cylinder with two caps, their
//!   validation, decomposition, height sweep and tall-rectangle covers.
//! * [`classify`]: cap hulls, face decomposition and the strong-fillability verdict.
//! * [`cover`]: exact-polygon coverings of fat polygons and corner regions.
//! * [`construct`]: curve generators, the Scherk trap test, vertical separation
//!   and the area-comparison table.
//! * [`document`]: the JSON wire format for curves and polygons.

pub mod classify;
pub mod construct;
pub mod cover;
pub mod curve;
pub mod document;
pub mod kernel;
pub mod polygon;
pub mod solve;

/// Coincidence tolerance for ideal points and tallness comparisons.
pub const TOL_GEOM: f64 = 1e-12;

/// Default tolerance for the exactness test `|a - b| <= tol`.
pub const TOL_EXACT: f64 = 1e-9;

pub use classify::{classify, Classification, Reason, Verdict};
pub use curve::{BoundaryCurve, Cap, CylPoint, JordanComponent, Segment};
pub use kernel::{Decoration, Geodesic, HalfPlaneChart, IdealPoint, KernelError, PlanePoint};
pub use polygon::{AlternatingPolygon, Fatness, IdealPolygon, SideLabel};
