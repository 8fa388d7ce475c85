//! One-dimensional root finding for monotone exactness equations.

use serde::{Deserialize, Serialize};

/// Result of a bisection run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub x: f64,
    pub residual: f64,
    pub iterations: usize,
}

pub const MAX_BISECTION_STEPS: usize = 200;

/// Find a sign change of `f` inside `(0, 1)`.
///
/// Starts at the midpoint and expands geometrically toward both ends
/// (`2^-k` and `1 - 2^-k`). Returns a bracket `(lo, hi)` with `f(lo)` and
/// `f(hi)` of opposite signs, or an exact root as `(x, x)`.
pub fn bracket_unit<F: FnMut(f64) -> f64>(mut f: F) -> Option<(f64, f64)> {
    let mid = 0.5;
    let fm = f(mid);
    if fm == 0.0 {
        return Some((mid, mid));
    }
    if !fm.is_finite() {
        return None;
    }
    let mut prev_lo = mid;
    let mut prev_hi = mid;
    for k in 2..=52 {
        let step = 0.5f64.powi(k);
        let lo = step;
        let flo = f(lo);
        if flo.is_finite() && flo.signum() != fm.signum() {
            return Some((lo, prev_lo));
        }
        prev_lo = lo;
        let hi = 1.0 - step;
        let fhi = f(hi);
        if fhi.is_finite() && fhi.signum() != fm.signum() {
            return Some((prev_hi, hi));
        }
        prev_hi = hi;
    }
    None
}

/// Bisect `f` on `[lo, hi]` until `|f| <= tol` or the step budget runs out.
/// Returns the best iterate seen.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> Root {
    let mut flo = f(lo);
    let mut best = Root {
        x: lo,
        residual: flo.abs(),
        iterations: 0,
    };
    if lo == hi {
        return best;
    }
    for it in 1..=MAX_BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm.abs() < best.residual {
            best = Root {
                x: mid,
                residual: fm.abs(),
                iterations: it,
            };
        }
        if fm.abs() <= tol || mid == lo || mid == hi {
            best.iterations = it;
            break;
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    best
}
