use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use super::{IdealPoint, KernelError, PlanePoint};

/// Orientation-preserving disk isometry `z ↦ e^{iφ} (z - a) / (1 - ā z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MobiusMap {
    rotation: f64,
    a: [f64; 2],
}

impl MobiusMap {
    pub fn identity() -> Self {
        MobiusMap {
            rotation: 0.0,
            a: [0.0, 0.0],
        }
    }

    pub fn rotation(phi: f64) -> Self {
        MobiusMap {
            rotation: phi,
            a: [0.0, 0.0],
        }
    }

    pub fn new(rotation: f64, a: PlanePoint) -> Self {
        MobiusMap {
            rotation,
            a: [a.x(), a.y()],
        }
    }

    /// Random isometry with `|a| <= 0.9`, deterministic in `seed`.
    pub fn random(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::random_with(&mut rng)
    }

    pub fn random_with<R: Rng>(rng: &mut R) -> Self {
        let rotation = rng.gen_range(0.0..TAU);
        let r = 0.9 * rng.gen::<f64>().sqrt();
        let phi = rng.gen_range(0.0..TAU);
        MobiusMap {
            rotation,
            a: [r * phi.cos(), r * phi.sin()],
        }
    }

    fn apply_complex(&self, z: Complex64) -> Complex64 {
        let a = Complex64::new(self.a[0], self.a[1]);
        Complex64::from_polar(1.0, self.rotation) * (z - a) / (Complex64::new(1.0, 0.0) - a.conj() * z)
    }

    pub fn apply_ideal(&self, p: &IdealPoint) -> IdealPoint {
        let w = self.apply_complex(Complex64::from_polar(1.0, p.theta()));
        IdealPoint::at(w.arg())
    }

    pub fn apply_point(&self, p: &PlanePoint) -> Result<PlanePoint, KernelError> {
        let w = self.apply_complex(Complex64::new(p.x(), p.y()));
        PlanePoint::new(w.re, w.im)
    }
}

/// Free-function form of [`MobiusMap::random`].
pub fn random_isometry(seed: u64) -> MobiusMap {
    MobiusMap::random(seed)
}

/// Free-function form of [`MobiusMap::apply_ideal`].
pub fn apply_isometry(map: &MobiusMap, p: &IdealPoint) -> IdealPoint {
    map.apply_ideal(p)
}
