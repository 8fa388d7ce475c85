//! JSON wire format for curves, polygons and cap specifications.
//!
//! Angles are radians. Unbounded heights never appear as numbers: rays and
//! corner pieces carry them structurally.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::construct::CapSpec;
use crate::curve::{validate, BoundaryCurve, JordanComponent, Violation};
use crate::kernel::{Geodesic, IdealPoint, KernelError};
use crate::polygon::{AlternatingPolygon, IdealPolygon, PolygonError};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema version {0}")]
    Schema(u32),
    #[error("non-finite number in document")]
    NonFinite,
    #[error("invalid curve: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error(transparent)]
    Polygon(#[from] PolygonError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("{0}")]
    Spec(String),
}

fn default_schema() -> u32 {
    SCHEMA_VERSION
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveDocument {
    #[serde(default = "default_schema")]
    pub schema: u32,
    pub components: Vec<JordanComponent>,
    #[serde(default)]
    pub meta: Map<String, Value>,
}

impl CurveDocument {
    pub fn new(curve: &BoundaryCurve) -> Self {
        CurveDocument {
            schema: SCHEMA_VERSION,
            components: curve.components.clone(),
            meta: Map::new(),
        }
    }

    pub fn with_meta(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.meta.insert(key.to_string(), value.into());
        self
    }

    pub fn curve(&self) -> BoundaryCurve {
        BoundaryCurve::new(self.components.clone())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }
}

fn check_finite(v: &Value) -> Result<(), DocumentError> {
    match v {
        Value::Number(n) if n.as_f64().is_some_and(|x| !x.is_finite()) => Err(DocumentError::NonFinite),
        Value::Array(a) => a.iter().try_for_each(check_finite),
        Value::Object(o) => o.values().try_for_each(check_finite),
        _ => Ok(()),
    }
}

/// Parse a curve document without validating the curve.
pub fn parse_curve_document(text: &str) -> Result<CurveDocument, DocumentError> {
    let v: Value = serde_json::from_str(text)?;
    check_finite(&v)?;
    let doc: CurveDocument = serde_json::from_value(v)?;
    if doc.schema != SCHEMA_VERSION {
        return Err(DocumentError::Schema(doc.schema));
    }
    Ok(doc)
}

/// Parse and validate.
pub fn parse_curve(text: &str) -> Result<BoundaryCurve, DocumentError> {
    let curve = parse_curve_document(text)?.curve();
    validate(&curve).map_err(DocumentError::Invalid)?;
    Ok(curve)
}

pub fn emit_curve(curve: &BoundaryCurve) -> String {
    CurveDocument::new(curve).to_json()
}

/// `{"vertices": [θ, ...], "alpha": [bool, ...]}`; without `alpha` the side
/// from the first vertex is α.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolygonDocument {
    #[serde(default = "default_schema")]
    pub schema: u32,
    pub vertices: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<bool>>,
}

impl PolygonDocument {
    pub fn new(p: &AlternatingPolygon) -> Self {
        PolygonDocument {
            schema: SCHEMA_VERSION,
            vertices: p.polygon().angles(),
            alpha: Some(p.alpha_flags().to_vec()),
        }
    }

    pub fn polygon(&self) -> Result<AlternatingPolygon, DocumentError> {
        if self.schema != SCHEMA_VERSION {
            return Err(DocumentError::Schema(self.schema));
        }
        match &self.alpha {
            Some(flags) => Ok(AlternatingPolygon::new(
                IdealPolygon::from_angles(&self.vertices)?,
                flags.clone(),
            )?),
            None => Ok(AlternatingPolygon::alpha_first_angles(&self.vertices)?),
        }
    }
}

pub fn parse_polygon(text: &str) -> Result<AlternatingPolygon, DocumentError> {
    let v: Value = serde_json::from_str(text)?;
    check_finite(&v)?;
    serde_json::from_value::<PolygonDocument>(v)?.polygon()
}

/// `{"plus": [[θ₁, θ₂], ...], "minus": [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapSpecDocument {
    #[serde(default)]
    pub plus: Vec<[f64; 2]>,
    #[serde(default)]
    pub minus: Vec<[f64; 2]>,
}

impl CapSpecDocument {
    pub fn new(spec: &CapSpec) -> Self {
        let pairs = |gs: &[Geodesic]| gs.iter().map(|g| [g.p().theta(), g.q().theta()]).collect();
        CapSpecDocument {
            plus: pairs(&spec.plus),
            minus: pairs(&spec.minus),
        }
    }

    pub fn spec(&self) -> Result<CapSpec, DocumentError> {
        let geos = |v: &[[f64; 2]]| -> Result<Vec<Geodesic>, DocumentError> {
            v.iter()
                .map(|&[a, b]| Ok(Geodesic::new(IdealPoint::new(a)?, IdealPoint::new(b)?)?))
                .collect()
        };
        let spec = CapSpec {
            plus: geos(&self.plus)?,
            minus: geos(&self.minus)?,
        };
        spec.check().map_err(|e| DocumentError::Spec(e.to_string()))?;
        Ok(spec)
    }
}

pub fn parse_cap_spec(text: &str) -> Result<CapSpec, DocumentError> {
    serde_json::from_str::<CapSpecDocument>(text)?.spec()
}
