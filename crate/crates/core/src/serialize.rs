//! JSON wire formats for cones, maps and gauges.
//!
//! Cones: {"kind": "orthant"|"polyhedral"|"lorentz"|"psd", "n": int,
//!         "facets": [[...]]?, "u": [...]?}
//! Maps:  {"kind": "linear"|"congruence"|"topical"|"perturbed"|"normalized"
//!                |"scaled", ...} with nested inner specs.
//! Points serialize as flat coordinate arrays in the packed symmetric layout
//! documented in [`crate::packed`].

use crate::cone::{ConeDescriptor, ConeKind, DualFunctional};
use crate::error::{ConeError, Result};
use crate::maps::{GaugeSpec, MapKind, MapSpec};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConeJson {
    pub kind: String,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub facets: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u: Option<Vec<f64>>,
}

pub fn cone_to_json(cone: &ConeDescriptor) -> ConeJson {
    let (kind, n, facets) = match &cone.kind {
        ConeKind::Orthant => ("orthant", cone.ambient_dim, None),
        ConeKind::Polyhedral { facets } => {
            ("polyhedral", cone.ambient_dim, Some(facets.clone()))
        }
        ConeKind::Lorentz => ("lorentz", cone.ambient_dim, None),
        ConeKind::Psd { n } => ("psd", *n, None),
    };
    ConeJson {
        kind: kind.to_string(),
        n,
        facets,
        u: Some(cone.order_unit.clone()),
    }
}

pub fn cone_from_json(json: &ConeJson) -> Result<Arc<ConeDescriptor>> {
    let base = match json.kind.as_str() {
        "orthant" => ConeDescriptor::orthant(json.n),
        "lorentz" => {
            if json.n < 2 {
                return Err(ConeError::InvalidCone("lorentz cone needs n >= 2".into()));
            }
            ConeDescriptor::lorentz(json.n)
        }
        "psd" => ConeDescriptor::psd(json.n),
        "polyhedral" => {
            let facets = json
                .facets
                .clone()
                .ok_or_else(|| ConeError::InvalidCone("polyhedral cone requires facets".into()))?;
            let u = json
                .u
                .clone()
                .ok_or_else(|| ConeError::InvalidCone("polyhedral cone requires an order unit".into()))?;
            return ConeDescriptor::polyhedral(facets, u);
        }
        other => {
            return Err(ConeError::InvalidCone(format!("unknown cone kind `{other}`")));
        }
    };
    match &json.u {
        Some(u) if *u != base.order_unit => base.with_order_unit(u.clone()),
        _ => Ok(base),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GaugeJson {
    Dual { phi: Vec<f64> },
    OrderUnit,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MapJson {
    Linear {
        matrix: Vec<Vec<f64>>,
    },
    Congruence {
        m: Vec<Vec<f64>>,
    },
    Topical {
        rows: Vec<Vec<Vec<Vec<f64>>>>,
    },
    Perturbed {
        inner: Box<MapJson>,
        eps: f64,
        #[serde(skip_serializing_if = "Option::is_none")]
        u: Option<Vec<f64>>,
    },
    Normalized {
        inner: Box<MapJson>,
        gauge: GaugeJson,
    },
    Scaled {
        inner: Box<MapJson>,
        factor: f64,
    },
}

pub fn map_to_json(map: &MapSpec) -> MapJson {
    fn kind_to_json(kind: &MapKind) -> MapJson {
        match kind {
            MapKind::Linear { matrix } => MapJson::Linear {
                matrix: matrix.clone(),
            },
            MapKind::Congruence { m } => MapJson::Congruence { m: m.clone() },
            MapKind::Topical { rows } => MapJson::Topical { rows: rows.clone() },
            MapKind::Perturbed { inner, eps, u } => MapJson::Perturbed {
                inner: Box::new(kind_to_json(inner)),
                eps: *eps,
                u: u.clone(),
            },
            MapKind::Normalized { inner, gauge } => MapJson::Normalized {
                inner: Box::new(kind_to_json(inner)),
                gauge: match gauge {
                    GaugeSpec::DualFunctional(phi) => GaugeJson::Dual {
                        phi: phi.coords.clone(),
                    },
                    GaugeSpec::OrderUnitNorm => GaugeJson::OrderUnit,
                },
            },
            MapKind::Scaled { inner, factor } => MapJson::Scaled {
                inner: Box::new(kind_to_json(inner)),
                factor: *factor,
            },
        }
    }
    kind_to_json(&map.kind)
}

pub fn map_from_json(json: &MapJson, cone: &Arc<ConeDescriptor>) -> Result<MapSpec> {
    match json {
        MapJson::Linear { matrix } => MapSpec::linear(Arc::clone(cone), matrix.clone()),
        MapJson::Congruence { m } => MapSpec::congruence(Arc::clone(cone), m.clone()),
        MapJson::Topical { rows } => MapSpec::topical(Arc::clone(cone), rows.clone()),
        MapJson::Perturbed { inner, eps, u } => {
            let inner = map_from_json(inner, cone)?;
            let mut spec = inner.perturbed(*eps)?;
            if let Some(u_override) = u {
                if u_override.len() != cone.ambient_dim {
                    return Err(ConeError::DimensionMismatch {
                        expected: cone.ambient_dim,
                        got: u_override.len(),
                    });
                }
                if let MapKind::Perturbed { u: slot, .. } = &mut spec.kind {
                    *slot = Some(u_override.clone());
                }
            }
            Ok(spec)
        }
        MapJson::Normalized { inner, gauge } => {
            let inner = map_from_json(inner, cone)?;
            let gauge = match gauge {
                GaugeJson::Dual { phi } => GaugeSpec::DualFunctional(DualFunctional {
                    coords: phi.clone(),
                }),
                GaugeJson::OrderUnit => GaugeSpec::OrderUnitNorm,
            };
            inner.normalized(gauge)
        }
        MapJson::Scaled { inner, factor } => {
            let inner = map_from_json(inner, cone)?;
            inner.scaled(*factor)
        }
    }
}
