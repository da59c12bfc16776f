//! Funk, reverse-Funk, Thompson and Hilbert metrics on cone interiors.
//!
//! Funk(x,y) = log M(x/y) and RFunk(x,y) = log M(y/x) are weak metrics
//! (triangle inequality, but neither symmetric nor nonnegative); Thompson is
//! their pointwise maximum and Hilbert their sum. `cross_ratio_hilbert`
//! re-derives the Hilbert distance from chord endpoints on a projective
//! slice and serves as an independent oracle on polyhedral cones.

use crate::cone::{dot, is_interior, m_ratio, ConeKind, Point};
use crate::error::{ConeError, Result};
use serde::{Deserialize, Serialize};

/// Funk values above this are reported as +infinity (exp would overflow).
pub const LOG_OVERFLOW: f64 = 700.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricKind {
    Funk,
    RFunk,
    Thompson,
    Hilbert,
}

fn clamp_log(v: f64) -> f64 {
    if v > LOG_OVERFLOW {
        f64::INFINITY
    } else {
        v
    }
}

fn require_interior(p: &Point, what: &'static str) -> Result<()> {
    if !is_interior(p) {
        return Err(ConeError::NotInterior { what });
    }
    Ok(())
}

/// Funk weak metric log M(x/y); may be negative.
pub fn funk(x: &Point, y: &Point) -> Result<f64> {
    require_interior(x, "x")?;
    require_interior(y, "y")?;
    let (m, _) = m_ratio(x, y)?;
    Ok(clamp_log(m.ln()))
}

/// Reverse Funk weak metric log M(y/x); finite for any y in C when x is
/// interior.
pub fn rfunk(x: &Point, y: &Point) -> Result<f64> {
    require_interior(x, "x")?;
    let (m, _) = m_ratio(y, x)?;
    Ok(clamp_log(m.ln()))
}

/// Thompson metric log max(M(x/y), M(y/x)).
pub fn thompson(x: &Point, y: &Point) -> Result<f64> {
    require_interior(x, "x")?;
    require_interior(y, "y")?;
    let (a, _) = m_ratio(x, y)?;
    let (b, _) = m_ratio(y, x)?;
    Ok(clamp_log(a.max(b).ln()))
}

/// Hilbert projective metric log(M(x/y) M(y/x)).
pub fn hilbert(x: &Point, y: &Point) -> Result<f64> {
    require_interior(x, "x")?;
    require_interior(y, "y")?;
    let (a, _) = m_ratio(x, y)?;
    let (b, _) = m_ratio(y, x)?;
    Ok(clamp_log(a.ln() + b.ln()))
}

pub fn metric_value(kind: MetricKind, x: &Point, y: &Point) -> Result<f64> {
    match kind {
        MetricKind::Funk => funk(x, y),
        MetricKind::RFunk => rfunk(x, y),
        MetricKind::Thompson => thompson(x, y),
        MetricKind::Hilbert => hilbert(x, y),
    }
}

/// Hilbert distance via the chord cross-ratio on the slice {<1, z> = 1}.
///
/// Restricted to orthant/polyhedral cones, where the chord endpoints are
/// found by exact facet-intersection arithmetic. An unbounded chord
/// direction contributes factor 1. Exists as an independent oracle for
/// `hilbert`.
pub fn cross_ratio_hilbert(x: &Point, y: &Point) -> Result<f64> {
    require_interior(x, "x")?;
    require_interior(y, "y")?;
    let facets: Vec<Vec<f64>> = match &x.cone.kind {
        ConeKind::Orthant => (0..x.cone.ambient_dim)
            .map(|i| {
                let mut f = vec![0.0; x.cone.ambient_dim];
                f[i] = 1.0;
                f
            })
            .collect(),
        ConeKind::Polyhedral { facets } => facets.clone(),
        _ => return Err(ConeError::UnsupportedCone { op: "cross_ratio_hilbert" }),
    };

    // normalize onto the slice through the all-ones functional
    let sx: f64 = x.coords.iter().sum();
    let sy: f64 = y.coords.iter().sum();
    if sx <= 0.0 || sy <= 0.0 {
        return Err(ConeError::GaugeCollapse);
    }
    let xh: Vec<f64> = x.coords.iter().map(|c| c / sx).collect();
    let yh: Vec<f64> = y.coords.iter().map(|c| c / sy).collect();
    let v: Vec<f64> = xh.iter().zip(&yh).map(|(a, b)| a - b).collect();
    let vnorm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
    if vnorm <= 1e-14 {
        return Err(ConeError::ProportionalInputs);
    }

    // largest t with p + t*dir remaining in the cone
    let max_step = |p: &[f64], dir: &[f64]| -> f64 {
        let mut t = f64::INFINITY;
        for f in &facets {
            let fv = dot(f, dir);
            if fv < 0.0 {
                t = t.min(dot(f, p) / (-fv));
            }
        }
        t
    };

    // x' beyond x (direction y -> x), y' beyond y (direction x -> y)
    let tx = max_step(&xh, &v);
    let neg: Vec<f64> = v.iter().map(|c| -c).collect();
    let ty = max_step(&yh, &neg);

    // collinear points collapse the cross-ratio to (1 + 1/tx)(1 + 1/ty)
    let fx = if tx.is_finite() { 1.0 + 1.0 / tx } else { 1.0 };
    let fy = if ty.is_finite() { 1.0 + 1.0 / ty } else { 1.0 };
    Ok(clamp_log(fx.ln() + fy.ln()))
}
