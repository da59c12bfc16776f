//! Horofunction evaluation on cone interiors.
//!
//! Reverse-Funk horofunctions exist for every cone and are parameterized by
//! a boundary point y and a base point b:
//!     h_R(x) = log M(y/x) - log M(y/b).
//! On symmetric cones (orthant, Lorentz, Psd) the Funk horofunctions are
//!     h_F(x) = log max-spectral(P(x^{1/2}) z)
//! for a boundary parameter z with ||z||_e = 1, and the Hilbert
//! horofunctions are sums h_F + h_R over orthogonal parameter pairs
//! (y ∘ z = 0), all based at the Jordan unit e. Boundary parameters are
//! normalized on construction so the base terms vanish.

use crate::cone::{
    interior_gap, is_interior, m_ratio, order_unit_norm, same_cone, ConeDescriptor, ConeKind,
    DualFunctional, Point,
};
use crate::error::{ConeError, Result};
use crate::jordan::{self, Algebra};
use crate::maps::{apply, MapSpec};
use crate::metrics::{metric_value, MetricKind};
use serde::Serialize;
use std::sync::Arc;

/// Relative tolerance for "lies on the boundary" checks on parameters.
pub const BOUNDARY_REL_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub enum Horofunction {
    /// h(x) = RFunk(x,y) - RFunk(b,y); any cone, y on the boundary.
    RFunk { y: Point, base: Point },
    /// h(x) = RFunk(x^{-1}, z); symmetric cones, base e.
    FunkSym { z: Point },
    /// h(x) = RFunk(x^{-1}, z) + RFunk(x, y) with y ∘ z = 0; base e.
    HilbertSym { y: Point, z: Point },
}

fn require_boundary(p: &Point, what: &'static str) -> Result<()> {
    let scale = order_unit_norm(p);
    if scale == 0.0 {
        return Err(ConeError::ZeroVector);
    }
    let gap = interior_gap(p);
    if gap < -BOUNDARY_REL_TOL * scale || gap > BOUNDARY_REL_TOL * scale {
        return Err(ConeError::InvalidCone(format!(
            "{what} is not a boundary point (relative gap {:e})",
            gap / scale
        )));
    }
    Ok(())
}

fn require_symmetric(cone: &ConeDescriptor, op: &'static str) -> Result<Algebra> {
    cone.jordan_algebra()
        .ok_or(ConeError::UnsupportedCone { op })
}

fn normalize_unit_norm(p: &Point) -> Point {
    p.scaled(1.0 / order_unit_norm(p))
}

impl Horofunction {
    pub fn rfunk(y: Point, base: Point) -> Result<Self> {
        if !same_cone(&y, &base) {
            return Err(ConeError::ConeMismatch);
        }
        require_boundary(&y, "y")?;
        if !is_interior(&base) {
            return Err(ConeError::NotInterior { what: "base" });
        }
        Ok(Horofunction::RFunk { y, base })
    }

    /// Funk horofunction of a symmetric cone; z is rescaled to ||z||_e = 1.
    pub fn funk_sym(z: Point) -> Result<Self> {
        require_symmetric(&z.cone, "funk_sym")?;
        require_boundary(&z, "z")?;
        Ok(Horofunction::FunkSym {
            z: normalize_unit_norm(&z),
        })
    }

    /// Hilbert horofunction of a symmetric cone; requires y ∘ z = 0.
    pub fn hilbert_sym(y: Point, z: Point) -> Result<Self> {
        if !same_cone(&y, &z) {
            return Err(ConeError::ConeMismatch);
        }
        require_symmetric(&y.cone, "hilbert_sym")?;
        require_boundary(&y, "y")?;
        require_boundary(&z, "z")?;
        let y = normalize_unit_norm(&y);
        let z = normalize_unit_norm(&z);
        let prod = jordan::jordan_product(&y.as_jordan()?, &z.as_jordan()?)?;
        if prod.norm() > 1e-10 {
            return Err(ConeError::InvalidCone(format!(
                "parameters are not orthogonal: ||y∘z|| = {:e}",
                prod.norm()
            )));
        }
        Ok(Horofunction::HilbertSym { y, z })
    }

    pub fn cone(&self) -> &Arc<ConeDescriptor> {
        match self {
            Horofunction::RFunk { y, .. } => &y.cone,
            Horofunction::FunkSym { z } => &z.cone,
            Horofunction::HilbertSym { y, .. } => &y.cone,
        }
    }

    /// Base point: b for RFunk, the Jordan unit otherwise.
    pub fn base(&self) -> Point {
        match self {
            Horofunction::RFunk { base, .. } => base.clone(),
            _ => self.cone().unit_point(),
        }
    }
}

/// h_F core term log max-spectral(P(x^{1/2}) z) = RFunk(x^{-1}, z).
fn funk_term(z: &Point, x: &Point) -> Result<f64> {
    if matches!(x.cone.kind, ConeKind::Orthant) {
        let m = x
            .coords
            .iter()
            .zip(&z.coords)
            .map(|(a, b)| a * b)
            .fold(f64::NEG_INFINITY, f64::max);
        return Ok(m.ln());
    }
    let xj = x.as_jordan()?;
    let zj = z.as_jordan()?;
    let x_sqrt = jordan::inverse_and_power(&xj, 0.5)?;
    let w = jordan::quadratic_rep_apply(&x_sqrt, &zj)?;
    Ok(jordan::max_spectral(&w).ln())
}

/// Evaluate a horofunction at an interior point.
pub fn eval_horofunction(h: &Horofunction, x: &Point) -> Result<f64> {
    if !same_cone(x, &h.base()) {
        return Err(ConeError::ConeMismatch);
    }
    if !is_interior(x) {
        return Err(ConeError::NotInterior { what: "x" });
    }
    match h {
        Horofunction::RFunk { y, base } => {
            let (num, _) = m_ratio(y, x)?;
            let (den, _) = m_ratio(y, base)?;
            Ok(num.ln() - den.ln())
        }
        Horofunction::FunkSym { z } => funk_term(z, x),
        Horofunction::HilbertSym { y, z } => {
            let f = funk_term(z, x)?;
            let (r, _) = m_ratio(y, x)?;
            Ok(f + r.ln())
        }
    }
}

/// Defining-limit oracle: rho(x, y_n) - rho(b, y_n) for the last element of
/// an interior sequence approaching the boundary, with a Cauchy check on the
/// last three values (within 1e-7 of each other).
pub fn horo_limit_oracle(
    kind: MetricKind,
    boundary_seq: &[Point],
    b: &Point,
    x: &Point,
) -> Result<f64> {
    if boundary_seq.len() < 3 {
        return Err(ConeError::NonConvergence {
            what: "boundary sequence must have at least 3 elements".into(),
        });
    }
    let last = &boundary_seq[boundary_seq.len() - 1];
    let rel_gap = interior_gap(last) / order_unit_norm(last);
    if rel_gap > 1e-3 {
        return Err(ConeError::NonConvergence {
            what: format!("sequence does not approach the boundary (relative gap {rel_gap:e})"),
        });
    }
    let mut vals = [0.0f64; 3];
    for (slot, p) in vals
        .iter_mut()
        .zip(&boundary_seq[boundary_seq.len() - 3..])
    {
        *slot = metric_value(kind, x, p)? - metric_value(kind, b, p)?;
    }
    if (vals[2] - vals[1]).abs() > 1e-7 || (vals[1] - vals[0]).abs() > 1e-7 {
        return Err(ConeError::NonConvergence {
            what: format!(
                "oracle tail is not Cauchy: deltas {:e}, {:e}",
                (vals[1] - vals[0]).abs(),
                (vals[2] - vals[1]).abs()
            ),
        });
    }
    Ok(vals[2])
}

/// Interior sequence of the Jordan-frame form converging to the Funk/Hilbert
/// horofunction with parameters (y, z): coefficients lambda_i on y's frame,
/// 1/(t^2 mu_j) on z's frame and 1/t on the completion, evaluated at each t
/// in `ts`.
pub fn jordan_frame_sequence(y: &Point, z: &Point, ts: &[f64]) -> Result<Vec<Point>> {
    if !same_cone(y, z) {
        return Err(ConeError::ConeMismatch);
    }
    let algebra = require_symmetric(&y.cone, "jordan_frame_sequence")?;
    let yj = y.as_jordan()?;
    let zj = z.as_jordan()?;
    let (yvals, yframe) = jordan::spectral_decomposition(&yj);
    let (zvals, zframe) = jordan::spectral_decomposition(&zj);
    let clip = 1e-10;
    let y_support: Vec<(f64, &jordan::JordanElement)> = yvals
        .iter()
        .cloned()
        .zip(&yframe)
        .filter(|(v, _)| *v > clip)
        .collect();
    let z_support: Vec<(f64, &jordan::JordanElement)> = zvals
        .iter()
        .cloned()
        .zip(&zframe)
        .filter(|(v, _)| *v > clip)
        .collect();
    if y_support.is_empty() || z_support.is_empty() {
        return Err(ConeError::ZeroVector);
    }
    // completion of the frame: spectral idempotents of e - sum(supports)
    let mut rest = jordan::JordanElement::unit(algebra);
    for (_, c) in y_support.iter().chain(&z_support) {
        rest = rest.add(&c.scaled(-1.0));
    }
    let completion: Vec<jordan::JordanElement> = if rest.norm() > 1e-8 {
        let (rvals, rframe) = jordan::spectral_decomposition(&rest);
        rvals
            .iter()
            .zip(rframe)
            .filter(|(v, _)| **v > 0.5)
            .map(|(_, c)| c)
            .collect()
    } else {
        Vec::new()
    };
    let mut out = Vec::with_capacity(ts.len());
    for &t in ts {
        if t <= 0.0 {
            return Err(ConeError::InvalidCone("sequence parameter must be positive".into()));
        }
        let mut acc = vec![0.0; algebra.dim()];
        for (v, c) in &y_support {
            for (a, cc) in acc.iter_mut().zip(&c.coords) {
                *a += v * cc;
            }
        }
        for (mu, c) in &z_support {
            let w = t * t / mu;
            for (a, cc) in acc.iter_mut().zip(&c.coords) {
                *a += w * cc;
            }
        }
        for c in &completion {
            for (a, cc) in acc.iter_mut().zip(&c.coords) {
                *a += t * cc;
            }
        }
        out.push(y.cone.point(acc)?);
    }
    Ok(out)
}

/// Positive functional with log phi(x) <= h_F(x): the top spectral pair
/// (mu_1, c_1) of the parameter z, paired through the Jordan trace form.
pub fn subgradient_functional(h: &Horofunction) -> Result<DualFunctional> {
    let z = match h {
        Horofunction::FunkSym { z } => z,
        _ => {
            return Err(ConeError::UnsupportedCone {
                op: "subgradient_functional",
            })
        }
    };
    let zj = z.as_jordan()?;
    let (vals, frame) = jordan::spectral_decomposition(&zj);
    let mu = vals[0];
    let c = &frame[0];
    // trace form vs coordinate pairing: tau = 2<.,.> on the spin factor,
    // the plain dot product elsewhere
    let scale = match z.cone.kind {
        ConeKind::Lorentz => 2.0 * mu,
        _ => mu,
    };
    Ok(DualFunctional {
        coords: c.coords.iter().map(|v| v * scale).collect(),
    })
}

/// Per-inequality outcome of a Wolff check.
#[derive(Debug, Clone, Serialize)]
pub struct WolffReport {
    /// max over samples of h_F(f(x)) - h_F(x) - log r_hat
    pub max_violation_funk: f64,
    /// max over samples of h_R(f(x)) - h_R(x) + log r_hat
    pub max_violation_rfunk: f64,
    /// max over samples of h_H(f(x)) - h_H(x)
    pub max_violation_hilbert: f64,
    /// max absolute deviations from equality
    pub max_gap_funk: f64,
    pub max_gap_rfunk: f64,
    pub max_gap_hilbert: f64,
    pub samples: usize,
}

/// Evaluate the three Wolff inequalities
///   h_F(f(x)) <= h_F(x) + log r,  h_R(f(x)) <= h_R(x) - log r,
///   h_H(f(x)) <= h_H(x)
/// at every sample and report maximal violations and equality gaps.
pub fn check_wolff(
    f: &MapSpec,
    h_f: &Horofunction,
    h_r: &Horofunction,
    h_h: &Horofunction,
    samples: &[Point],
    r_hat: f64,
) -> Result<WolffReport> {
    let log_r = r_hat.ln();
    let mut rep = WolffReport {
        max_violation_funk: f64::NEG_INFINITY,
        max_violation_rfunk: f64::NEG_INFINITY,
        max_violation_hilbert: f64::NEG_INFINITY,
        max_gap_funk: 0.0,
        max_gap_rfunk: 0.0,
        max_gap_hilbert: 0.0,
        samples: samples.len(),
    };
    for x in samples {
        let fx = apply(f, x)?;
        let df = eval_horofunction(h_f, &fx)? - eval_horofunction(h_f, x)? - log_r;
        let dr = eval_horofunction(h_r, &fx)? - eval_horofunction(h_r, x)? + log_r;
        let dh = eval_horofunction(h_h, &fx)? - eval_horofunction(h_h, x)?;
        rep.max_violation_funk = rep.max_violation_funk.max(df);
        rep.max_violation_rfunk = rep.max_violation_rfunk.max(dr);
        rep.max_violation_hilbert = rep.max_violation_hilbert.max(dh);
        rep.max_gap_funk = rep.max_gap_funk.max(df.abs());
        rep.max_gap_rfunk = rep.max_gap_rfunk.max(dr.abs());
        rep.max_gap_hilbert = rep.max_gap_hilbert.max(dh.abs());
    }
    Ok(rep)
}
