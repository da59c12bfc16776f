//! Concrete finite-dimensional closed cones and their order calculus.
//!
//! A cone carries an ambient coordinate space, an order unit u in its
//! interior and closed forms for the order ratios
//! M(x/y) = inf{b : x <= b y} and m(x/y) = sup{a >= 0 : a y <= x},
//! together with dual-functional witnesses attaining M. Symmetric matrices
//! use the packed sqrt(2)-scaled layout of [`crate::packed`], so dual
//! functionals always act through the coordinate dot product.

use crate::error::{ConeError, Result};
use crate::jordan::{self, Algebra, JordanElement};
use crate::packed;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Relative tolerance defining "numerically interior":
/// interior_gap(x) > INTERIOR_REL_TOL * ||x||_u.
pub const INTERIOR_REL_TOL: f64 = 1e-12;

/// Relative tolerance for cone membership checks.
pub const MEMBERSHIP_REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum ConeKind {
    /// Nonnegative orthant in R^n.
    Orthant,
    /// Intersection of half-spaces {x : phi_i(x) >= 0}.
    Polyhedral { facets: Vec<Vec<f64>> },
    /// Lorentz cone {x : x_0 >= ||(x_1..x_{n-1})||_2}.
    Lorentz,
    /// Positive semidefinite n x n matrices, packed coordinates.
    Psd { n: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConeDescriptor {
    pub kind: ConeKind,
    pub ambient_dim: usize,
    pub order_unit: Vec<f64>,
}

/// A coordinate vector tagged with its cone.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    pub coords: Vec<f64>,
    pub cone: Arc<ConeDescriptor>,
}

/// A positive linear functional, represented against the coordinate dot
/// product (a packed PSD matrix on Psd cones).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualFunctional {
    pub coords: Vec<f64>,
}

impl DualFunctional {
    pub fn apply(&self, x: &Point) -> f64 {
        dot(&self.coords, &x.coords)
    }

    pub fn apply_coords(&self, coords: &[f64]) -> f64 {
        dot(&self.coords, coords)
    }

    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|c| c * c).sum::<f64>().sqrt()
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl ConeDescriptor {
    pub fn orthant(n: usize) -> Arc<Self> {
        Arc::new(Self {
            kind: ConeKind::Orthant,
            ambient_dim: n,
            order_unit: vec![1.0; n],
        })
    }

    pub fn lorentz(n: usize) -> Arc<Self> {
        let mut u = vec![0.0; n];
        u[0] = 1.0;
        Arc::new(Self {
            kind: ConeKind::Lorentz,
            ambient_dim: n,
            order_unit: u,
        })
    }

    pub fn psd(n: usize) -> Arc<Self> {
        Arc::new(Self {
            kind: ConeKind::Psd { n },
            ambient_dim: packed::packed_len(n),
            order_unit: packed::pack(&DMatrix::identity(n, n)),
        })
    }

    /// Polyhedral cone from facet functionals with an interior witness u.
    pub fn polyhedral(facets: Vec<Vec<f64>>, u: Vec<f64>) -> Result<Arc<Self>> {
        let n = u.len();
        if facets.is_empty() {
            return Err(ConeError::InvalidCone("no facet functionals".into()));
        }
        for f in &facets {
            if f.len() != n {
                return Err(ConeError::DimensionMismatch {
                    expected: n,
                    got: f.len(),
                });
            }
            if f.iter().map(|c| c * c).sum::<f64>() == 0.0 {
                return Err(ConeError::InvalidCone("zero facet functional".into()));
            }
            if dot(f, &u) <= 0.0 {
                return Err(ConeError::InvalidCone(
                    "order unit is not interior to all facets".into(),
                ));
            }
        }
        // pointedness: the facet functionals must span the ambient space
        let m = DMatrix::from_fn(facets.len(), n, |i, j| facets[i][j]);
        if m.rank(1e-12) < n {
            return Err(ConeError::InvalidCone(
                "facet functionals do not span the space (cone contains a line)".into(),
            ));
        }
        Ok(Arc::new(Self {
            kind: ConeKind::Polyhedral { facets },
            ambient_dim: n,
            order_unit: u,
        }))
    }

    /// Replace the default order unit; the new unit must be interior.
    pub fn with_order_unit(self: &Arc<Self>, u: Vec<f64>) -> Result<Arc<Self>> {
        let mut c = (**self).clone();
        if u.len() != c.ambient_dim {
            return Err(ConeError::DimensionMismatch {
                expected: c.ambient_dim,
                got: u.len(),
            });
        }
        c.order_unit = u;
        let c = Arc::new(c);
        let up = c.unit_point();
        if !is_interior(&up) {
            return Err(ConeError::InvalidCone("order unit is not interior".into()));
        }
        Ok(c)
    }

    /// Matrix side for Psd cones.
    pub fn psd_side(&self) -> Option<usize> {
        match self.kind {
            ConeKind::Psd { n } => Some(n),
            _ => None,
        }
    }

    /// The Euclidean Jordan algebra realizing this cone as its cone of
    /// squares, when it is symmetric.
    pub fn jordan_algebra(&self) -> Option<Algebra> {
        match self.kind {
            ConeKind::Orthant => Some(Algebra::Rn(self.ambient_dim)),
            ConeKind::Lorentz => Some(Algebra::Spin(self.ambient_dim)),
            ConeKind::Psd { n } => Some(Algebra::Sym(n)),
            ConeKind::Polyhedral { .. } => None,
        }
    }

    /// The order unit as a Point.
    pub fn unit_point(self: &Arc<Self>) -> Point {
        Point {
            coords: self.order_unit.clone(),
            cone: Arc::clone(self),
        }
    }

    pub fn point(self: &Arc<Self>, coords: Vec<f64>) -> Result<Point> {
        if coords.len() != self.ambient_dim {
            return Err(ConeError::DimensionMismatch {
                expected: self.ambient_dim,
                got: coords.len(),
            });
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(ConeError::NonFinite);
        }
        Ok(Point {
            coords,
            cone: Arc::clone(self),
        })
    }

    /// A strictly positive functional, normalized so phi(u) = 1.
    pub fn canonical_positive_functional(&self) -> DualFunctional {
        let coords = match &self.kind {
            ConeKind::Orthant => vec![1.0; self.ambient_dim],
            ConeKind::Polyhedral { facets } => {
                let mut sum = vec![0.0; self.ambient_dim];
                for f in facets {
                    for (s, c) in sum.iter_mut().zip(f) {
                        *s += c;
                    }
                }
                sum
            }
            ConeKind::Lorentz => {
                let mut v = vec![0.0; self.ambient_dim];
                v[0] = 1.0;
                v
            }
            ConeKind::Psd { n } => packed::pack(&DMatrix::identity(*n, *n)),
        };
        let scale = dot(&coords, &self.order_unit);
        DualFunctional {
            coords: coords.iter().map(|c| c / scale).collect(),
        }
    }
}

impl Point {
    pub fn scaled(&self, s: f64) -> Point {
        Point {
            coords: self.coords.iter().map(|c| c * s).collect(),
            cone: Arc::clone(&self.cone),
        }
    }

    pub fn add(&self, other: &Point) -> Point {
        debug_assert!(same_cone(self, other));
        Point {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
            cone: Arc::clone(&self.cone),
        }
    }

    pub fn sub(&self, other: &Point) -> Point {
        self.add(&other.scaled(-1.0))
    }

    pub fn euclidean_norm(&self) -> f64 {
        self.coords.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn as_jordan(&self) -> Result<JordanElement> {
        let algebra = self
            .cone
            .jordan_algebra()
            .ok_or(ConeError::UnsupportedCone { op: "as_jordan" })?;
        JordanElement::new(algebra, self.coords.clone())
    }
}

pub fn same_cone(x: &Point, y: &Point) -> bool {
    Arc::ptr_eq(&x.cone, &y.cone) || *x.cone == *y.cone
}

fn check_same_cone(x: &Point, y: &Point) -> Result<()> {
    if x.coords.len() != y.coords.len() {
        return Err(ConeError::DimensionMismatch {
            expected: x.coords.len(),
            got: y.coords.len(),
        });
    }
    if !same_cone(x, y) {
        return Err(ConeError::ConeMismatch);
    }
    Ok(())
}

/// Signed distance proxy to the cone boundary: positive iff x is interior,
/// zero on the boundary (up to floating error), negative outside.
///
/// Orthant/polyhedral: min_i phi_i(x) with unit-length facets; Lorentz:
/// x_0 - ||xbar||; Psd: lambda_min(X).
pub fn interior_gap(x: &Point) -> f64 {
    match &x.cone.kind {
        ConeKind::Orthant => x.coords.iter().cloned().fold(f64::INFINITY, f64::min),
        ConeKind::Polyhedral { facets } => facets
            .iter()
            .map(|f| {
                let len = dot(f, f).sqrt();
                dot(f, &x.coords) / len
            })
            .fold(f64::INFINITY, f64::min),
        ConeKind::Lorentz => {
            let r = x.coords[1..].iter().map(|c| c * c).sum::<f64>().sqrt();
            x.coords[0] - r
        }
        ConeKind::Psd { n } => {
            let m = packed::unpack(&x.coords, *n);
            let (vals, _) = packed::sym_eigen(&m);
            vals[*n - 1]
        }
    }
}

/// Scale-invariant interiority test: interior_gap(x) > 1e-12 * ||x||_u.
pub fn is_interior(x: &Point) -> bool {
    let g = interior_gap(x);
    g > INTERIOR_REL_TOL * order_unit_norm(x)
}

/// Cone membership up to the relative membership tolerance.
pub fn is_member(x: &Point) -> bool {
    interior_gap(x) >= -MEMBERSHIP_REL_TOL * order_unit_norm(x).max(f64::MIN_POSITIVE)
}

fn require_interior(x: &Point, what: &'static str) -> Result<()> {
    if !is_interior(x) {
        return Err(ConeError::NotInterior { what });
    }
    Ok(())
}

/// Order unit norm ||x||_u = inf{l >= 0 : -l u <= x <= l u}
/// = max(M(x/u), M(-x/u)).
///
/// Sup norm on the orthant with u = 1; spectral norm on Psd with u = I.
pub fn order_unit_norm(x: &Point) -> f64 {
    let u = &x.cone.order_unit;
    match &x.cone.kind {
        ConeKind::Orthant => x
            .coords
            .iter()
            .zip(u)
            .map(|(c, ui)| (c / ui).abs())
            .fold(0.0, f64::max),
        ConeKind::Polyhedral { facets } => facets
            .iter()
            .map(|f| (dot(f, &x.coords) / dot(f, u)).abs())
            .fold(0.0, f64::max),
        ConeKind::Lorentz => {
            if is_default_unit(&x.cone) {
                let r = x.coords[1..].iter().map(|c| c * c).sum::<f64>().sqrt();
                x.coords[0].abs() + r
            } else {
                general_unit_norm(x)
            }
        }
        ConeKind::Psd { n } => {
            if is_default_unit(&x.cone) {
                let (vals, _) = packed::sym_eigen(&packed::unpack(&x.coords, *n));
                vals.iter().map(|v| v.abs()).fold(0.0, f64::max)
            } else {
                general_unit_norm(x)
            }
        }
    }
}

fn is_default_unit(cone: &ConeDescriptor) -> bool {
    match cone.kind {
        ConeKind::Lorentz => {
            cone.order_unit[0] == 1.0 && cone.order_unit[1..].iter().all(|&c| c == 0.0)
        }
        ConeKind::Psd { n } => {
            cone.order_unit == packed::pack(&DMatrix::identity(n, n))
        }
        _ => true,
    }
}

fn general_unit_norm(x: &Point) -> f64 {
    // gate-free ratios: the unit was validated interior at construction,
    // and routing through m_ratio would recurse via the interiority check
    let u = Point {
        coords: x.cone.order_unit.clone(),
        cone: Arc::clone(&x.cone),
    };
    let a = m_ratio_raw(x, &u);
    let b = m_ratio_raw(&x.scaled(-1.0), &u);
    a.max(b).max(0.0)
}

/// M(x/y) = inf{b : x <= b y} together with a witness phi in Sigma_u*
/// attaining phi(x)/phi(y) = M(x/y).
///
/// Requires y in the numeric interior; x may be any ambient vector.
pub fn m_ratio(x: &Point, y: &Point) -> Result<(f64, DualFunctional)> {
    check_same_cone(x, y)?;
    require_interior(y, "y")?;
    if x.coords == y.coords {
        // exact on the diagonal
        return Ok((1.0, x.cone.canonical_positive_functional()));
    }
    let u = &x.cone.order_unit;
    match &x.cone.kind {
        ConeKind::Orthant => {
            let mut best = f64::NEG_INFINITY;
            let mut best_i = 0;
            for i in 0..x.coords.len() {
                let r = x.coords[i] / y.coords[i];
                if r > best {
                    best = r;
                    best_i = i;
                }
            }
            let mut phi = vec![0.0; x.coords.len()];
            phi[best_i] = 1.0 / u[best_i];
            Ok((best, DualFunctional { coords: phi }))
        }
        ConeKind::Polyhedral { facets } => {
            let mut best = f64::NEG_INFINITY;
            let mut best_i = 0;
            for (i, f) in facets.iter().enumerate() {
                let r = dot(f, &x.coords) / dot(f, &y.coords);
                if r > best {
                    best = r;
                    best_i = i;
                }
            }
            let f = &facets[best_i];
            let scale = dot(f, u);
            Ok((
                best,
                DualFunctional {
                    coords: f.iter().map(|c| c / scale).collect(),
                },
            ))
        }
        ConeKind::Psd { n } => {
            let xm = packed::unpack(&x.coords, *n);
            let ym = packed::unpack(&y.coords, *n);
            let yinv_sqrt = packed::sym_spectral_map(&ym, |l| l.max(f64::MIN_POSITIVE).powf(-0.5));
            let s = &yinv_sqrt * xm * &yinv_sqrt;
            let s = 0.5 * (&s + s.transpose());
            let (vals, vecs) = packed::sym_eigen(&s);
            let v = vecs.column(0);
            let w = &yinv_sqrt * v;
            let phi_m = &w * w.transpose();
            let um = packed::unpack(u, *n);
            let scale = (&phi_m * um).trace();
            Ok((
                vals[0],
                DualFunctional {
                    coords: packed::pack(&phi_m).iter().map(|c| c / scale).collect(),
                },
            ))
        }
        ConeKind::Lorentz => {
            let yj = y.as_jordan()?;
            let xj = x.as_jordan()?;
            let y_inv_sqrt = jordan::inverse_and_power(&yj, -0.5)?;
            let a = jordan::quadratic_rep_apply(&y_inv_sqrt, &xj)?;
            let (vals, frame) = jordan::spectral_decomposition(&a);
            let c = &frame[0];
            let phi = jordan::quadratic_rep_apply(&y_inv_sqrt, c)?;
            let scale = dot(&phi.coords, u);
            Ok((
                vals[0],
                DualFunctional {
                    coords: phi.coords.iter().map(|v| v / scale).collect(),
                },
            ))
        }
    }
}

/// m(x/y) = sup{a >= 0 : a y <= x} for x in C and y in C \ {0}.
///
/// y may lie on the boundary; on Psd cones the bound is computed through the
/// generalized Schur complement on range(Y).
pub fn m_lower(x: &Point, y: &Point) -> Result<f64> {
    check_same_cone(x, y)?;
    let y_scale = order_unit_norm(y);
    if y_scale == 0.0 {
        return Err(ConeError::ZeroVector);
    }
    if !is_member(x) {
        return Err(ConeError::OutsideCone { what: "x" });
    }
    if x.coords == y.coords {
        return Ok(1.0);
    }
    let x_scale = order_unit_norm(x).max(f64::MIN_POSITIVE);
    match &x.cone.kind {
        ConeKind::Orthant | ConeKind::Polyhedral { .. } => {
            let facet_values = |p: &Point| -> Vec<f64> {
                match &p.cone.kind {
                    ConeKind::Orthant => p.coords.clone(),
                    ConeKind::Polyhedral { facets } => {
                        facets.iter().map(|f| dot(f, &p.coords)).collect()
                    }
                    _ => unreachable!(),
                }
            };
            let fx = facet_values(x);
            let fy = facet_values(y);
            let tol_y = INTERIOR_REL_TOL * y_scale;
            let tol_x = MEMBERSHIP_REL_TOL * x_scale;
            let mut m = f64::INFINITY;
            let mut any = false;
            for (vx, vy) in fx.iter().zip(&fy) {
                if *vy > tol_y {
                    any = true;
                    m = m.min(vx / vy);
                } else if *vx < -tol_x {
                    return Ok(0.0);
                }
            }
            if !any {
                return Err(ConeError::ZeroVector);
            }
            Ok(m.max(0.0))
        }
        ConeKind::Psd { n } => {
            let xm = packed::unpack(&x.coords, *n);
            let ym = packed::unpack(&y.coords, *n);
            let (yvals, yvecs) = packed::sym_eigen(&ym);
            let ymax = yvals[0];
            if ymax <= 0.0 {
                return Err(ConeError::ZeroVector);
            }
            let rank_tol = 1e-12 * ymax;
            let r = yvals.iter().take_while(|&&l| l > rank_tol).count();
            if r == 0 {
                return Err(ConeError::ZeroVector);
            }
            let v = yvecs.columns(0, r).into_owned();
            let a = v.transpose() * &xm * &v;
            let lambda_inv_sqrt =
                DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                    r,
                    yvals[..r].iter().map(|l| l.powf(-0.5)),
                ));
            let schur = if r < *n {
                let w = yvecs.columns(r, *n - r).into_owned();
                let b = v.transpose() * &xm * &w;
                let d = w.transpose() * &xm * &w;
                let d = 0.5 * (&d + d.transpose());
                let (dvals, dvecs) = packed::sym_eigen(&d);
                let dmax = dvals[0].max(x_scale);
                let d_tol = 1e-12 * dmax;
                // pseudo-inverse of D; range condition ker(D) ⊆ ker(B) holds
                // up to noise because X is PSD
                let mut d_pinv = DMatrix::zeros(*n - r, *n - r);
                for k in 0..(*n - r) {
                    if dvals[k] > d_tol {
                        let col = dvecs.column(k);
                        d_pinv += (1.0 / dvals[k]) * col * col.transpose();
                    }
                }
                &a - &b * d_pinv * b.transpose()
            } else {
                a
            };
            let reduced = &lambda_inv_sqrt * schur * &lambda_inv_sqrt;
            let reduced = 0.5 * (&reduced + reduced.transpose());
            let (vals, _) = packed::sym_eigen(&reduced);
            Ok(vals[r - 1].max(0.0))
        }
        ConeKind::Lorentz => {
            if is_interior(y) {
                let yj = y.as_jordan()?;
                let xj = x.as_jordan()?;
                let y_inv_sqrt = jordan::inverse_and_power(&yj, -0.5)?;
                let a = jordan::quadratic_rep_apply(&y_inv_sqrt, &xj)?;
                return Ok(jordan::min_spectral(&a).max(0.0));
            }
            // boundary y: bisect on membership of x - a y, using a <= x_0/y_0
            let hi0 = x.coords[0] / y.coords[0];
            if hi0 <= 0.0 {
                return Ok(0.0);
            }
            let member = |a: f64| interior_gap(&x.sub(&y.scaled(a))) >= -1e-14 * x_scale;
            if member(hi0) {
                return Ok(hi0);
            }
            let (mut lo, mut hi) = (0.0, hi0);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if member(mid) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            Ok(lo)
        }
    }
}

/// M(x/y) without the interiority gate or witness construction: the caller
/// guarantees y has positive gauge; near-boundary y may overflow to +inf.
pub(crate) fn m_ratio_raw(x: &Point, y: &Point) -> f64 {
    if x.coords == y.coords {
        return 1.0;
    }
    match &x.cone.kind {
        ConeKind::Orthant => x
            .coords
            .iter()
            .zip(&y.coords)
            .map(|(a, b)| a / b)
            .fold(f64::NEG_INFINITY, f64::max),
        ConeKind::Polyhedral { facets } => facets
            .iter()
            .map(|f| dot(f, &x.coords) / dot(f, &y.coords))
            .fold(f64::NEG_INFINITY, f64::max),
        ConeKind::Psd { n } => {
            let xm = packed::unpack(&x.coords, *n);
            let ym = packed::unpack(&y.coords, *n);
            let yi = packed::sym_spectral_map(&ym, |l| l.max(f64::MIN_POSITIVE).powf(-0.5));
            let s = &yi * xm * &yi;
            let s = 0.5 * (&s + s.transpose());
            let (vals, _) = packed::sym_eigen(&s);
            vals[0]
        }
        ConeKind::Lorentz => {
            let yj = y.as_jordan().expect("lorentz point");
            let xj = x.as_jordan().expect("lorentz point");
            match jordan::inverse_and_power(&yj, -0.5) {
                Ok(yi) => {
                    let a = jordan::quadratic_rep_apply(&yi, &xj).expect("same algebra");
                    jordan::max_spectral(&a)
                }
                Err(_) => f64::INFINITY,
            }
        }
    }
}

/// Hilbert distance log(M(x/y) M(y/x)) without witness construction.
///
/// Same value as `metrics::hilbert` (up to rounding); used in iteration hot
/// loops. Both points must be interior.
pub fn projective_distance(x: &Point, y: &Point) -> Result<f64> {
    check_same_cone(x, y)?;
    if x.coords == y.coords {
        return Ok(0.0);
    }
    match &x.cone.kind {
        ConeKind::Orthant => {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for (a, b) in x.coords.iter().zip(&y.coords) {
                let r = a / b;
                lo = lo.min(r);
                hi = hi.max(r);
            }
            if !(lo > 0.0) {
                return Err(ConeError::NotInterior { what: "x or y" });
            }
            Ok((hi / lo).ln())
        }
        ConeKind::Polyhedral { facets } => {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for f in facets {
                let r = dot(f, &x.coords) / dot(f, &y.coords);
                lo = lo.min(r);
                hi = hi.max(r);
            }
            if !(lo > 0.0) {
                return Err(ConeError::NotInterior { what: "x or y" });
            }
            Ok((hi / lo).ln())
        }
        ConeKind::Psd { n } => {
            let xm = packed::unpack(&x.coords, *n);
            let ym = packed::unpack(&y.coords, *n);
            let yi = packed::sym_spectral_map(&ym, |l| l.max(f64::MIN_POSITIVE).powf(-0.5));
            let s = &yi * xm * &yi;
            let s = 0.5 * (&s + s.transpose());
            let (vals, _) = packed::sym_eigen(&s);
            let (hi, lo) = (vals[0], vals[*n - 1]);
            if !(lo > 0.0) {
                return Err(ConeError::NotInterior { what: "x or y" });
            }
            Ok((hi / lo).ln())
        }
        ConeKind::Lorentz => {
            let yj = y.as_jordan()?;
            let xj = x.as_jordan()?;
            let yi = jordan::inverse_and_power(&yj, -0.5)?;
            let a = jordan::quadratic_rep_apply(&yi, &xj)?;
            let hi = jordan::max_spectral(&a);
            let lo = jordan::min_spectral(&a);
            if !(lo > 0.0) {
                return Err(ConeError::NotInterior { what: "x or y" });
            }
            Ok((hi / lo).ln())
        }
    }
}

/// Samples from Sigma_u* = {phi in C* : phi(u) = 1}, for property tests and
/// witness cross-checks.
pub fn sample_dual_functional(
    cone: &Arc<ConeDescriptor>,
    rng: &mut impl rand::Rng,
) -> DualFunctional {
    let u = &cone.order_unit;
    let coords = match &cone.kind {
        ConeKind::Orthant => {
            let raw: Vec<f64> = (0..cone.ambient_dim).map(|_| rng.gen_range(0.0..1.0)).collect();
            raw
        }
        ConeKind::Polyhedral { facets } => {
            let mut acc = vec![0.0; cone.ambient_dim];
            for f in facets {
                let w: f64 = rng.gen_range(0.0..1.0);
                for (a, c) in acc.iter_mut().zip(f) {
                    *a += w * c;
                }
            }
            acc
        }
        ConeKind::Lorentz => {
            // self-dual: sample a cone element
            let n = cone.ambient_dim;
            let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let r = v[1..].iter().map(|c| c * c).sum::<f64>().sqrt();
            v[0] = r + rng.gen_range(0.0..1.0);
            v
        }
        ConeKind::Psd { n } => {
            let w: Vec<f64> = (0..*n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let wv = nalgebra::DVector::from_vec(w);
            let m = &wv * wv.transpose();
            packed::pack(&m)
        }
    };
    let scale = dot(&coords, u);
    DualFunctional {
        coords: coords.iter().map(|c| c / scale).collect(),
    }
}
