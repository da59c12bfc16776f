//! Order-preserving homogeneous self-maps of cone interiors.
//!
//! The catalog covers C-invariant linear maps, congruences X -> M X M^T on
//! Psd cones, topical (max-of-min of nonnegative linear forms) maps on the
//! orthant, the eps-perturbation f(x) + eps ||x||_u u, gauge normalization
//! f/q(f), and scalar rescaling. All are homogeneous of degree one and
//! order-preserving, hence nonexpansive for the Thompson metric (and, once
//! normalized, for the Hilbert metric).

use crate::cone::{
    dot, interior_gap, is_interior, is_member, order_unit_norm, ConeDescriptor, ConeKind,
    DualFunctional, Point, MEMBERSHIP_REL_TOL,
};
use crate::error::{ConeError, Result};
use crate::packed;
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

/// Default schedule for radial extension toward the boundary.
pub const RADIAL_SCHEDULE: [f64; 3] = [1e-4, 1e-6, 1e-8];

/// A continuous positive homogeneous gauge q on the cone interior.
#[derive(Debug, Clone, PartialEq)]
pub enum GaugeSpec {
    /// q(x) = phi(x) for a strictly positive functional.
    DualFunctional(DualFunctional),
    /// q(x) = ||x||_u for the cone's order unit.
    OrderUnitNorm,
}

impl GaugeSpec {
    pub fn eval(&self, x: &Point) -> f64 {
        match self {
            GaugeSpec::DualFunctional(phi) => phi.apply(x),
            GaugeSpec::OrderUnitNorm => order_unit_norm(x),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MapKind {
    /// x -> A x in ambient coordinates; A must leave the cone invariant.
    Linear { matrix: Vec<Vec<f64>> },
    /// X -> M X M^T on a Psd cone.
    Congruence { m: Vec<Vec<f64>> },
    /// Row i is max over groups of min over nonnegative linear forms.
    Topical { rows: Vec<Vec<Vec<Vec<f64>>>> },
    /// f(x) + eps ||x||_u u with u the order unit (or an override).
    Perturbed {
        inner: Box<MapKind>,
        eps: f64,
        u: Option<Vec<f64>>,
    },
    /// f(x) / q(f(x)).
    Normalized {
        inner: Box<MapKind>,
        gauge: GaugeSpec,
    },
    /// factor * f(x).
    Scaled { inner: Box<MapKind>, factor: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct MapSpec {
    pub kind: MapKind,
    pub cone: Arc<ConeDescriptor>,
}

impl MapSpec {
    /// Linear map; cone invariance is checked exactly on the orthant
    /// (nonnegative entries) and by interior sampling otherwise.
    pub fn linear(cone: Arc<ConeDescriptor>, matrix: Vec<Vec<f64>>) -> Result<Self> {
        let n = cone.ambient_dim;
        if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
            return Err(ConeError::InvalidMap(format!(
                "linear map must be {n}x{n} in ambient coordinates"
            )));
        }
        if matches!(cone.kind, ConeKind::Orthant) {
            if matrix.iter().flatten().any(|&e| e < 0.0) {
                return Err(ConeError::InvalidMap(
                    "orthant linear map must have nonnegative entries".into(),
                ));
            }
        }
        let spec = Self {
            kind: MapKind::Linear { matrix },
            cone,
        };
        if !matches!(spec.cone.kind, ConeKind::Orthant) {
            spec.verify_invariance_by_sampling()?;
        }
        Ok(spec)
    }

    /// Congruence X -> M X M^T on a Psd cone; M must be invertible so the
    /// interior is preserved.
    pub fn congruence(cone: Arc<ConeDescriptor>, m: Vec<Vec<f64>>) -> Result<Self> {
        let n = cone
            .psd_side()
            .ok_or_else(|| ConeError::InvalidMap("congruence maps require a Psd cone".into()))?;
        if m.len() != n || m.iter().any(|r| r.len() != n) {
            return Err(ConeError::InvalidMap(format!("congruence matrix must be {n}x{n}")));
        }
        let dm = DMatrix::from_fn(n, n, |i, j| m[i][j]);
        if dm.rank(1e-12) < n {
            return Err(ConeError::InvalidMap(
                "congruence matrix is singular; the interior would not be preserved".into(),
            ));
        }
        Ok(Self {
            kind: MapKind::Congruence { m },
            cone,
        })
    }

    /// Topical map on the orthant; every linear form must be nonzero with
    /// nonnegative coefficients, which makes the map order-preserving and
    /// homogeneous by construction.
    pub fn topical(cone: Arc<ConeDescriptor>, rows: Vec<Vec<Vec<Vec<f64>>>>) -> Result<Self> {
        if !matches!(cone.kind, ConeKind::Orthant) {
            return Err(ConeError::InvalidMap("topical maps require an orthant cone".into()));
        }
        let n = cone.ambient_dim;
        if rows.len() != n {
            return Err(ConeError::InvalidMap(format!("topical map must have {n} rows")));
        }
        for row in &rows {
            if row.is_empty() {
                return Err(ConeError::InvalidMap("topical row with no groups".into()));
            }
            for group in row {
                if group.is_empty() {
                    return Err(ConeError::InvalidMap("topical group with no forms".into()));
                }
                for form in group {
                    if form.len() != n {
                        return Err(ConeError::DimensionMismatch {
                            expected: n,
                            got: form.len(),
                        });
                    }
                    if form.iter().any(|&c| c < 0.0) {
                        return Err(ConeError::InvalidMap(
                            "topical forms must have nonnegative coefficients".into(),
                        ));
                    }
                    if form.iter().all(|&c| c == 0.0) {
                        return Err(ConeError::InvalidMap("zero linear form in topical map".into()));
                    }
                }
            }
        }
        Ok(Self {
            kind: MapKind::Topical { rows },
            cone,
        })
    }

    pub fn perturbed(self, eps: f64) -> Result<Self> {
        if eps <= 0.0 {
            return Err(ConeError::InvalidMap("perturbation eps must be positive".into()));
        }
        Ok(Self {
            kind: MapKind::Perturbed {
                inner: Box::new(self.kind),
                eps,
                u: None,
            },
            cone: self.cone,
        })
    }

    pub fn normalized(self, gauge: GaugeSpec) -> Result<Self> {
        if let GaugeSpec::DualFunctional(phi) = &gauge {
            if phi.coords.len() != self.cone.ambient_dim {
                return Err(ConeError::DimensionMismatch {
                    expected: self.cone.ambient_dim,
                    got: phi.coords.len(),
                });
            }
            if phi.apply_coords(&self.cone.order_unit) <= 0.0 {
                return Err(ConeError::InvalidMap(
                    "normalization functional is not positive on the order unit".into(),
                ));
            }
        }
        Ok(Self {
            kind: MapKind::Normalized {
                inner: Box::new(self.kind),
                gauge,
            },
            cone: self.cone,
        })
    }

    pub fn scaled(self, factor: f64) -> Result<Self> {
        if factor <= 0.0 || !factor.is_finite() {
            return Err(ConeError::InvalidMap("scale factor must be positive".into()));
        }
        Ok(Self {
            kind: MapKind::Scaled {
                inner: Box::new(self.kind),
                factor,
            },
            cone: self.cone,
        })
    }

    /// Identity map (Linear with the identity matrix).
    pub fn identity(cone: Arc<ConeDescriptor>) -> Self {
        let n = cone.ambient_dim;
        let matrix = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        Self {
            kind: MapKind::Linear { matrix },
            cone,
        }
    }

    fn verify_invariance_by_sampling(&self) -> Result<()> {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_C0DE);
        for _ in 0..64 {
            let x = crate::sampling::random_interior_point(&self.cone, &mut rng);
            let y = apply(self, &x)?;
            if !is_member(&y) {
                return Err(ConeError::InvalidMap(
                    "sampled interior point mapped outside the cone".into(),
                ));
            }
        }
        Ok(())
    }

    /// Whether the map admits direct evaluation on boundary points (its
    /// continuous extension is evaluation itself).
    pub fn supports_boundary_eval(&self) -> bool {
        fn rec(kind: &MapKind) -> bool {
            match kind {
                MapKind::Linear { .. } | MapKind::Congruence { .. } | MapKind::Topical { .. } => true,
                MapKind::Perturbed { inner, .. } | MapKind::Scaled { inner, .. } => rec(inner),
                MapKind::Normalized { .. } => false,
            }
        }
        rec(&self.kind)
    }
}

fn apply_kind(kind: &MapKind, cone: &Arc<ConeDescriptor>, x: &[f64]) -> Result<Vec<f64>> {
    match kind {
        MapKind::Linear { matrix } => Ok(matrix.iter().map(|row| dot(row, x)).collect()),
        MapKind::Congruence { m } => {
            let n = cone.psd_side().expect("congruence on non-Psd cone");
            let xm = packed::unpack(x, n);
            let mm = DMatrix::from_fn(n, n, |i, j| m[i][j]);
            let out = &mm * xm * mm.transpose();
            Ok(packed::pack(&out))
        }
        MapKind::Topical { rows } => Ok(rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|group| {
                        group
                            .iter()
                            .map(|form| dot(form, x))
                            .fold(f64::INFINITY, f64::min)
                    })
                    .fold(f64::NEG_INFINITY, f64::max)
            })
            .collect()),
        MapKind::Perturbed { inner, eps, u } => {
            let mut out = apply_kind(inner, cone, x)?;
            let xp = Point {
                coords: x.to_vec(),
                cone: Arc::clone(cone),
            };
            let gauge = order_unit_norm(&xp);
            let unit = u.as_deref().unwrap_or(&cone.order_unit);
            for (o, ui) in out.iter_mut().zip(unit) {
                *o += eps * gauge * ui;
            }
            Ok(out)
        }
        MapKind::Normalized { inner, gauge } => {
            let raw = apply_kind(inner, cone, x)?;
            let p = Point {
                coords: raw,
                cone: Arc::clone(cone),
            };
            let q = gauge.eval(&p);
            if !(q > 0.0) || !q.is_finite() {
                return Err(ConeError::GaugeCollapse);
            }
            Ok(p.coords.iter().map(|c| c / q).collect())
        }
        MapKind::Scaled { inner, factor } => {
            let mut out = apply_kind(inner, cone, x)?;
            for o in out.iter_mut() {
                *o *= factor;
            }
            Ok(out)
        }
    }
}

/// Apply the map. Perturbed and Normalized wrappers require interior input;
/// Linear/Congruence/Topical also accept boundary points (used by the radial
/// extension).
pub fn apply(f: &MapSpec, x: &Point) -> Result<Point> {
    if x.coords.len() != f.cone.ambient_dim {
        return Err(ConeError::DimensionMismatch {
            expected: f.cone.ambient_dim,
            got: x.coords.len(),
        });
    }
    let needs_interior = matches!(
        f.kind,
        MapKind::Perturbed { .. } | MapKind::Normalized { .. }
    );
    if needs_interior {
        if !is_interior(x) {
            return Err(ConeError::NotInterior { what: "x" });
        }
    } else if !is_member(x) {
        return Err(ConeError::OutsideCone { what: "x" });
    }
    let coords = apply_kind(&f.kind, &f.cone, &x.coords)?;
    f.cone.point(coords)
}

/// Radial extension f̂(x) = lim_{eps -> 0+} f(x + eps u) for x in C.
///
/// Maps whose kinds extend continuously to the boundary are evaluated
/// directly, with the schedule used as an agreement check; otherwise the last
/// schedule value is returned once the final two agree to 1e-8 in the
/// order-unit norm.
pub fn radial_extension(f: &MapSpec, x: &Point, schedule: &[f64]) -> Result<Point> {
    if !is_member(x) {
        return Err(ConeError::OutsideCone { what: "x" });
    }
    if schedule.len() < 2 || schedule.windows(2).any(|w| w[1] >= w[0]) || schedule[0] <= 0.0 {
        return Err(ConeError::InvalidMap(
            "radial schedule must be strictly decreasing and positive".into(),
        ));
    }
    let u = f.cone.unit_point();
    let mut values: Vec<Point> = Vec::with_capacity(schedule.len());
    for &eps in schedule {
        let shifted = x.add(&u.scaled(eps));
        values.push(apply(f, &shifted)?);
    }
    let last = &values[values.len() - 1];
    let prev = &values[values.len() - 2];
    let step = order_unit_norm(&last.sub(prev));
    if f.supports_boundary_eval() {
        let direct = apply(f, x)?;
        let agreement = order_unit_norm(&last.sub(&direct));
        let scale = order_unit_norm(&direct).max(1.0);
        if agreement > 1e-6 * scale {
            return Err(ConeError::NonConvergence {
                what: format!("radial schedule disagrees with the continuous extension by {agreement:e}"),
            });
        }
        return Ok(direct);
    }
    if step > 1e-8 {
        return Err(ConeError::NonConvergence {
            what: format!("radial extension step {step:e} above tolerance"),
        });
    }
    Ok(last.clone())
}

/// A named map together with its cone, for test suites and reports.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub map: MapSpec,
}

/// Built-in catalog of order-preserving homogeneous maps exercising every
/// cone kind: an irreducible positive matrix, a defective upper-triangular
/// matrix, the parabolic congruence on Psd(2), a reducible diagonal map, a
/// topical min/max map, a positive map on a polyhedral cone, and a
/// quadratic-representation map on the Lorentz cone.
pub fn catalog() -> Vec<CatalogEntry> {
    let orthant2 = ConeDescriptor::orthant(2);
    let mut entries = vec![
        CatalogEntry {
            name: "perron2",
            map: MapSpec::linear(Arc::clone(&orthant2), vec![vec![1.0, 1.0], vec![1.0, 1.0]])
                .unwrap(),
        },
        CatalogEntry {
            name: "defective2",
            map: MapSpec::linear(Arc::clone(&orthant2), vec![vec![2.0, 1.0], vec![0.0, 2.0]])
                .unwrap(),
        },
        CatalogEntry {
            name: "parabolic_psd2",
            map: MapSpec::congruence(ConeDescriptor::psd(2), vec![vec![1.0, 1.0], vec![0.0, 1.0]])
                .unwrap(),
        },
        CatalogEntry {
            name: "reducible_diag",
            map: MapSpec::linear(Arc::clone(&orthant2), vec![vec![1.0, 0.0], vec![0.0, 0.5]])
                .unwrap(),
        },
        CatalogEntry {
            name: "topical_minmax",
            map: MapSpec::topical(
                Arc::clone(&orthant2),
                vec![
                    vec![vec![vec![1.0, 0.0], vec![0.0, 1.0]]],
                    vec![vec![vec![0.0, 1.0]]],
                ],
            )
            .unwrap(),
        },
    ];
    let poly = ConeDescriptor::polyhedral(
        vec![
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
            vec![1.0, 1.0, -1.0],
        ],
        vec![1.0, 1.0, 1.0],
    )
    .unwrap();
    entries.push(CatalogEntry {
        name: "polyhedral_positive",
        map: MapSpec::linear(
            poly,
            vec![
                vec![1.0, 1.0, 0.0],
                vec![1.0, 2.0, 1.0],
                vec![1.0, 1.0, 1.0],
            ],
        )
        .unwrap(),
    });
    // P(a) for an interior spin element a is linear and maps the Lorentz
    // cone onto itself
    let lorentz = ConeDescriptor::lorentz(3);
    let a = crate::jordan::JordanElement::new(crate::jordan::Algebra::Spin(3), vec![2.0, 0.5, 0.3])
        .unwrap();
    let n = 3;
    let mut matrix = vec![vec![0.0; n]; n];
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        let ej = crate::jordan::JordanElement::new(crate::jordan::Algebra::Spin(3), e).unwrap();
        let col = crate::jordan::quadratic_rep_apply(&a, &ej).unwrap();
        for i in 0..n {
            matrix[i][j] = col.coords[i];
        }
    }
    entries.push(CatalogEntry {
        name: "lorentz_quadratic",
        map: MapSpec::linear(lorentz, matrix).unwrap(),
    });
    entries
}

/// Check f(x) <=_C f(y) against interior_gap with the membership slack.
pub fn order_dominates(lhs: &Point, rhs: &Point) -> bool {
    let diff = rhs.sub(lhs);
    interior_gap(&diff) >= -MEMBERSHIP_REL_TOL * order_unit_norm(&diff).max(1e-300)
}
