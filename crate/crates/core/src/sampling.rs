//! Deterministic sampling of cone points for property trials and reports.

use crate::cone::{interior_gap, ConeDescriptor, ConeKind, Point};
use crate::packed;
use nalgebra::DMatrix;
use rand::Rng;
use std::sync::Arc;

/// A well-conditioned random interior point (entries / eigenvalues roughly in
/// [0.1, 10]).
pub fn random_interior_point(cone: &Arc<ConeDescriptor>, rng: &mut impl Rng) -> Point {
    let coords = match &cone.kind {
        ConeKind::Orthant => (0..cone.ambient_dim)
            .map(|_| {
                let e: f64 = rng.gen_range(-1.0..1.0);
                10f64.powf(e)
            })
            .collect(),
        ConeKind::Polyhedral { .. } => {
            // rejection sample around the order unit
            loop {
                let cand: Vec<f64> = cone
                    .order_unit
                    .iter()
                    .map(|ui| ui * rng.gen_range(0.2..2.0) + rng.gen_range(-0.1..0.1))
                    .collect();
                let p = cone.point(cand).unwrap();
                if interior_gap(&p) > 1e-3 {
                    break p.coords;
                }
            }
        }
        ConeKind::Lorentz => {
            let n = cone.ambient_dim;
            let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let r = v[1..].iter().map(|c| c * c).sum::<f64>().sqrt();
            v[0] = r + rng.gen_range(0.1..2.0);
            v
        }
        ConeKind::Psd { n } => {
            let a = DMatrix::from_fn(*n, *n, |_, _| rng.gen_range(-1.0..1.0));
            let m = &a * a.transpose() + DMatrix::identity(*n, *n) * rng.gen_range(0.1..1.0);
            packed::pack(&m)
        }
    };
    cone.point(coords).unwrap()
}

/// A random boundary point (nonzero, interior_gap ~ 0).
pub fn random_boundary_point(cone: &Arc<ConeDescriptor>, rng: &mut impl Rng) -> Point {
    let coords = match &cone.kind {
        ConeKind::Orthant => {
            let n = cone.ambient_dim;
            let kill = rng.gen_range(0..n);
            (0..n)
                .map(|i| if i == kill { 0.0 } else { rng.gen_range(0.0..2.0) })
                .collect()
        }
        ConeKind::Polyhedral { facets } => {
            // project an interior point onto a random facet
            loop {
                let p = random_interior_point(cone, rng);
                let f = &facets[rng.gen_range(0..facets.len())];
                let fn2: f64 = f.iter().map(|c| c * c).sum();
                let t = crate::cone::dot(f, &p.coords) / fn2;
                let cand: Vec<f64> = p
                    .coords
                    .iter()
                    .zip(f)
                    .map(|(c, fc)| c - t * fc)
                    .collect();
                let q = cone.point(cand).unwrap();
                let gap = interior_gap(&q);
                if gap.abs() <= 1e-10 && q.euclidean_norm() > 1e-6 {
                    break q.coords;
                }
            }
        }
        ConeKind::Lorentz => {
            let n = cone.ambient_dim;
            let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let r = v[1..].iter().map(|c| c * c).sum::<f64>().sqrt();
            if r == 0.0 {
                v[1] = 1.0;
                v[0] = 1.0;
            } else {
                v[0] = r;
            }
            v
        }
        ConeKind::Psd { n } => {
            // random rank-deficient PSD matrix
            let r = rng.gen_range(1..*n);
            let a = DMatrix::from_fn(*n, r, |_, _| rng.gen_range(-1.0..1.0));
            packed::pack(&(&a * a.transpose()))
        }
    };
    cone.point(coords).unwrap()
}

/// Random convex-combination weights (uniform on the simplex by
/// exponential-normalization).
pub fn random_convex_weights(k: usize, rng: &mut impl Rng) -> Vec<f64> {
    let raw: Vec<f64> = (0..k)
        .map(|_| -(1.0f64 - rng.gen_range(0.0..1.0)).ln())
        .collect();
    let s: f64 = raw.iter().sum();
    raw.iter().map(|r| r / s).collect()
}
