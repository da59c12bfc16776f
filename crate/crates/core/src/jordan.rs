//! Minimal Euclidean Jordan algebra kernel.
//!
//! Three algebras are supported: R^n with the componentwise product, the spin
//! factor (whose cone of squares is the Lorentz cone), and real symmetric
//! matrices in packed coordinates. They supply spectral decompositions,
//! fractional powers and quadratic representations P(x) = 2L(x)^2 - L(x^2)
//! for the symmetric-cone order calculus and horofunctions.
//!
//! Spin-factor conventions: the inner product is <x,y> = x0*y0 + xbar.ybar,
//! the unit is e = (1,0,...,0) and the spectral values of x are
//! x0 +/- ||xbar||.

use crate::error::{ConeError, Result};
use crate::packed;
use nalgebra::DMatrix;

/// Relative clipping threshold below which eigenvalues count as zero.
pub const EIGEN_CLIP: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algebra {
    /// R^n with the componentwise product.
    Rn(usize),
    /// Spin factor on R^n (n >= 2), split as (x0, xbar).
    Spin(usize),
    /// Real symmetric n x n matrices, packed coordinates.
    Sym(usize),
}

impl Algebra {
    pub fn dim(&self) -> usize {
        match *self {
            Algebra::Rn(n) => n,
            Algebra::Spin(n) => n,
            Algebra::Sym(n) => packed::packed_len(n),
        }
    }

    /// Rank of the algebra (number of elements in a Jordan frame).
    pub fn rank(&self) -> usize {
        match *self {
            Algebra::Rn(n) => n,
            Algebra::Spin(_) => 2,
            Algebra::Sym(n) => n,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct JordanElement {
    pub coords: Vec<f64>,
    pub algebra: Algebra,
}

impl JordanElement {
    pub fn new(algebra: Algebra, coords: Vec<f64>) -> Result<Self> {
        if coords.len() != algebra.dim() {
            return Err(ConeError::DimensionMismatch {
                expected: algebra.dim(),
                got: coords.len(),
            });
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(ConeError::NonFinite);
        }
        Ok(Self { coords, algebra })
    }

    /// The algebra unit e.
    pub fn unit(algebra: Algebra) -> Self {
        let coords = match algebra {
            Algebra::Rn(n) => vec![1.0; n],
            Algebra::Spin(n) => {
                let mut c = vec![0.0; n];
                c[0] = 1.0;
                c
            }
            Algebra::Sym(n) => packed::pack(&DMatrix::identity(n, n)),
        };
        Self { coords, algebra }
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            coords: self.coords.iter().map(|c| c * s).collect(),
            algebra: self.algebra,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.algebra, other.algebra);
        Self {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
            algebra: self.algebra,
        }
    }

    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn inner(&self, other: &Self) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a * b)
            .sum()
    }
}

fn check_same(x: &JordanElement, y: &JordanElement) -> Result<()> {
    if x.algebra != y.algebra {
        return Err(ConeError::AlgebraMismatch);
    }
    Ok(())
}

/// Bilinear Jordan product x • y.
pub fn jordan_product(x: &JordanElement, y: &JordanElement) -> Result<JordanElement> {
    check_same(x, y)?;
    let coords = match x.algebra {
        Algebra::Rn(_) => x
            .coords
            .iter()
            .zip(&y.coords)
            .map(|(a, b)| a * b)
            .collect(),
        Algebra::Spin(n) => {
            let mut out = vec![0.0; n];
            out[0] = x.inner(y);
            for i in 1..n {
                out[i] = x.coords[0] * y.coords[i] + y.coords[0] * x.coords[i];
            }
            out
        }
        Algebra::Sym(n) => {
            let a = packed::unpack(&x.coords, n);
            let b = packed::unpack(&y.coords, n);
            let prod = 0.5 * (&a * &b + &b * &a);
            packed::pack(&prod)
        }
    };
    Ok(JordanElement {
        coords,
        algebra: x.algebra,
    })
}

/// Spectral decomposition x = sum_i lambda_i c_i with a Jordan frame {c_i}.
///
/// Eigenvalues are returned in descending order. A spin element with
/// xbar = 0 yields the rank-1 output (x0, {e}).
pub fn spectral_decomposition(x: &JordanElement) -> (Vec<f64>, Vec<JordanElement>) {
    match x.algebra {
        Algebra::Rn(n) => {
            let mut pairs: Vec<(f64, usize)> =
                x.coords.iter().cloned().zip(0..n).collect();
            pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
            let mut vals = Vec::with_capacity(n);
            let mut frame = Vec::with_capacity(n);
            for (v, i) in pairs {
                vals.push(v);
                let mut c = vec![0.0; n];
                c[i] = 1.0;
                frame.push(JordanElement {
                    coords: c,
                    algebra: x.algebra,
                });
            }
            (vals, frame)
        }
        Algebra::Spin(n) => {
            let x0 = x.coords[0];
            let r = x.coords[1..].iter().map(|c| c * c).sum::<f64>().sqrt();
            if r == 0.0 {
                return (vec![x0], vec![JordanElement::unit(x.algebra)]);
            }
            let mut plus = vec![0.5; 1];
            let mut minus = vec![0.5; 1];
            for i in 1..n {
                plus.push(0.5 * x.coords[i] / r);
                minus.push(-0.5 * x.coords[i] / r);
            }
            (
                vec![x0 + r, x0 - r],
                vec![
                    JordanElement {
                        coords: plus,
                        algebra: x.algebra,
                    },
                    JordanElement {
                        coords: minus,
                        algebra: x.algebra,
                    },
                ],
            )
        }
        Algebra::Sym(n) => {
            let m = packed::unpack(&x.coords, n);
            let (vals, vecs) = packed::sym_eigen(&m);
            let mut frame = Vec::with_capacity(n);
            for k in 0..n {
                let v = vecs.column(k);
                let proj = v * v.transpose();
                frame.push(JordanElement {
                    coords: packed::pack(&proj),
                    algebra: x.algebra,
                });
            }
            (vals, frame)
        }
    }
}

/// Largest spectral value of x.
pub fn max_spectral(x: &JordanElement) -> f64 {
    match x.algebra {
        Algebra::Rn(_) => x.coords.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
        Algebra::Spin(_) => {
            let r = x.coords[1..].iter().map(|c| c * c).sum::<f64>().sqrt();
            x.coords[0] + r
        }
        Algebra::Sym(n) => {
            let (vals, _) = packed::sym_eigen(&packed::unpack(&x.coords, n));
            vals[0]
        }
    }
}

/// Smallest spectral value of x.
pub fn min_spectral(x: &JordanElement) -> f64 {
    match x.algebra {
        Algebra::Rn(_) => x.coords.iter().cloned().fold(f64::INFINITY, f64::min),
        Algebra::Spin(_) => {
            let r = x.coords[1..].iter().map(|c| c * c).sum::<f64>().sqrt();
            x.coords[0] - r
        }
        Algebra::Sym(n) => {
            let (vals, _) = packed::sym_eigen(&packed::unpack(&x.coords, n));
            vals[n - 1]
        }
    }
}

/// Quadratic representation applied to an argument: P(y)x = 2y•(y•x) - (y•y)•x.
///
/// For symmetric matrices this equals Y X Y.
pub fn quadratic_rep_apply(y: &JordanElement, x: &JordanElement) -> Result<JordanElement> {
    check_same(y, x)?;
    if let Algebra::Sym(n) = y.algebra {
        let ym = packed::unpack(&y.coords, n);
        let xm = packed::unpack(&x.coords, n);
        let out = &ym * xm * &ym;
        return Ok(JordanElement {
            coords: packed::pack(&out),
            algebra: y.algebra,
        });
    }
    let yx = jordan_product(y, x)?;
    let yyx = jordan_product(y, &yx)?;
    let ysq = jordan_product(y, y)?;
    let ysqx = jordan_product(&ysq, x)?;
    Ok(yyx.scaled(2.0).add(&ysqx.scaled(-1.0)))
}

/// Spectral power x^t = sum lambda_i^t c_i; t = -1 is the Jordan inverse.
///
/// Eigenvalues with |lambda| < EIGEN_CLIP * max|lambda| count as zero; when t
/// is negative or fractional a zero eigenvalue is an error.
pub fn inverse_and_power(x: &JordanElement, t: f64) -> Result<JordanElement> {
    let (vals, frame) = spectral_decomposition(x);
    let scale = vals.iter().map(|v| v.abs()).fold(0.0f64, f64::max);
    let clip = EIGEN_CLIP * scale;
    let needs_invertible = t < 0.0 || t.fract() != 0.0;
    let mut out = vec![0.0; x.algebra.dim()];
    for (v, c) in vals.iter().zip(&frame) {
        let v_eff = if v.abs() <= clip { 0.0 } else { *v };
        if v_eff == 0.0 {
            if needs_invertible {
                return Err(ConeError::SingularElement);
            }
            if t == 0.0 {
                for (o, cc) in out.iter_mut().zip(&c.coords) {
                    *o += cc;
                }
            }
            continue;
        }
        if v_eff < 0.0 && t.fract() != 0.0 {
            return Err(ConeError::SingularElement);
        }
        let p = if t.fract() == 0.0 {
            v_eff.powi(t as i32)
        } else {
            v_eff.powf(t)
        };
        for (o, cc) in out.iter_mut().zip(&c.coords) {
            *o += p * cc;
        }
    }
    Ok(JordanElement {
        coords: out,
        algebra: x.algebra,
    })
}
