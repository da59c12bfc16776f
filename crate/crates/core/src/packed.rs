//! Packed coordinates for real symmetric matrices.
//!
//! A symmetric n x n matrix is stored as its row-major upper triangle with
//! every off-diagonal entry scaled by sqrt(2). Under this scaling the
//! Euclidean inner product of two packed vectors equals tr(XY), so dual
//! functionals act through the ordinary dot product.

use nalgebra::DMatrix;

pub const OFF_DIAG_SCALE: f64 = std::f64::consts::SQRT_2;

/// Number of packed coordinates of an n x n symmetric matrix.
pub fn packed_len(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Matrix side length from a packed length, if it is of the form n(n+1)/2.
pub fn side_len(len: usize) -> Option<usize> {
    let mut n = 0usize;
    while packed_len(n) < len {
        n += 1;
    }
    (packed_len(n) == len).then_some(n)
}

pub fn pack(m: &DMatrix<f64>) -> Vec<f64> {
    let n = m.nrows();
    let mut out = Vec::with_capacity(packed_len(n));
    for i in 0..n {
        for j in i..n {
            if i == j {
                out.push(m[(i, j)]);
            } else {
                // symmetrize defensively; inputs are expected symmetric
                out.push(0.5 * (m[(i, j)] + m[(j, i)]) * OFF_DIAG_SCALE);
            }
        }
    }
    out
}

pub fn unpack(coords: &[f64], n: usize) -> DMatrix<f64> {
    assert_eq!(coords.len(), packed_len(n), "packed length mismatch");
    let mut m = DMatrix::zeros(n, n);
    let mut idx = 0;
    for i in 0..n {
        for j in i..n {
            let v = if i == j {
                coords[idx]
            } else {
                coords[idx] / OFF_DIAG_SCALE
            };
            m[(i, j)] = v;
            m[(j, i)] = v;
            idx += 1;
        }
    }
    m
}

/// Eigenvalues (descending) and matching orthonormal eigenvectors of a
/// symmetric matrix.
pub fn sym_eigen(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = m.nrows();
    if n == 1 {
        return (vec![m[(0, 0)]], DMatrix::identity(1, 1));
    }
    if n == 2 {
        // closed form; the iterative solver is too slow for hot loops
        let (a, b, d) = (m[(0, 0)], m[(0, 1)], m[(1, 1)]);
        let mid = 0.5 * (a + d);
        let disc = (0.25 * (a - d) * (a - d) + b * b).sqrt();
        let l1 = mid + disc;
        let l2 = mid - disc;
        let (mut v1x, mut v1y) = if (l1 - d).abs() >= (l1 - a).abs() {
            (l1 - d, b)
        } else {
            (b, l1 - a)
        };
        let norm = (v1x * v1x + v1y * v1y).sqrt();
        if norm == 0.0 {
            v1x = 1.0;
            v1y = 0.0;
        } else {
            v1x /= norm;
            v1y /= norm;
        }
        let vecs = DMatrix::from_column_slice(2, 2, &[v1x, v1y, -v1y, v1x]);
        return (vec![l1, l2], vecs);
    }
    let se = nalgebra::SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| se.eigenvalues[b].total_cmp(&se.eigenvalues[a]));
    let vals: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let mut vecs = DMatrix::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        vecs.set_column(col, &se.eigenvectors.column(i));
    }
    (vals, vecs)
}

/// Spectral function f applied to a symmetric matrix: Q f(Lambda) Q^T.
pub fn sym_spectral_map(m: &DMatrix<f64>, f: impl Fn(f64) -> f64) -> DMatrix<f64> {
    let (vals, vecs) = sym_eigen(m);
    let n = m.nrows();
    let mut out = DMatrix::zeros(n, n);
    for k in 0..n {
        let v = vecs.column(k);
        out += f(vals[k]) * v * v.transpose();
    }
    out
}
