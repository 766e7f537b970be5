//! Dense helpers for the tiny matrices of a hyperbolic system (row-major
//! `n × n` slices), and the real eigen-decomposition behind
//! [`crate::system::eigenframe`].

use alloc::vec;
use alloc::vec::Vec;

use crate::math::Real;
use crate::{Error, Result};

/// Eigenvalues closer than this are treated as coincident.
pub const EIGEN_GAP_TOL: f64 = 1e-8;

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `out = m * v` for a row-major `n × n` matrix.
pub fn mat_vec(m: &[f64], v: &[f64], out: &mut [f64]) {
    let n = v.len();
    for (i, o) in out.iter_mut().enumerate().take(n) {
        *o = dot(&m[i * n..(i + 1) * n], v);
    }
}

/// `row * m * col`.
pub fn bilinear(row: &[f64], m: &[f64], col: &[f64]) -> f64 {
    let n = row.len();
    let mut acc = 0.0;
    for i in 0..n {
        if row[i] == 0.0 {
            continue;
        }
        acc += row[i] * dot(&m[i * n..(i + 1) * n], col);
    }
    acc
}

/// Inverse by Gauss–Jordan elimination with partial pivoting.
pub fn invert(m: &[f64], n: usize) -> Option<Vec<f64>> {
    let mut a = m.to_vec();
    let mut inv = vec![0.0; n * n];
    for i in 0..n {
        inv[i * n + i] = 1.0;
    }
    for col in 0..n {
        let pivot = (col..n).max_by(|&r, &s| a[r * n + col].abs().total_cmp(&a[s * n + col].abs()))?;
        let p = a[pivot * n + col];
        if p.abs() < 1e-300 {
            return None;
        }
        if pivot != col {
            for k in 0..n {
                a.swap(pivot * n + k, col * n + k);
                inv.swap(pivot * n + k, col * n + k);
            }
        }
        for k in 0..n {
            a[col * n + k] /= p;
            inv[col * n + k] /= p;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = a[r * n + col];
            if f == 0.0 {
                continue;
            }
            for k in 0..n {
                a[r * n + k] -= f * a[col * n + k];
                inv[r * n + k] -= f * inv[col * n + k];
            }
        }
    }
    Some(inv)
}

/// Real spectral data of a strictly hyperbolic matrix, eigenvalues ascending.
///
/// `left[i] · right[j] = δ_ij` and every `left[i]` has unit Euclidean norm;
/// the signs are whatever the construction produced.
#[derive(Debug, Clone, PartialEq)]
pub struct RealEigen {
    pub values: Vec<f64>,
    pub left: Vec<Vec<f64>>,
    pub right: Vec<Vec<f64>>,
}

/// Eigen-decomposition of a row-major `n × n` matrix with `n` distinct real
/// eigenvalues. Closed forms for `n ≤ 2`, Schur + SVD null vectors above.
pub fn real_eigen(a: &[f64], n: usize) -> Result<RealEigen> {
    if a.iter().any(|v| !v.is_finite()) {
        return Err(Error::hyperbolicity("non-finite matrix entry"));
    }
    let (values, right) = match n {
        0 => return Err(Error::invalid("empty system")),
        1 => (vec![a[0]], vec![vec![1.0]]),
        2 => eigen_2x2(a)?,
        _ => eigen_general(a, n)?,
    };
    biorthonormalize(values, right, n)
}

fn eigen_2x2(m: &[f64]) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let (a, b, c, d) = (m[0], m[1], m[2], m[3]);
    let half_tr = 0.5 * (a + d);
    let half_diff = 0.5 * (a - d);
    let disc = half_diff * half_diff + b * c;
    if disc < 0.0 {
        return Err(Error::hyperbolicity("complex eigenvalue pair"));
    }
    let root = disc.sqrt();
    if 2.0 * root < EIGEN_GAP_TOL {
        return Err(Error::hyperbolicity("coincident eigenvalues"));
    }
    let values = vec![half_tr - root, half_tr + root];
    let right = values
        .iter()
        .map(|&lam| {
            let r1 = [b, lam - a];
            let r2 = [lam - d, c];
            if norm(&r1) >= norm(&r2) {
                r1.to_vec()
            } else {
                r2.to_vec()
            }
        })
        .collect();
    Ok((values, right))
}

fn eigen_general(a: &[f64], n: usize) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    use nalgebra::DMatrix;
    let m = DMatrix::from_row_slice(n, n, a);
    let scale = a.iter().fold(1.0f64, |s, v| s.max(v.abs()));
    let eig = m.clone().complex_eigenvalues();
    let mut values = Vec::with_capacity(n);
    for z in eig.iter() {
        if z.im.abs() > EIGEN_GAP_TOL * scale {
            return Err(Error::hyperbolicity("complex eigenvalue pair"));
        }
        values.push(z.re);
    }
    values.sort_by(f64::total_cmp);
    for w in values.windows(2) {
        if w[1] - w[0] < EIGEN_GAP_TOL {
            return Err(Error::hyperbolicity("coincident eigenvalues"));
        }
    }
    let mut right = Vec::with_capacity(n);
    for &lam in &values {
        let shifted = &m - DMatrix::identity(n, n) * lam;
        let svd = shifted.svd(false, true);
        let vt = svd
            .v_t
            .ok_or_else(|| Error::hyperbolicity("singular value decomposition failed"))?;
        let (k, _) = svd
            .singular_values
            .iter()
            .enumerate()
            .min_by(|x, y| x.1.total_cmp(y.1))
            .ok_or_else(|| Error::hyperbolicity("empty spectrum"))?;
        right.push(vt.row(k).iter().copied().collect::<Vec<f64>>());
    }
    Ok((values, right))
}

/// Left eigenvectors as rows of `R⁻¹`, then unit-normalize each row and
/// rescale the matching column so that `ℓ_i · r_j = δ_ij` survives.
fn biorthonormalize(values: Vec<f64>, mut right: Vec<Vec<f64>>, n: usize) -> Result<RealEigen> {
    let mut r = vec![0.0; n * n];
    for (j, col) in right.iter().enumerate() {
        for i in 0..n {
            r[i * n + j] = col[i];
        }
    }
    let inv = invert(&r, n).ok_or_else(|| Error::hyperbolicity("eigenvectors are not independent"))?;
    let mut left = Vec::with_capacity(n);
    for (i, col) in right.iter_mut().enumerate() {
        let row = &inv[i * n..(i + 1) * n];
        let s = norm(row);
        left.push(row.iter().map(|v| v / s).collect::<Vec<f64>>());
        for v in col.iter_mut() {
            *v *= s;
        }
    }
    Ok(RealEigen { values, left, right })
}
