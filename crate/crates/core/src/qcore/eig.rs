//! Cyclic Jacobi eigensolver for small dense Hermitian matrices.
//!
//! Dimensions in this crate stay below a few dozen, where Jacobi is both
//! accurate to roundoff and fast enough. Eigenvalues are returned in
//! non-increasing order with a fixed phase convention on each eigenvector,
//! so repeated calls give identical output.

use num_complex::Complex;

use super::matrix::{CMatrix, RMatrix};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

const MAX_SWEEPS: usize = 100;

/// Spectral decomposition `m = V diag(values) V†`.
#[derive(Clone, Debug)]
pub struct HermitianEigen<T> {
    /// Eigenvalues, non-increasing.
    pub values: Vec<T>,
    /// Orthonormal eigenvectors as columns, matching `values`.
    pub vectors: CMatrix<T>,
}

impl<T: Scalar> HermitianEigen<T> {
    pub fn vector(&self, k: usize) -> Vec<Complex<T>> {
        self.vectors.column(k)
    }

    pub fn reconstruct(&self) -> CMatrix<T> {
        let d = CMatrix::from_real_diagonal(&self.values);
        self.vectors.matmul(&d).matmul(&self.vectors.dagger())
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Inputs whose Hermiticity error exceeds `1e-9 * max(1, max|m_ij|)` are
/// rejected; smaller asymmetries are averaged away before iterating.
pub fn hermitian_eig<T: Scalar>(m: &CMatrix<T>) -> Result<HermitianEigen<T>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch { expected: m.rows(), found: m.cols() });
    }
    let scale = T::one().max(m.max_abs());
    let herr = m.hermiticity_error();
    if herr > T::tol(1e-9) * scale {
        return Err(Error::NotHermitian(herr.to_f64_lossy()));
    }
    let n = m.rows();
    let mut a = m.clone();
    a.hermitize();
    let mut v = CMatrix::<T>::identity(n);

    let total = a.norm_sq();
    let stop = T::epsilon() * T::epsilon() * total;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_sq(&a) <= stop {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.partial_cmp(&a[(i, i)].re).expect("finite eigenvalues").then(i.cmp(&j)));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (col, &src) in order.iter().enumerate() {
        let mut vec = v.column(src);
        fix_phase(&mut vec);
        for (row, z) in vec.into_iter().enumerate() {
            vectors[(row, col)] = z;
        }
    }
    Ok(HermitianEigen { values, vectors })
}

/// Eigendecomposition of a real symmetric matrix; eigenvectors are real.
pub fn symmetric_eig<T: Scalar>(m: &RMatrix<T>) -> Result<(Vec<T>, RMatrix<T>)> {
    let eig = hermitian_eig(&m.to_complex())?;
    let n = m.rows();
    let vecs = RMatrix::from_fn(n, n, |i, j| eig.vectors[(i, j)].re);
    Ok((eig.values, vecs))
}

/// Eigenvalues only, non-increasing.
pub fn symmetric_eigenvalues<T: Scalar>(m: &RMatrix<T>) -> Result<Vec<T>> {
    Ok(symmetric_eig(m)?.0)
}

/// Relative eigenvalue gap below which two eigenvalues count as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-8;

/// Groups a non-increasing spectrum into clusters of (near-)equal eigenvalues.
///
/// Consecutive eigenvalues closer than `rel_tol * max(1, spectral range)`
/// share a cluster; clusters are returned as index ranges.
pub fn cluster_spectrum<T: Scalar>(values: &[T], rel_tol: f64) -> Vec<std::ops::Range<usize>> {
    if values.is_empty() {
        return Vec::new();
    }
    let range = values[0] - values[values.len() - 1];
    let gap = T::tol(rel_tol) * T::one().max(range.abs());
    let mut clusters = Vec::new();
    let mut start = 0;
    for i in 1..values.len() {
        if (values[i - 1] - values[i]).abs() >= gap {
            clusters.push(start..i);
            start = i;
        }
    }
    clusters.push(start..values.len());
    clusters
}

fn off_diagonal_sq<T: Scalar>(a: &CMatrix<T>) -> T {
    let n = a.rows();
    let mut s = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s
}

/// One Jacobi rotation annihilating `a[p][q]`; `v` accumulates the rotations.
fn rotate<T: Scalar>(a: &mut CMatrix<T>, v: &mut CMatrix<T>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == T::zero() {
        return;
    }
    let phase = apq / mag;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (T::lit(2.0) * mag);
    let t = if theta.is_infinite() {
        T::zero()
    } else {
        let sign = if theta >= T::zero() { T::one() } else { -T::one() };
        sign / (theta.abs() + (theta * theta + T::one()).sqrt())
    };
    let c = T::one() / (t * t + T::one()).sqrt();
    let s = t * c;

    // J = diag(1, conj(phase)) * [[c, s], [-s, c]]
    let zero = T::zero();
    let jpp = Complex::new(c, zero);
    let jpq = Complex::new(s, zero);
    let jqp = phase.conj() * (-s);
    let jqq = phase.conj() * c;

    let n = a.rows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * jpp + akq * jqp;
        a[(k, q)] = akp * jpq + akq * jqq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
        a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
    }
    a[(p, q)] = Complex::new(zero, zero);
    a[(q, p)] = Complex::new(zero, zero);
    a[(p, p)] = Complex::new(a[(p, p)].re, zero);
    a[(q, q)] = Complex::new(a[(q, q)].re, zero);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * jpp + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * jqq;
    }
}

/// Rotates the global phase so the first entry of (near-)maximal modulus is
/// real and positive.
fn fix_phase<T: Scalar>(vec: &mut [Complex<T>]) {
    let max = vec.iter().fold(T::zero(), |acc, z| acc.max(z.norm()));
    if max == T::zero() {
        return;
    }
    let cutoff = max * (T::one() - T::tol(1e-9));
    let pivot = vec.iter().find(|z| z.norm() >= cutoff).copied().expect("non-empty vector");
    let phase = pivot.conj() / pivot.norm();
    for z in vec.iter_mut() {
        *z *= phase;
    }
}
