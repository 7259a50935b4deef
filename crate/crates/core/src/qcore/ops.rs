use num_complex::Complex;

use super::matrix::CMatrix;
use super::state::{DensityOperator, DimensionProfile, MeasurementBasis};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Reduced state `ρ^(l) = tr_{l̄} ρ` of subsystem `keep` (0-based).
pub fn partial_trace<T: Scalar>(rho: &DensityOperator<T>, keep: usize) -> Result<CMatrix<T>> {
    let profile = rho.profile();
    profile.check_index(keep)?;
    let d = profile.dim(keep);
    let stride = profile.stride(keep);
    let m = rho.matrix();
    let mut out = CMatrix::zeros(d, d);
    for i in 0..profile.total() {
        let a = profile.digit(i, keep);
        let base = i - a * stride;
        for b in 0..d {
            out[(a, b)] += m[(i, base + b * stride)];
        }
    }
    Ok(out)
}

/// Reduced state on an increasing subset of subsystems.
pub fn reduce<T: Scalar>(rho: &DensityOperator<T>, keep: &[usize]) -> Result<DensityOperator<T>> {
    let profile = rho.profile();
    let sub = profile.restrict(keep)?;
    let traced: Vec<usize> = (0..profile.parties()).filter(|k| !keep.contains(k)).collect();
    let n = profile.total();
    let key = |i: usize, ks: &[usize]| ks.iter().fold(0, |acc, &k| acc * profile.dim(k) + profile.digit(i, k));
    let kept_idx: Vec<usize> = (0..n).map(|i| key(i, keep)).collect();
    let traced_idx: Vec<usize> = (0..n).map(|i| key(i, &traced)).collect();
    let m = rho.matrix();
    let mut out = CMatrix::zeros(sub.total(), sub.total());
    for i in 0..n {
        for j in 0..n {
            if traced_idx[i] == traced_idx[j] {
                out[(kept_idx[i], kept_idx[j])] += m[(i, j)];
            }
        }
    }
    Ok(DensityOperator::from_matrix_unchecked(out, sub))
}

/// `I ⊗ … ⊗ op ⊗ … ⊗ I` with `op` on subsystem `k`.
pub fn embed<T: Scalar>(op: &CMatrix<T>, k: usize, profile: &DimensionProfile) -> Result<CMatrix<T>> {
    profile.check_index(k)?;
    check_local(op, profile.dim(k))?;
    let n = profile.total();
    let stride = profile.stride(k);
    Ok(CMatrix::from_fn(n, n, |i, j| {
        let (a, b) = (profile.digit(i, k), profile.digit(j, k));
        if i - a * stride == j - b * stride {
            op[(a, b)]
        } else {
            Complex::new(T::zero(), T::zero())
        }
    }))
}

/// `(I ⊗ u ⊗ I) m (I ⊗ u ⊗ I)†` without forming the full operator.
pub fn local_conjugate<T: Scalar>(
    m: &CMatrix<T>,
    u: &CMatrix<T>,
    k: usize,
    profile: &DimensionProfile,
) -> Result<CMatrix<T>> {
    profile.check_index(k)?;
    let d = profile.dim(k);
    check_local(u, d)?;
    let n = profile.total();
    let stride = profile.stride(k);
    let zero = Complex::new(T::zero(), T::zero());
    let mut left = CMatrix::<T>::zeros(n, n);
    for i in 0..n {
        let a = profile.digit(i, k);
        let base = i - a * stride;
        for c in 0..d {
            let coeff = u[(a, c)];
            if coeff == zero {
                continue;
            }
            let src = base + c * stride;
            for j in 0..n {
                left[(i, j)] += coeff * m[(src, j)];
            }
        }
    }
    let mut out = CMatrix::<T>::zeros(n, n);
    for j in 0..n {
        let b = profile.digit(j, k);
        let base = j - b * stride;
        for c in 0..d {
            let coeff = u[(b, c)].conj();
            if coeff == zero {
                continue;
            }
            let src = base + c * stride;
            for i in 0..n {
                out[(i, j)] += left[(i, src)] * coeff;
            }
        }
    }
    Ok(out)
}

/// Post-measurement state `Σ_k Π_k ρ Π_k` for a von Neumann measurement on one subsystem.
pub fn apply_measurement<T: Scalar>(
    rho: &DensityOperator<T>,
    basis: &MeasurementBasis<T>,
) -> Result<DensityOperator<T>> {
    let profile = rho.profile();
    let k = basis.subsystem();
    profile.check_index(k)?;
    let u = basis.unitary();
    let mut rotated = local_conjugate(rho.matrix(), &u.dagger(), k, profile)?;
    dephase(&mut rotated, k, profile);
    let mut back = local_conjugate(&rotated, u, k, profile)?;
    back.hermitize();
    Ok(DensityOperator::from_matrix_unchecked(back, profile.clone()))
}

/// Zeroes every entry whose row and column differ in the digit of subsystem `k`.
pub(crate) fn dephase<T: Scalar>(m: &mut CMatrix<T>, k: usize, profile: &DimensionProfile) {
    let n = profile.total();
    let digits: Vec<usize> = (0..n).map(|i| profile.digit(i, k)).collect();
    for i in 0..n {
        for j in 0..n {
            if digits[i] != digits[j] {
                m[(i, j)] = Complex::new(T::zero(), T::zero());
            }
        }
    }
}

fn check_local<T: Scalar>(op: &CMatrix<T>, d: usize) -> Result<()> {
    if op.rows() != d || op.cols() != d {
        return Err(Error::DimensionMismatch { expected: d, found: op.rows() });
    }
    Ok(())
}
