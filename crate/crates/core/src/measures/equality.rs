//! Criteria under which MiN and geometric discord coincide for a qubit part.
//!
//! With `s ≠ 0` the only admissible measurement axis is `ŝ`, so `N = D`
//! exactly when `ŝ` is the top eigenvector of `G = s s^t + K`: `ŝ` must be
//! an eigenvector of `K` with eigenvalue `η_s`, and `||s||² + η_s` must
//! dominate the rest of the spectrum. With `s = 0` the two measures
//! minimize and maximize the same quadratic form, which agree only when `K`
//! is a multiple of the identity.

use super::mixed::{k_matrix, ZERO_COHERENT_TOL};
use crate::bloch::BlochData;
use crate::error::Result;
use crate::qcore::{symmetric_eigenvalues, RMatrix};
use crate::scalar::Scalar;

/// Residual bound for `‖K ŝ − (ŝ^t K ŝ) ŝ‖` in the Case I alignment test.
pub const ALIGNMENT_TOL: f64 = 1e-8;
/// Relative eigenvalue spread of `K` below which it counts as triply degenerate.
pub const TRIPLE_DEGENERACY_TOL: f64 = 1e-8;
/// Slack allowed in `||s||² + η_s ≥ η_i`.
const EIGEN_CONDITION_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EqualityCase {
    /// Non-zero coherent vector.
    CaseI,
    /// Vanishing coherent vector.
    CaseII,
    /// Part `l` is not a qubit.
    NotApplicable,
}

impl EqualityCase {
    pub fn label(self) -> &'static str {
        match self {
            EqualityCase::CaseI => "I",
            EqualityCase::CaseII => "II",
            EqualityCase::NotApplicable => "n/a",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EqualityVerdict<T> {
    pub case: EqualityCase,
    /// Frobenius norm of `[s s^t, K]`, reported for diagnostics.
    pub commutator_norm: T,
    /// `ŝ` is an eigenvector of `K` (Case I only).
    pub aligned: bool,
    /// `||s||² + η_s ≥ η_i` for every other eigenvalue (Case I only).
    pub eigen_condition: bool,
    /// `||s||² + η_s − max_{i≠s} η_i`, the quantity whose sign decides Case I.
    pub margin: Option<T>,
    pub triply_degenerate: bool,
    pub predicted_equal: bool,
}

/// Evaluates the Case I / Case II equality test for part `l`.
pub fn equality_verdict<T: Scalar>(bloch: &BlochData<T>, l: usize) -> Result<EqualityVerdict<T>> {
    let profile = bloch.profile();
    profile.check_index(l)?;
    if profile.dim(l) != 2 {
        return Ok(EqualityVerdict {
            case: EqualityCase::NotApplicable,
            commutator_norm: T::zero(),
            aligned: false,
            eigen_condition: false,
            margin: None,
            triply_degenerate: false,
            predicted_equal: false,
        });
    }
    let k = k_matrix(bloch, l)?;
    let km = k.matrix();
    let s = bloch.coherent(l)?;
    let s_norm = s.iter().fold(T::zero(), |acc, &x| acc + x * x).sqrt();
    let scale = T::one().max(km.norm());
    let eta = k.eigenvalues()?;
    let spread = eta[0] - eta[eta.len() - 1];
    let triply_degenerate = spread < T::tol(TRIPLE_DEGENERACY_TOL) * scale;

    let outer = RMatrix::from_fn(s.len(), s.len(), |i, j| s[i] * s[j]);
    let commutator_norm = outer.matmul(km).sub(&km.matmul(&outer)).norm();

    if s_norm <= T::tol(ZERO_COHERENT_TOL) {
        return Ok(EqualityVerdict {
            case: EqualityCase::CaseII,
            commutator_norm,
            aligned: false,
            eigen_condition: false,
            margin: None,
            triply_degenerate,
            predicted_equal: triply_degenerate,
        });
    }

    let unit: Vec<T> = s.iter().map(|&x| x / s_norm).collect();
    let ks = km.mat_vec(&unit);
    let eta_s = ks.iter().zip(&unit).fold(T::zero(), |acc, (a, b)| acc + *a * *b);
    let residual = ks.iter().zip(&unit).fold(T::zero(), |acc, (a, b)| acc + (*a - eta_s * *b).powi(2)).sqrt();
    let aligned = residual < T::tol(ALIGNMENT_TOL);

    // Spectrum of K on the complement of ŝ; K is PSD so the zero left on ŝ never wins the max.
    let proj = RMatrix::from_fn(unit.len(), unit.len(), |i, j| {
        let id = if i == j { T::one() } else { T::zero() };
        id - unit[i] * unit[j]
    });
    let complement = proj.matmul(km).matmul(&proj);
    let other_max = symmetric_eigenvalues(&complement)?[0];
    let margin = s_norm * s_norm + eta_s - other_max;
    let eigen_condition = margin >= -T::tol(EIGEN_CONDITION_TOL) * scale;

    Ok(EqualityVerdict {
        case: EqualityCase::CaseI,
        commutator_norm,
        aligned,
        eigen_condition,
        margin: Some(margin),
        triply_degenerate,
        predicted_equal: aligned && eigen_condition,
    })
}
