//! Closed-form MiN and geometric discord.
//!
//! Both measures are normalized by `d_l/(d_l−1)` applied to a squared
//! Hilbert–Schmidt distance, so that a maximally entangled pure state has
//! value one on every part.

mod equality;
mod mixed;

pub use equality::{equality_verdict, EqualityCase, EqualityVerdict, ALIGNMENT_TOL, TRIPLE_DEGENERACY_TOL};
pub use mixed::{
    discord_qubit, discord_qubit_bloch, g_matrix, isometry_rows, k_matrix, min_bound, min_general_nondegenerate,
    min_general_nondegenerate_bloch, min_qubit, min_qubit_bloch, min_qubit_term, normalization, GMatrix, IsometryRows,
    KMatrix, ZERO_COHERENT_TOL,
};

use crate::error::{Error, Result};
use crate::qcore::{partial_trace, PureState};
use crate::scalar::Scalar;

/// `tr (ρ^(l))²` for a pure state, from the amplitudes.
pub fn marginal_purity<T: Scalar>(psi: &PureState<T>, l: usize) -> Result<T> {
    Ok(partial_trace(&psi.density(), l)?.norm_sq())
}

/// MiN of a pure state: `d_l/(d_l−1) · (1 − tr (ρ^(l))²)`.
pub fn min_pure<T: Scalar>(psi: &PureState<T>, l: usize) -> Result<T> {
    psi.profile().check_index(l)?;
    let d = T::from_usize_lossy(psi.profile().dim(l));
    let purity = marginal_purity(psi, l)?;
    Ok((d / (d - T::one()) * (T::one() - purity)).max(T::zero()))
}

/// Geometric discord of a pure state, which coincides with its MiN.
pub fn discord_pure<T: Scalar>(psi: &PureState<T>, l: usize) -> Result<T> {
    min_pure(psi, l)
}

/// Concurrence `C = sqrt(2(1 − tr ρ_A²))` of a bipartite pure state.
pub fn concurrence_pure_bipartite<T: Scalar>(psi: &PureState<T>) -> Result<T> {
    let n = psi.profile().parties();
    if n != 2 {
        return Err(Error::NotBipartite(n));
    }
    let purity = marginal_purity(psi, 0)?;
    Ok((T::lit(2.0) * (T::one() - purity)).max(T::zero()).sqrt())
}

/// Meyer–Wallach entanglement `Q = (1/n) Σ_k 2(1 − tr ρ_k²)`.
pub fn meyer_wallach<T: Scalar>(psi: &PureState<T>) -> Result<T> {
    let n = psi.profile().parties();
    let mut sum = T::zero();
    for k in 0..n {
        sum += T::lit(2.0) * (T::one() - marginal_purity(psi, k)?);
    }
    Ok(sum / T::from_usize_lossy(n))
}
