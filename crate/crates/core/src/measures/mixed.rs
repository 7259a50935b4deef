use num_complex::Complex;

use crate::bloch::{bloch_decompose, generators, subsets, BlochData};
use crate::error::{Error, Result};
use crate::qcore::{
    cluster_spectrum, hermitian_eig, symmetric_eigenvalues, CMatrix, DensityOperator, DimensionProfile,
    MeasurementBasis, RMatrix, DEGENERACY_TOL,
};
use crate::scalar::Scalar;

/// Coherent vectors with norm at or below this are treated as zero.
pub const ZERO_COHERENT_TOL: f64 = 1e-9;

/// Gram-type matrix `K^(l)` collecting every correlation tensor that contains `l`.
#[derive(Clone, Debug, PartialEq)]
pub struct KMatrix<T> {
    subsystem: usize,
    matrix: RMatrix<T>,
}

impl<T: Scalar> KMatrix<T> {
    pub fn subsystem(&self) -> usize {
        self.subsystem
    }

    pub fn matrix(&self) -> &RMatrix<T> {
        &self.matrix
    }

    /// Local dimension `d_l`, recovered from the `(d²−1)`-sized matrix.
    pub fn local_dim(&self) -> usize {
        ((self.matrix.rows() + 1) as f64).sqrt().round() as usize
    }

    /// Eigenvalues, non-increasing.
    pub fn eigenvalues(&self) -> Result<Vec<T>> {
        symmetric_eigenvalues(&self.matrix)
    }
}

/// `G^(l) = s s^t + K^(l)` for a qubit subsystem.
#[derive(Clone, Debug, PartialEq)]
pub struct GMatrix<T> {
    subsystem: usize,
    matrix: RMatrix<T>,
}

impl<T: Scalar> GMatrix<T> {
    pub fn subsystem(&self) -> usize {
        self.subsystem
    }

    pub fn matrix(&self) -> &RMatrix<T> {
        &self.matrix
    }

    pub fn largest_eigenvalue(&self) -> Result<T> {
        Ok(symmetric_eigenvalues(&self.matrix)?[0])
    }
}

/// `d × (d²−1)` matrix `a_{j,i} = <j|λ_i|j>/√2` for a basis `{|j>}` of one subsystem.
#[derive(Clone, Debug, PartialEq)]
pub struct IsometryRows<T> {
    subsystem: usize,
    rows: RMatrix<T>,
}

impl<T: Scalar> IsometryRows<T> {
    pub fn subsystem(&self) -> usize {
        self.subsystem
    }

    pub fn rows(&self) -> &RMatrix<T> {
        &self.rows
    }

    /// `tr(A K A^t)`
    pub fn project(&self, k: &KMatrix<T>) -> T {
        self.rows.matmul(&k.matrix).matmul(&self.rows.transpose()).trace()
    }
}

/// Prefactor `d_l / ((d_l − 1) Π_k d_k)` turning the Bloch-space term into a normalized measure.
pub fn normalization<T: Scalar>(profile: &DimensionProfile, l: usize) -> T {
    let d = T::from_usize_lossy(profile.dim(l));
    d / ((d - T::one()) * T::from_usize_lossy(profile.total()))
}

/// `K^(l)_{αβ} = Σ_S w_S Σ_γ t_{αγ} t_{βγ}` over subsets `S ∋ l` with at least two parts,
/// weighted by `w_S = Π_{k∈S} d_k / 2^{|S|}` (one for all-qubit systems).
pub fn k_matrix<T: Scalar>(bloch: &BlochData<T>, l: usize) -> Result<KMatrix<T>> {
    let profile = bloch.profile();
    profile.check_index(l)?;
    let size = profile.dim(l).pow(2) - 1;
    let mut k = RMatrix::zeros(size, size);
    for subset in subsets(profile.parties()) {
        let Some(pos) = subset.iter().position(|&x| x == l) else {
            continue;
        };
        if subset.len() < 2 {
            continue;
        }
        let weight = subset.iter().fold(T::one(), |w, &x| w * T::from_usize_lossy(profile.dim(x)) / T::lit(2.0));
        let t = bloch.tensor(&subset)?.with_axis_first(pos);
        for a in 0..size {
            let ra = t.slice_leading(a);
            for b in a..size {
                let rb = t.slice_leading(b);
                let dot = ra.iter().zip(rb).fold(T::zero(), |acc, (x, y)| acc + *x * *y);
                k[(a, b)] += weight * dot;
            }
        }
    }
    for a in 0..size {
        for b in 0..a {
            k[(a, b)] = k[(b, a)];
        }
    }
    Ok(KMatrix { subsystem: l, matrix: k })
}

/// Sum of the `d_l² − d_l` largest eigenvalues of `K^(l)`: an upper bound on the
/// unnormalized MiN term `tr K − min_A tr(A K A^t)`.
pub fn min_bound<T: Scalar>(k: &KMatrix<T>) -> Result<T> {
    let d = k.local_dim();
    let eta = k.eigenvalues()?;
    Ok(eta.iter().take(d * d - d).fold(T::zero(), |acc, &x| acc + x))
}

fn require_qubit(profile: &DimensionProfile, l: usize) -> Result<()> {
    profile.check_index(l)?;
    match profile.dim(l) {
        2 => Ok(()),
        dim => Err(Error::NotQubit { index: l, dim }),
    }
}

fn norm_sq<T: Scalar>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |acc, &x| acc + x * x)
}

/// Unnormalized MiN term for a qubit part: `tr K − ŝ^t K ŝ`, or `tr K − η_min` when `s = 0`.
pub fn min_qubit_term<T: Scalar>(bloch: &BlochData<T>, l: usize) -> Result<T> {
    require_qubit(bloch.profile(), l)?;
    let k = k_matrix(bloch, l)?;
    let s = bloch.coherent(l)?;
    let s2 = norm_sq(s);
    let trace = k.matrix.trace();
    let subtracted = if s2.sqrt() > T::tol(ZERO_COHERENT_TOL) {
        k.matrix.quadratic_form(s) / s2
    } else {
        *k.eigenvalues()?.last().expect("three eigenvalues")
    };
    Ok(trace - subtracted)
}

/// MiN of a qubit part from Bloch data.
pub fn min_qubit_bloch<T: Scalar>(bloch: &BlochData<T>, l: usize) -> Result<T> {
    let term = min_qubit_term(bloch, l)?;
    Ok((normalization::<T>(bloch.profile(), l) * term).max(T::zero()))
}

/// MiN `N_l(ρ)` when part `l` is a qubit.
pub fn min_qubit<T: Scalar>(rho: &DensityOperator<T>, l: usize) -> Result<T> {
    require_qubit(rho.profile(), l)?;
    min_qubit_bloch(&bloch_decompose(rho)?, l)
}

/// Builds `A^(l)` from the columns of a measurement basis.
pub fn isometry_rows<T: Scalar>(basis: &MeasurementBasis<T>) -> Result<IsometryRows<T>> {
    let d = basis.dim();
    let gens = generators::<T>(d)?;
    let root2 = T::lit(2.0).sqrt();
    let vectors: Vec<Vec<Complex<T>>> = (0..d).map(|j| basis.vector(j)).collect();
    let rows = RMatrix::from_fn(d, gens.len(), |j, i| {
        let v = &vectors[j];
        let lv = gens.get(i).mat_vec(v);
        let expectation = v.iter().zip(&lv).fold(T::zero(), |acc, (a, b)| acc + (a.conj() * b).re);
        expectation / root2
    });
    Ok(IsometryRows { subsystem: basis.subsystem(), rows })
}

/// Marginal `ρ^(l) = I/d + ½ Σ_α s_α λ_α` rebuilt from the coherent vector.
fn marginal_from_bloch<T: Scalar>(bloch: &BlochData<T>, l: usize) -> Result<CMatrix<T>> {
    let d = bloch.profile().dim(l);
    let gens = generators::<T>(d)?;
    let s = bloch.coherent(l)?;
    let half = T::lit(0.5);
    let start = CMatrix::identity(d).scale(T::one() / T::from_usize_lossy(d));
    Ok(gens.generators().iter().zip(s).fold(start, |acc, (g, &x)| &acc + &g.scale(half * x)))
}

/// MiN for any local dimension when the marginal of `l` has a non-degenerate
/// spectrum: the unique admissible measurement is the marginal eigenbasis.
pub fn min_general_nondegenerate_bloch<T: Scalar>(bloch: &BlochData<T>, l: usize) -> Result<T> {
    let profile = bloch.profile();
    profile.check_index(l)?;
    let marginal = marginal_from_bloch(bloch, l)?;
    let eig = hermitian_eig(&marginal)?;
    if cluster_spectrum(&eig.values, DEGENERACY_TOL).len() != eig.values.len() {
        return Err(Error::DegenerateMarginal(l));
    }
    let basis = MeasurementBasis::new(l, eig.vectors)?;
    let a = isometry_rows(&basis)?;
    let k = k_matrix(bloch, l)?;
    let term = k.matrix.trace() - a.project(&k);
    Ok((normalization::<T>(profile, l) * term).max(T::zero()))
}

pub fn min_general_nondegenerate<T: Scalar>(rho: &DensityOperator<T>, l: usize) -> Result<T> {
    rho.profile().check_index(l)?;
    min_general_nondegenerate_bloch(&bloch_decompose(rho)?, l)
}

/// `G^(l) = s^(l) (s^(l))^t + K^(l)`; part `l` must be a qubit.
pub fn g_matrix<T: Scalar>(bloch: &BlochData<T>, l: usize) -> Result<GMatrix<T>> {
    require_qubit(bloch.profile(), l)?;
    let k = k_matrix(bloch, l)?;
    let s = bloch.coherent(l)?;
    let outer = RMatrix::from_fn(s.len(), s.len(), |i, j| s[i] * s[j]);
    Ok(GMatrix { subsystem: l, matrix: outer.add(&k.matrix) })
}

/// Geometric discord of a qubit part from Bloch data:
/// normalization × `(||s||² + tr K − λ_max(G))`.
pub fn discord_qubit_bloch<T: Scalar>(bloch: &BlochData<T>, l: usize) -> Result<T> {
    let g = g_matrix(bloch, l)?;
    let s2 = norm_sq(bloch.coherent(l)?);
    let k = k_matrix(bloch, l)?;
    let term = s2 + k.matrix.trace() - g.largest_eigenvalue()?;
    Ok((normalization::<T>(bloch.profile(), l) * term).max(T::zero()))
}

/// Geometric discord `D_l(ρ)` with the measurement on qubit `l`.
pub fn discord_qubit<T: Scalar>(rho: &DensityOperator<T>, l: usize) -> Result<T> {
    require_qubit(rho.profile(), l)?;
    discord_qubit_bloch(&bloch_decompose(rho)?, l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{kron, PureState};
    use crate::states::{self, Family, FamilySpec};

    fn family(f: Family, p: f64) -> DensityOperator<f64> {
        states::family(&FamilySpec::new(f, p).unwrap())
    }

    fn classical() -> DensityOperator<f64> {
        DensityOperator::new(CMatrix::from_real_diagonal(&[0.5, 0.0, 0.0, 0.5]), DimensionProfile::qubits(2).unwrap())
            .unwrap()
    }

    #[test]
    fn bound_examples() {
        let k = KMatrix { subsystem: 0, matrix: RMatrix::<f64>::identity(3) };
        assert!((min_bound(&k).unwrap() - 2.0).abs() < 1e-14);
        let k = KMatrix { subsystem: 0, matrix: RMatrix::<f64>::from_diagonal(&[3.0, 2.0, 1.0]) };
        assert!((min_bound(&k).unwrap() - 5.0).abs() < 1e-14);
    }

    #[test]
    fn ghz_ghz1_midpoint_has_identity_k() {
        let bloch = bloch_decompose(&family(Family::GhzGhz1, 0.5)).unwrap();
        let k = k_matrix(&bloch, 0).unwrap();
        assert!(k.matrix().max_abs_diff(&RMatrix::identity(3)) < 1e-14);
        assert!((min_bound(&k).unwrap() - 2.0).abs() < 1e-14);
        assert!(min_qubit_term(&bloch, 0).unwrap() <= 2.0 + 1e-12);
    }

    #[test]
    fn bell_values() {
        let bell = states::bell::<f64>().density();
        assert!((min_qubit(&bell, 0).unwrap() - 1.0).abs() < 1e-14);
        assert!((discord_qubit(&bell, 0).unwrap() - 1.0).abs() < 1e-14);
        let g = g_matrix(&bloch_decompose(&bell).unwrap(), 0).unwrap();
        assert!(g.matrix().max_abs_diff(&RMatrix::identity(3)) < 1e-14);
    }

    #[test]
    fn classical_state_with_degenerate_marginal() {
        // Zero discord, but the flat marginal lets an x measurement erase the zz correlation.
        assert!((min_qubit(&classical(), 0).unwrap() - 0.5).abs() < 1e-14);
        assert!(discord_qubit(&classical(), 0).unwrap().abs() < 1e-14);
        let oracle = crate::oracle::min_direct(&classical(), 0, &Default::default()).unwrap();
        assert!((oracle.value - 0.5).abs() < 1e-9);
    }

    #[test]
    fn pure_ghz_through_mixed_formula() {
        let rho = family(Family::GhzW, 1.0);
        assert!((min_qubit(&rho, 0).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn w_discord_matches_pure_formula() {
        let rho = states::w3::<f64>().density();
        assert!((discord_qubit(&rho, 0).unwrap() - 8.0 / 9.0).abs() < 1e-14);
    }

    #[test]
    fn g_matrix_with_coherent_vector() {
        let bloch = bloch_decompose(&family(Family::GhzW, 0.0)).unwrap();
        let g = g_matrix(&bloch, 0).unwrap();
        let k = k_matrix(&bloch, 0).unwrap();
        let diff = g.matrix().sub(k.matrix());
        assert!(diff.max_abs_diff(&RMatrix::from_diagonal(&[0.0, 0.0, 1.0 / 9.0])) < 1e-15);
    }

    #[test]
    fn g_equals_k_without_coherent_vector() {
        let bloch = bloch_decompose(&family(Family::GhzGhzMinus, 0.3)).unwrap();
        let g = g_matrix(&bloch, 0).unwrap();
        let k = k_matrix(&bloch, 0).unwrap();
        assert!(g.matrix().max_abs_diff(k.matrix()) < 1e-15);
    }

    #[test]
    fn qubit_only_routines_reject_qutrits() {
        let psi = states::haar_pure::<f64>(&DimensionProfile::new(vec![3, 2]).unwrap(), 4);
        let rho = psi.density();
        assert!(matches!(min_qubit(&rho, 0), Err(Error::NotQubit { index: 0, dim: 3 })));
        assert!(matches!(discord_qubit(&rho, 0), Err(Error::NotQubit { .. })));
        assert!(min_qubit(&rho, 1).is_ok());
    }

    #[test]
    fn nondegenerate_formula_matches_pure_formula_for_qubit_qutrit() {
        let profile = DimensionProfile::new(vec![2, 3]).unwrap();
        let psi = PureState::normalized(
            vec![
                Complex::new(0.8, 0.0),
                Complex::new(0.0, 0.0),
                Complex::new(0.0, 0.0),
                Complex::new(0.0, 0.0),
                Complex::new(0.3, 0.0),
                Complex::new(0.0, 0.0),
            ],
            profile,
        )
        .unwrap();
        let rho = psi.density();
        let expected: f64 = crate::measures::min_pure(&psi, 0).unwrap();
        assert!((min_general_nondegenerate(&rho, 0).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn nondegenerate_formula_matches_qubit_formula() {
        let rho = family(Family::GhzW, 0.5);
        let general = min_general_nondegenerate(&rho, 0).unwrap();
        assert!((general - min_qubit(&rho, 0).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn product_state_has_zero_min() {
        let r1 = CMatrix::<f64>::from_real_diagonal(&[0.6, 0.3, 0.1]);
        let r2 = CMatrix::from_real_diagonal(&[0.5, 0.5]);
        let rho = DensityOperator::new(kron(&r1, &r2), DimensionProfile::new(vec![3, 2]).unwrap()).unwrap();
        assert!(min_general_nondegenerate(&rho, 0).unwrap().abs() < 1e-14);
        assert!(matches!(min_general_nondegenerate(&rho, 1), Err(Error::DegenerateMarginal(1))));
    }

    #[test]
    fn isometry_row_entries() {
        let basis = MeasurementBasis::<f64>::computational(0, 3);
        let a = isometry_rows(&basis).unwrap();
        let gens = generators::<f64>(3).unwrap();
        for j in 0..3 {
            let mut row_norm = 0.0;
            for i in 0..8 {
                let expected = gens.get(i)[(j, j)].re / 2f64.sqrt();
                assert!((a.rows()[(j, i)] - expected).abs() < 1e-12);
                row_norm += a.rows()[(j, i)].powi(2);
            }
            assert!((row_norm - (1.0 - 1.0 / 3.0)).abs() < 1e-12);
        }
    }
}
