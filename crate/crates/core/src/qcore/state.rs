use num_complex::Complex;

use super::eig::hermitian_eig;
use super::matrix::CMatrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Absolute tolerance applied when validating user-supplied states.
pub const CONSTRUCTION_TOL: f64 = 1e-9;

/// Local dimensions `(d_1, …, d_n)` of a multipartite system.
///
/// Product-basis indices are row-major: `i_1` is the most significant digit.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DimensionProfile {
    dims: Vec<usize>,
    total: usize,
}

impl DimensionProfile {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::EmptyProfile);
        }
        if let Some(&bad) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidDimension(bad));
        }
        let total = dims.iter().product();
        Ok(Self { dims, total })
    }

    pub fn qubits(n: usize) -> Result<Self> {
        Self::new(vec![2; n])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, k: usize) -> usize {
        self.dims[k]
    }

    pub fn parties(&self) -> usize {
        self.dims.len()
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn is_all_qubits(&self) -> bool {
        self.dims.iter().all(|&d| d == 2)
    }

    /// Distance in the flat index between consecutive values of digit `k`.
    pub fn stride(&self, k: usize) -> usize {
        self.dims[k + 1..].iter().product()
    }

    /// Digit of subsystem `k` in flat index `i`.
    pub fn digit(&self, i: usize, k: usize) -> usize {
        (i / self.stride(k)) % self.dims[k]
    }

    pub fn check_index(&self, k: usize) -> Result<()> {
        if k < self.dims.len() {
            Ok(())
        } else {
            Err(Error::SubsystemOutOfRange { index: k, count: self.dims.len() })
        }
    }

    /// Validates a strictly increasing, non-empty subset of subsystem indices.
    pub fn check_subset(&self, subset: &[usize]) -> Result<()> {
        let increasing = subset.windows(2).all(|w| w[0] < w[1]);
        if subset.is_empty() || !increasing || subset.iter().any(|&k| k >= self.dims.len()) {
            return Err(Error::InvalidSubset(subset.to_vec()));
        }
        Ok(())
    }

    /// Profile of the subsystems listed in `subset`.
    pub fn restrict(&self, subset: &[usize]) -> Result<Self> {
        self.check_subset(subset)?;
        Self::new(subset.iter().map(|&k| self.dims[k]).collect())
    }
}

/// Density operator on a multipartite Hilbert space.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator<T> {
    matrix: CMatrix<T>,
    profile: DimensionProfile,
}

impl<T: Scalar> DensityOperator<T> {
    /// Validates Hermiticity, unit trace and positivity within [`CONSTRUCTION_TOL`].
    pub fn new(matrix: CMatrix<T>, profile: DimensionProfile) -> Result<Self> {
        check_shape(&matrix, &profile)?;
        let tol = T::tol(CONSTRUCTION_TOL);
        let herr = matrix.hermiticity_error();
        if herr > tol {
            return Err(Error::NotHermitian(herr.to_f64_lossy()));
        }
        let tr = matrix.trace().re;
        if (tr - T::one()).abs() > tol {
            return Err(Error::NotUnitTrace(tr.to_f64_lossy()));
        }
        let eig = hermitian_eig(&matrix)?;
        let smallest = *eig.values.last().expect("non-empty spectrum");
        if smallest < -tol {
            return Err(Error::NotPositive(smallest.to_f64_lossy()));
        }
        let mut matrix = matrix;
        matrix.hermitize();
        Ok(Self { matrix, profile })
    }

    /// Wraps a matrix produced by algebra that preserves the density-operator
    /// properties. Only the shape is checked.
    pub fn from_matrix_unchecked(matrix: CMatrix<T>, profile: DimensionProfile) -> Self {
        check_shape(&matrix, &profile).expect("matrix shape matches profile");
        Self { matrix, profile }
    }

    pub fn maximally_mixed(profile: DimensionProfile) -> Self {
        let n = profile.total();
        let matrix = CMatrix::identity(n).scale(T::one() / T::from_usize_lossy(n));
        Self { matrix, profile }
    }

    /// Convex combination `Σ w_i ρ_i`; weights must be non-negative and sum to one.
    pub fn mixture(parts: &[(T, &DensityOperator<T>)]) -> Result<Self> {
        let (_, first) = parts.first().ok_or(Error::EmptyProfile)?;
        let profile = first.profile.clone();
        let mut acc = CMatrix::zeros(profile.total(), profile.total());
        let mut wsum = T::zero();
        for (w, rho) in parts {
            if rho.profile != profile {
                return Err(Error::DimensionMismatch { expected: profile.total(), found: rho.profile.total() });
            }
            if *w < T::zero() {
                return Err(Error::InvalidProbability(w.to_f64_lossy()));
            }
            acc = &acc + &rho.matrix.scale(*w);
            wsum += *w;
        }
        if (wsum - T::one()).abs() > T::tol(CONSTRUCTION_TOL) {
            return Err(Error::NotUnitTrace(wsum.to_f64_lossy()));
        }
        Ok(Self { matrix: acc, profile })
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn profile(&self) -> &DimensionProfile {
        &self.profile
    }

    pub fn into_matrix(self) -> CMatrix<T> {
        self.matrix
    }

    /// `tr ρ²`
    pub fn purity(&self) -> T {
        self.matrix.norm_sq()
    }

    /// Conjugation `V ρ V†` by a unitary on the full space.
    pub fn conjugate(&self, unitary: &CMatrix<T>) -> Result<Self> {
        if unitary.rows() != self.profile.total() || !unitary.is_square() {
            return Err(Error::DimensionMismatch { expected: self.profile.total(), found: unitary.rows() });
        }
        let mut m = unitary.matmul(&self.matrix).matmul(&unitary.dagger());
        m.hermitize();
        Ok(Self { matrix: m, profile: self.profile.clone() })
    }
}

fn check_shape<T: Scalar>(matrix: &CMatrix<T>, profile: &DimensionProfile) -> Result<()> {
    if !matrix.is_square() || matrix.rows() != profile.total() {
        return Err(Error::DimensionMismatch { expected: profile.total(), found: matrix.rows() });
    }
    Ok(())
}

/// Pure state `Σ a_{i1…in} |i1…in>` stored as a flat row-major amplitude vector.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState<T> {
    amplitudes: Vec<Complex<T>>,
    profile: DimensionProfile,
}

impl<T: Scalar> PureState<T> {
    /// Requires `Σ |a|² = 1` within [`CONSTRUCTION_TOL`].
    pub fn new(amplitudes: Vec<Complex<T>>, profile: DimensionProfile) -> Result<Self> {
        if amplitudes.len() != profile.total() {
            return Err(Error::DimensionMismatch { expected: profile.total(), found: amplitudes.len() });
        }
        let norm = amplitudes.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr());
        if (norm - T::one()).abs() > T::tol(CONSTRUCTION_TOL) {
            return Err(Error::NotNormalized(norm.to_f64_lossy()));
        }
        Ok(Self { amplitudes, profile })
    }

    /// Normalizes `amplitudes` before wrapping them.
    pub fn normalized(amplitudes: Vec<Complex<T>>, profile: DimensionProfile) -> Result<Self> {
        let norm = amplitudes.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt();
        if norm == T::zero() {
            return Err(Error::NotNormalized(0.0));
        }
        Self::new(amplitudes.into_iter().map(|z| z / norm).collect(), profile)
    }

    /// Product-basis state `|i_1 … i_n>`.
    pub fn basis(digits: &[usize], profile: DimensionProfile) -> Result<Self> {
        if digits.len() != profile.parties() {
            return Err(Error::DimensionMismatch { expected: profile.parties(), found: digits.len() });
        }
        let mut idx = 0;
        for (k, &x) in digits.iter().enumerate() {
            if x >= profile.dim(k) {
                return Err(Error::InvalidDimension(x));
            }
            idx = idx * profile.dim(k) + x;
        }
        let mut amps = vec![Complex::new(T::zero(), T::zero()); profile.total()];
        amps[idx] = Complex::new(T::one(), T::zero());
        Self::new(amps, profile)
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    /// Amplitude at product-basis digits `(i_1, …, i_n)`.
    pub fn amplitude(&self, digits: &[usize]) -> Complex<T> {
        let idx = digits.iter().zip(self.profile.dims()).fold(0, |acc, (&x, &d)| acc * d + x);
        self.amplitudes[idx]
    }

    pub fn profile(&self) -> &DimensionProfile {
        &self.profile
    }

    /// `<self|other>`
    pub fn inner(&self, other: &Self) -> Complex<T> {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a.conj() * b)
    }

    pub fn density(&self) -> DensityOperator<T> {
        DensityOperator::from_matrix_unchecked(CMatrix::outer(&self.amplitudes, &self.amplitudes), self.profile.clone())
    }

    /// Tensor product `|self> ⊗ |other>`.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut dims = self.profile.dims().to_vec();
        dims.extend_from_slice(other.profile.dims());
        let amplitudes = self.amplitudes.iter().flat_map(|a| other.amplitudes.iter().map(move |b| a * b)).collect();
        Self { amplitudes, profile: DimensionProfile::new(dims).expect("valid dims") }
    }

    /// Applies a unitary on the full space.
    pub fn evolve(&self, unitary: &CMatrix<T>) -> Result<Self> {
        if unitary.cols() != self.amplitudes.len() {
            return Err(Error::DimensionMismatch { expected: self.amplitudes.len(), found: unitary.cols() });
        }
        Self::normalized(unitary.mat_vec(&self.amplitudes), self.profile.clone())
    }
}

/// Orthonormal basis `{U|k>}` on one subsystem, defining a von Neumann measurement.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementBasis<T> {
    subsystem: usize,
    vectors: CMatrix<T>,
}

impl<T: Scalar> MeasurementBasis<T> {
    /// `vectors` holds the basis as columns; its Gram matrix must be the identity.
    pub fn new(subsystem: usize, vectors: CMatrix<T>) -> Result<Self> {
        if !vectors.is_square() {
            return Err(Error::DimensionMismatch { expected: vectors.rows(), found: vectors.cols() });
        }
        let gram = vectors.dagger().matmul(&vectors);
        let dev = gram.max_abs_diff(&CMatrix::identity(vectors.rows()));
        if dev > T::tol(CONSTRUCTION_TOL) {
            return Err(Error::NotOrthonormal(dev.to_f64_lossy()));
        }
        Ok(Self { subsystem, vectors })
    }

    /// Computational basis on `subsystem`.
    pub fn computational(subsystem: usize, dim: usize) -> Self {
        Self { subsystem, vectors: CMatrix::identity(dim) }
    }

    pub(crate) fn from_unitary_unchecked(subsystem: usize, vectors: CMatrix<T>) -> Self {
        Self { subsystem, vectors }
    }

    pub fn subsystem(&self) -> usize {
        self.subsystem
    }

    pub fn dim(&self) -> usize {
        self.vectors.rows()
    }

    /// Basis vectors as matrix columns.
    pub fn unitary(&self) -> &CMatrix<T> {
        &self.vectors
    }

    pub fn vector(&self, k: usize) -> Vec<Complex<T>> {
        self.vectors.column(k)
    }

    /// Local projector `U|k><k|U†`.
    pub fn projector(&self, k: usize) -> CMatrix<T> {
        let v = self.vector(k);
        CMatrix::outer(&v, &v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_rejects_small_dimensions() {
        assert_eq!(DimensionProfile::new(vec![2, 1]), Err(Error::InvalidDimension(1)));
        assert_eq!(DimensionProfile::new(vec![]), Err(Error::EmptyProfile));
        let p = DimensionProfile::new(vec![2, 3, 2]).unwrap();
        assert_eq!(p.total(), 12);
        assert_eq!(p.stride(0), 6);
        assert_eq!(p.digit(11, 1), 2);
    }

    #[test]
    fn subsets_must_increase() {
        let p = DimensionProfile::qubits(3).unwrap();
        assert!(p.check_subset(&[0, 2]).is_ok());
        assert!(p.check_subset(&[2, 0]).is_err());
        assert!(p.check_subset(&[]).is_err());
        assert!(p.check_subset(&[3]).is_err());
    }

    #[test]
    fn density_validation() {
        let p = DimensionProfile::qubits(1).unwrap();
        let bad_trace = CMatrix::<f64>::identity(2);
        assert!(matches!(DensityOperator::new(bad_trace, p.clone()), Err(Error::NotUnitTrace(_))));
        let negative = CMatrix::from_real_diagonal(&[1.5, -0.5]);
        assert!(matches!(DensityOperator::new(negative, p.clone()), Err(Error::NotPositive(_))));
        let ok = CMatrix::from_real_diagonal(&[0.25, 0.75]);
        assert!(DensityOperator::new(ok, p).is_ok());
    }

    #[test]
    fn pure_state_norm_checked() {
        let p = DimensionProfile::qubits(1).unwrap();
        let amps = vec![Complex::new(1.0f64, 0.0), Complex::new(1.0, 0.0)];
        assert!(matches!(PureState::new(amps.clone(), p.clone()), Err(Error::NotNormalized(_))));
        let psi = PureState::normalized(amps, p).unwrap();
        assert!((psi.density().purity() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn measurement_basis_requires_orthonormal_columns() {
        let m = CMatrix::from_real_diagonal(&[1.0, 2.0]);
        assert!(matches!(MeasurementBasis::new(0, m), Err(Error::NotOrthonormal(_))));
        let b = MeasurementBasis::<f64>::computational(1, 3);
        assert_eq!(b.projector(2)[(2, 2)].re, 1.0);
    }
}
