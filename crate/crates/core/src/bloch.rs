//! Generalized Gell-Mann bases and the Bloch representation of
//! multipartite density operators.
//!
//! A state on `d_1 ⊗ … ⊗ d_n` is expanded as
//!
//! ```text
//! ρ = (1/Πd) [ I + Σ_S Π_{k∈S}(d_k/2) Σ_α t^S_α λ^{(k1)}_{α1} ⋯ λ^{(kM)}_{αM} ]
//! ```
//!
//! where `S` runs over non-empty subsets and `t^S_α = tr(ρ λ^{(k1)}_{α1} ⋯)`
//! are the unweighted moments stored in [`BlochData`]. The `d_k/2` weights
//! only appear during reconstruction.

use std::collections::BTreeMap;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::qcore::{kron_all, reduce, CMatrix, DensityOperator, DimensionProfile};
use crate::scalar::Scalar;

/// The `d²−1` generalized Gell-Mann matrices for one local dimension.
///
/// Order: symmetric off-diagonal pairs `(j,k)`, `j<k` lexicographic; the
/// antisymmetric pairs in the same order; then the diagonal generators.
/// For `d = 2` this is `(σ_x, σ_y, σ_z)`.
#[derive(Clone, Debug)]
pub struct OperatorBasis<T> {
    dim: usize,
    generators: Vec<CMatrix<T>>,
}

impl<T: Scalar> OperatorBasis<T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[CMatrix<T>] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn get(&self, alpha: usize) -> &CMatrix<T> {
        &self.generators[alpha]
    }
}

/// Generalized Gell-Mann generators with `tr(λ_α λ_β) = 2δ_αβ`.
pub fn generators<T: Scalar>(d: usize) -> Result<OperatorBasis<T>> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let zero = T::zero();
    let one = T::one();
    let pairs: Vec<(usize, usize)> = (0..d).flat_map(|j| (j + 1..d).map(move |k| (j, k))).collect();
    let mut gens = Vec::with_capacity(d * d - 1);
    for &(j, k) in &pairs {
        let mut m = CMatrix::zeros(d, d);
        m[(j, k)] = Complex::new(one, zero);
        m[(k, j)] = Complex::new(one, zero);
        gens.push(m);
    }
    for &(j, k) in &pairs {
        let mut m = CMatrix::zeros(d, d);
        m[(j, k)] = Complex::new(zero, -one);
        m[(k, j)] = Complex::new(zero, one);
        gens.push(m);
    }
    for l in 1..d {
        let lf = T::from_usize_lossy(l);
        let norm = (T::lit(2.0) / (lf * (lf + one))).sqrt();
        let mut diag = vec![zero; d];
        for x in diag.iter_mut().take(l) {
            *x = norm;
        }
        diag[l] = -lf * norm;
        gens.push(CMatrix::from_real_diagonal(&diag));
    }
    Ok(OperatorBasis { dim: d, generators: gens })
}

/// Dense real array with row-major layout.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor<T> {
    shape: Vec<usize>,
    data: Vec<T>,
}

impl<T: Scalar> Tensor<T> {
    pub fn zeros(shape: Vec<usize>) -> Self {
        let len = shape.iter().product();
        Self { shape, data: vec![T::zero(); len] }
    }

    pub fn from_vec(shape: Vec<usize>, data: Vec<T>) -> Result<Self> {
        let len: usize = shape.iter().product();
        if len != data.len() {
            return Err(Error::DimensionMismatch { expected: len, found: data.len() });
        }
        Ok(Self { shape, data })
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    fn offset(&self, index: &[usize]) -> usize {
        assert_eq!(index.len(), self.shape.len(), "index rank differs from tensor rank");
        index.iter().zip(&self.shape).fold(0, |acc, (&i, &n)| {
            assert!(i < n, "index out of bounds");
            acc * n + i
        })
    }

    pub fn get(&self, index: &[usize]) -> T {
        self.data[self.offset(index)]
    }

    pub fn set(&mut self, index: &[usize], value: T) {
        let off = self.offset(index);
        self.data[off] = value;
    }

    /// Squared Frobenius norm.
    pub fn norm_sq(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, &x| acc + x * x)
    }

    /// Size of the first axis.
    pub fn leading(&self) -> usize {
        self.shape[0]
    }

    /// Entries with the first index fixed to `alpha`.
    pub fn slice_leading(&self, alpha: usize) -> &[T] {
        let inner = self.data.len() / self.shape[0];
        &self.data[alpha * inner..(alpha + 1) * inner]
    }

    /// Moves axis `axis` to the front.
    pub fn with_axis_first(&self, axis: usize) -> Self {
        if axis == 0 {
            return self.clone();
        }
        let mut order: Vec<usize> = vec![axis];
        order.extend((0..self.shape.len()).filter(|&a| a != axis));
        let shape: Vec<usize> = order.iter().map(|&a| self.shape[a]).collect();
        let mut out = Self::zeros(shape);
        let mut src = vec![0; self.shape.len()];
        for (flat, &value) in self.data.iter().enumerate() {
            let mut rem = flat;
            for a in (0..self.shape.len()).rev() {
                src[a] = rem % self.shape[a];
                rem /= self.shape[a];
            }
            let dst: Vec<usize> = order.iter().map(|&a| src[a]).collect();
            out.set(&dst, value);
        }
        out
    }
}

/// Coherent vectors and correlation tensors of a state, keyed by subsystem subset.
///
/// Singleton subsets hold the coherent vectors `s^(k)`; larger subsets hold
/// the `M`-body moments. All entries are unweighted expectation values.
#[derive(Clone, Debug, PartialEq)]
pub struct BlochData<T> {
    profile: DimensionProfile,
    tensors: BTreeMap<Vec<usize>, Tensor<T>>,
}

impl<T: Scalar> BlochData<T> {
    /// Data with every tensor zero, the Bloch form of the maximally mixed state.
    pub fn zeros(profile: DimensionProfile) -> Self {
        let tensors = subsets(profile.parties())
            .into_iter()
            .map(|s| {
                let shape = s.iter().map(|&k| profile.dim(k).pow(2) - 1).collect();
                (s, Tensor::zeros(shape))
            })
            .collect();
        Self { profile, tensors }
    }

    /// Assembles data from explicit tensors; completeness is checked on use.
    pub fn from_tensors(profile: DimensionProfile, tensors: BTreeMap<Vec<usize>, Tensor<T>>) -> Result<Self> {
        for (subset, t) in &tensors {
            profile.check_subset(subset)?;
            let shape: Vec<usize> = subset.iter().map(|&k| profile.dim(k).pow(2) - 1).collect();
            if t.shape() != shape.as_slice() {
                return Err(Error::DimensionMismatch { expected: shape.iter().product(), found: t.as_slice().len() });
            }
        }
        Ok(Self { profile, tensors })
    }

    pub fn profile(&self) -> &DimensionProfile {
        &self.profile
    }

    /// Coherent vector `s^(k)`.
    pub fn coherent(&self, k: usize) -> Result<&[T]> {
        Ok(self.tensor(&[k])?.as_slice())
    }

    pub fn tensor(&self, subset: &[usize]) -> Result<&Tensor<T>> {
        self.tensors.get(subset).ok_or_else(|| Error::IncompleteBloch(subset.to_vec()))
    }

    pub fn tensor_mut(&mut self, subset: &[usize]) -> Result<&mut Tensor<T>> {
        self.tensors.get_mut(subset).ok_or_else(|| Error::IncompleteBloch(subset.to_vec()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<usize>, &Tensor<T>)> {
        self.tensors.iter()
    }
}

/// All non-empty increasing subsets of `0..n`, ordered by size then lexicographically.
pub fn subsets(n: usize) -> Vec<Vec<usize>> {
    let mut all: Vec<Vec<usize>> =
        (1u64..(1 << n)).map(|mask| (0..n).filter(|&k| mask & (1 << k) != 0).collect()).collect();
    all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    all
}

/// Unweighted moments `t_{α1…αM} = tr(ρ λ^{(k1)}_{α1} ⋯ λ^{(kM)}_{αM})`.
///
/// For a singleton subset this is the coherent vector.
pub fn correlation_tensor<T: Scalar>(rho: &DensityOperator<T>, subset: &[usize]) -> Result<Tensor<T>> {
    let profile = rho.profile();
    profile.check_subset(subset)?;
    let local = reduce(rho, subset)?;
    let bases = subset.iter().map(|&k| generators::<T>(profile.dim(k))).collect::<Result<Vec<_>>>()?;
    let shape: Vec<usize> = bases.iter().map(|b| b.len()).collect();
    let mut out = Tensor::zeros(shape.clone());
    let mut index = vec![0usize; shape.len()];
    loop {
        let factors: Vec<CMatrix<T>> = index.iter().zip(&bases).map(|(&a, b)| b.get(a).clone()).collect();
        let op = kron_all(&factors);
        out.set(&index, trace_product(local.matrix(), &op));
        if !advance(&mut index, &shape) {
            break;
        }
    }
    Ok(out)
}

/// Full Bloch decomposition: all `2^n − 1` coherent vectors and tensors.
pub fn bloch_decompose<T: Scalar>(rho: &DensityOperator<T>) -> Result<BlochData<T>> {
    let profile = rho.profile().clone();
    let tensors = subsets(profile.parties())
        .into_iter()
        .map(|s| correlation_tensor(rho, &s).map(|t| (s, t)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    Ok(BlochData { profile, tensors })
}

/// Rebuilds `ρ` from its Bloch data, applying the `Π d_k/2` weights.
pub fn bloch_reconstruct<T: Scalar>(data: &BlochData<T>) -> Result<DensityOperator<T>> {
    let profile = data.profile();
    let n = profile.parties();
    let total = profile.total();
    let bases = profile.dims().iter().map(|&d| generators::<T>(d)).collect::<Result<Vec<_>>>()?;
    let identities: Vec<CMatrix<T>> = profile.dims().iter().map(|&d| CMatrix::identity(d)).collect();
    let mut acc = CMatrix::<T>::identity(total);
    for subset in subsets(n) {
        let t = data.tensor(&subset)?;
        let weight = subset.iter().fold(T::one(), |w, &k| w * T::from_usize_lossy(profile.dim(k)) / T::lit(2.0));
        let shape = t.shape().to_vec();
        let mut index = vec![0usize; shape.len()];
        loop {
            let coeff = t.get(&index);
            if coeff != T::zero() {
                let mut factors = identities.clone();
                for (pos, &k) in subset.iter().enumerate() {
                    factors[k] = bases[k].get(index[pos]).clone();
                }
                acc = &acc + &kron_all(&factors).scale(weight * coeff);
            }
            if !advance(&mut index, &shape) {
                break;
            }
        }
    }
    DensityOperator::new(acc.scale(T::one() / T::from_usize_lossy(total)), profile.clone())
}

/// `tr ρ²` computed from Bloch data: `(1/Πd)[1 + Σ_S (Π_{k∈S} d_k/2) ||t^S||²]`.
pub fn purity_from_bloch<T: Scalar>(data: &BlochData<T>) -> Result<T> {
    let profile = data.profile();
    let mut sum = T::one();
    for subset in subsets(profile.parties()) {
        let w = subset.iter().fold(T::one(), |w, &k| w * T::from_usize_lossy(profile.dim(k)) / T::lit(2.0));
        sum += w * data.tensor(&subset)?.norm_sq();
    }
    Ok(sum / T::from_usize_lossy(profile.total()))
}

/// `Re tr(a b)` for Hermitian `a`, `b`.
fn trace_product<T: Scalar>(a: &CMatrix<T>, b: &CMatrix<T>) -> T {
    let n = a.rows();
    let mut s = T::zero();
    for i in 0..n {
        for j in 0..n {
            s += (a[(i, j)] * b[(j, i)]).re;
        }
    }
    s
}

/// Odometer increment over a multi-index; returns false after the last index.
pub(crate) fn advance(index: &mut [usize], shape: &[usize]) -> bool {
    for pos in (0..index.len()).rev() {
        index[pos] += 1;
        if index[pos] < shape[pos] {
            return true;
        }
        index[pos] = 0;
    }
    false
}
