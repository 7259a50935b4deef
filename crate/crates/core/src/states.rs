//! Named states, the two-state mixing families, and seeded random states.
//!
//! Qubit 1 is the leftmost label in `|i_1 i_2 i_3>`, matching the row-major
//! product basis.
//!
//! Random generators use ChaCha8 seeded with `seed`. Independent streams
//! derived from one seed are selected with [`rng_stream`]`(seed, stream)`,
//! so sequences are reproducible across platforms.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::error::{Error, Result};
use crate::qcore::{CMatrix, DensityOperator, DimensionProfile, PureState};
use crate::scalar::Scalar;

fn real<T: Scalar>(x: f64) -> Complex<T> {
    Complex::new(T::lit(x), T::zero())
}

fn from_terms<T: Scalar>(n: usize, terms: &[(usize, f64)]) -> PureState<T> {
    let profile = DimensionProfile::qubits(n).expect("n >= 1");
    let mut amps = vec![real::<T>(0.0); profile.total()];
    for &(idx, a) in terms {
        amps[idx] = real(a);
    }
    PureState::normalized(amps, profile).expect("non-zero amplitudes")
}

/// `(|0…0> + |1…1>)/√2` on `n ≥ 2` qubits.
pub fn ghz<T: Scalar>(n: usize) -> Result<PureState<T>> {
    if n < 2 {
        return Err(Error::TooFewParties { min: 2, found: n });
    }
    Ok(from_terms(n, &[(0, 1.0), ((1 << n) - 1, 1.0)]))
}

/// `(|000> − |111>)/√2`
pub fn ghz_minus<T: Scalar>() -> PureState<T> {
    from_terms(3, &[(0b000, 1.0), (0b111, -1.0)])
}

/// `(|001> + |110>)/√2`
pub fn ghz_1<T: Scalar>() -> PureState<T> {
    from_terms(3, &[(0b001, 1.0), (0b110, 1.0)])
}

/// `(|001> + |010> + |100>)/√3`
pub fn w3<T: Scalar>() -> PureState<T> {
    from_terms(3, &[(0b001, 1.0), (0b010, 1.0), (0b100, 1.0)])
}

/// `σ_x⊗σ_x⊗σ_x |W> = (|110> + |101> + |011>)/√3`
pub fn w3_flipped<T: Scalar>() -> PureState<T> {
    from_terms(3, &[(0b110, 1.0), (0b101, 1.0), (0b011, 1.0)])
}

/// `|Φ+> = (|00> + |11>)/√2`
pub fn bell<T: Scalar>() -> PureState<T> {
    from_terms(2, &[(0b00, 1.0), (0b11, 1.0)])
}

/// `√w |00> + √(1−w) |11>`
pub fn schmidt_qubits<T: Scalar>(w: f64) -> Result<PureState<T>> {
    if !(0.0..=1.0).contains(&w) {
        return Err(Error::InvalidProbability(w));
    }
    Ok(from_terms(2, &[(0b00, w.sqrt()), (0b11, (1.0 - w).sqrt())]))
}

/// The four rank-two mixing families `ρ(p) = p|a><a| + (1−p)|b><b|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// GHZ mixed with W.
    GhzW,
    /// Flipped W mixed with W.
    WtW,
    /// GHZ mixed with GHZ₋.
    GhzGhzMinus,
    /// GHZ mixed with GHZ₁.
    GhzGhz1,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::GhzW, Family::WtW, Family::GhzGhzMinus, Family::GhzGhz1];

    pub fn name(self) -> &'static str {
        match self {
            Family::GhzW => "ghz-w",
            Family::WtW => "wt-w",
            Family::GhzGhzMinus => "ghz-ghzminus",
            Family::GhzGhz1 => "ghz-ghz1",
        }
    }

    /// The states weighted by `p` and `1 − p`.
    pub fn components<T: Scalar>(self) -> (PureState<T>, PureState<T>) {
        match self {
            Family::GhzW => (ghz(3).expect("n = 3"), w3()),
            Family::WtW => (w3_flipped(), w3()),
            Family::GhzGhzMinus => (ghz(3).expect("n = 3"), ghz_minus()),
            Family::GhzGhz1 => (ghz(3).expect("n = 3"), ghz_1()),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown family '{s}' (expected ghz-w, wt-w, ghz-ghzminus or ghz-ghz1)"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FamilySpec {
    family: Family,
    p: f64,
}

impl FamilySpec {
    pub fn new(family: Family, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidProbability(p));
        }
        Ok(Self { family, p })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

/// `ρ(p) = p|a><a| + (1−p)|b><b|` for the given family.
pub fn family<T: Scalar>(spec: &FamilySpec) -> DensityOperator<T> {
    let (a, b) = spec.family.components::<T>();
    let p = T::lit(spec.p);
    let m = &a.density().matrix().scale(p) + &b.density().matrix().scale(T::one() - p);
    DensityOperator::from_matrix_unchecked(m, a.profile().clone())
}

/// ChaCha8 generator for stream `stream` of `seed`.
pub fn rng_stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex<f64> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

fn cast<T: Scalar>(z: Complex<f64>) -> Complex<T> {
    Complex::new(T::lit(z.re), T::lit(z.im))
}

/// Haar-random pure state drawn from `rng`: a normalized complex Gaussian vector.
pub fn haar_pure_with<T: Scalar, R: Rng + ?Sized>(profile: &DimensionProfile, rng: &mut R) -> PureState<T> {
    let raw: Vec<Complex<f64>> = (0..profile.total()).map(|_| complex_gaussian(rng)).collect();
    let norm = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let amps = raw.into_iter().map(|z| cast(z / norm)).collect();
    PureState::normalized(amps, profile.clone()).expect("Gaussian vector is non-zero")
}

/// Haar-random pure state, deterministic in `seed`.
pub fn haar_pure<T: Scalar>(profile: &DimensionProfile, seed: u64) -> PureState<T> {
    haar_pure_with(profile, &mut rng_stream(seed, 0))
}

/// Haar-random `d × d` unitary: Gram–Schmidt (QR with positive `R` diagonal)
/// of a complex Gaussian matrix.
pub fn haar_unitary<T: Scalar, R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix<T> {
    let mut cols: Vec<Vec<Complex<f64>>> = (0..d).map(|_| (0..d).map(|_| complex_gaussian(rng)).collect()).collect();
    for j in 0..d {
        for i in 0..j {
            let (done, rest) = cols.split_at_mut(j);
            let qi = &done[i];
            let proj: Complex<f64> = qi.iter().zip(&rest[0]).map(|(a, b)| a.conj() * b).sum();
            for (x, q) in rest[0].iter_mut().zip(qi) {
                *x -= proj * q;
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for x in cols[j].iter_mut() {
            *x /= norm;
        }
    }
    CMatrix::from_fn(d, d, |i, j| cast(cols[j][i]))
}

/// Mixture of `rank` Haar pure states with flat-Dirichlet weights.
pub fn random_mixed_with<T: Scalar, R: Rng + ?Sized>(
    profile: &DimensionProfile,
    rank: usize,
    rng: &mut R,
) -> Result<DensityOperator<T>> {
    let total = profile.total();
    if rank == 0 || rank > total {
        return Err(Error::InvalidRank { rank, total });
    }
    let raw: Vec<f64> = (0..rank).map(|_| rng.sample(Exp1)).collect();
    let sum: f64 = raw.iter().sum();
    let mut acc = CMatrix::<T>::zeros(total, total);
    for w in raw {
        let psi: PureState<T> = haar_pure_with(profile, rng);
        acc = &acc + &psi.density().matrix().scale(T::lit(w / sum));
    }
    acc.hermitize();
    Ok(DensityOperator::from_matrix_unchecked(acc, profile.clone()))
}

pub fn random_mixed<T: Scalar>(profile: &DimensionProfile, rank: usize, seed: u64) -> Result<DensityOperator<T>> {
    random_mixed_with(profile, rank, &mut rng_stream(seed, 0))
}

/// One Haar unitary per subsystem.
pub fn random_local_unitaries<T: Scalar, R: Rng + ?Sized>(profile: &DimensionProfile, rng: &mut R) -> Vec<CMatrix<T>> {
    profile.dims().iter().map(|&d| haar_unitary(d, rng)).collect()
}
