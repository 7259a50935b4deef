//! Definition-level MiN and geometric discord by direct search over von
//! Neumann measurements.
//!
//! Nothing here touches the Bloch representation: every value is the
//! squared Hilbert–Schmidt distance `||ρ − Π(ρ)||²` between raw matrices,
//! optimized over measurement bases. This is the reference the closed forms
//! in [`crate::measures`] are checked against.
//!
//! MiN only admits measurements that leave `ρ^(l)` invariant, i.e. bases of
//! eigenvectors of `ρ^(l)`. When the spectrum has degenerate clusters the
//! search rotates freely inside each cluster's eigenspace. Discord searches
//! the full unitary group of the measured part.
//!
//! The search has two stages. A coarse stage samples the parameter space: a
//! Fibonacci point set on the Bloch sphere when the only free block is two
//! dimensional, otherwise Haar-random block unitaries with one RNG stream
//! per restart. A refinement stage then runs a compass search along the
//! off-diagonal generator rotations `exp(i t λ)` of each block, halving the
//! step whenever no direction improves.

use std::ops::Range;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::qcore::{
    apply_measurement, cluster_spectrum, dephase, hermitian_eig, local_conjugate, partial_trace, CMatrix,
    DensityOperator, MeasurementBasis, DEGENERACY_TOL,
};
use crate::scalar::Scalar;
use crate::states::{haar_unitary, rng_stream};

const INITIAL_STEP: f64 = 0.4;
const MIN_STEP: f64 = 1e-9;
const MAX_REFINE_ROUNDS: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchConfig {
    /// Coarse samples per restart (or Fibonacci sphere points).
    pub grid_points: usize,
    /// Independent refinement starts.
    pub restarts: usize,
    /// Refinement rounds with improvement below `tol` before declaring convergence.
    pub refine_iters: usize,
    pub seed: u64,
    pub tol: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self { grid_points: 64, restarts: 4, refine_iters: 40, seed: 0, tol: 1e-14 }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grid_points == 0 {
            return Err(Error::InvalidConfig("grid_points must be at least 1"));
        }
        if self.restarts == 0 {
            return Err(Error::InvalidConfig("restarts must be at least 1"));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::InvalidConfig("tol must be positive"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleResult<T> {
    /// Normalized measure `d_l/(d_l−1) · ||ρ − Π(ρ)||²` at the optimum found.
    pub value: T,
    /// Best value before refinement, same normalization.
    pub coarse_value: T,
    pub basis: MeasurementBasis<T>,
    pub evaluations: usize,
    pub converged: bool,
}

/// `||ρ − Π(ρ)||²` for the measurement defined by `basis`.
pub fn distance_sq<T: Scalar>(rho: &DensityOperator<T>, basis: &MeasurementBasis<T>) -> Result<T> {
    let post = apply_measurement(rho, basis)?;
    Ok(rho.matrix().distance_sq(post.matrix()).max(T::zero()))
}

/// Whether the measurement leaves the marginal of its subsystem unchanged.
pub fn marginal_invariant<T: Scalar>(rho: &DensityOperator<T>, basis: &MeasurementBasis<T>, tol: f64) -> Result<bool> {
    let marginal = partial_trace(rho, basis.subsystem())?;
    if marginal.rows() != basis.dim() {
        return Err(Error::DimensionMismatch { expected: marginal.rows(), found: basis.dim() });
    }
    let mut measured = CMatrix::zeros(basis.dim(), basis.dim());
    for k in 0..basis.dim() {
        let p = basis.projector(k);
        measured = &measured + &p.matmul(&marginal).matmul(&p);
    }
    Ok(measured.max_abs_diff(&marginal) <= T::tol(tol))
}

/// MiN by maximizing the distance over measurements that preserve `ρ^(l)`.
pub fn min_direct<T: Scalar>(rho: &DensityOperator<T>, l: usize, cfg: &SearchConfig) -> Result<OracleResult<T>> {
    min_direct_with_visitor(rho, l, cfg, |_| {})
}

/// [`min_direct`], calling `visit` on every basis the search evaluates.
pub fn min_direct_with_visitor<T: Scalar>(
    rho: &DensityOperator<T>,
    l: usize,
    cfg: &SearchConfig,
    mut visit: impl FnMut(&MeasurementBasis<T>),
) -> Result<OracleResult<T>> {
    cfg.validate()?;
    rho.profile().check_index(l)?;
    let eig = hermitian_eig(&partial_trace(rho, l)?)?;
    let clusters = cluster_spectrum(&eig.values, DEGENERACY_TOL);
    let problem = Problem { rho, l, base: eig.vectors, blocks: clusters, sense: Sense::Maximize };
    problem.solve(cfg, &mut visit)
}

/// Geometric discord by minimizing the distance over all measurements on part `l`.
pub fn discord_direct<T: Scalar>(rho: &DensityOperator<T>, l: usize, cfg: &SearchConfig) -> Result<OracleResult<T>> {
    cfg.validate()?;
    rho.profile().check_index(l)?;
    let d = rho.profile().dim(l);
    let whole = 0..d;
    let problem = Problem { rho, l, base: CMatrix::identity(d), blocks: vec![whole], sense: Sense::Minimize };
    problem.solve(cfg, &mut |_| {})
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Sense {
    Maximize,
    Minimize,
}

impl Sense {
    fn better<T: Scalar>(self, candidate: T, incumbent: T) -> bool {
        match self {
            Sense::Maximize => candidate > incumbent,
            Sense::Minimize => candidate < incumbent,
        }
    }
}

/// Measurement bases `base · blockdiag(B_1, …, B_m)` with each `B_i` unitary.
struct Problem<'a, T> {
    rho: &'a DensityOperator<T>,
    l: usize,
    base: CMatrix<T>,
    blocks: Vec<Range<usize>>,
    sense: Sense,
}

type Blocks<T> = Vec<CMatrix<T>>;

impl<T: Scalar> Problem<'_, T> {
    fn free_blocks(&self) -> Vec<usize> {
        (0..self.blocks.len()).filter(|&b| self.blocks[b].len() > 1).collect()
    }

    fn identity_blocks(&self) -> Blocks<T> {
        self.blocks.iter().map(|r| CMatrix::identity(r.len())).collect()
    }

    fn unitary(&self, blocks: &Blocks<T>) -> CMatrix<T> {
        let d = self.base.rows();
        let mut full = CMatrix::zeros(d, d);
        for (range, b) in self.blocks.iter().zip(blocks) {
            for (i, gi) in range.clone().enumerate() {
                for (j, gj) in range.clone().enumerate() {
                    full[(gi, gj)] = b[(i, j)];
                }
            }
        }
        self.base.matmul(&full)
    }

    /// Unnormalized `||ρ − Π(ρ)||²`, evaluated in the rotated frame where the
    /// measurement is a dephasing of the subsystem digit.
    fn objective(&self, u: &CMatrix<T>) -> T {
        let profile = self.rho.profile();
        let rotated = local_conjugate(self.rho.matrix(), &u.dagger(), self.l, profile).expect("local dimension");
        let mut kept = rotated.clone();
        dephase(&mut kept, self.l, profile);
        (rotated.norm_sq() - kept.norm_sq()).max(T::zero())
    }

    fn evaluate(&self, blocks: &Blocks<T>, evals: &mut usize, visit: &mut dyn FnMut(&MeasurementBasis<T>)) -> T {
        let u = self.unitary(blocks);
        *evals += 1;
        visit(&MeasurementBasis::from_unitary_unchecked(self.l, u.clone()));
        self.objective(&u)
    }

    fn solve(&self, cfg: &SearchConfig, visit: &mut dyn FnMut(&MeasurementBasis<T>)) -> Result<OracleResult<T>> {
        let d = T::from_usize_lossy(self.base.rows());
        let norm = d / (d - T::one());
        let free = self.free_blocks();
        let mut evals = 0;

        if free.is_empty() {
            let blocks = self.identity_blocks();
            let value = self.evaluate(&blocks, &mut evals, visit);
            return Ok(self.finish(blocks, value * norm, value * norm, evals, true));
        }

        let starts = self.coarse(cfg, &free, &mut evals, visit);
        let coarse_best = starts.iter().map(|s| s.1).fold(None, |acc: Option<T>, v| match acc {
            Some(a) if !self.sense.better(v, a) => Some(a),
            _ => Some(v),
        });
        let coarse_best = coarse_best.expect("at least one start");

        let mut best: Option<(Blocks<T>, T, bool)> = None;
        for (blocks, value) in starts {
            let (refined, v, conv) = self.refine(cfg, &free, blocks, value, &mut evals, visit);
            let replace = match &best {
                None => true,
                Some((_, bv, _)) => self.sense.better(v, *bv),
            };
            if replace {
                best = Some((refined, v, conv));
            }
        }
        let (blocks, value, converged) = best.expect("at least one start");
        Ok(self.finish(blocks, value * norm, coarse_best * norm, evals, converged))
    }

    fn finish(
        &self,
        blocks: Blocks<T>,
        value: T,
        coarse_value: T,
        evaluations: usize,
        converged: bool,
    ) -> OracleResult<T> {
        let basis = MeasurementBasis::from_unitary_unchecked(self.l, self.unitary(&blocks));
        OracleResult { value, coarse_value, basis, evaluations, converged }
    }

    /// Starting points for refinement, each with its objective value.
    fn coarse(
        &self,
        cfg: &SearchConfig,
        free: &[usize],
        evals: &mut usize,
        visit: &mut dyn FnMut(&MeasurementBasis<T>),
    ) -> Vec<(Blocks<T>, T)> {
        if free.len() == 1 && self.blocks[free[0]].len() == 2 {
            let mut scored: Vec<(usize, Blocks<T>, T)> = fibonacci_sphere(cfg.grid_points)
                .into_iter()
                .enumerate()
                .map(|(idx, axis)| {
                    let mut blocks = self.identity_blocks();
                    blocks[free[0]] = axis_basis(axis);
                    let v = self.evaluate(&blocks, evals, visit);
                    (idx, blocks, v)
                })
                .collect();
            scored.sort_by(|a, b| {
                let ord = match self.sense {
                    Sense::Maximize => b.2.partial_cmp(&a.2),
                    Sense::Minimize => a.2.partial_cmp(&b.2),
                };
                ord.expect("finite objective").then(a.0.cmp(&b.0))
            });
            return scored.into_iter().take(cfg.restarts).map(|(_, b, v)| (b, v)).collect();
        }

        (0..cfg.restarts)
            .map(|r| {
                let mut rng = rng_stream(cfg.seed, r as u64);
                let mut best_blocks = self.identity_blocks();
                let mut best = self.evaluate(&best_blocks, evals, visit);
                for _ in 0..cfg.grid_points {
                    let mut blocks = self.identity_blocks();
                    for &b in free {
                        blocks[b] = haar_unitary(self.blocks[b].len(), &mut rng);
                    }
                    let v = self.evaluate(&blocks, evals, visit);
                    if self.sense.better(v, best) {
                        best = v;
                        best_blocks = blocks;
                    }
                }
                (best_blocks, best)
            })
            .collect()
    }

    /// Compass search along `exp(i t λ)` for the off-diagonal generators of each free block.
    fn refine(
        &self,
        cfg: &SearchConfig,
        free: &[usize],
        mut blocks: Blocks<T>,
        mut value: T,
        evals: &mut usize,
        visit: &mut dyn FnMut(&MeasurementBasis<T>),
    ) -> (Blocks<T>, T, bool) {
        let moves: Vec<(usize, usize, usize, bool)> = free
            .iter()
            .flat_map(|&b| {
                let m = self.blocks[b].len();
                (0..m).flat_map(move |j| (j + 1..m).flat_map(move |k| [(b, j, k, false), (b, j, k, true)]))
            })
            .collect();
        let tol = T::lit(cfg.tol);
        let mut step = T::lit(INITIAL_STEP);
        let mut stall = 0;
        for _ in 0..MAX_REFINE_ROUNDS {
            let before = value;
            let mut improved = false;
            for &(b, j, k, antisym) in &moves {
                for sign in [T::one(), -T::one()] {
                    let mut cand = blocks.clone();
                    rotate_columns(&mut cand[b], j, k, step * sign, antisym);
                    let v = self.evaluate(&cand, evals, visit);
                    if self.sense.better(v, value) {
                        value = v;
                        blocks = cand;
                        improved = true;
                        break;
                    }
                }
            }
            if !improved {
                step *= T::lit(0.5);
            }
            if (value - before).abs() < tol {
                stall += 1;
            } else {
                stall = 0;
            }
            if step < T::lit(MIN_STEP) || stall >= cfg.refine_iters.max(1) {
                return (blocks, value, true);
            }
        }
        (blocks, value, false)
    }
}

/// Right-multiplies `b` by `exp(i t σ)` acting on columns `j`, `k`, where `σ`
/// is `σ_x` (symmetric generator) or `σ_y` (antisymmetric generator).
fn rotate_columns<T: Scalar>(b: &mut CMatrix<T>, j: usize, k: usize, t: T, antisym: bool) {
    let (c, s) = (t.cos(), t.sin());
    let zero = T::zero();
    let (rjj, rjk, rkj, rkk) = if antisym {
        (Complex::new(c, zero), Complex::new(s, zero), Complex::new(-s, zero), Complex::new(c, zero))
    } else {
        (Complex::new(c, zero), Complex::new(zero, s), Complex::new(zero, s), Complex::new(c, zero))
    };
    for row in 0..b.rows() {
        let bj = b[(row, j)];
        let bk = b[(row, k)];
        b[(row, j)] = bj * rjj + bk * rkj;
        b[(row, k)] = bj * rjk + bk * rkk;
    }
}

/// `n` nearly uniform unit vectors on the sphere (golden-angle spiral).
fn fibonacci_sphere(n: usize) -> Vec<[f64; 3]> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * i as f64;
            [r * phi.cos(), r * phi.sin(), z]
        })
        .collect()
}

/// Basis `{|n>, |−n>}` of spin states along the Bloch axis `n`.
fn axis_basis<T: Scalar>(axis: [f64; 3]) -> CMatrix<T> {
    let theta = axis[2].clamp(-1.0, 1.0).acos();
    let phi = axis[1].atan2(axis[0]);
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let e = Complex::new(phi.cos(), phi.sin());
    let entries = [Complex::new(c, 0.0), -e.conj() * s, e * s, Complex::new(c, 0.0)];
    CMatrix::from_vec(2, 2, entries.iter().map(|z| Complex::new(T::lit(z.re), T::lit(z.im))).collect()).expect("2x2")
}
