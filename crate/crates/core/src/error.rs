use thiserror::Error;

/// Errors raised by state construction and by the measure routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("local dimension {0} is invalid (every subsystem needs dimension >= 2)")]
    InvalidDimension(usize),
    #[error("empty dimension profile")]
    EmptyProfile,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),
    #[error("trace is {0}, expected 1")]
    NotUnitTrace(f64),
    #[error("matrix is not positive semidefinite (smallest eigenvalue {0:e})")]
    NotPositive(f64),
    #[error("state norm squared is {0}, expected 1")]
    NotNormalized(f64),
    #[error("measurement vectors are not orthonormal (Gram deviation {0:e})")]
    NotOrthonormal(f64),
    #[error("subsystem index {index} out of range for {count} subsystems")]
    SubsystemOutOfRange { index: usize, count: usize },
    #[error("invalid subsystem subset {0:?}")]
    InvalidSubset(Vec<usize>),
    #[error("subsystem {index} has dimension {dim}, this quantity requires a qubit")]
    NotQubit { index: usize, dim: usize },
    #[error("expected a bipartite state, found {0} parties")]
    NotBipartite(usize),
    #[error("reduced state of subsystem {0} has a degenerate spectrum")]
    DegenerateMarginal(usize),
    #[error("Bloch data is missing the tensor for subset {0:?}")]
    IncompleteBloch(Vec<usize>),
    #[error("mixing weight p = {0} outside [0, 1]")]
    InvalidProbability(f64),
    #[error("need at least {min} parties, found {found}")]
    TooFewParties { min: usize, found: usize },
    #[error("invalid search configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("rank {rank} outside 1..={total}")]
    InvalidRank { rank: usize, total: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
