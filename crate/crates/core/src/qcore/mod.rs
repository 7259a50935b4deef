//! Dense complex linear algebra and multipartite state plumbing.

mod eig;
mod matrix;
mod ops;
mod state;

pub use eig::{cluster_spectrum, hermitian_eig, symmetric_eig, symmetric_eigenvalues, HermitianEigen, DEGENERACY_TOL};
pub use matrix::{hs_inner, kron, kron_all, CMatrix, RMatrix};
pub(crate) use ops::dephase;
pub use ops::{apply_measurement, embed, local_conjugate, partial_trace, reduce};
pub use state::{DensityOperator, DimensionProfile, MeasurementBasis, PureState, CONSTRUCTION_TOL};
