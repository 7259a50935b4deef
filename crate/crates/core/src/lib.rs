//! Measurement-induced nonlocality (MiN) and geometric discord for
//! multipartite quantum states.
//!
//! Closed forms live in [`measures`]; [`oracle`] evaluates the same
//! quantities by direct optimization over von Neumann measurements and is
//! used to cross-check them. Subsystem indices are 0-based throughout the
//! library.

pub mod bloch;
pub mod error;
pub mod measures;
pub mod oracle;
pub mod qcore;
pub mod scalar;
pub mod states;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type CMatrix64 = qcore::CMatrix<f64>;
pub type RMatrix64 = qcore::RMatrix<f64>;
pub type DensityOperator64 = qcore::DensityOperator<f64>;
pub type PureState64 = qcore::PureState<f64>;
pub type MeasurementBasis64 = qcore::MeasurementBasis<f64>;
pub type BlochData64 = bloch::BlochData<f64>;
pub type KMatrix64 = measures::KMatrix<f64>;
pub type OracleResult64 = oracle::OracleResult<f64>;

pub type CMatrix32 = qcore::CMatrix<f32>;
pub type DensityOperator32 = qcore::DensityOperator<f32>;
pub type PureState32 = qcore::PureState<f32>;
