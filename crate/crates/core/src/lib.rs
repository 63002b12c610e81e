//! Quantum template matching of qubit states.
//!
//! Given `N` identical copies of an unknown qubit state, decide which of several known
//! template states it is most similar to, maximizing the average fidelity. The crate
//! builds the score operators on the `N+1`-dimensional symmetric subspace, constructs
//! optimal and semiclassical measurements for binary and multi-template problems, and
//! checks optimality with the Holevo–Yuen conditions.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the aliases below fix
//! the scalar to `f64`.

pub mod binary;
pub mod combinatorics;
pub mod error;
pub mod linalg;
pub mod multi;
pub mod pom;
pub mod qstates;
pub mod scalar;
pub mod scoreops;

pub use error::{Error, Result};
pub use scalar::Real;

pub type ComplexMatrix = linalg::Matrix<f64>;
pub type EigenDecomposition = linalg::EigenDecomposition<f64>;
pub type QubitState = qstates::QubitState<f64>;
pub type BosonicState = qstates::BosonicState<f64>;
pub type ScoreOperator = scoreops::ScoreOperator<f64>;
pub type Pom = pom::Pom<f64>;
pub type OptimalityReport = pom::OptimalityReport<f64>;
pub type StrategyScore = binary::StrategyScore<f64>;
pub type CovariantPom = multi::CovariantPom<f64>;
pub type ShiftOperator = multi::ShiftOperator<f64>;

#[cfg(test)]
mod proptests;
