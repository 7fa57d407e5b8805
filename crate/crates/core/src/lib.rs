//! Density-matrix parametrizations: Bloch vectors over su(n) bases,
//! characteristic-coefficient positivity tests, three-level Bloch dynamics,
//! two-qubit partial-transpose analysis, polarization operators and the
//! recursive Jarlskog factorization of SU(n) and of composite states.

pub mod bloch;
pub mod composite;
pub mod dynamics;
pub mod error;
pub mod jarlskog;
pub mod matrix;
pub mod polarization;
pub mod su_basis;
pub mod two_qubit;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};
pub use matrix::{ComplexMatrix, RealMatrix, Subsystem};
