//! Thermal quantum correlations in the two-qubit Heisenberg XYZ chain with
//! Dzyaloshinsky–Moriya and KSEA couplings.
//!
//! The crate evaluates three correlation measures on the Gibbs state of the
//! chain — entropic discord, local quantum uncertainty (LQU) and local quantum
//! Fisher information (LQFI) — from closed-form expressions, and validates them
//! against independent brute-force computations on the dense density matrix.

pub mod analysis;
pub mod cli;
pub mod correlations;
pub mod model;
pub mod oracle;

mod error;

pub use error::SpinCorrError;

pub type Result<T> = std::result::Result<T, SpinCorrError>;
