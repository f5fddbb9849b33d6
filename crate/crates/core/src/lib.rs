//! Simulation and analysis of classical reversible gates built from
//! time-independent few-qubit spin Hamiltonians.

pub mod analysis;
pub mod circuits;
pub mod dynamics;
pub mod error;
pub mod fault_tolerance;
pub mod hamiltonian;
pub mod linalg;
pub mod realizations;

pub use error::{Error, Result};
