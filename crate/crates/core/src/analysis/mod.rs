//! Closed-form gate analysis: Toffoli and Fredkin amplitudes, integer
//! design conditions, process distance and classical gate extraction.

mod classical;
mod diophantine;
mod fredkin;
mod process;
mod toffoli;

pub use classical::{classical_gate, max_weight_assignment, ClassicalGate};
pub use diophantine::{candidate, diophantine_scan, DiophantineCandidate, DiophantineScan, ImpossibilityCertificate};
pub use fredkin::{fredkin_analysis, leakage_null_ratio, FredkinAnalysis, FredkinEigenstate, FredkinParams};
pub use process::{
    chi_matrix, fredkin_permutation, ideal_permutation_matrix, magnitude_matrix, pauli_basis,
    process_trace_distance, toffoli_error_law, toffoli_permutation, PauliNormalization,
    ProcessDistanceReport,
};
pub use toffoli::{sinc, toffoli_eigensystem, toffoli_fidelities, ToffoliEigenpair, ToffoliParams};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::linalg::ComplexMatrix;

/// Transition amplitudes `f[(y, x)] = ⟨y|U|x⟩` of a gate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FidelityTable {
    pub f: ComplexMatrix,
    pub gate_time: f64,
}

impl FidelityTable {
    pub fn from_unitary(u: ComplexMatrix, gate_time: f64) -> Self {
        Self { f: u, gate_time }
    }

    pub fn dim(&self) -> usize {
        self.f.rows()
    }

    /// `f_{x→y}`.
    pub fn amplitude(&self, x: usize, y: usize) -> C64 {
        self.f[(y, x)]
    }

    /// Largest deviation of any column 2-norm from 1.
    pub fn column_norm_deviation(&self) -> f64 {
        (0..self.dim())
            .map(|x| {
                let n2: f64 = (0..self.dim()).map(|y| self.f[(y, x)].norm_sqr()).sum();
                (n2.sqrt() - 1.0).abs()
            })
            .fold(0.0, f64::max)
    }
}
