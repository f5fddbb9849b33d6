use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::pauli::{pauli_string, Pauli};
use crate::linalg::{trace_norm, ComplexMatrix};

/// Scale of the Pauli-product operator basis used for χ-matrices.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum PauliNormalization {
    /// Bare Pauli strings, `tr(P†P) = 8` for three qubits.
    #[default]
    Unnormalized,
    /// Strings scaled by `1/√8`, so `tr(A†A) = 1`.
    Orthonormal,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProcessDistanceReport {
    /// `tr|χ(U) − χ(T)|/16` in the requested normalization.
    pub d_pro: f64,
    /// The same quantity in the other normalization (a factor 8 apart).
    pub d_pro_alternate: f64,
    pub normalization: PauliNormalization,
    /// `3π/(16m₁²)` when an `m₁` hint is given.
    pub leading_bound: Option<f64>,
    /// `1 − mean_x |⟨x|T†U|x⟩|²`.
    pub average_failure: f64,
    /// Whether `average_failure ≤ d_pro`.
    pub bounds_average_failure: bool,
}

/// The 64 three-qubit Pauli products in lexicographic (I, X, Y, Z)³ order.
pub fn pauli_basis(qubits: usize) -> Vec<ComplexMatrix> {
    let count = 4usize.pow(qubits as u32);
    (0..count)
        .map(|mut k| {
            let mut ops = vec![Pauli::I; qubits];
            for slot in (0..qubits).rev() {
                ops[slot] = Pauli::ALL[k % 4];
                k /= 4;
            }
            pauli_string(&ops)
        })
        .collect()
}

/// `χ(M)_{mn} = tr(A_m† M) (tr(A_n† M))*` over the Pauli-product basis.
pub fn chi_matrix(m: &ComplexMatrix, normalization: PauliNormalization) -> Result<ComplexMatrix> {
    let dim = m.rows();
    if !m.is_square() || !dim.is_power_of_two() || dim > 8 {
        return Err(Error::Shape(format!("χ-matrix needs a square 2ⁿ matrix with n ≤ 3, got {}x{}", m.rows(), m.cols())));
    }
    let qubits = dim.trailing_zeros() as usize;
    let scale = match normalization {
        PauliNormalization::Unnormalized => 1.0,
        PauliNormalization::Orthonormal => 1.0 / (dim as f64).sqrt(),
    };
    let coeffs: Vec<C64> = pauli_basis(qubits)
        .iter()
        .map(|a| (&a.adjoint() * m).trace() * scale)
        .collect();
    let k = coeffs.len();
    Ok(ComplexMatrix::from_fn(k, k, |r, c| coeffs[r] * coeffs[c].conj()))
}

/// Process trace distance between the gate `u` and the target `t`.
pub fn process_trace_distance(
    u: &ComplexMatrix,
    t: &ComplexMatrix,
    m1_hint: Option<u32>,
    normalization: PauliNormalization,
) -> Result<ProcessDistanceReport> {
    if u.rows() != 8 || u.cols() != 8 || t.rows() != 8 || t.cols() != 8 {
        return Err(Error::Shape(format!(
            "process distance needs two 8x8 matrices, got {}x{} and {}x{}",
            u.rows(),
            u.cols(),
            t.rows(),
            t.cols()
        )));
    }
    let diff = &chi_matrix(u, normalization)? - &chi_matrix(t, normalization)?;
    let d_pro = trace_norm(&diff)? / 16.0;
    let d_pro_alternate = match normalization {
        PauliNormalization::Unnormalized => d_pro / 8.0,
        PauliNormalization::Orthonormal => d_pro * 8.0,
    };
    let overlap = &t.adjoint() * u;
    let average_failure = 1.0 - (0..8).map(|x| overlap[(x, x)].norm_sqr()).sum::<f64>() / 8.0;
    Ok(ProcessDistanceReport {
        d_pro,
        d_pro_alternate,
        normalization,
        leading_bound: m1_hint.map(toffoli_error_law),
        average_failure,
        bounds_average_failure: average_failure <= d_pro,
    })
}

/// `3π/(16m₁²)`.
pub fn toffoli_error_law(m1: u32) -> f64 {
    3.0 * PI / (16.0 * f64::from(m1).powi(2))
}

/// Real matrix with `⟨perm[x]|P|x⟩ = 1`.
pub fn ideal_permutation_matrix(perm: &[usize]) -> ComplexMatrix {
    let n = perm.len();
    let mut m = ComplexMatrix::zeros(n, n);
    for (x, &y) in perm.iter().enumerate() {
        m[(y, x)] = C64::new(1.0, 0.0);
    }
    m
}

/// Truth table of a Toffoli on `qubits` qubits, flipping `target` when
/// both `controls` are 1. Qubit 0 is the most significant bit.
pub fn toffoli_permutation(qubits: usize, controls: [usize; 2], target: usize) -> Vec<usize> {
    let bit = |q: usize| 1usize << (qubits - 1 - q);
    (0..1usize << qubits)
        .map(|x| {
            if x & bit(controls[0]) != 0 && x & bit(controls[1]) != 0 {
                x ^ bit(target)
            } else {
                x
            }
        })
        .collect()
}

/// Truth table of a controlled swap of `a` and `b`.
pub fn fredkin_permutation(qubits: usize, control: usize, a: usize, b: usize) -> Vec<usize> {
    let bit = |q: usize| 1usize << (qubits - 1 - q);
    (0..1usize << qubits)
        .map(|x| {
            let differ = ((x & bit(a)) != 0) != ((x & bit(b)) != 0);
            if x & bit(control) != 0 && differ {
                x ^ bit(a) ^ bit(b)
            } else {
                x
            }
        })
        .collect()
}

/// `U_{|f|}`: entrywise modulus of `u`.
pub fn magnitude_matrix(u: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_fn(u.rows(), u.cols(), |r, c| C64::new(u[(r, c)].norm(), 0.0))
}
