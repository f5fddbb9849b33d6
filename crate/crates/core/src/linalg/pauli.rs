//! Single-qubit Pauli matrices and their embedding into n-qubit registers.
//! Qubit 0 is the most significant bit of the basis index.

use num_complex::Complex64 as C64;

use super::matrix::ComplexMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn matrix(self) -> ComplexMatrix {
        match self {
            Pauli::I => ComplexMatrix::identity(2),
            Pauli::X => sigma_x(),
            Pauli::Y => sigma_y(),
            Pauli::Z => sigma_z(),
        }
    }

    pub fn label(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

fn two_by_two(a: C64, b: C64, c: C64, d: C64) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(2, 2);
    m[(0, 0)] = a;
    m[(0, 1)] = b;
    m[(1, 0)] = c;
    m[(1, 1)] = d;
    m
}

pub fn sigma_x() -> ComplexMatrix {
    let (o, l) = (C64::new(0.0, 0.0), C64::new(1.0, 0.0));
    two_by_two(o, l, l, o)
}

pub fn sigma_y() -> ComplexMatrix {
    let o = C64::new(0.0, 0.0);
    two_by_two(o, C64::new(0.0, -1.0), C64::new(0.0, 1.0), o)
}

pub fn sigma_z() -> ComplexMatrix {
    ComplexMatrix::from_real_diagonal(&[1.0, -1.0])
}

/// `op` acting on `qubit` of an `n`-qubit register.
pub fn embed(op: &ComplexMatrix, qubit: usize, n: usize) -> ComplexMatrix {
    assert!(qubit < n, "qubit {qubit} out of range for {n} qubits");
    let mut out = ComplexMatrix::identity(1);
    for q in 0..n {
        out = if q == qubit { out.kron(op) } else { out.kron(&ComplexMatrix::identity(2)) };
    }
    out
}

/// Tensor product of one Pauli per qubit.
pub fn pauli_string(ops: &[Pauli]) -> ComplexMatrix {
    ops.iter().fold(ComplexMatrix::identity(1), |acc, p| acc.kron(&p.matrix()))
}

/// Eigenvalue of σᶻ on `qubit` for basis state `index`: +1 for bit 0, −1 for bit 1.
pub fn z_sign(index: usize, qubit: usize, n: usize) -> f64 {
    if (index >> (n - 1 - qubit)) & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}
