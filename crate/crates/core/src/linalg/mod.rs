//! Dense complex linear algebra for dimensions up to 64.

pub mod eigen;
pub mod matrix;
pub mod pauli;
pub mod svd;

pub use eigen::{hermitian_eig, propagator, HermitianEigensystem};
pub use matrix::{ComplexMatrix, MAX_DIM};
pub use svd::{singular_values, trace_norm};

pub use num_complex::Complex64 as C64;
