//! Singular values by one-sided (Hestenes) Jacobi orthogonalization. Small
//! singular values keep full relative accuracy, which matters for trace
//! norms of nearly-equal χ-matrices.

use num_complex::Complex64 as C64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 80;

/// Singular values in descending order.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    // Work on columns of M (or M† when wide) so the number of columns <= rows.
    let work = if m.cols() > m.rows() { m.adjoint() } else { m.clone() };
    let rows = work.rows();
    let mut cols: Vec<Vec<C64>> = (0..work.cols()).map(|c| work.column(c)).collect();
    let n = cols.len();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n {
            for j in i + 1..n {
                let alpha: f64 = cols[i].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[j].iter().map(|z| z.norm_sqr()).sum();
                let gamma: C64 = cols[i].iter().zip(&cols[j]).map(|(a, b)| a.conj() * b).sum();
                let g = gamma.norm();
                if g == 0.0 || g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let w = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                } else {
                    -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for k in 0..rows {
                    let a = cols[i][k];
                    let b = cols[j][k] * w.conj();
                    cols[i][k] = a * c - b * s;
                    cols[j][k] = a * s + b * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sv: Vec<f64> =
        cols.iter().map(|col| col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Sum of singular values of a square matrix.
pub fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    Ok(singular_values(m).iter().sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_matrix_has_zero_trace_norm() {
        assert_eq!(trace_norm(&ComplexMatrix::zeros(8, 8)).unwrap(), 0.0);
    }

    #[test]
    fn identity_trace_norm_is_dimension() {
        assert!((trace_norm(&ComplexMatrix::identity(8)).unwrap() - 8.0).abs() < 1e-14);
    }

    #[test]
    fn rank_one_outer_product() {
        // Unit-modulus entries, so ‖v‖² = 8 and v v† has trace norm 8.
        let v = [
            C64::new(1.0, 0.0),
            C64::new(0.0, 1.0),
            C64::new(-1.0, 0.0),
            C64::new(1.0, 0.0),
            C64::new(0.0, 1.0),
            C64::new(0.6, 0.8),
            C64::new(1.0, 0.0),
            C64::new(1.0, 0.0),
        ];
        let norm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        assert!((norm2 - 8.0).abs() < 1e-14);
        let m = ComplexMatrix::from_fn(8, 8, |r, c| v[r] * v[c].conj());
        let svs = singular_values(&m);
        assert!((svs[0] - 8.0).abs() < 1e-13);
        assert!(svs[1] < 1e-13);
        assert!((trace_norm(&m).unwrap() - 8.0).abs() < 1e-13);
    }

    #[test]
    fn wide_and_tall_agree() {
        let m = ComplexMatrix::from_fn(3, 5, |r, c| C64::new((r * 5 + c) as f64, (r as f64) - (c as f64)));
        let a = singular_values(&m);
        let b = singular_values(&m.adjoint());
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn non_square_trace_norm_rejected() {
        assert!(trace_norm(&ComplexMatrix::zeros(2, 3)).is_err());
    }
}
