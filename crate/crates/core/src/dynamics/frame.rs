use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::SpinSystemSpec;
use crate::linalg::pauli::z_sign;
use crate::linalg::ComplexMatrix;

/// Diagonal frame generator `G = Σ_q (zeeman_q + hyperfine_q) σᶻ_q/2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameGenerator {
    pub zeeman: Vec<f64>,
    #[serde(default)]
    pub hyperfine: Vec<f64>,
}

impl FrameGenerator {
    pub fn new(zeeman: Vec<f64>) -> Self {
        let n = zeeman.len();
        Self { zeeman, hyperfine: vec![0.0; n] }
    }

    pub fn with_hyperfine(zeeman: Vec<f64>, hyperfine: Vec<f64>) -> Result<Self> {
        if zeeman.len() != hyperfine.len() {
            return Err(Error::InvalidParameter(format!(
                "{} Zeeman weights but {} hyperfine weights",
                zeeman.len(),
                hyperfine.len()
            )));
        }
        Ok(Self { zeeman, hyperfine })
    }

    /// The identity frame on `qubits` qubits.
    pub fn zero(qubits: usize) -> Self {
        Self::new(vec![0.0; qubits])
    }

    /// The z-field part of `spec`, so the frame absorbs all single-qubit
    /// precession.
    pub fn from_z_fields(spec: &SpinSystemSpec) -> Self {
        Self::new((0..spec.qubits).map(|q| spec.z_field(q)).collect())
    }

    /// Recovers per-qubit weights from a diagonal operator; rejects
    /// off-diagonal entries and diagonal parts that are not a sum of
    /// single-qubit σᶻ terms (up to a constant).
    pub fn from_operator(g: &ComplexMatrix, qubits: usize) -> Result<Self> {
        let dim = 1usize << qubits;
        if g.rows() != dim || g.cols() != dim {
            return Err(Error::Shape(format!("frame operator must be {dim}x{dim}")));
        }
        let scale = g.max_abs().max(f64::MIN_POSITIVE);
        if !g.is_diagonal(1e-12 * scale) {
            return Err(Error::InvalidParameter("frame generator is not diagonal".into()));
        }
        let d: Vec<f64> = g.diagonal().iter().map(|z| z.re).collect();
        if g.diagonal().iter().any(|z| z.im.abs() > 1e-12 * scale) {
            return Err(Error::InvalidParameter("frame generator is not Hermitian".into()));
        }
        let mean = d.iter().sum::<f64>() / dim as f64;
        let weights: Vec<f64> = (0..qubits)
            .map(|q| 2.0 * (0..dim).map(|x| d[x] * z_sign(x, q, qubits)).sum::<f64>() / dim as f64)
            .collect();
        let frame = Self::new(weights);
        let rebuilt = frame.diagonal(qubits);
        let worst = (0..dim).map(|x| (rebuilt[x] + mean - d[x]).abs()).fold(0.0, f64::max);
        if worst > 1e-10 * scale {
            return Err(Error::InvalidParameter(
                "frame generator contains multi-qubit σᶻ products".into(),
            ));
        }
        Ok(frame)
    }

    pub fn qubits(&self) -> usize {
        self.zeeman.len()
    }

    /// Total σᶻ/2 weight on qubit `q`.
    pub fn weight(&self, q: usize) -> f64 {
        self.zeeman.get(q).copied().unwrap_or(0.0) + self.hyperfine.get(q).copied().unwrap_or(0.0)
    }

    /// Diagonal of G on an `qubits`-qubit register.
    pub fn diagonal(&self, qubits: usize) -> Vec<f64> {
        (0..1usize << qubits)
            .map(|x| (0..qubits).map(|q| 0.5 * self.weight(q) * z_sign(x, q, qubits)).sum())
            .collect()
    }

    pub fn matrix(&self, qubits: usize) -> ComplexMatrix {
        ComplexMatrix::from_real_diagonal(&self.diagonal(qubits))
    }

    /// `exp(iGt)`, which maps lab-frame propagators into the rotating frame:
    /// `U_I(t) = exp(iGt) U_lab(t)`.
    pub fn rotation(&self, qubits: usize, t: f64) -> ComplexMatrix {
        let d = self.diagonal(qubits);
        let phases: Vec<C64> = d.iter().map(|&g| C64::from_polar(1.0, g * t)).collect();
        let mut m = ComplexMatrix::zeros(d.len(), d.len());
        for (i, p) in phases.into_iter().enumerate() {
            m[(i, i)] = p;
        }
        m
    }

    fn check(&self, spec: &SpinSystemSpec) -> Result<()> {
        if self.qubits() != spec.qubits || (!self.hyperfine.is_empty() && self.hyperfine.len() != spec.qubits) {
            return Err(Error::InvalidParameter(format!(
                "frame has {} qubits, spec has {}",
                self.qubits(),
                spec.qubits
            )));
        }
        if self.zeeman.iter().chain(&self.hyperfine).any(|w| !w.is_finite()) {
            return Err(Error::NonFinite("frame weight".into()));
        }
        Ok(())
    }
}

/// Exact interaction-picture Hamiltonian `H_I(t) = e^{iGt}(H(t) − G)e^{−iGt}`.
#[derive(Clone, Debug)]
pub struct RotatingFrameHamiltonian {
    spec: SpinSystemSpec,
    generator: Vec<f64>,
}

impl RotatingFrameHamiltonian {
    pub fn new(spec: &SpinSystemSpec, frame: &FrameGenerator) -> Result<Self> {
        spec.validate()?;
        frame.check(spec)?;
        Ok(Self { spec: spec.clone(), generator: frame.diagonal(spec.qubits) })
    }

    pub fn dim(&self) -> usize {
        self.generator.len()
    }

    /// Fastest oscillation present in `H_I(t)`: frame-frequency gaps of
    /// static off-diagonal entries and carrier sidebands of AC drives.
    pub fn max_frequency(&self) -> Result<f64> {
        let h = self.spec.static_matrix()?;
        let g = &self.generator;
        let n = self.spec.qubits;
        let mut w: f64 = 0.0;
        for r in 0..h.rows() {
            for c in 0..h.cols() {
                if r != c && h[(r, c)].norm() > 0.0 {
                    w = w.max((g[r] - g[c]).abs());
                }
            }
        }
        for d in self.spec.drives.iter().filter(|d| !d.is_static()) {
            let b = 1 << (n - 1 - d.target);
            for x in (0..self.dim()).filter(|x| x & b == 0) {
                w = w.max(d.carrier.abs() + (g[x] - g[x | b]).abs());
            }
        }
        Ok(w)
    }

    pub fn at(&self, t: f64) -> Result<ComplexMatrix> {
        let h = self.spec.build_matrix(t)?;
        let g = &self.generator;
        Ok(ComplexMatrix::from_fn(h.rows(), h.cols(), |r, c| {
            let v = if r == c { h[(r, c)] - g[r] } else { h[(r, c)] };
            v * C64::from_polar(1.0, (g[r] - g[c]) * t)
        }))
    }
}

/// Builds the exact rotating-frame evaluator.
pub fn to_rotating_frame(spec: &SpinSystemSpec, frame: &FrameGenerator) -> Result<RotatingFrameHamiltonian> {
    RotatingFrameHamiltonian::new(spec, frame)
}
