use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::toffoli::sinc;
use crate::error::{Error, Result};
use crate::hamiltonian::{fredkin_spec, SpinSystemSpec};

/// Parameters of `H_FRED` on resonance, `J_zz = ω₂ − ω₃`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FredkinParams {
    pub j: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub omega3: f64,
    pub n: u32,
}

impl FredkinParams {
    /// `J_zz = J√(m²/(2n+1)² − 1)`, placed entirely on ω₂.
    pub fn designed(j: f64, n: u32, m: u32) -> Result<Self> {
        let j_zz = j * leakage_null_ratio(n, m)?;
        Ok(Self { j, omega1: 0.0, omega2: j_zz, omega3: 0.0, n })
    }

    pub fn j_zz(&self) -> f64 {
        self.omega2 - self.omega3
    }

    pub fn spec(&self) -> Result<SpinSystemSpec> {
        fredkin_spec(self.j, self.j_zz(), self.omega1, self.omega2, self.omega3, true)
    }

    pub fn q(&self) -> f64 {
        f64::from(2 * self.n + 1)
    }

    /// `τ_n = (2n+1)π/(2J)`.
    pub fn gate_time(&self) -> f64 {
        self.q() * PI / (2.0 * self.j)
    }
}

/// `J_zz/J = √(m²/(2n+1)² − 1)`, from the leakage null condition
/// `J²(m²/(2n+1)² − 1) = J_zz²`.
pub fn leakage_null_ratio(n: u32, m: u32) -> Result<f64> {
    let q = f64::from(2 * n + 1);
    let r = f64::from(m) / q;
    if r <= 1.0 {
        return Err(Error::InvalidParameter(format!("need m > 2n+1, got m = {m}, n = {n}")));
    }
    Ok((r * r - 1.0).sqrt())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FredkinEigenstate {
    pub label: String,
    pub energy: f64,
    /// Amplitudes on `(first, second)` basis states of the pair.
    pub basis: (usize, usize),
    pub amplitudes: (f64, f64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FredkinAnalysis {
    /// The four non-computational eigenstates `ψ±₁₁₀`, `ψ±₀₁₀`.
    pub eigenstates: Vec<FredkinEigenstate>,
    pub gate_time: f64,
    /// `|⟨001|U(τ_n)|010⟩| = ((2n+1)π/2)|sinc θ|`, `θ = (2n+1)π√(J_zz²+J²)/(2J)`.
    pub leakage: f64,
    pub sinc_argument: f64,
    /// `θ/π − round(θ/π)`: how far the argument is from a multiple of π.
    pub sinc_residual: f64,
    /// True when `J_zz = 0`, so qubit 0 no longer controls the swap.
    pub uncontrolled: bool,
}

pub fn fredkin_analysis(p: &FredkinParams) -> Result<FredkinAnalysis> {
    if !(p.j > 0.0) {
        return Err(Error::InvalidParameter(format!("J must be positive, got {}", p.j)));
    }
    let (j, jzz, w1) = (p.j, p.j_zz(), p.omega1);
    let r = (jzz * jzz + j * j).sqrt();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut eigenstates = vec![
        FredkinEigenstate {
            label: "psi110+".into(),
            energy: -(w1 + j - 2.0 * j) / 2.0,
            basis: (6, 5),
            amplitudes: (s, s),
        },
        FredkinEigenstate {
            label: "psi110-".into(),
            energy: -(w1 + j + 2.0 * j) / 2.0,
            basis: (6, 5),
            amplitudes: (s, -s),
        },
    ];
    for (label, pm) in [("psi010+", 1.0), ("psi010-", -1.0)] {
        let b = jzz + pm * r;
        let norm = (j * j + b * b).sqrt();
        eigenstates.push(FredkinEigenstate {
            label: label.into(),
            energy: (w1 - j + pm * 2.0 * r) / 2.0,
            basis: (2, 1),
            amplitudes: (j / norm, b / norm),
        });
    }
    let theta = p.q() * PI * r / (2.0 * j);
    let leakage = 0.5 * p.q() * PI * sinc(theta).abs();
    Ok(FredkinAnalysis {
        eigenstates,
        gate_time: p.gate_time(),
        leakage,
        sinc_argument: theta,
        sinc_residual: theta / PI - (theta / PI).round(),
        uncontrolled: jzz == 0.0,
    })
}
