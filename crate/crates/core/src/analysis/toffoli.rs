use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::FidelityTable;
use crate::error::{Error, Result};
use crate::hamiltonian::{designed_toffoli_ratio, toffoli_spec, SpinSystemSpec, RESONANCE_TOL};
use crate::linalg::ComplexMatrix;

/// Parameters of `H_TOF` and the gate index `n` fixing `τ_n = (2n+1)π/Ω`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToffoliParams {
    pub j_zz: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub omega3: f64,
    pub rabi: f64,
    pub n: u32,
}

impl ToffoliParams {
    /// `ω₂ = Ω√(4m₁² − 1)`, `J_zz = ω₂/2`, `ω₁ = ω₃ = 0`, evaluated at gate
    /// index `n`.
    pub fn designed(m1: u32, n: u32, rabi: f64) -> Result<Self> {
        let omega2 = rabi * designed_toffoli_ratio(m1, 0)?;
        Ok(Self { j_zz: omega2 / 2.0, omega1: 0.0, omega2, omega3: 0.0, rabi, n })
    }

    /// `ω₂/Ω = √(4m₁²/(2n+1)² − 1)`, which makes the |i0j⟩ leakage with
    /// `d = ω₂/Ω` vanish exactly at `τ_n`.
    pub fn designed_for_gate_index(m1: u32, n: u32, rabi: f64) -> Result<Self> {
        let omega2 = rabi * designed_toffoli_ratio(m1, n)?;
        Ok(Self { j_zz: omega2 / 2.0, omega1: 0.0, omega2, omega3: 0.0, rabi, n })
    }

    pub fn with_phases(mut self, omega1: f64, omega3: f64) -> Self {
        self.omega1 = omega1;
        self.omega3 = omega3;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rabi > 0.0) {
            return Err(Error::InvalidParameter(format!("Ω must be positive, got {}", self.rabi)));
        }
        let scale = self.omega2.abs().max(self.j_zz.abs()).max(self.rabi);
        if (self.omega2 - 2.0 * self.j_zz).abs() > RESONANCE_TOL * scale {
            return Err(Error::Resonance(format!(
                "ω₂ = {} but 2J_zz = {}",
                self.omega2,
                2.0 * self.j_zz
            )));
        }
        Ok(())
    }

    pub fn spec(&self) -> Result<SpinSystemSpec> {
        toffoli_spec(self.j_zz, self.omega1, self.omega2, self.omega3, self.rabi, true)
    }

    pub fn q(&self) -> f64 {
        f64::from(2 * self.n + 1)
    }

    pub fn gate_time(&self) -> f64 {
        self.q() * PI / self.rabi
    }

    /// `d_ac = (J_zz((−1)^a + (−1)^c) + ω₂)/Ω`.
    pub fn d(&self, a: usize, c: usize) -> f64 {
        (self.j_zz * (sign(a) + sign(c)) + self.omega2) / self.rabi
    }

    /// `φ_ac = (2n+1)π((−1)^a ω₁ + (−1)^c ω₃)/(2Ω)`.
    pub fn phi(&self, a: usize, c: usize) -> f64 {
        self.q() * PI * (sign(a) * self.omega1 + sign(c) * self.omega3) / (2.0 * self.rabi)
    }
}

fn sign(bit: usize) -> f64 {
    if bit == 0 {
        1.0
    } else {
        -1.0
    }
}

pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

fn index(a: usize, b: usize, c: usize) -> usize {
    4 * a + 2 * b + c
}

/// One closed-form eigenpair of `H_TOF`, `|±⟩_{ac}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ToffoliEigenpair {
    pub a: usize,
    pub c: usize,
    pub upper: bool,
    pub energy: f64,
    pub state: Vec<C64>,
}

/// Closed-form eigensystem of a designed `H_TOF`, ordered by energy.
pub fn toffoli_eigensystem(p: &ToffoliParams) -> Result<Vec<ToffoliEigenpair>> {
    p.validate()?;
    let mut pairs = Vec::with_capacity(8);
    for a in 0..2 {
        for c in 0..2 {
            let d = p.d(a, c);
            let r = (d * d + 1.0).sqrt();
            for upper in [false, true] {
                let pm = if upper { 1.0 } else { -1.0 };
                let energy = 0.5 * (sign(a) * p.omega1 + sign(c) * p.omega3 + pm * p.rabi * r);
                let amp0 = d + pm * r;
                let norm = (amp0 * amp0 + 1.0).sqrt();
                let mut state = vec![C64::new(0.0, 0.0); 8];
                state[index(a, 0, c)] = C64::new(amp0 / norm, 0.0);
                state[index(a, 1, c)] = C64::new(1.0 / norm, 0.0);
                pairs.push(ToffoliEigenpair { a, c, upper, energy, state });
            }
        }
    }
    pairs.sort_by(|x, y| x.energy.total_cmp(&y.energy));
    Ok(pairs)
}

/// Closed-form amplitudes `f_{x→y} = ⟨y| exp(−iH_TOF τ_n) |x⟩`.
///
/// Within each `(a, c)` sector, with `θ = ((2n+1)π/2)√(d²+1)` and
/// `s = ((2n+1)π/2) sinc θ`, the flip amplitude is `−i e^{−iφ} s` and the
/// stay amplitude is `e^{−iφ}(cos θ − i (−1)^b d s)`.
pub fn toffoli_fidelities(p: &ToffoliParams) -> Result<FidelityTable> {
    p.validate()?;
    let mut f = ComplexMatrix::zeros(8, 8);
    let half = p.q() * PI / 2.0;
    let i = C64::new(0.0, 1.0);
    for a in 0..2 {
        for c in 0..2 {
            let d = p.d(a, c);
            let theta = half * (d * d + 1.0).sqrt();
            let s = half * sinc(theta);
            let phase = C64::from_polar(1.0, -p.phi(a, c));
            for b in 0..2 {
                let x = index(a, b, c);
                f[(index(a, 1 - b, c), x)] = -i * phase * s;
                f[(x, x)] = phase * (C64::new(theta.cos(), 0.0) - i * sign(b) * d * s);
            }
        }
    }
    Ok(FidelityTable { f, gate_time: p.gate_time() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::evolve_static;
    use crate::linalg::hermitian_eig;

    #[test]
    fn d_values_for_designed_gate() {
        let p = ToffoliParams::designed(5, 0, 1.0).unwrap();
        assert_eq!(p.d(1, 1), 0.0);
        assert!((p.d(0, 1) - p.omega2).abs() < 1e-14);
        assert!((p.d(1, 0) - p.omega2).abs() < 1e-14);
        assert!((p.d(0, 0) - 2.0 * p.omega2).abs() < 1e-13);
    }

    #[test]
    fn unit_splitting_in_d11_sector() {
        let p = ToffoliParams::designed(3, 0, 0.7).unwrap();
        let es = toffoli_eigensystem(&p).unwrap();
        let sector: Vec<_> = es.iter().filter(|e| e.a == 1 && e.c == 1).collect();
        assert!((sector[1].energy - sector[0].energy - 0.7).abs() < 1e-14);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((sector[1].state[5].re - s).abs() < 1e-14);
        assert!((sector[1].state[7].re - s).abs() < 1e-14);
        assert!((sector[0].state[5].re + s).abs() < 1e-14);
    }

    #[test]
    fn zero_rabi_rejected() {
        let mut p = ToffoliParams::designed(3, 0, 1.0).unwrap();
        p.rabi = 0.0;
        assert!(toffoli_eigensystem(&p).is_err());
        let mut q = ToffoliParams::designed(3, 0, 1.0).unwrap();
        q.omega2 *= 1.01;
        assert!(matches!(toffoli_fidelities(&q), Err(Error::Resonance(_))));
    }

    #[test]
    fn closed_form_energies_match_numerics() {
        let p = ToffoliParams::designed(5, 0, 1.3).unwrap().with_phases(0.4, -0.9);
        let closed: Vec<f64> = toffoli_eigensystem(&p).unwrap().iter().map(|e| e.energy).collect();
        let numeric = hermitian_eig(&p.spec().unwrap().build_matrix(0.0).unwrap()).unwrap();
        for (a, b) in closed.iter().zip(&numeric.eigenvalues) {
            assert!((a - b).abs() < 1e-10 * p.omega2);
        }
    }

    #[test]
    fn closed_form_amplitudes_match_propagator() {
        for (m1, n) in [(2, 0), (5, 1), (10, 2)] {
            let p = ToffoliParams::designed(m1, n, 0.9).unwrap().with_phases(0.31, 0.77);
            let table = toffoli_fidelities(&p).unwrap();
            let u = evolve_static(&p.spec().unwrap(), p.gate_time()).unwrap();
            assert!(table.f.max_abs_diff(&u) < 1e-9, "m1={m1} n={n}: {}", table.f.max_abs_diff(&u));
            assert!((table.amplitude(5, 7).norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn m1_ten_leakage_is_small() {
        let p = ToffoliParams::designed(10, 0, 1.0).unwrap();
        let t = toffoli_fidelities(&p).unwrap();
        let leak = t.amplitude(0, 2).norm();
        // d₀₀ = 2√399, θ = (π/2)√(4·399 + 1)
        let theta = 0.5 * PI * (4.0 * 399.0 + 1.0f64).sqrt();
        assert!((leak - 0.5 * PI * sinc(theta).abs()).abs() < 1e-14);
        assert!(leak < 1e-2);
        assert!(t.amplitude(1, 3).norm() < 1e-12);
    }
}
