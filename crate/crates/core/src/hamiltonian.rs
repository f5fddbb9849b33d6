//! Declarative spin Hamiltonians and their matrix realizations.
//!
//! All frequencies are angular (rad/s) with ħ = 1. Qubit 0 is the most
//! significant bit of a basis index and σᶻ|0⟩ = +|0⟩.

use std::collections::HashSet;
use std::fmt;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::pauli::z_sign;
use crate::linalg::ComplexMatrix;

pub const MAX_QUBITS: usize = 6;

/// Relative tolerance for resonance checks in strict constructors.
pub const RESONANCE_TOL: f64 = 1e-12;

/// Two-qubit coupling `(i, j, strength)`, serialized as `[i, j, strength]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Coupling(pub usize, pub usize, pub f64);

/// Transverse drive on one qubit.
///
/// With `carrier == 0` the term is static, `(Ω/2)(cos φ σˣ + sin φ σʸ)`.
/// Otherwise it is `Ω cos(ω_x t + φ) σˣ/2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DriveTerm {
    pub target: usize,
    pub amplitude: f64,
    #[serde(default)]
    pub carrier: f64,
    #[serde(default)]
    pub phase: f64,
}

impl DriveTerm {
    pub fn static_x(target: usize, amplitude: f64) -> Self {
        Self { target, amplitude, carrier: 0.0, phase: 0.0 }
    }

    pub fn ac(target: usize, amplitude: f64, carrier: f64) -> Self {
        Self { target, amplitude, carrier, phase: 0.0 }
    }

    pub fn is_static(&self) -> bool {
        self.carrier == 0.0
    }
}

/// A spin Hamiltonian
/// `Σ (J/2)σᶻσᶻ + Σ (J/2)σ⃗·σ⃗ + Σ (ω_j/2)σᶻ_j + drives`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpinSystemSpec {
    pub qubits: usize,
    #[serde(default)]
    pub ising: Vec<Coupling>,
    #[serde(default)]
    pub heisenberg: Vec<Coupling>,
    #[serde(default)]
    pub z_fields: Vec<f64>,
    #[serde(default)]
    pub drives: Vec<DriveTerm>,
}

impl SpinSystemSpec {
    pub fn new(qubits: usize) -> Self {
        Self {
            qubits,
            ising: Vec::new(),
            heisenberg: Vec::new(),
            z_fields: vec![0.0; qubits],
            drives: Vec::new(),
        }
    }

    pub fn with_ising(mut self, i: usize, j: usize, strength: f64) -> Self {
        self.ising.push(Coupling(i, j, strength));
        self
    }

    pub fn with_heisenberg(mut self, i: usize, j: usize, strength: f64) -> Self {
        self.heisenberg.push(Coupling(i, j, strength));
        self
    }

    pub fn with_z_fields(mut self, fields: &[f64]) -> Self {
        self.z_fields = fields.to_vec();
        self
    }

    pub fn with_drive(mut self, drive: DriveTerm) -> Self {
        self.drives.push(drive);
        self
    }

    pub fn dim(&self) -> usize {
        1 << self.qubits
    }

    pub fn z_field(&self, q: usize) -> f64 {
        self.z_fields.get(q).copied().unwrap_or(0.0)
    }

    pub fn is_static(&self) -> bool {
        self.drives.iter().all(DriveTerm::is_static)
    }

    /// Largest |carrier| among AC drives, or 0.
    pub fn max_carrier(&self) -> f64 {
        self.drives.iter().map(|d| d.carrier.abs()).fold(0.0, f64::max)
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=MAX_QUBITS).contains(&self.qubits) {
            return Err(Error::InvalidSpec(format!(
                "qubit count {} outside 1..={MAX_QUBITS}",
                self.qubits
            )));
        }
        if !self.z_fields.is_empty() && self.z_fields.len() != self.qubits {
            return Err(Error::InvalidSpec(format!(
                "{} z-fields given for {} qubits",
                self.z_fields.len(),
                self.qubits
            )));
        }
        if self.z_fields.iter().any(|w| !w.is_finite()) {
            return Err(Error::NonFinite("z-field".into()));
        }
        for (kind, list) in [("ising", &self.ising), ("heisenberg", &self.heisenberg)] {
            let mut seen = HashSet::new();
            for &Coupling(i, j, s) in list {
                if i >= self.qubits || j >= self.qubits {
                    return Err(Error::InvalidSpec(format!(
                        "{kind} coupling ({i}, {j}) out of range for {} qubits",
                        self.qubits
                    )));
                }
                if i == j {
                    return Err(Error::InvalidSpec(format!("{kind} coupling ({i}, {j}) on one qubit")));
                }
                if !s.is_finite() {
                    return Err(Error::NonFinite(format!("{kind} coupling strength")));
                }
                if !seen.insert((i.min(j), i.max(j))) {
                    return Err(Error::InvalidSpec(format!("duplicate {kind} coupling on pair ({i}, {j})")));
                }
            }
        }
        for d in &self.drives {
            if d.target >= self.qubits {
                return Err(Error::InvalidSpec(format!("drive target {} out of range", d.target)));
            }
            if !(d.amplitude.is_finite() && d.carrier.is_finite() && d.phase.is_finite()) {
                return Err(Error::NonFinite("drive parameter".into()));
            }
            if d.amplitude < 0.0 {
                return Err(Error::InvalidSpec(format!("negative drive amplitude {}", d.amplitude)));
            }
        }
        Ok(())
    }

    /// Diagonal entries of the drive-free part.
    pub fn diagonal_energies(&self) -> Vec<f64> {
        let n = self.qubits;
        (0..self.dim())
            .map(|x| {
                let z = |q| z_sign(x, q, n);
                let mut e: f64 = (0..n).map(|q| 0.5 * self.z_field(q) * z(q)).sum();
                for &Coupling(i, j, s) in self.ising.iter().chain(&self.heisenberg) {
                    e += 0.5 * s * z(i) * z(j);
                }
                e
            })
            .collect()
    }

    /// Everything except AC drives (static drives included).
    pub fn static_matrix(&self) -> Result<ComplexMatrix> {
        self.validate()?;
        let n = self.qubits;
        let mut h = ComplexMatrix::from_real_diagonal(&self.diagonal_energies());
        for &Coupling(i, j, s) in &self.heisenberg {
            let (bi, bj) = (1 << (n - 1 - i), 1 << (n - 1 - j));
            for x in 0..self.dim() {
                if ((x & bi) != 0) != ((x & bj) != 0) {
                    // (s/2)(σˣσˣ + σʸσʸ) = s(σ⁺σ⁻ + σ⁻σ⁺)
                    h[(x ^ bi ^ bj, x)] += C64::new(s, 0.0);
                }
            }
        }
        for d in self.drives.iter().filter(|d| d.is_static()) {
            let b = 1 << (n - 1 - d.target);
            let up = C64::from_polar(0.5 * d.amplitude, d.phase);
            for x in 0..self.dim() {
                if x & b == 0 {
                    h[(x | b, x)] += up;
                    h[(x, x | b)] += up.conj();
                }
            }
        }
        Ok(h)
    }

    /// `σˣ_k/2` prefactor of every AC drive at time `t`, summed per target.
    fn add_ac_drives(&self, h: &mut ComplexMatrix, t: f64) {
        let n = self.qubits;
        for d in self.drives.iter().filter(|d| !d.is_static()) {
            let b = 1 << (n - 1 - d.target);
            let v = C64::new(0.5 * d.amplitude * (d.carrier * t + d.phase).cos(), 0.0);
            for x in 0..self.dim() {
                if x & b == 0 {
                    h[(x | b, x)] += v;
                    h[(x, x | b)] += v;
                }
            }
        }
    }

    /// H(t) as a 2ⁿ×2ⁿ Hermitian matrix.
    pub fn build_matrix(&self, t: f64) -> Result<ComplexMatrix> {
        let mut h = self.static_matrix()?;
        self.add_ac_drives(&mut h, t);
        Ok(h)
    }

    /// Appends a qubit Ising-coupled to `target`; returns its index.
    pub fn add_control_qubit(&mut self, target: usize, coupling: f64, z_field: f64) -> usize {
        if self.z_fields.is_empty() {
            self.z_fields = vec![0.0; self.qubits];
        }
        let e = self.qubits;
        self.qubits += 1;
        self.z_fields.push(z_field);
        self.ising.push(Coupling(e, target, coupling));
        e
    }
}

pub fn build_matrix(spec: &SpinSystemSpec, t: f64) -> Result<ComplexMatrix> {
    spec.build_matrix(t)
}

fn resonance_ok(lhs: f64, rhs: f64, scale: f64) -> bool {
    (lhs - rhs).abs() <= RESONANCE_TOL * scale.max(f64::MIN_POSITIVE)
}

/// Three-qubit Ising chain with a static transverse field on qubit 1.
/// With `strict`, rejects parameters off the `ω₂ = 2J_zz` resonance.
pub fn toffoli_spec(
    j_zz: f64,
    omega1: f64,
    omega2: f64,
    omega3: f64,
    rabi: f64,
    strict: bool,
) -> Result<SpinSystemSpec> {
    if !(rabi > 0.0) {
        return Err(Error::InvalidParameter(format!("Ω must be positive, got {rabi}")));
    }
    if strict && !resonance_ok(omega2, 2.0 * j_zz, omega2.abs().max(j_zz.abs()).max(rabi)) {
        return Err(Error::Resonance(format!("ω₂ = {omega2} but 2J_zz = {}", 2.0 * j_zz)));
    }
    let spec = SpinSystemSpec::new(3)
        .with_ising(0, 1, j_zz)
        .with_ising(1, 2, j_zz)
        .with_z_fields(&[omega1, omega2, omega3])
        .with_drive(DriveTerm::static_x(1, rabi));
    spec.validate()?;
    Ok(spec)
}

/// `ω₂/Ω` that nulls the |0b0⟩ and |0b1⟩ leakage at gate index `n`:
/// `√(4m₁²/(2n+1)² − 1)`.
pub fn designed_toffoli_ratio(m1: u32, n: u32) -> Result<f64> {
    let q = f64::from(2 * n + 1);
    let x = 4.0 * f64::from(m1).powi(2) / (q * q) - 1.0;
    if m1 == 0 || x <= 0.0 {
        return Err(Error::InvalidParameter(format!("need 2m₁ > 2n+1, got m₁ = {m1}, n = {n}")));
    }
    Ok(x.sqrt())
}

/// Designed Toffoli with `ω₂ = Ω√(4m₁² − 1)`, `J_zz = ω₂/2`, `ω₁ = ω₃ = 0`.
pub fn designed_toffoli_spec(m1: u32, rabi: f64) -> Result<SpinSystemSpec> {
    let omega2 = rabi * designed_toffoli_ratio(m1, 0)?;
    toffoli_spec(omega2 / 2.0, 0.0, omega2, 0.0, rabi, true)
}

/// Heisenberg pair (1, 2) with an Ising control on qubit 0.
/// With `strict`, rejects parameters off the `J_zz = ω₂ − ω₃` resonance.
pub fn fredkin_spec(
    j: f64,
    j_zz: f64,
    omega1: f64,
    omega2: f64,
    omega3: f64,
    strict: bool,
) -> Result<SpinSystemSpec> {
    if !(j > 0.0) {
        return Err(Error::InvalidParameter(format!("J must be positive, got {j}")));
    }
    let scale = j_zz.abs().max(omega2.abs()).max(omega3.abs()).max(j);
    if strict && !resonance_ok(j_zz, omega2 - omega3, scale) {
        return Err(Error::Resonance(format!("J_zz = {j_zz} but ω₂ − ω₃ = {}", omega2 - omega3)));
    }
    let spec = SpinSystemSpec::new(3)
        .with_heisenberg(1, 2, j)
        .with_ising(0, 1, j_zz)
        .with_z_fields(&[omega1, omega2, omega3]);
    spec.validate()?;
    Ok(spec)
}

/// Fredkin spec with extra control qubits, each Ising-coupled to qubit 1.
/// All controls must sit in |1⟩ for the swap to be resonant:
/// `J_zz + Σ J_E2 = ω₂ − ω₃`.
pub fn fredkin_spec_with_controls(
    j: f64,
    j_zz: f64,
    control_couplings: &[f64],
    omegas: [f64; 3],
    strict: bool,
) -> Result<SpinSystemSpec> {
    let mut spec = fredkin_spec(j, j_zz, omegas[0], omegas[1], omegas[2], false)?;
    let total = j_zz + control_couplings.iter().sum::<f64>();
    let scale = total.abs().max(omegas[1].abs()).max(omegas[2].abs()).max(j);
    if strict && !resonance_ok(total, omegas[1] - omegas[2], scale) {
        return Err(Error::Resonance(format!(
            "J_zz + ΣJ_E2 = {total} but ω₂ − ω₃ = {}",
            omegas[1] - omegas[2]
        )));
    }
    for &c in control_couplings {
        spec.add_control_qubit(1, c, 0.0);
    }
    spec.validate()?;
    Ok(spec)
}

/// Lab-frame trapped-ion chain: splittings `ω⁰_j`, nearest-neighbour `J_zz`,
/// next-nearest `J₁₃`, and a microwave drive `Ω cos(ω_x t) σˣ₂`.
pub fn ion_lab_spec(omega0: [f64; 3], j_zz: f64, j13: f64, rabi: f64, carrier: f64) -> Result<SpinSystemSpec> {
    let mut spec = SpinSystemSpec::new(3)
        .with_z_fields(&omega0)
        .with_ising(0, 1, j_zz)
        .with_ising(1, 2, j_zz);
    if j13 != 0.0 {
        spec = spec.with_ising(0, 2, j13);
    }
    if rabi != 0.0 {
        spec = spec.with_drive(DriveTerm::ac(1, 2.0 * rabi, carrier));
    }
    spec.validate()?;
    Ok(spec)
}

/// Nuclear spin projection, stored as twice its value.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct NuclearSpin(i8);

impl NuclearSpin {
    pub const MAX_TWICE: i8 = 9;

    pub fn from_twice(twice: i8) -> Result<Self> {
        if twice.abs() > Self::MAX_TWICE {
            return Err(Error::InvalidParameter(format!("|I_z| = {}/2 exceeds 9/2", twice.abs())));
        }
        Ok(Self(twice))
    }

    pub fn value(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    pub fn twice(self) -> i8 {
        self.0
    }
}

impl TryFrom<f64> for NuclearSpin {
    type Error = Error;

    fn try_from(v: f64) -> Result<Self> {
        let t = 2.0 * v;
        if !t.is_finite() || t.round() != t {
            return Err(Error::InvalidParameter(format!("I_z = {v} is not a multiple of 1/2")));
        }
        if t.abs() > f64::from(Self::MAX_TWICE) {
            return Err(Error::InvalidParameter(format!("|I_z| = {v} exceeds 9/2")));
        }
        Self::from_twice(t as i8)
    }
}

impl From<NuclearSpin> for f64 {
    fn from(s: NuclearSpin) -> f64 {
        s.value()
    }
}

impl fmt::Debug for NuclearSpin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Frozen nuclear-spin labels and the hyperfine constant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NuclearConfig {
    pub spins: Vec<NuclearSpin>,
    pub hyperfine: f64,
}

impl NuclearConfig {
    pub fn new(values: &[f64], hyperfine: f64) -> Result<Self> {
        let spins = values.iter().map(|&v| NuclearSpin::try_from(v)).collect::<Result<_>>()?;
        Ok(Self { spins, hyperfine })
    }

    /// `A·I_n^z` for donor `n`.
    pub fn hyperfine_shift(&self, n: usize) -> f64 {
        self.hyperfine * self.spins[n].value()
    }
}

/// Microwave drive `Ω cos(ω_x t) S^x` on one donor electron.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DonorDrive {
    pub target: usize,
    pub amplitude: f64,
    pub carrier: f64,
}

/// Donor chain `ω_L Σ S^z + Σ A I^z S^z + Σ J S·S + Ω cos(ω_x t) S^x`,
/// rewritten in σ operators. `couplings` are `(i, j, J)` exchange terms.
pub fn donor_spec(
    config: &NuclearConfig,
    omega_l: f64,
    couplings: &[Coupling],
    drive: Option<DonorDrive>,
) -> Result<SpinSystemSpec> {
    let n = config.spins.len();
    let fields: Vec<f64> = (0..n).map(|k| omega_l + config.hyperfine_shift(k)).collect();
    let mut spec = SpinSystemSpec::new(n).with_z_fields(&fields);
    for &Coupling(i, j, jj) in couplings {
        // J S·S = (J/4) σ⃗·σ⃗ = ((J/2)/2) σ⃗·σ⃗
        spec = spec.with_heisenberg(i, j, jj / 2.0);
    }
    if let Some(d) = drive {
        // Ω cos(ω_x t) S^x = Ω cos(ω_x t) σˣ/2
        spec = spec.with_drive(DriveTerm::ac(d.target, d.amplitude, d.carrier));
    }
    spec.validate()?;
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pauli::{embed, sigma_x, sigma_y, sigma_z};

    fn commutator_norm(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
        (&(a * b) - &(b * a)).max_abs()
    }

    #[test]
    fn single_qubit_field() {
        let h = SpinSystemSpec::new(1).with_z_fields(&[2.0]).build_matrix(0.0).unwrap();
        assert!(h.max_abs_diff(&ComplexMatrix::from_real_diagonal(&[1.0, -1.0])) < 1e-15);
    }

    #[test]
    fn matches_pauli_construction() {
        let spec = SpinSystemSpec::new(3)
            .with_ising(0, 2, 0.7)
            .with_heisenberg(1, 2, 1.3)
            .with_z_fields(&[0.1, -0.4, 0.9])
            .with_drive(DriveTerm { target: 0, amplitude: 0.8, carrier: 0.0, phase: 0.6 })
            .with_drive(DriveTerm { target: 1, amplitude: 0.5, carrier: 3.0, phase: 0.2 });
        let t = 0.37;
        let h = spec.build_matrix(t).unwrap();
        let (x, y, z) = (sigma_x(), sigma_y(), sigma_z());
        let e = |m: &ComplexMatrix, q| embed(m, q, 3);
        let mut want = ComplexMatrix::zeros(8, 8);
        let r = |s: f64| C64::new(s, 0.0);
        want.add_scaled(&(&e(&z, 0) * &e(&z, 2)), r(0.35));
        for p in [&x, &y, &z] {
            want.add_scaled(&(&e(p, 1) * &e(p, 2)), r(0.65));
        }
        for (q, w) in [0.1, -0.4, 0.9].into_iter().enumerate() {
            want.add_scaled(&e(&z, q), r(w / 2.0));
        }
        want.add_scaled(&e(&x, 0), r(0.4 * 0.6f64.cos()));
        want.add_scaled(&e(&y, 0), r(0.4 * 0.6f64.sin()));
        want.add_scaled(&e(&x, 1), r(0.25 * (3.0 * t + 0.2f64).cos()));
        assert!(h.max_abs_diff(&want) < 1e-14);
    }

    #[test]
    fn validation_errors() {
        assert!(SpinSystemSpec::new(0).validate().is_err());
        assert!(SpinSystemSpec::new(7).validate().is_err());
        assert!(SpinSystemSpec::new(2).with_ising(0, 2, 1.0).validate().is_err());
        assert!(SpinSystemSpec::new(2).with_ising(1, 1, 1.0).validate().is_err());
        let dup = SpinSystemSpec::new(2).with_ising(0, 1, 1.0).with_ising(1, 0, 2.0);
        assert!(dup.validate().is_err());
        let ok = SpinSystemSpec::new(2).with_ising(0, 1, 1.0).with_heisenberg(0, 1, 2.0);
        assert!(ok.validate().is_ok());
        let neg = SpinSystemSpec::new(2).with_drive(DriveTerm::static_x(0, -1.0));
        assert!(neg.validate().is_err());
    }

    #[test]
    fn toffoli_commutes_with_control_z() {
        let spec = toffoli_spec(1.0, 0.0, 2.0, 0.0, 0.5, true).unwrap();
        let h = spec.build_matrix(1.234).unwrap();
        assert!(commutator_norm(&h, &embed(&sigma_z(), 0, 3)) < 1e-15);
        assert!(commutator_norm(&h, &embed(&sigma_z(), 2, 3)) < 1e-15);
        assert!(commutator_norm(&h, &embed(&sigma_z(), 1, 3)) > 0.1);
    }

    #[test]
    fn strict_toffoli_guard() {
        assert!(matches!(toffoli_spec(1.0, 0.0, 2.1, 0.0, 0.5, true), Err(Error::Resonance(_))));
        assert!(toffoli_spec(1.0, 0.0, 2.1, 0.0, 0.5, false).is_ok());
        assert!(toffoli_spec(1.0, 0.0, 2.0, 0.0, 0.0, false).is_err());
    }

    #[test]
    fn designed_ratio_for_m1_five() {
        assert!((designed_toffoli_ratio(5, 0).unwrap() - 99f64.sqrt()).abs() < 1e-14);
        let spec = designed_toffoli_spec(5, 1.0).unwrap();
        assert!((spec.z_fields[1] - 99f64.sqrt()).abs() < 1e-14);
        assert!(designed_toffoli_ratio(1, 1).is_err());
    }

    #[test]
    fn fredkin_resonant_pair_is_eigenvector() {
        let (w2, w3) = (3.0, 1.2);
        let spec = fredkin_spec(0.7, w2 - w3, 0.4, w2, w3, true).unwrap();
        let h = spec.build_matrix(0.0).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for sign in [1.0, -1.0] {
            let mut v = vec![C64::new(0.0, 0.0); 8];
            v[6] = C64::new(s, 0.0);
            v[5] = C64::new(sign * s, 0.0);
            let hv = h.apply(&v);
            let e = hv[6] / v[6];
            for k in 0..8 {
                assert!((hv[k] - e * v[k]).norm() < 1e-14);
            }
        }
        assert!(fredkin_spec(0.7, 1.0, 0.4, w2, w3, true).is_err());
    }

    #[test]
    fn fredkin_extra_control_resonance() {
        let spec = fredkin_spec_with_controls(0.5, 1.0, &[1.0], [0.0, 2.0, 0.0], true).unwrap();
        assert_eq!(spec.qubits, 4);
        assert_eq!(spec.ising.last(), Some(&Coupling(3, 1, 1.0)));
        assert!(fredkin_spec_with_controls(0.5, 1.0, &[1.0], [0.0, 1.0, 0.0], true).is_err());
    }

    #[test]
    fn ion_spec_without_drive_is_diagonal() {
        let spec = ion_lab_spec([1.0, 2.0, 3.0], 0.1, 0.0, 0.0, 0.0).unwrap();
        assert!(spec.build_matrix(0.3).unwrap().is_diagonal(0.0));
    }

    #[test]
    fn nuclear_spin_parsing() {
        assert_eq!(NuclearSpin::try_from(4.5).unwrap().twice(), 9);
        assert_eq!(NuclearSpin::try_from(-3.5).unwrap().value(), -3.5);
        assert!(NuclearSpin::try_from(0.25).is_err());
        assert!(NuclearSpin::try_from(5.0).is_err());
        let cfg: NuclearConfig = serde_json::from_str(r#"{"spins":[4.5,-4.5,0],"hyperfine":2.0}"#).unwrap();
        assert_eq!(cfg.hyperfine_shift(1), -9.0);
    }

    #[test]
    fn donor_uniform_ladder() {
        let cfg = NuclearConfig::new(&[0.0, 0.0, 0.0], 5.0).unwrap();
        let spec = donor_spec(&cfg, 10.0, &[], None).unwrap();
        assert_eq!(spec.z_fields, vec![10.0; 3]);
        let e = spec.diagonal_energies();
        assert_eq!(e[0], 15.0);
        assert_eq!(e[7], -15.0);
    }

    #[test]
    fn donor_exchange_is_quarter_sigma_coupling() {
        let cfg = NuclearConfig::new(&[0.5, -0.5], 1.0).unwrap();
        let j = 0.8;
        let donor = donor_spec(&cfg, 0.0, &[Coupling(0, 1, j)], None).unwrap();
        let sigma = SpinSystemSpec::new(2)
            .with_z_fields(&donor.z_fields)
            .with_heisenberg(0, 1, 2.0 * j / 4.0);
        let a = donor.build_matrix(0.0).unwrap();
        let b = sigma.build_matrix(0.0).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-15);
        // J S·S on the singlet gives −3J/4.
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let singlet = [C64::new(0.0, 0.0), C64::new(s, 0.0), C64::new(-s, 0.0), C64::new(0.0, 0.0)];
        let exch = SpinSystemSpec::new(2).with_heisenberg(0, 1, j / 2.0).build_matrix(0.0).unwrap();
        let hv = exch.apply(&singlet);
        assert!((hv[1] / singlet[1] - C64::new(-0.75 * j, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn spec_json_round_trip_uses_array_couplings() {
        let spec = toffoli_spec(1.0, 0.0, 2.0, 0.0, 0.5, true).unwrap();
        let json = serde_json::to_string(&spec).unwrap();
        assert!(json.contains(r#""ising":[[0,1,1.0],[1,2,1.0]]"#));
        let back: SpinSystemSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, spec);
        let minimal: SpinSystemSpec = serde_json::from_str(r#"{"qubits":1,"z_fields":[2.0]}"#).unwrap();
        assert!(minimal.validate().is_ok());
    }
}
