//! Hardware presets for trapped ions and Bi donors in silicon, their error
//! budgets, the Fredkin integer-parameter search and the on/off switch
//! checks.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::analysis::{toffoli_permutation, ClassicalGate};
use crate::dynamics::{evolve_rotating, evolve_static, rwa_reduce, DroppedTerm, FrameGenerator, Integrator, RWAReport};
use crate::error::{Error, Result};
use crate::hamiltonian::{donor_spec, ion_lab_spec, Coupling, DonorDrive, NuclearConfig, SpinSystemSpec};
use crate::linalg::ComplexMatrix;

pub const PRESET_NAMES: [&str; 6] = [
    "ion-toffoli",
    "donor-toffoli",
    "donor-fredkin",
    "donor-fredkin-E",
    "donor-fredkin-EE′",
    "donor-fredkin-switch",
];

/// Ratio by which `A ± 2J₁₂` and `A` must exceed `J₂₃` for the switch.
pub const SWITCH_HIERARCHY: f64 = 10.0;
/// Allowed `|A − 2J₁₂|` as a fraction of `J₂₃`.
pub const SWITCH_RESONANCE_TOL: f64 = 1e-2;
/// A rotating-wave bound above this is flagged in the budget.
pub const RWA_FLAG_LEVEL: f64 = 1e-2;

fn ghz(x: f64) -> f64 {
    TAU * x * 1e9
}

fn mhz(x: f64) -> f64 {
    TAU * x * 1e6
}

fn khz(x: f64) -> f64 {
    TAU * x * 1e3
}

const BI_HYPERFINE_GHZ: f64 = 1.475;
const DONOR_LARMOR_GHZ: f64 = 100.0;
const DONOR_T2: f64 = 0.7;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TargetGate {
    /// Flip `target` iff both controls are 1.
    Toffoli { controls: [usize; 2], target: usize },
    /// Swap `pair` iff every control is 1.
    Fredkin { controls: Vec<usize>, pair: (usize, usize) },
}

impl TargetGate {
    pub fn permutation(&self, qubits: usize) -> Vec<usize> {
        match self {
            TargetGate::Toffoli { controls, target } => toffoli_permutation(qubits, *controls, *target),
            TargetGate::Fredkin { controls, pair } => controlled_swap_permutation(qubits, controls, *pair),
        }
    }
}

fn bit(x: usize, q: usize, n: usize) -> usize {
    (x >> (n - 1 - q)) & 1
}

pub fn controlled_swap_permutation(qubits: usize, controls: &[usize], (a, b): (usize, usize)) -> Vec<usize> {
    (0..1usize << qubits)
        .map(|x| {
            let on = controls.iter().all(|&c| bit(x, c, qubits) == 1);
            if on && bit(x, a, qubits) != bit(x, b, qubits) {
                x ^ (1 << (qubits - 1 - a)) ^ (1 << (qubits - 1 - b))
            } else {
                x
            }
        })
        .collect()
}

/// Informational hardware numbers; never used in dynamics.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PresetMetadata {
    /// Axial secular frequency ν (rad/s).
    pub secular_frequency: Option<f64>,
    /// Magnetic field gradient ∂_zB (T/m).
    pub field_gradient: Option<f64>,
    /// Hyperfine constant A (rad/s).
    pub hyperfine: Option<f64>,
    /// Nuclear spin projections of each donor.
    pub nuclear_spins: Vec<f64>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealizationPreset {
    pub name: String,
    /// Lab-frame Hamiltonian (or, for the switch, its rotating-frame model).
    pub spec: SpinSystemSpec,
    pub frame: FrameGenerator,
    pub target: TargetGate,
    /// Qubits prepared in |1⟩ as fixed controls; only inputs with these
    /// bits set are logical inputs.
    pub held_high: Vec<usize>,
    /// Gate index n of `τ_n`.
    pub gate_index: u32,
    /// Seconds.
    pub t2: f64,
    /// Additional decoherence rate in 1/s.
    pub extra_rate: f64,
    pub quoted_gate_time: Option<f64>,
    pub quoted_total: Option<f64>,
    pub metadata: PresetMetadata,
}

impl RealizationPreset {
    pub fn validate(&self) -> Result<()> {
        self.spec.validate()?;
        if !(self.t2 > 0.0) {
            return Err(Error::InvalidParameter(format!("T₂ must be positive, got {}", self.t2)));
        }
        if !(self.extra_rate >= 0.0) {
            return Err(Error::InvalidParameter(format!("negative extra rate {}", self.extra_rate)));
        }
        if self.frame.qubits() != self.spec.qubits {
            return Err(Error::InvalidParameter("frame and spec sizes differ".into()));
        }
        Ok(())
    }

    pub fn qubits(&self) -> usize {
        self.spec.qubits
    }

    pub fn permutation(&self) -> Vec<usize> {
        self.target.permutation(self.qubits())
    }

    pub fn logical_inputs(&self) -> Vec<usize> {
        let n = self.qubits();
        (0..1usize << n).filter(|&x| self.held_high.iter().all(|&q| bit(x, q, n) == 1)).collect()
    }

    pub fn rwa(&self) -> Result<RWAReport> {
        let r = rwa_reduce(&self.spec, &self.frame)?;
        if !r.is_complete() {
            return Err(Error::InvalidSpec(format!("{}: {}", self.name, r.unreduced.join("; "))));
        }
        Ok(r)
    }

    /// `τ_n` of the reduced Hamiltonian: `(2n+1)π/Ω` for a Toffoli with
    /// static drive amplitude Ω, `(2n+1)π/(2J)` for a Fredkin whose pair
    /// has Heisenberg entry J.
    pub fn gate_time(&self) -> Result<f64> {
        let reduced = self.rwa()?.reduced_spec;
        let q = f64::from(2 * self.gate_index + 1);
        match &self.target {
            TargetGate::Toffoli { target, .. } => {
                let rabi = reduced_rabi(&reduced, *target)?;
                Ok(q * PI / rabi)
            }
            TargetGate::Fredkin { pair, .. } => {
                let j = reduced_exchange(&reduced, *pair)?;
                Ok(q * PI / (2.0 * j))
            }
        }
    }

    /// Shifts every lab and frame frequency down by a common offset so the
    /// drive carrier becomes `ratio` times the reduced Rabi frequency. The
    /// rotating-wave reduction is unchanged; only the counter-rotating
    /// terms speed up or slow down.
    pub fn with_carrier_ratio(&self, ratio: f64) -> Result<Self> {
        let (spec, frame) = crate::dynamics::with_carrier_ratio(&self.spec, &self.frame, ratio)
            .map_err(|e| Error::InvalidParameter(format!("{}: {e}", self.name)))?;
        Ok(Self { spec, frame, ..self.clone() })
    }

    /// `carrier / (amplitude/2)` of the single AC drive.
    pub fn carrier_ratio(&self) -> Option<f64> {
        match self.spec.drives.as_slice() {
            [d] if !d.is_static() && d.amplitude > 0.0 => Some(d.carrier / (0.5 * d.amplitude)),
            _ => None,
        }
    }
}

fn reduced_rabi(reduced: &SpinSystemSpec, target: usize) -> Result<f64> {
    reduced
        .drives
        .iter()
        .find(|d| d.target == target && d.is_static())
        .map(|d| d.amplitude)
        .ok_or_else(|| Error::InvalidSpec(format!("reduced model has no static drive on qubit {target}")))
}

fn reduced_exchange(reduced: &SpinSystemSpec, (a, b): (usize, usize)) -> Result<f64> {
    reduced
        .heisenberg
        .iter()
        .find(|c| (c.0, c.1) == (a, b) || (c.0, c.1) == (b, a))
        .map(|c| c.2)
        .ok_or_else(|| Error::InvalidSpec(format!("reduced model has no exchange on ({a},{b})")))
}

pub fn preset(name: &str) -> Result<RealizationPreset> {
    let p = match name {
        "ion-toffoli" => ion_toffoli()?,
        "donor-toffoli" => donor_toffoli()?,
        "donor-fredkin" => donor_fredkin(&[])?,
        "donor-fredkin-E" => donor_fredkin(&[1.0])?,
        "donor-fredkin-EE′" | "donor-fredkin-EE'" | "donor-fredkin-EEp" => donor_fredkin(&[1.0, 1.0])?,
        "donor-fredkin-switch" => donor_fredkin_switch()?,
        _ => return Err(Error::UnknownPreset(name.to_string())),
    };
    p.validate()?;
    Ok(p)
}

fn ion_toffoli() -> Result<RealizationPreset> {
    let omega0 = ghz(12.6);
    let j = khz(9.98);
    let j13 = khz(7.07);
    let rabi = khz(1.8);
    let carrier = omega0 - 2.0 * j;
    Ok(RealizationPreset {
        name: "ion-toffoli".into(),
        spec: ion_lab_spec([omega0; 3], j, j13, rabi, carrier)?,
        frame: FrameGenerator::new(vec![omega0, omega0 - 2.0 * j, omega0]),
        target: TargetGate::Toffoli { controls: [0, 2], target: 1 },
        held_high: vec![],
        gate_index: 0,
        t2: 10e-3,
        extra_rate: 50.0,
        quoted_gate_time: Some(0.3e-3),
        quoted_total: Some(0.04),
        metadata: PresetMetadata {
            secular_frequency: Some(khz(100.0)),
            field_gradient: Some(250.0),
            notes: vec![
                "171Yb+ hyperfine qubits, all splittings taken as 2π·12.6 GHz".into(),
                "J₁₃ adds diagonal phases only".into(),
            ],
            ..Default::default()
        },
    })
}

fn donor_toffoli() -> Result<RealizationPreset> {
    let a = ghz(BI_HYPERFINE_GHZ);
    let omega_l = ghz(DONOR_LARMOR_GHZ);
    let j = mhz(30.0);
    let rabi = mhz(1.0);
    let spins = [4.5, -4.5, 4.5];
    let config = NuclearConfig::new(&spins, a)?;
    let carrier = omega_l + config.hyperfine_shift(1) - j;
    let drive = DonorDrive { target: 1, amplitude: rabi, carrier };
    let spec = donor_spec(&config, omega_l, &[Coupling(0, 1, j), Coupling(1, 2, j)], Some(drive))?;
    let frame = FrameGenerator::with_hyperfine(
        vec![omega_l, omega_l - j, omega_l],
        (0..3).map(|k| config.hyperfine_shift(k)).collect(),
    )?;
    Ok(RealizationPreset {
        name: "donor-toffoli".into(),
        spec,
        frame,
        target: TargetGate::Toffoli { controls: [0, 2], target: 1 },
        held_high: vec![],
        gate_index: 0,
        t2: DONOR_T2,
        extra_rate: 0.0,
        quoted_gate_time: Some(2e-6),
        quoted_total: None,
        metadata: donor_metadata(a, &spins, vec!["ω_L = 2π·100 GHz, chosen so that ω_L ≫ A".into()]),
    })
}

fn donor_metadata(a: f64, spins: &[f64], notes: Vec<String>) -> PresetMetadata {
    PresetMetadata { hyperfine: Some(a), nuclear_spins: spins.to_vec(), notes, ..Default::default() }
}

/// Bi donor Fredkin on (n, m) = (1, 6). Each entry of `extra` adds a control
/// donor with nuclear spin −9/2 exchange-coupled to qubit 1. All Ising
/// shifts on qubit 1 are equal and together cancel the `2A` detuning.
fn donor_fredkin(extra: &[f64]) -> Result<RealizationPreset> {
    let a = ghz(BI_HYPERFINE_GHZ);
    let omega_l = ghz(DONOR_LARMOR_GHZ);
    let mut spins = vec![-4.5, 4.5, 3.5];
    spins.extend(extra.iter().map(|_| -4.5));
    let config = NuclearConfig::new(&spins, a)?;
    // Resonance: J₁₂ + Σ J_E2 = 2A(I₂ᶻ − I₃ᶻ) with all couplings equal.
    let detuning = 2.0 * (config.hyperfine_shift(1) - config.hyperfine_shift(2));
    let j12 = detuning / (1 + extra.len()) as f64;
    let j23 = j12 / crate::analysis::leakage_null_ratio(1, 6)?;
    let mut couplings = vec![Coupling(0, 1, j12), Coupling(1, 2, j23)];
    for e in 0..extra.len() {
        couplings.push(Coupling(3 + e, 1, j12));
    }
    let spec = donor_spec(&config, omega_l, &couplings, None)?;
    let n = spins.len();
    let mut hyperfine: Vec<f64> = (0..n).map(|k| config.hyperfine_shift(k)).collect();
    hyperfine[2] = config.hyperfine_shift(1);
    let frame = FrameGenerator::with_hyperfine(vec![omega_l; n], hyperfine)?;
    let (name, quoted_gate_time) = match extra.len() {
        0 => ("donor-fredkin", None),
        1 => ("donor-fredkin-E", None),
        _ => ("donor-fredkin-EE′", Some(1.5e-9)),
    };
    let held_high: Vec<usize> = (3..n).collect();
    let mut controls = vec![0];
    controls.extend(&held_high);
    Ok(RealizationPreset {
        name: name.into(),
        spec,
        frame,
        target: TargetGate::Fredkin { controls, pair: (1, 2) },
        held_high,
        gate_index: 1,
        t2: DONOR_T2,
        extra_rate: 0.0,
        quoted_gate_time,
        quoted_total: None,
        metadata: donor_metadata(
            a,
            &spins,
            vec!["extra control donors are held in |1⟩ and reached through exchange".into()],
        ),
    })
}

/// Rotating-frame model of the switched Fredkin: qubit 3 is the switch E,
/// Ising-coupled to qubit 1 with the same strength as qubit 0. The pair
/// detuning is `A + J₁₂(s₀ + s_E)` with `s = ±1`, so only `|1⟩|1⟩`
/// controls bring it to zero when `A = 2J₁₂`.
pub fn switch_spec(a: f64, j12: f64, j23: f64) -> Result<SpinSystemSpec> {
    let spec = SpinSystemSpec::new(4)
        .with_z_fields(&[0.0, a, 0.0, 0.0])
        .with_ising(0, 1, j12)
        .with_ising(3, 1, j12)
        .with_heisenberg(1, 2, j23);
    spec.validate()?;
    Ok(spec)
}

fn donor_fredkin_switch() -> Result<RealizationPreset> {
    let a = ghz(BI_HYPERFINE_GHZ);
    let (j12, j23) = (a / 2.0, a / 100.0);
    Ok(RealizationPreset {
        name: "donor-fredkin-switch".into(),
        spec: switch_spec(a, j12, j23)?,
        frame: FrameGenerator::zero(4),
        target: TargetGate::Fredkin { controls: vec![0, 3], pair: (1, 2) },
        held_high: vec![],
        gate_index: 0,
        t2: DONOR_T2,
        extra_rate: 0.0,
        quoted_gate_time: None,
        quoted_total: None,
        metadata: donor_metadata(
            a,
            &[],
            vec!["effective rotating-frame model with J₁₂ = A/2, J₂₃ = A/100".into()],
        ),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorBudget {
    pub preset: String,
    pub gate_time: f64,
    pub quoted_gate_time: Option<f64>,
    /// `3π/4 (Ω/ω₂)²` for Toffoli presets; the mean classical failure of
    /// the reduced propagator for Fredkin presets.
    pub systematic: f64,
    /// Mean classical failure `1 − |⟨π(x)|U|x⟩|²` of the reduced propagator.
    pub systematic_numeric: f64,
    /// Largest single rotating-wave bound.
    pub rwa: f64,
    /// Whether `rwa` exceeds [`RWA_FLAG_LEVEL`].
    pub rwa_flagged: bool,
    pub rwa_terms: Vec<DroppedTerm>,
    pub decoherence: f64,
    pub heating: f64,
    pub naive_total: f64,
    pub quoted_total: Option<f64>,
    /// Resonant second-order exchange channels the first-order bounds miss.
    pub superexchange: Vec<Superexchange>,
    pub notes: Vec<String>,
}

/// Effective exchange between two frame-degenerate qubits that are not
/// coupled directly but share a detuned exchange partner.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Superexchange {
    pub pair: (usize, usize),
    pub via: usize,
    /// `J_i J_j/|Δ|` with `J` the flip-flop matrix elements.
    pub coupling: f64,
    /// `sin²(coupling · t_gate)`.
    pub transfer: f64,
}

pub fn superexchange(spec: &SpinSystemSpec, frame: &FrameGenerator, t: f64) -> Vec<Superexchange> {
    let n = spec.qubits;
    let partner = |a: usize, b: usize| {
        spec.heisenberg.iter().find(|c| (c.0, c.1) == (a, b) || (c.0, c.1) == (b, a)).map(|c| c.2)
    };
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let (gi, gj) = (frame.weight(i), frame.weight(j));
            if (gi - gj).abs() > 1e-9 * gi.abs().max(gj.abs()) || partner(i, j).is_some() {
                continue;
            }
            for k in (0..n).filter(|&k| k != i && k != j) {
                let (Some(a), Some(b)) = (partner(i, k), partner(j, k)) else { continue };
                let delta = (gi - frame.weight(k)).abs();
                if delta == 0.0 {
                    continue;
                }
                let coupling = (a * b).abs() / delta;
                out.push(Superexchange { pair: (i, j), via: k, coupling, transfer: (coupling * t).sin().powi(2) });
            }
        }
    }
    out
}

/// `3π/4 (Ω/ω₂)²`.
pub fn systematic_error_law(omega2_over_rabi: f64) -> f64 {
    0.75 * PI / (omega2_over_rabi * omega2_over_rabi)
}

/// Per-input classical failure of `u` against `perm` over `inputs`.
pub fn input_failures(u: &ComplexMatrix, perm: &[usize], inputs: &[usize]) -> Vec<f64> {
    inputs.iter().map(|&x| (1.0 - u[(perm[x], x)].norm_sqr()).max(0.0)).collect()
}

fn mean(v: &[f64]) -> f64 {
    if v.is_empty() {
        0.0
    } else {
        v.iter().sum::<f64>() / v.len() as f64
    }
}

pub fn error_budget(preset: &RealizationPreset) -> Result<ErrorBudget> {
    preset.validate()?;
    let rwa = preset.rwa()?;
    let reduced = &rwa.reduced_spec;
    let t = preset.gate_time()?;
    let u = evolve_static(reduced, t)?;
    let numeric = mean(&input_failures(&u, &preset.permutation(), &preset.logical_inputs()));
    let mut notes = Vec::new();
    let systematic = match &preset.target {
        TargetGate::Toffoli { target, .. } => {
            let ratio = reduced.z_field(*target) / reduced_rabi(reduced, *target)?;
            notes.push(format!("ω₂/Ω = {ratio:.4} in the reduced Hamiltonian"));
            systematic_error_law(ratio)
        }
        TargetGate::Fredkin { .. } => numeric,
    };
    let decoherence = 1.0 - (-t / preset.t2).exp();
    let heating = 1.0 - (-preset.extra_rate * t).exp();
    let rwa_max = rwa.max_bound();
    let naive_total = systematic + rwa_max + decoherence + heating;
    let rwa_flagged = rwa_max > RWA_FLAG_LEVEL;
    if rwa_flagged {
        notes.push(format!("rotating-wave bound {rwa_max:.3} is not small"));
    }
    if let Some(pt) = preset.quoted_gate_time {
        let r = t / pt;
        if !(0.75..=1.33).contains(&r) {
            notes.push(format!("gate time {t:.4e} s differs from the quoted {pt:.1e} s by a factor {r:.2}"));
        }
    }
    let superexchange = superexchange(&preset.spec, &preset.frame, t);
    for s in &superexchange {
        notes.push(format!(
            "qubits {} and {} exchange through {} at {:.3e} rad/s, transfer {:.2e} per gate",
            s.pair.0, s.pair.1, s.via, s.coupling, s.transfer
        ));
    }
    if let Some(q) = preset.quoted_total {
        if (naive_total - q).abs() > 0.25 * q {
            notes.push(format!("component sum {naive_total:.4} differs from the quoted overall {q}"));
        }
    }
    Ok(ErrorBudget {
        preset: preset.name.clone(),
        gate_time: t,
        quoted_gate_time: preset.quoted_gate_time,
        systematic,
        systematic_numeric: numeric,
        rwa: rwa_max,
        rwa_flagged,
        rwa_terms: rwa.dropped.clone(),
        decoherence,
        heating,
        naive_total,
        quoted_total: preset.quoted_total,
        superexchange,
        notes,
    })
}

/// One lab-frame propagation, compared with the rotating-wave model and
/// with the target permutation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabPoint {
    pub carrier_ratio: Option<f64>,
    /// Largest entry of `U_I − U_RWA`.
    pub rwa_deviation: f64,
    pub input_errors: Vec<(usize, f64)>,
    pub max_input_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabValidation {
    pub preset: String,
    pub physical_ratio: Option<f64>,
    pub points: Vec<LabPoint>,
    /// Slope of log deviation against log carrier ratio.
    pub fitted_exponent: Option<f64>,
    /// Deviation from the largest tested ratio scaled to the physical one
    /// with the fitted exponent.
    pub extrapolated_deviation: Option<f64>,
    /// Three times the budget's `naive_total`.
    pub error_limit: f64,
    pub pass: bool,
}

/// Integrates the preset in its rotating frame (exactly equivalent to the
/// lab frame up to diagonal phases) at each reduced carrier ratio. Static
/// presets ignore `ratios` and are propagated once, exactly.
pub fn lab_validation(preset: &RealizationPreset, ratios: &[f64], steps_per_period: usize) -> Result<LabValidation> {
    let budget = error_budget(preset)?;
    let perm = preset.permutation();
    let inputs = preset.logical_inputs();
    let t = budget.gate_time;
    let run = |p: &RealizationPreset, ratio: Option<f64>| -> Result<LabPoint> {
        let reduced = p.rwa()?.reduced_spec;
        let u_rwa = evolve_static(&reduced, t)?;
        let u = if p.spec.is_static() {
            &p.frame.rotation(p.qubits(), t) * &evolve_static(&p.spec, t)?
        } else {
            evolve_rotating(&p.spec, &p.frame, t, steps_per_period, Integrator::Magnus4)?
        };
        let errs = input_failures(&u, &perm, &inputs);
        Ok(LabPoint {
            carrier_ratio: ratio,
            rwa_deviation: u.max_abs_diff(&u_rwa),
            max_input_error: errs.iter().copied().fold(0.0, f64::max),
            input_errors: inputs.iter().copied().zip(errs).collect(),
        })
    };
    let physical_ratio = preset.carrier_ratio();
    let points = if physical_ratio.is_none() || ratios.is_empty() {
        vec![run(preset, physical_ratio)?]
    } else {
        ratios.iter().map(|&r| run(&preset.with_carrier_ratio(r)?, Some(r))).collect::<Result<Vec<_>>>()?
    };
    let fitted_exponent = fit_exponent(&points);
    let extrapolated_deviation = match (fitted_exponent, physical_ratio, points.last()) {
        (Some(k), Some(phys), Some(LabPoint { carrier_ratio: Some(r), rwa_deviation, .. })) => {
            Some(rwa_deviation * (phys / r).powf(k))
        }
        _ => None,
    };
    let error_limit = 3.0 * budget.naive_total;
    let best = points.last().map_or(f64::INFINITY, |p| p.max_input_error);
    Ok(LabValidation {
        preset: preset.name.clone(),
        physical_ratio,
        points,
        fitted_exponent,
        extrapolated_deviation,
        error_limit,
        pass: best <= error_limit,
    })
}

fn fit_exponent(points: &[LabPoint]) -> Option<f64> {
    let xy: Vec<(f64, f64)> = points
        .iter()
        .filter_map(|p| Some((p.carrier_ratio?.ln(), p.rwa_deviation.max(f64::MIN_POSITIVE).ln())))
        .collect();
    if xy.len() < 2 {
        return None;
    }
    let n = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / n;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// An integer pair `(n, m)` for the Fredkin null condition and the coupling
/// ratio it implies.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FredkinPair {
    pub n: u32,
    pub m: u32,
    /// `J₂₃/J₁₂ = 1/√(m²/(2n+1)² − 1)`.
    pub ratio: f64,
    pub residual: f64,
    /// Whether `m` is even, which the leakage null needs.
    pub nulls_leakage: bool,
}

pub fn evaluate_pair(n: u32, m: u32, target: f64) -> Result<FredkinPair> {
    let ratio = 1.0 / crate::analysis::leakage_null_ratio(n, m)?;
    Ok(FredkinPair { n, m, ratio, residual: (ratio - target).abs(), nulls_leakage: m % 2 == 0 })
}

/// Best `(n, m)` with `1 ≤ n ≤ max_n` and even `m > 2n+1` for the coupling
/// ratio `J₂₃/J₁₂ = target`. Ties go to the smaller n.
pub fn fredkin_integer_search(target: f64, max_n: u32) -> Result<FredkinPair> {
    if !(target > 0.0) || !target.is_finite() {
        return Err(Error::InvalidParameter(format!("target ratio must be positive, got {target}")));
    }
    if max_n < 1 {
        return Err(Error::InvalidParameter("max_n must be at least 1".into()));
    }
    let mut best: Option<FredkinPair> = None;
    for n in 1..=max_n {
        let q = 2 * n + 1;
        // ratio = target at m = q√(1 + 1/target²); check the even neighbours.
        let ideal = f64::from(q) * (1.0 + 1.0 / (target * target)).sqrt();
        let lower = ((ideal / 2.0).floor() as u64 * 2).max(u64::from(q) + 1);
        for m in [lower, lower + 2] {
            let Ok(m) = u32::try_from(m) else { continue };
            let c = evaluate_pair(n, m, target)?;
            if best.is_none_or(|b| c.residual < b.residual) {
                best = Some(c);
            }
        }
    }
    best.ok_or_else(|| Error::NoSolution("no candidate pair".into()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SwitchConditions {
    pub a: f64,
    pub j12: f64,
    pub j23: f64,
    /// `|A − 2J₁₂|/J₂₃`.
    pub resonance_offset: f64,
    /// `(A + 2J₁₂)/J₂₃`.
    pub upper_ratio: f64,
    /// `A/J₂₃`.
    pub middle_ratio: f64,
    pub factor: f64,
    pub pass: bool,
}

pub fn switch_conditions(a: f64, j12: f64, j23: f64) -> Result<SwitchConditions> {
    switch_conditions_with(a, j12, j23, SWITCH_HIERARCHY)
}

pub fn switch_conditions_with(a: f64, j12: f64, j23: f64, factor: f64) -> Result<SwitchConditions> {
    if !(a > 0.0 && j12 > 0.0 && j23 > 0.0) {
        return Err(Error::InvalidParameter("A, J₁₂ and J₂₃ must be positive".into()));
    }
    let resonance_offset = (a - 2.0 * j12).abs() / j23;
    let upper_ratio = (a + 2.0 * j12) / j23;
    let middle_ratio = a / j23;
    let pass = resonance_offset <= SWITCH_RESONANCE_TOL && upper_ratio >= factor && middle_ratio >= factor;
    Ok(SwitchConditions { a, j12, j23, resonance_offset, upper_ratio, middle_ratio, factor, pass })
}

/// Swap amplitudes of the switched Fredkin at `τ_n`, split by control
/// setting.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SwitchCheck {
    pub gate_time: f64,
    /// Smallest `|⟨swapped|U|x⟩|` with both controls at 1.
    pub on_swap_amplitude: f64,
    /// Largest `|⟨swapped|U|x⟩|` with either control at 0.
    pub off_swap_amplitude: f64,
}

pub fn switch_check(a: f64, j12: f64, j23: f64, n: u32) -> Result<SwitchCheck> {
    let spec = switch_spec(a, j12, j23)?;
    let t = f64::from(2 * n + 1) * PI / (2.0 * j23);
    let u = evolve_static(&spec, t)?;
    let swap_all = controlled_swap_permutation(4, &[], (1, 2));
    let mut on = f64::INFINITY;
    let mut off: f64 = 0.0;
    for x in 0..16 {
        if swap_all[x] == x {
            continue;
        }
        let amp = u[(swap_all[x], x)].norm();
        if bit(x, 0, 4) == 1 && bit(x, 3, 4) == 1 {
            on = on.min(amp);
        } else {
            off = off.max(amp);
        }
    }
    Ok(SwitchCheck { gate_time: t, on_swap_amplitude: on, off_swap_amplitude: off })
}

/// The classical gate obtained from the reduced propagator of `preset`.
pub fn reduced_classical_gate(preset: &RealizationPreset) -> Result<ClassicalGate> {
    let reduced = preset.rwa()?.reduced_spec;
    let t = preset.gate_time()?;
    let u = evolve_static(&reduced, t)?;
    Ok(crate::analysis::classical_gate(&crate::analysis::FidelityTable::from_unitary(u, t)))
}
