//! Classical circuits built from successive time-independent Hamiltonian
//! stages, with the register dephased between stages.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::ideal_permutation_matrix;
use crate::dynamics::{evolve_rotating, evolve_static, rwa_reduce, with_carrier_ratio, FrameGenerator, Integrator};
use crate::error::{Error, Result};
use crate::hamiltonian::{Coupling, DriveTerm, SpinSystemSpec};
use crate::linalg::ComplexMatrix;

/// Tolerance on the total probability of a [`ClassicalState`].
pub const PROBABILITY_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum StageKind {
    /// `spec` is static, or is a lab Hamiltonian reduced in `frame`.
    Hamiltonian { spec: SpinSystemSpec, frame: Option<FrameGenerator>, duration: f64 },
    /// An exact classical permutation, `perm[x]` the image of `x`.
    Permutation { perm: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PulseStage {
    pub label: String,
    pub kind: StageKind,
}

impl PulseStage {
    pub fn hamiltonian(label: &str, spec: SpinSystemSpec, frame: Option<FrameGenerator>, duration: f64) -> Self {
        Self { label: label.into(), kind: StageKind::Hamiltonian { spec, frame, duration } }
    }

    pub fn permutation(label: &str, perm: Vec<usize>) -> Self {
        Self { label: label.into(), kind: StageKind::Permutation { perm } }
    }

    fn qubits(&self) -> usize {
        match &self.kind {
            StageKind::Hamiltonian { spec, .. } => spec.qubits,
            StageKind::Permutation { perm } => perm.len().trailing_zeros() as usize,
        }
    }

    /// The static Hamiltonian this stage applies in its rotating frame.
    pub fn rotating_spec(&self) -> Result<Option<SpinSystemSpec>> {
        let StageKind::Hamiltonian { spec, frame, .. } = &self.kind else { return Ok(None) };
        match frame {
            None => Ok(Some(spec.clone())),
            Some(f) => {
                let r = rwa_reduce(spec, f)?;
                if !r.is_complete() {
                    return Err(Error::InvalidSpec(format!("stage {}: {}", self.label, r.unreduced.join("; "))));
                }
                Ok(Some(r.reduced_spec))
            }
        }
    }

    /// Stage propagator in the stage's rotating frame.
    pub fn unitary(&self, mode: RunMode) -> Result<ComplexMatrix> {
        match &self.kind {
            StageKind::Permutation { perm } => Ok(ideal_permutation_matrix(perm)),
            StageKind::Hamiltonian { spec, frame, duration } => match (mode, frame) {
                (RunMode::Lab { carrier_ratio, steps_per_period }, Some(f)) if !spec.is_static() => {
                    let (s, f) = with_carrier_ratio(spec, f, carrier_ratio)?;
                    evolve_rotating(&s, &f, *duration, steps_per_period, Integrator::Magnus4)
                }
                _ => {
                    let s = self.rotating_spec()?.expect("hamiltonian stage");
                    evolve_static(&s, *duration)
                }
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PulseSchedule {
    pub qubits: usize,
    pub stages: Vec<PulseStage>,
    pub dephase_between: bool,
}

impl PulseSchedule {
    pub fn new(qubits: usize, stages: Vec<PulseStage>, dephase_between: bool) -> Self {
        Self { qubits, stages, dephase_between }
    }

    pub fn validate(&self) -> Result<()> {
        for s in &self.stages {
            if s.qubits() != self.qubits {
                return Err(Error::Shape(format!("stage {} acts on {} qubits, schedule has {}", s.label, s.qubits(), self.qubits)));
            }
            match &s.kind {
                StageKind::Hamiltonian { spec, duration, .. } => {
                    spec.validate()?;
                    if !(*duration > 0.0) || !duration.is_finite() {
                        return Err(Error::InvalidParameter(format!("stage {} has duration {duration}", s.label)));
                    }
                }
                StageKind::Permutation { perm } => {
                    let mut seen = vec![false; perm.len()];
                    for &y in perm {
                        if y >= perm.len() || std::mem::replace(&mut seen[y], true) {
                            return Err(Error::InvalidParameter(format!("stage {} is not a permutation", s.label)));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn with_dephasing(mut self, on: bool) -> Self {
        self.dephase_between = on;
        self
    }
}

/// How Hamiltonian stages that carry a frame are propagated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub enum RunMode {
    /// Exact propagation of the rotating-wave Hamiltonian.
    #[default]
    Rotating,
    /// Driven integration of the lab Hamiltonian, with carriers lowered to
    /// `carrier_ratio` times the Rabi frequency.
    Lab { carrier_ratio: f64, steps_per_period: usize },
}

/// A probability distribution over the 2ⁿ bit strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassicalState {
    pub qubits: usize,
    pub probabilities: Vec<f64>,
}

impl ClassicalState {
    pub fn new(qubits: usize, probabilities: Vec<f64>) -> Result<Self> {
        if probabilities.len() != 1 << qubits {
            return Err(Error::Shape(format!("{} probabilities for {qubits} qubits", probabilities.len())));
        }
        if probabilities.iter().any(|p| !(*p >= 0.0) || !p.is_finite()) {
            return Err(Error::InvalidParameter("probabilities must be finite and nonnegative".into()));
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > PROBABILITY_TOL {
            return Err(Error::InvalidParameter(format!("probabilities sum to {total}")));
        }
        Ok(Self { qubits, probabilities })
    }

    pub fn basis(qubits: usize, x: usize) -> Self {
        let mut probabilities = vec![0.0; 1 << qubits];
        probabilities[x] = 1.0;
        Self { qubits, probabilities }
    }

    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.probabilities.iter().zip(&other.probabilities).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

/// Projects a density matrix onto its computational-basis diagonal.
pub fn dephase(rho: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_fn(rho.rows(), rho.cols(), |r, c| if r == c { rho[(r, c)] } else { C64::new(0.0, 0.0) })
}

pub fn run_schedule(schedule: &PulseSchedule, input: &ClassicalState, mode: RunMode) -> Result<ClassicalState> {
    schedule.validate()?;
    if input.qubits != schedule.qubits {
        return Err(Error::Shape(format!("input has {} qubits, schedule has {}", input.qubits, schedule.qubits)));
    }
    let unitaries: Vec<ComplexMatrix> =
        schedule.stages.par_iter().map(|s| s.unitary(mode)).collect::<Result<_>>()?;
    Ok(apply_unitaries(&unitaries, schedule.dephase_between, input))
}

fn apply_unitaries(unitaries: &[ComplexMatrix], dephase_between: bool, input: &ClassicalState) -> ClassicalState {
    let dim = input.probabilities.len();
    let probabilities = if dephase_between {
        // Diagonal in, diagonal out: p' = |U|² p.
        let mut p = input.probabilities.clone();
        for u in unitaries {
            p = (0..dim).map(|y| (0..dim).map(|x| u[(y, x)].norm_sqr() * p[x]).sum()).collect();
        }
        p
    } else {
        let mut out = vec![0.0; dim];
        for (x, &px) in input.probabilities.iter().enumerate().filter(|(_, p)| **p > 0.0) {
            let mut psi = vec![C64::new(0.0, 0.0); dim];
            psi[x] = C64::new(1.0, 0.0);
            for u in unitaries {
                psi = u.apply(&psi);
            }
            for (o, a) in out.iter_mut().zip(&psi) {
                *o += px * a.norm_sqr();
            }
        }
        out
    };
    ClassicalState { qubits: input.qubits, probabilities }
}

/// Lifts a static rotating-frame spec to a lab Hamiltonian: each qubit gets
/// the bare splitting `splittings[q]`, the frame absorbs all but the
/// residual field, and each static drive becomes an AC drive of twice the
/// amplitude at its qubit's frame frequency.
pub fn lift_to_lab(reduced: &SpinSystemSpec, splittings: &[f64]) -> Result<(SpinSystemSpec, FrameGenerator)> {
    reduced.validate()?;
    let n = reduced.qubits;
    if splittings.len() != n {
        return Err(Error::Shape(format!("{} splittings for {n} qubits", splittings.len())));
    }
    let weights: Vec<f64> = (0..n).map(|q| splittings[q] - reduced.z_field(q)).collect();
    let mut lab = reduced.clone();
    lab.z_fields = splittings.to_vec();
    for d in &mut lab.drives {
        if !d.is_static() {
            return Err(Error::InvalidSpec("reduced spec already has an AC drive".into()));
        }
        let w = weights[d.target];
        if !(w > 0.0) {
            return Err(Error::InvalidParameter(format!("frame frequency {w} of qubit {} is not positive", d.target)));
        }
        *d = DriveTerm { target: d.target, amplitude: 2.0 * d.amplitude, carrier: w, phase: d.phase };
    }
    Ok((lab, FrameGenerator::new(weights)))
}

/// A time-independent conditional flip: `target` flips iff each listed
/// qubit has the listed bit value. `couplings` are the Ising entries
/// `(other, J)` between `target` and its neighbours; the residual field
/// cancels their shift at the condition and the transverse field is
/// `δ_min/√(4k² − 1)`, which nulls the nearest off-resonant flip at `π/Ω`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionalFlip {
    pub spec: SpinSystemSpec,
    pub rabi: f64,
    pub duration: f64,
    /// Smallest target-field magnitude over the configurations that
    /// should not flip.
    pub min_detuning: f64,
    /// `max Ω²/(Ω² + δ²)` over the configurations that should not flip.
    pub leakage_bound: f64,
}

pub fn conditional_flip(
    qubits: usize,
    background: &[Coupling],
    target: usize,
    couplings: &[(usize, f64)],
    condition: &[(usize, u8)],
    k: u32,
) -> Result<ConditionalFlip> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let sign = |b: u8| if b == 0 { 1.0 } else { -1.0 };
    let cond = |q: usize| condition.iter().find(|c| c.0 == q).map(|c| sign(c.1));
    // Field on target is r + Σ J_c s_c; choose r so it vanishes at the
    // condition. Unconditioned neighbours must not shift the field.
    let mut r = 0.0;
    for &(c, j) in couplings {
        match cond(c) {
            Some(s) => r -= j * s,
            None => {
                return Err(Error::InvalidParameter(format!("neighbour {c} of the target is not in the condition")))
            }
        }
    }
    let mut min_detuning = f64::INFINITY;
    for cfg in 1..1usize << couplings.len() {
        let field: f64 = r + couplings
            .iter()
            .enumerate()
            .map(|(i, &(c, j))| j * cond(c).unwrap() * if cfg >> i & 1 == 1 { -1.0 } else { 1.0 })
            .sum::<f64>();
        min_detuning = min_detuning.min(field.abs());
    }
    if !(min_detuning > 0.0) || !min_detuning.is_finite() {
        return Err(Error::InvalidParameter("conditional flip does not separate the configurations".into()));
    }
    let rabi = min_detuning / (4.0 * f64::from(k).powi(2) - 1.0).sqrt();
    let mut spec = SpinSystemSpec::new(qubits);
    spec.ising = background.to_vec();
    let mut z = vec![0.0; qubits];
    z[target] = r;
    spec = spec.with_z_fields(&z).with_drive(DriveTerm::static_x(target, rabi));
    spec.validate()?;
    let ratio = rabi / min_detuning;
    Ok(ConditionalFlip {
        spec,
        rabi,
        duration: PI / rabi,
        min_detuning,
        leakage_bound: ratio * ratio / (1.0 + ratio * ratio),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalfAdderParams {
    pub j12: f64,
    pub j23: f64,
    pub j13: f64,
    /// Design index of the Toffoli stage, `ω₂/Ω = √(4m₁² − 1)`.
    pub m1: u32,
    /// Design index of the two flip stages.
    pub k: u32,
    /// Bare qubit splittings used by the flip stages' lab Hamiltonians.
    pub splitting: f64,
}

impl Default for HalfAdderParams {
    fn default() -> Self {
        let tau = std::f64::consts::TAU;
        Self { j12: tau * 10e3, j23: tau * 10e3, j13: tau * 7.07e3, m1: 10, k: 10, splitting: tau * 12.6e9 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalfAdder {
    pub schedule: PulseSchedule,
    /// Sum over stages of the largest off-resonant flip probability.
    pub systematic_budget: f64,
    /// `ω₊, ω₋` carriers of the flip stages.
    pub carriers: [f64; 2],
}

/// Qubit 0 holds x, qubit 2 holds y and qubit 1 is a carry ancilla starting
/// at 0. A Toffoli on qubit 1 writes the carry; two pulses on qubit 2 at
/// `ω± = ω₃ − J₁₃ ± J₂₃` flip it for `|10⟩` and `|11⟩` on qubits 0, 1 so
/// it ends as the sum.
pub fn half_adder_schedule(p: &HalfAdderParams) -> Result<HalfAdder> {
    let scale = p.j12.abs().max(p.j23.abs());
    if (p.j12 - p.j23).abs() > 1e-12 * scale {
        return Err(Error::InvalidParameter(format!("half adder needs J₁₂ = J₂₃, got {} and {}", p.j12, p.j23)));
    }
    if (p.j13 - p.j23).abs() <= 1e-12 * scale {
        return Err(Error::InvalidParameter("half adder needs J₁₃ ≠ J₂₃".into()));
    }
    let background = vec![Coupling(0, 1, p.j12), Coupling(1, 2, p.j23), Coupling(0, 2, p.j13)];
    let tof = conditional_flip(3, &background, 1, &[(0, p.j12), (2, p.j23)], &[(0, 1), (2, 1)], p.m1)?;
    let flips: Vec<ConditionalFlip> = [0u8, 1]
        .iter()
        .map(|&c| conditional_flip(3, &background, 2, &[(0, p.j13), (1, p.j23)], &[(0, 1), (1, c)], p.k))
        .collect::<Result<_>>()?;
    let mut stages = vec![PulseStage::hamiltonian("toffoli", tof.spec.clone(), None, tof.duration)];
    let mut carriers = [0.0; 2];
    for (i, (f, label)) in flips.iter().zip(["flip ω+", "flip ω−"]).enumerate() {
        let (lab, frame) = lift_to_lab(&f.spec, &[p.splitting; 3])?;
        carriers[i] = frame.weight(2);
        stages.push(PulseStage::hamiltonian(label, lab, Some(frame), f.duration));
    }
    let systematic_budget = tof.leakage_bound + flips.iter().map(|f| f.leakage_bound).sum::<f64>();
    Ok(HalfAdder { schedule: PulseSchedule::new(3, stages, true), systematic_budget, carriers })
}

/// `perm[x]` is the intended output of input `x`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruthTable {
    pub qubits: usize,
    pub perm: Vec<usize>,
}

impl TruthTable {
    pub fn from_fn(qubits: usize, f: impl Fn(usize) -> usize) -> Self {
        Self { qubits, perm: (0..1 << qubits).map(f).collect() }
    }
}

fn bits_of(x: usize, n: usize) -> String {
    (0..n).map(|q| if (x >> (n - 1 - q)) & 1 == 1 { '1' } else { '0' }).collect()
}

/// `(x, c, y) → (x, c ⊕ xy, y ⊕ x)`.
pub fn half_adder_table() -> TruthTable {
    TruthTable::from_fn(3, |v| {
        let (x, c, y) = (v >> 2 & 1, v >> 1 & 1, v & 1);
        (x << 2) | ((c ^ (x & y)) << 1) | (y ^ x)
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruthRow {
    pub input: String,
    pub expected: String,
    pub probability: f64,
    pub pass: bool,
    /// Most likely wrong output and its probability.
    pub worst_wrong: Option<(String, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruthTableReport {
    pub threshold: f64,
    pub rows: Vec<TruthRow>,
    pub min_success: f64,
    pub pass: bool,
    /// Full output distributions, indexed by input.
    pub distributions: Vec<ClassicalState>,
}

/// Row of the truth-table CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistributionRow {
    pub input: String,
    pub output: String,
    pub probability: f64,
}

impl TruthTableReport {
    /// Every `(input, output)` pair with probability above `cutoff`.
    pub fn distribution_rows(&self, cutoff: f64) -> Vec<DistributionRow> {
        let mut out = Vec::new();
        for (x, d) in self.distributions.iter().enumerate() {
            for (y, &p) in d.probabilities.iter().enumerate() {
                if p > cutoff {
                    out.push(DistributionRow { input: bits_of(x, d.qubits), output: bits_of(y, d.qubits), probability: p });
                }
            }
        }
        out
    }
}

pub fn verify_truth_table(
    schedule: &PulseSchedule,
    table: &TruthTable,
    threshold: f64,
    mode: RunMode,
) -> Result<TruthTableReport> {
    schedule.validate()?;
    let n = schedule.qubits;
    if table.qubits != n || table.perm.len() != 1 << n {
        return Err(Error::Shape(format!("table is not total on {n} qubits")));
    }
    let unitaries: Vec<ComplexMatrix> =
        schedule.stages.par_iter().map(|s| s.unitary(mode)).collect::<Result<_>>()?;
    let distributions: Vec<ClassicalState> = (0..1usize << n)
        .into_par_iter()
        .map(|x| apply_unitaries(&unitaries, schedule.dephase_between, &ClassicalState::basis(n, x)))
        .collect();
    let rows: Vec<TruthRow> = distributions
        .iter()
        .enumerate()
        .map(|(x, d)| {
            let y = table.perm[x];
            let probability = d.probabilities[y];
            let worst_wrong = d
                .probabilities
                .iter()
                .enumerate()
                .filter(|&(z, _)| z != y)
                .max_by(|a, b| a.1.total_cmp(b.1))
                .map(|(z, &p)| (bits_of(z, n), p));
            TruthRow { input: bits_of(x, n), expected: bits_of(y, n), probability, pass: probability >= threshold, worst_wrong }
        })
        .collect();
    let min_success = rows.iter().map(|r| r.probability).fold(1.0, f64::min);
    Ok(TruthTableReport { threshold, pass: rows.iter().all(|r| r.pass), rows, min_success, distributions })
}

/// Toffoli on (1, 2, 3) of a five-qubit plaquette where the target 2 is
/// also Ising-coupled to spectator qubits A = 3 and B = 4. One pulse per
/// spectator setting, in its own rotating frame, flips 2 iff qubits 0 and
/// 1 are both 1, whatever A and B hold. Layout: 0 and 1 are the controls,
/// 2 the target.
pub fn selective_toffoli_schedule(j: f64, j_a: f64, j_b: f64, k: u32) -> Result<PulseSchedule> {
    let background = vec![Coupling(0, 2, j), Coupling(1, 2, j), Coupling(3, 2, j_a), Coupling(4, 2, j_b)];
    let couplings = [(0, j), (1, j), (3, j_a), (4, j_b)];
    let mut stages = Vec::new();
    for (a, b) in [(0u8, 0u8), (0, 1), (1, 0), (1, 1)] {
        let f = conditional_flip(5, &background, 2, &couplings, &[(0, 1), (1, 1), (3, a), (4, b)], k)?;
        stages.push(PulseStage::hamiltonian(&format!("flip A={a} B={b}"), f.spec, None, f.duration));
    }
    Ok(PulseSchedule::new(5, stages, true))
}
