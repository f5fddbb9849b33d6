//! Repetition-coded Toffoli: fault-combination counting, exact low-order
//! enumeration and Monte Carlo logical error rates.
//!
//! Three blocks (two controls and the target) hold three bits each. A round
//! of error correction on a block resets three ancillas, writes the pair
//! parities `a₀ = d₀⊕d₁`, `a₁ = d₀⊕d₂`, `a₂ = d₁⊕d₂` with three parity
//! gates, then applies the recovery Toffolis `d₀ ^= a₀a₁`, `d₁ ^= a₀a₂`,
//! `d₂ ^= a₁a₂`. A faulty gate applies its ideal function and then flips
//! each of its wires independently with probability `p`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const BLOCKS: usize = 3;
pub const PUBLISHED_ITEMS: [f64; 7] = [108.0, 56.0, 3.0, 27.0, 9.0, 27.0, 9.0];

/// Location counts of the encoded Toffoli.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FaultModel {
    pub p: f64,
    pub blocks: u32,
    pub incoming_per_block: u32,
    pub transversal_gates: u32,
    pub syndrome_gates_per_block: u32,
    pub recovery_gates_per_block: u32,
}

impl FaultModel {
    pub fn new(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!("probability {p} outside [0, 1]")));
        }
        Ok(Self {
            p,
            blocks: 3,
            incoming_per_block: 6,
            transversal_gates: 3,
            syndrome_gates_per_block: 3,
            recovery_gates_per_block: 3,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SecondOrderCount {
    /// The published itemization.
    pub published_items: Vec<f64>,
    pub published_total: f64,
    /// The same seven items recomputed from the location counts.
    pub derived_items: Vec<f64>,
    pub derived_total: f64,
}

impl SecondOrderCount {
    /// `C p²` with the derived coefficient.
    pub fn leading_order(&self, p: f64) -> f64 {
        self.derived_total * p * p
    }
}

fn choose2(n: u32) -> f64 {
    f64::from(n) * (f64::from(n) - 1.0) / 2.0
}

pub fn second_order_count(model: &FaultModel) -> SecondOrderCount {
    let b = f64::from(model.blocks);
    let inc = f64::from(model.incoming_per_block);
    let tr = f64::from(model.transversal_gates);
    let syn = f64::from(model.syndrome_gates_per_block);
    let rec = f64::from(model.recovery_gates_per_block);
    let derived_items = vec![
        choose2(model.blocks) * inc * inc,
        b * tr * inc,
        choose2(model.transversal_gates),
        b * tr * syn,
        b * choose2(model.syndrome_gates_per_block),
        b * syn * rec,
        b * choose2(model.recovery_gates_per_block),
    ];
    SecondOrderCount {
        published_items: PUBLISHED_ITEMS.to_vec(),
        published_total: PUBLISHED_ITEMS.iter().sum(),
        derived_total: derived_items.iter().sum(),
        derived_items,
    }
}

/// How errors arriving from the preceding gate are produced.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum IncomingErrors {
    /// Simulate a full preceding correction round on every block.
    #[default]
    Explicit,
    /// Flip one uniformly chosen bit of each block with probability `6p`.
    Injected,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Op {
    Reset(u32),
    /// `bits[2] ^= bits[0] ^ bits[1]`
    Parity([u8; 3]),
    /// `bits[2] ^= bits[0] & bits[1]`
    Toffoli([u8; 3]),
    /// One bit of the block starting at `u8` flips with probability 6p.
    Incoming(u8),
    /// Logical inputs are read here.
    DecodeInputs,
}

fn data(block: usize, k: usize) -> u8 {
    (3 * block + k) as u8
}

fn anc(block: usize, k: usize) -> u8 {
    (9 + 3 * block + k) as u8
}

fn correction_round(ops: &mut Vec<Op>, block: usize) {
    let mask = (0..3).fold(0u32, |m, k| m | 1 << anc(block, k));
    ops.push(Op::Reset(mask));
    for (k, (i, j)) in [(0, 1), (0, 2), (1, 2)].into_iter().enumerate() {
        ops.push(Op::Parity([data(block, i), data(block, j), anc(block, k)]));
    }
    for (k, (i, j)) in [(0, 1), (0, 2), (1, 2)].into_iter().enumerate() {
        ops.push(Op::Toffoli([anc(block, i), anc(block, j), data(block, k)]));
    }
}

/// The encoded-Toffoli circuit as a fixed operation list.
#[derive(Clone, Debug)]
pub struct EncodedToffoli {
    ops: Vec<Op>,
    mode: IncomingErrors,
}

/// One place a single bit flip can happen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaultLocation {
    pub op: usize,
    pub bit: u8,
    /// Probability weight in units of `p`: 1 for gate wires, 2 for an
    /// injected incoming flip on a given bit (6p spread over 3 bits).
    pub weight: u32,
}

impl EncodedToffoli {
    pub fn new(mode: IncomingErrors) -> Self {
        let mut ops = Vec::new();
        for b in 0..BLOCKS {
            match mode {
                IncomingErrors::Explicit => correction_round(&mut ops, b),
                IncomingErrors::Injected => ops.push(Op::Incoming(data(b, 0))),
            }
        }
        ops.push(Op::DecodeInputs);
        for k in 0..3 {
            ops.push(Op::Toffoli([data(0, k), data(1, k), data(2, k)]));
        }
        for b in 0..BLOCKS {
            correction_round(&mut ops, b);
        }
        Self { ops, mode }
    }

    pub fn mode(&self) -> IncomingErrors {
        self.mode
    }

    /// Every single-bit fault location.
    pub fn locations(&self) -> Vec<FaultLocation> {
        let mut out = Vec::new();
        for (i, op) in self.ops.iter().enumerate() {
            match *op {
                Op::Parity(bits) | Op::Toffoli(bits) => {
                    out.extend(bits.iter().map(|&bit| FaultLocation { op: i, bit, weight: 1 }))
                }
                Op::Incoming(first) => {
                    out.extend((0..3).map(|k| FaultLocation { op: i, bit: first + k, weight: 2 }))
                }
                Op::Reset(_) | Op::DecodeInputs => {}
            }
        }
        out
    }

    pub fn gate_count(&self) -> usize {
        self.ops.iter().filter(|o| matches!(o, Op::Parity(_) | Op::Toffoli(_))).count()
    }

    /// Runs the circuit on logical input `input` (bits c₁ c₂ t, c₁ most
    /// significant), flipping `flips(op_index, bit)` after each op. Returns
    /// true when the decoded output differs from the Toffoli of the decoded
    /// inputs.
    fn run(&self, input: u8, mut flips: impl FnMut(usize, &Op) -> u32) -> bool {
        let mut s = 0u32;
        for b in 0..BLOCKS {
            if (input >> (2 - b)) & 1 == 1 {
                s |= 0b111 << (3 * b);
            }
        }
        let mut logical_in = 0u8;
        for (i, op) in self.ops.iter().enumerate() {
            let bit = |s: u32, k: u8| (s >> k) & 1;
            match *op {
                Op::Reset(mask) => s &= !mask,
                Op::Parity([a, b, t]) => s ^= (bit(s, a) ^ bit(s, b)) << t,
                Op::Toffoli([a, b, t]) => s ^= (bit(s, a) & bit(s, b)) << t,
                Op::Incoming(_) => {}
                Op::DecodeInputs => logical_in = decode(s),
            }
            s ^= flips(i, op);
        }
        decode(s) != toffoli_logical(logical_in)
    }

    /// Failure for a fixed set of single-bit faults.
    pub fn fails_with(&self, input: u8, faults: &[FaultLocation]) -> bool {
        self.run(input, |i, _| {
            faults.iter().filter(|f| f.op == i).fold(0u32, |m, f| m ^ (1 << f.bit))
        })
    }

    fn sample_failure<R: Rng>(&self, input: u8, p: f64, rng: &mut R) -> bool {
        let incoming = (6.0 * p).min(1.0);
        self.run(input, |_, op| match *op {
            Op::Parity(bits) | Op::Toffoli(bits) => {
                bits.iter().fold(0u32, |m, &b| if rng.random::<f64>() < p { m | 1 << b } else { m })
            }
            Op::Incoming(first) => {
                if rng.random::<f64>() < incoming {
                    1 << (first + rng.random_range(0..3u8))
                } else {
                    0
                }
            }
            _ => 0,
        })
    }
}

fn decode(s: u32) -> u8 {
    (0..BLOCKS).fold(0u8, |acc, b| {
        let ones = ((s >> (3 * b)) & 0b111).count_ones();
        acc | (u8::from(ones >= 2) << (2 - b))
    })
}

fn toffoli_logical(x: u8) -> u8 {
    if x & 0b110 == 0b110 {
        x ^ 1
    } else {
        x
    }
}

/// Gates of one correction round at which a single wire flip leaves the
/// block holding exactly one data error after the round.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExitPoints {
    /// Number of gates with at least one such wire.
    pub gates: usize,
    /// Number of such wires.
    pub wires: usize,
}

pub fn correction_round_exit_points() -> ExitPoints {
    let mut ops = Vec::new();
    correction_round(&mut ops, 0);
    let mut gates = 0;
    let mut wires = 0;
    for (i, op) in ops.iter().enumerate() {
        let bits = match *op {
            Op::Parity(b) | Op::Toffoli(b) => b,
            _ => continue,
        };
        let mut harmful = 0;
        for &bit in &bits {
            let mut s = 0u32;
            for (k, o) in ops.iter().enumerate() {
                match *o {
                    Op::Reset(mask) => s &= !mask,
                    Op::Parity([a, b, t]) => s ^= (((s >> a) ^ (s >> b)) & 1) << t,
                    Op::Toffoli([a, b, t]) => s ^= ((s >> a) & (s >> b) & 1) << t,
                    _ => {}
                }
                if k == i {
                    s ^= 1 << bit;
                }
            }
            if (s & 0b111).count_ones() == 1 {
                harmful += 1;
            }
        }
        wires += harmful;
        gates += usize::from(harmful > 0);
    }
    ExitPoints { gates, wires }
}

/// Result of the exhaustive single-fault check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingleFaultReport {
    pub locations: usize,
    pub cases: usize,
    pub failures: Vec<(FaultLocation, u8)>,
}

/// Injects each single-bit fault, alone, for every logical input.
pub fn single_fault_check(mode: IncomingErrors) -> SingleFaultReport {
    let c = EncodedToffoli::new(mode);
    let locs = c.locations();
    let mut failures = Vec::new();
    for &l in &locs {
        for input in 0..8u8 {
            if c.fails_with(input, &[l]) {
                failures.push((l, input));
            }
        }
    }
    SingleFaultReport { locations: locs.len(), cases: locs.len() * 8, failures }
}

/// Exact coefficient of `p²` in the logical failure probability, averaged
/// over uniformly random logical inputs, by enumerating all fault pairs.
pub fn exact_second_order_coefficient(mode: IncomingErrors) -> f64 {
    let c = EncodedToffoli::new(mode);
    let locs = c.locations();
    let mut total = 0.0;
    for i in 0..locs.len() {
        for j in i + 1..locs.len() {
            let (a, b) = (locs[i], locs[j]);
            // Two injected flips in the same block are mutually exclusive.
            if a.weight == 2 && b.weight == 2 && a.op == b.op {
                continue;
            }
            let fails = (0..8u8).filter(|&x| c.fails_with(x, &[a, b])).count();
            total += f64::from(a.weight * b.weight) * fails as f64 / 8.0;
        }
    }
    total
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MCResult {
    pub p: f64,
    pub trials: u64,
    pub failures: u64,
    pub estimate: f64,
    /// Half-width of the 95% Wilson interval.
    pub ci_half_width: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u64,
}

const Z95: f64 = 1.959_963_984_540_054;
const CHUNK: u64 = 1 << 15;

fn wilson(failures: u64, trials: u64) -> (f64, f64) {
    let n = trials as f64;
    let ph = failures as f64 / n;
    let z2 = Z95 * Z95;
    let centre = (ph + z2 / (2.0 * n)) / (1.0 + z2 / n);
    let half = Z95 * (ph * (1.0 - ph) / n + z2 / (4.0 * n * n)).sqrt() / (1.0 + z2 / n);
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

pub const MIN_TRIALS: u64 = 10_000;

/// Monte Carlo logical failure rate of the encoded Toffoli at physical
/// error `p`. Chunk `k` of the trials draws from ChaCha8 stream `k` of
/// `seed`, so results do not depend on thread count.
pub fn mc_logical_error(p: f64, trials: u64, seed: u64, mode: IncomingErrors) -> Result<MCResult> {
    if !(0.0..0.5).contains(&p) {
        return Err(Error::InvalidParameter(format!("physical error {p} outside [0, 0.5)")));
    }
    if trials < MIN_TRIALS {
        return Err(Error::InvalidParameter(format!("{trials} trials is below the minimum {MIN_TRIALS}")));
    }
    let circuit = EncodedToffoli::new(mode);
    let chunks = trials.div_ceil(CHUNK);
    let failures: u64 = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k);
            let n = CHUNK.min(trials - k * CHUNK);
            (0..n)
                .filter(|_| {
                    let input = rng.random_range(0..8u8);
                    circuit.sample_failure(input, p, &mut rng)
                })
                .count() as u64
        })
        .sum();
    let (ci_low, ci_high) = wilson(failures, trials);
    Ok(MCResult {
        p,
        trials,
        failures,
        estimate: failures as f64 / trials as f64,
        ci_half_width: 0.5 * (ci_high - ci_low),
        ci_low,
        ci_high,
        seed,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport {
    /// Crossing of the MC estimate with `p`.
    pub p_star: f64,
    /// Crossings of the upper and lower Wilson bounds with `p`. `None` when
    /// the bound does not cross inside the search bracket, which happens
    /// for the upper bound when `trials` is too small to resolve `p` near
    /// the bottom of the bracket.
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
    pub trials: u64,
    pub seed: u64,
    pub reference_published: f64,
    pub reference_derived: f64,
    pub reference_one_sixth: f64,
}

const SEARCH_LOW: f64 = 1e-4;
const SEARCH_HIGH: f64 = 0.49;

fn bisect(mut f: impl FnMut(f64) -> Result<f64>, iterations: usize) -> Result<f64> {
    let (mut lo, mut hi) = (SEARCH_LOW.ln(), SEARCH_HIGH.ln());
    if f(lo.exp())? >= 0.0 || f(hi.exp())? <= 0.0 {
        return Err(Error::NoSolution(format!(
            "logical error does not cross the physical error in ({SEARCH_LOW}, {SEARCH_HIGH})"
        )));
    }
    for _ in 0..iterations {
        let mid = 0.5 * (lo + hi);
        if f(mid.exp())? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((0.5 * (lo + hi)).exp())
}

/// Threshold `p*` where the logical failure rate equals `p`, found by
/// bisection in `log p` with common random numbers across evaluations.
pub fn threshold_estimate(trials: u64, seed: u64, mode: IncomingErrors) -> Result<ThresholdReport> {
    let iterations = 24;
    let p_star = bisect(|p| Ok(mc_logical_error(p, trials, seed, mode)?.estimate - p), iterations)?;
    let ci_low = bisect(|p| Ok(mc_logical_error(p, trials, seed, mode)?.ci_high - p), iterations).ok();
    let ci_high = bisect(|p| Ok(mc_logical_error(p, trials, seed, mode)?.ci_low - p), iterations).ok();
    Ok(ThresholdReport {
        p_star,
        ci_low,
        ci_high,
        trials,
        seed,
        reference_published: 1.0 / 239.0,
        reference_derived: 1.0 / 237.0,
        reference_one_sixth: 1.0 / 6.0,
    })
}

/// Crossing of `C p²` with `p`.
pub fn quadratic_threshold(coefficient: f64) -> f64 {
    1.0 / coefficient
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counting_totals() {
        let c = second_order_count(&FaultModel::new(1e-3).unwrap());
        assert_eq!(c.published_total, 239.0);
        assert_eq!(c.derived_items[1], 54.0);
        assert_eq!(c.derived_total, 237.0);
        assert_eq!(c.leading_order(0.0), 0.0);
        assert!(FaultModel::new(1.5).is_err());
    }

    #[test]
    fn circuit_sizes() {
        let e = EncodedToffoli::new(IncomingErrors::Explicit);
        assert_eq!(e.gate_count(), 39);
        assert_eq!(e.locations().len(), 117);
        let i = EncodedToffoli::new(IncomingErrors::Injected);
        assert_eq!(i.gate_count(), 21);
        assert_eq!(i.locations().len(), 63 + 9);
    }

    #[test]
    fn fault_free_circuit_computes_toffoli() {
        for mode in [IncomingErrors::Explicit, IncomingErrors::Injected] {
            let c = EncodedToffoli::new(mode);
            assert!((0..8).all(|x| !c.fails_with(x, &[])));
        }
        assert_eq!(toffoli_logical(0b110), 0b111);
        assert_eq!(toffoli_logical(0b101), 0b101);
    }

    #[test]
    fn single_faults_are_corrected() {
        for mode in [IncomingErrors::Explicit, IncomingErrors::Injected] {
            let r = single_fault_check(mode);
            assert!(r.failures.is_empty(), "{mode:?}: {:?}", r.failures);
        }
    }

    #[test]
    fn exact_coefficients() {
        assert!((exact_second_order_coefficient(IncomingErrors::Explicit) - 334.5).abs() < 1e-9);
        assert!((exact_second_order_coefficient(IncomingErrors::Injected) - 249.0).abs() < 1e-9);
    }

    #[test]
    fn every_round_gate_can_emit_an_error() {
        assert_eq!(correction_round_exit_points(), ExitPoints { gates: 6, wires: 9 });
    }

    #[test]
    fn zero_error_and_reproducibility() {
        let z = mc_logical_error(0.0, 20_000, 1, IncomingErrors::Explicit).unwrap();
        assert_eq!(z.failures, 0);
        let a = mc_logical_error(0.02, 50_000, 9, IncomingErrors::Explicit).unwrap();
        let b = mc_logical_error(0.02, 50_000, 9, IncomingErrors::Explicit).unwrap();
        assert_eq!(a, b);
        assert!(a.ci_low <= a.estimate && a.estimate <= a.ci_high);
        assert!(mc_logical_error(0.7, 20_000, 1, IncomingErrors::Explicit).is_err());
        assert!(mc_logical_error(0.1, 10, 1, IncomingErrors::Explicit).is_err());
    }

    #[test]
    fn quadratic_crossings() {
        assert!((quadratic_threshold(239.0) - 4.184e-3).abs() < 1e-6);
        assert!((quadratic_threshold(237.0) - 1.0 / 237.0).abs() < 1e-15);
    }
}
