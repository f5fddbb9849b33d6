use serde::{Deserialize, Serialize};

use super::frame::FrameGenerator;
use crate::error::{Error, Result};
use crate::hamiltonian::{Coupling, DriveTerm, SpinSystemSpec};

/// Relative tolerance for "this carrier matches this frame frequency".
pub const RESONANCE_MATCH_TOL: f64 = 1e-9;

/// A term removed by the reduction, with its O(‖V‖/ω) size.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DroppedTerm {
    pub description: String,
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RWAReport {
    pub reduced_spec: SpinSystemSpec,
    pub dropped: Vec<DroppedTerm>,
    /// Terms that match no reduction pattern; they are absent from
    /// `reduced_spec` and the reduction should not be trusted.
    pub unreduced: Vec<String>,
}

impl RWAReport {
    pub fn max_bound(&self) -> f64 {
        self.dropped.iter().map(|d| d.bound).fold(0.0, f64::max)
    }

    pub fn total_bound(&self) -> f64 {
        self.dropped.iter().map(|d| d.bound).sum()
    }

    pub fn is_complete(&self) -> bool {
        self.unreduced.is_empty()
    }
}

fn same_frequency(a: f64, b: f64) -> bool {
    (a - b).abs() <= RESONANCE_MATCH_TOL * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

/// Moves `spec` into the rotating frame of `frame` and drops the
/// oscillating terms.
///
/// Flip-flop parts of Heisenberg couplings between qubits with different
/// frame frequencies are dropped (bound `4J/|Δ|` for a `J σ⃗·σ⃗` term) and
/// their `σᶻσᶻ` parts kept. A drive whose carrier matches its qubit's
/// frame frequency becomes a static transverse field of half the amplitude
/// (bound `C/2ω` for a `C cos(ωt) σˣ` term). Anything else is reported in
/// `unreduced`.
pub fn rwa_reduce(spec: &SpinSystemSpec, frame: &FrameGenerator) -> Result<RWAReport> {
    spec.validate()?;
    if frame.qubits() != spec.qubits {
        return Err(Error::InvalidParameter(format!(
            "frame has {} qubits, spec has {}",
            frame.qubits(),
            spec.qubits
        )));
    }
    let n = spec.qubits;
    let g: Vec<f64> = (0..n).map(|q| frame.weight(q)).collect();
    let mut reduced = SpinSystemSpec::new(n);
    reduced.z_fields = (0..n).map(|q| spec.z_field(q) - g[q]).collect();
    reduced.ising = spec.ising.clone();
    let mut dropped = Vec::new();
    let mut unreduced = Vec::new();

    for &Coupling(i, j, s) in &spec.heisenberg {
        let delta = g[i] - g[j];
        if same_frequency(g[i], g[j]) {
            reduced.heisenberg.push(Coupling(i, j, s));
            continue;
        }
        // (s/2)σ⃗·σ⃗ is J = s/2 in J σ⃗·σ⃗ form.
        let bound = 4.0 * (s / 2.0).abs() / delta.abs();
        let description = format!("flip-flop ({i},{j}) rotating at Δ = {delta:e}");
        if bound >= 1.0 {
            unreduced.push(format!("{description}: bound {bound:.3} is not small"));
            continue;
        }
        reduced.ising.push(Coupling(i, j, s));
        dropped.push(DroppedTerm { description, bound });
    }
    merge_ising(&mut reduced.ising);

    for d in &spec.drives {
        let gk = g[d.target];
        let k = d.target;
        if d.is_static() {
            if gk == 0.0 {
                reduced.drives.push(*d);
            } else {
                push_checked(
                    &mut dropped,
                    &mut unreduced,
                    format!("static drive on {k} rotating at {gk:e}"),
                    0.5 * d.amplitude / gk.abs(),
                );
            }
            continue;
        }
        let w = d.carrier.abs();
        let phase = d.phase * d.carrier.signum();
        if gk == 0.0 {
            push_checked(
                &mut dropped,
                &mut unreduced,
                format!("off-resonant drive on {k} at carrier {w:e}"),
                0.5 * d.amplitude / w,
            );
        } else if same_frequency(w, gk.abs()) {
            let bound = 0.25 * d.amplitude / w;
            let description = format!("counter-rotating drive on {k} at 2ω = {:e}", 2.0 * w);
            if bound >= 1.0 {
                unreduced.push(format!("{description}: bound {bound:.3} is not small"));
                continue;
            }
            let phase = if gk > 0.0 { phase } else { -phase };
            reduced.drives.push(DriveTerm { target: k, amplitude: 0.5 * d.amplitude, carrier: 0.0, phase });
            dropped.push(DroppedTerm { description, bound });
        } else {
            unreduced.push(format!(
                "drive on {k} at carrier {w:e} is detuned by {:e} from the frame frequency",
                w - gk.abs()
            ));
        }
    }

    Ok(RWAReport { reduced_spec: reduced, dropped, unreduced })
}

fn push_checked(dropped: &mut Vec<DroppedTerm>, unreduced: &mut Vec<String>, description: String, bound: f64) {
    if bound >= 1.0 {
        unreduced.push(format!("{description}: bound {bound:.3} is not small"));
    } else {
        dropped.push(DroppedTerm { description, bound });
    }
}

/// Sums Ising entries on the same unordered pair.
fn merge_ising(list: &mut Vec<Coupling>) {
    let mut out: Vec<Coupling> = Vec::with_capacity(list.len());
    for &Coupling(i, j, s) in list.iter() {
        let key = (i.min(j), i.max(j));
        if let Some(c) = out.iter_mut().find(|c| (c.0.min(c.1), c.0.max(c.1)) == key) {
            c.2 += s;
        } else {
            out.push(Coupling(i, j, s));
        }
    }
    *list = out;
}
