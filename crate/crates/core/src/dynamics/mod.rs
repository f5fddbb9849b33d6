//! Time evolution, rotating frames and rotating-wave reductions.

mod frame;
mod rwa;

pub use frame::{to_rotating_frame, FrameGenerator, RotatingFrameHamiltonian};
pub use rwa::{rwa_reduce, DroppedTerm, RWAReport};

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::hamiltonian::SpinSystemSpec;
use num_complex::Complex64 as C64;

use crate::linalg::{propagator, ComplexMatrix};

/// Minimum accepted slices per shortest carrier period.
pub const MIN_STEPS_PER_PERIOD: usize = 20;
pub const DEFAULT_STEPS_PER_PERIOD: usize = 64;

/// `exp(−iHt)` for a spec without AC drives.
pub fn evolve_static(spec: &SpinSystemSpec, t: f64) -> Result<ComplexMatrix> {
    if !spec.is_static() {
        return Err(Error::DrivenSpec);
    }
    propagator(&spec.build_matrix(0.0)?, t)
}

/// Time-stepping scheme for driven evolution. Both are products of exact
/// exponentials of Hermitian matrices, so the result is unitary.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Integrator {
    /// One exponential of `H` at each slice midpoint (second order).
    Midpoint,
    /// Fourth-order commutator-free Magnus: two exponentials per slice built
    /// from `H` at the two Gauss points.
    #[default]
    Magnus4,
}

/// Time-ordered propagator of `h(t)` over `[t0, t1]` in `slices` slices.
pub fn evolve_piecewise(
    dim: usize,
    h: impl Fn(f64) -> Result<ComplexMatrix>,
    t0: f64,
    t1: f64,
    slices: usize,
    integrator: Integrator,
) -> Result<ComplexMatrix> {
    let slices = slices.max(1);
    let dt = (t1 - t0) / slices as f64;
    let mut u = ComplexMatrix::identity(dim);
    let r3 = 3f64.sqrt();
    let (c1, c2) = (0.5 - r3 / 6.0, 0.5 + r3 / 6.0);
    let (a1, a2) = ((3.0 - 2.0 * r3) / 12.0, (3.0 + 2.0 * r3) / 12.0);
    for k in 0..slices {
        let start = t0 + k as f64 * dt;
        match integrator {
            Integrator::Midpoint => {
                let step = propagator(&h(start + 0.5 * dt)?, dt)?;
                u = &step * &u;
            }
            Integrator::Magnus4 => {
                let h1 = h(start + c1 * dt)?;
                let h2 = h(start + c2 * dt)?;
                let mut first = h1.scale_real(a2);
                first.add_scaled(&h2, C64::new(a1, 0.0));
                let mut second = h1.scale_real(a1);
                second.add_scaled(&h2, C64::new(a2, 0.0));
                u = &propagator(&first, dt)? * &u;
                u = &propagator(&second, dt)? * &u;
            }
        }
    }
    Ok(u)
}

/// Number of slices needed to resolve every carrier of `spec`
/// over `duration` at `steps_per_period`.
pub fn slice_count(spec: &SpinSystemSpec, duration: f64, steps_per_period: usize) -> usize {
    let w = spec.max_carrier();
    if w == 0.0 {
        return 1;
    }
    ((duration.abs() * w / TAU) * steps_per_period as f64).ceil().max(1.0) as usize
}

/// Lab-frame propagator over `[t0, t1]` for a spec with AC drives.
pub fn evolve_driven_interval(
    spec: &SpinSystemSpec,
    t0: f64,
    t1: f64,
    steps_per_period: usize,
    integrator: Integrator,
) -> Result<ComplexMatrix> {
    if steps_per_period < MIN_STEPS_PER_PERIOD {
        return Err(Error::InvalidParameter(format!(
            "{steps_per_period} steps per carrier period is below the minimum {MIN_STEPS_PER_PERIOD}"
        )));
    }
    spec.validate()?;
    if spec.is_static() {
        return propagator(&spec.build_matrix(0.0)?, t1 - t0);
    }
    let slices = slice_count(spec, t1 - t0, steps_per_period);
    evolve_piecewise(spec.dim(), |t| spec.build_matrix(t), t0, t1, slices, integrator)
}

/// Lowers every z-field, Zeeman frame weight and AC carrier by `offset`.
/// Frequency differences, and hence the rotating-wave reduction, are
/// unchanged; counter-rotating terms move to `2(ω − offset)`.
pub fn shift_frequencies(spec: &SpinSystemSpec, frame: &FrameGenerator, offset: f64) -> (SpinSystemSpec, FrameGenerator) {
    let mut s = spec.clone();
    s.z_fields = (0..spec.qubits).map(|q| spec.z_field(q) - offset).collect();
    for d in s.drives.iter_mut().filter(|d| !d.is_static()) {
        d.carrier -= offset;
    }
    let mut f = frame.clone();
    for w in &mut f.zeeman {
        *w -= offset;
    }
    (s, f)
}

/// Shifts a spec with one AC drive so its carrier is `ratio` times the
/// reduced Rabi frequency `amplitude/2`.
pub fn with_carrier_ratio(spec: &SpinSystemSpec, frame: &FrameGenerator, ratio: f64) -> Result<(SpinSystemSpec, FrameGenerator)> {
    let drive = match spec.drives.as_slice() {
        [d] if !d.is_static() => *d,
        _ => return Err(Error::InvalidParameter("carrier ratio needs exactly one AC drive".into())),
    };
    if !(ratio > 0.0) {
        return Err(Error::InvalidParameter(format!("carrier ratio must be positive, got {ratio}")));
    }
    Ok(shift_frequencies(spec, frame, drive.carrier - ratio * 0.5 * drive.amplitude))
}

/// Rotating-frame propagator `U_I(t) = e^{iGt} U_lab(t)` from 0 to
/// `t_final`, integrating `H_I(t)` with slices set by its fastest
/// oscillation rather than by the lab carriers.
pub fn evolve_rotating(
    spec: &SpinSystemSpec,
    frame: &FrameGenerator,
    t_final: f64,
    steps_per_period: usize,
    integrator: Integrator,
) -> Result<ComplexMatrix> {
    if steps_per_period < MIN_STEPS_PER_PERIOD {
        return Err(Error::InvalidParameter(format!(
            "{steps_per_period} steps per period is below the minimum {MIN_STEPS_PER_PERIOD}"
        )));
    }
    let hi = RotatingFrameHamiltonian::new(spec, frame)?;
    let w = hi.max_frequency()?;
    let slices = ((t_final.abs() * w / TAU) * steps_per_period as f64).ceil().max(1.0) as usize;
    evolve_piecewise(hi.dim(), |t| hi.at(t), 0.0, t_final, slices, integrator)
}

/// Lab-frame propagator from 0 to `t_final` with the default integrator.
pub fn evolve_driven(spec: &SpinSystemSpec, t_final: f64, steps_per_period: usize) -> Result<ComplexMatrix> {
    evolve_driven_interval(spec, 0.0, t_final, steps_per_period, Integrator::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{fredkin_spec, toffoli_spec, DriveTerm};
    use std::f64::consts::PI;

    #[test]
    fn static_rejects_ac_drive() {
        let spec = SpinSystemSpec::new(1).with_drive(DriveTerm::ac(0, 1.0, 5.0));
        assert!(matches!(evolve_static(&spec, 1.0), Err(Error::DrivenSpec)));
    }

    #[test]
    fn designed_toffoli_swaps_at_gate_time() {
        let rabi = 0.3;
        let w2 = rabi * 99f64.sqrt();
        let spec = toffoli_spec(w2 / 2.0, 0.0, w2, 0.0, rabi, true).unwrap();
        let u = evolve_static(&spec, PI / rabi).unwrap();
        assert!((u[(7, 5)].norm() - 1.0).abs() < 1e-10);
        assert!(evolve_static(&spec, 0.0).unwrap().max_abs_diff(&ComplexMatrix::identity(8)) < 1e-14);
    }

    #[test]
    fn designed_fredkin_swaps_at_gate_time() {
        let j = 1.0;
        let spec = fredkin_spec(j, 3f64.sqrt(), 0.0, 3f64.sqrt(), 0.0, true).unwrap();
        for n in 0..3 {
            let t = (2 * n + 1) as f64 * PI / (2.0 * j);
            let u = evolve_static(&spec, t).unwrap();
            assert!((u[(5, 6)].norm() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn driven_zero_amplitude_matches_static() {
        let spec = SpinSystemSpec::new(2)
            .with_ising(0, 1, 0.4)
            .with_z_fields(&[1.0, 2.0])
            .with_drive(DriveTerm::ac(1, 0.0, 30.0));
        let a = evolve_driven(&spec, 2.0, 32).unwrap();
        let mut bare = spec.clone();
        bare.drives.clear();
        let b = evolve_static(&bare, 2.0).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-10);
    }

    #[test]
    fn resonant_rabi_flip() {
        let (w, rabi) = (200.0, 1.0);
        let spec = SpinSystemSpec::new(1).with_z_fields(&[w]).with_drive(DriveTerm::ac(0, 2.0 * rabi, w));
        let u = evolve_driven(&spec, PI / rabi, 64).unwrap();
        let p = u[(1, 0)].norm_sqr();
        assert!(u.unitarity_deviation() < 1e-8);
        // Counter-rotating (Bloch-Siegert) corrections are O((Ω/2ω)²).
        assert!((1.0 - p) < 10.0 * (rabi / (2.0 * w)).powi(2), "p = {p}");
        assert!((1.0 - p) >= 0.0);
    }

    #[test]
    fn rotating_propagator_matches_lab() {
        let spec = SpinSystemSpec::new(2)
            .with_heisenberg(0, 1, 0.2)
            .with_z_fields(&[30.0, 12.0])
            .with_drive(DriveTerm::ac(1, 0.6, 11.5));
        let frame = FrameGenerator::new(vec![30.0, 11.5]);
        let t = 4.0;
        let lab = evolve_driven(&spec, t, 256).unwrap();
        let ui = evolve_rotating(&spec, &frame, t, 128, Integrator::Magnus4).unwrap();
        assert!((&frame.rotation(2, -t) * &ui).max_abs_diff(&lab) < 1e-8);
        let hi = RotatingFrameHamiltonian::new(&spec, &frame).unwrap();
        assert!((hi.max_frequency().unwrap() - (11.5 + 11.5)).abs() < 1e-12);
    }

    #[test]
    fn step_refinement_converges() {
        let spec = SpinSystemSpec::new(1).with_z_fields(&[50.0]).with_drive(DriveTerm::ac(0, 2.0, 50.0));
        let a = evolve_driven(&spec, 3.0, 64).unwrap();
        let b = evolve_driven(&spec, 3.0, 128).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-6, "{}", a.max_abs_diff(&b));
        let m = |s| evolve_driven_interval(&spec, 0.0, 3.0, s, Integrator::Midpoint).unwrap();
        let (ma, mb) = (m(64), m(128));
        eprintln!("midpoint refine {} magnus refine {}", ma.max_abs_diff(&mb), a.max_abs_diff(&b));
        assert!(ma.max_abs_diff(&mb) < 1e-2);
        assert!(evolve_driven(&spec, 3.0, 10).is_err());
    }
}
