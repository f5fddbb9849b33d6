use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;
use serde::{Deserialize, Serialize};

use spinlogic::analysis::{
    fredkin_analysis, ideal_permutation_matrix, magnitude_matrix, process_trace_distance, toffoli_error_law,
    toffoli_fidelities, toffoli_permutation, FredkinParams, PauliNormalization, ToffoliParams,
};
use spinlogic::circuits::{half_adder_schedule, half_adder_table, run_schedule, verify_truth_table, ClassicalState, HalfAdderParams, RunMode};
use spinlogic::dynamics::{rwa_reduce, FrameGenerator, RWAReport};
use spinlogic::fault_tolerance::{
    exact_second_order_coefficient, mc_logical_error, quadratic_threshold, second_order_count, threshold_estimate,
    FaultModel, IncomingErrors, MCResult, SecondOrderCount, ThresholdReport,
};
use spinlogic::hamiltonian::SpinSystemSpec;
use spinlogic::realizations::{
    error_budget, evaluate_pair, fredkin_integer_search, lab_validation, preset, ErrorBudget, FredkinPair,
    LabValidation, PRESET_NAMES,
};

use crate::config::{load, parse_range};

macro_rules! merge {
    ($flags:expr, $file:expr; $($field:ident),*) => {
        $( if $flags.$field.is_none() { $flags.$field = $file.$field.take(); } )*
    };
}

fn resolve_output(flag: Option<PathBuf>, file: Option<String>) -> Option<PathBuf> {
    flag.or(file.map(PathBuf::from))
}

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

#[derive(Args, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToffoliScanArgs {
    /// Inclusive design index range, e.g. `3..20`.
    #[arg(long)]
    pub m1: Option<String>,
    /// Gate index; the design nulls the |i0j⟩ leakage at τ_n and the
    /// leading bound becomes (2n+1)³ · 3π/(16m₁²).
    #[arg(long)]
    pub n: Option<u32>,
    /// Use the orthonormal Pauli basis for the χ-matrices.
    #[arg(long)]
    #[serde(default)]
    pub orthonormal: bool,
}

#[derive(Debug, Serialize)]
struct ToffoliRow {
    m1: u32,
    omega2_over_rabi: f64,
    d_pro: f64,
    leading_bound: f64,
    relative_gap: f64,
    average_failure: f64,
}

pub fn toffoli_scan(mut a: ToffoliScanArgs, cfg: Option<&Path>, output: Option<PathBuf>) -> Result<()> {
    let mut file = load::<ToffoliScanArgs>(cfg, "toffoli-scan")?;
    merge!(a, file.args; m1, n);
    a.orthonormal |= file.args.orthonormal;
    let output = resolve_output(output, file.output);
    let (lo, hi) = parse_range(a.m1.as_deref().context("--m1 is required")?)?;
    let n = a.n.unwrap_or(0);
    let normalization = if a.orthonormal { PauliNormalization::Orthonormal } else { PauliNormalization::Unnormalized };
    let target = ideal_permutation_matrix(&toffoli_permutation(3, [0, 2], 1));
    let q3 = f64::from(2 * n + 1).powi(3);
    let rows = (lo..=hi)
        .map(|m1| {
            let p = ToffoliParams::designed_for_gate_index(m1, n, 1.0)?;
            let u = magnitude_matrix(&toffoli_fidelities(&p)?.f);
            let r = process_trace_distance(&u, &target, Some(m1), normalization)?;
            let mut leading_bound = toffoli_error_law(m1) * q3;
            if a.orthonormal {
                leading_bound /= 8.0;
            }
            Ok(ToffoliRow {
                m1,
                omega2_over_rabi: p.omega2 / p.rabi,
                d_pro: r.d_pro,
                leading_bound,
                relative_gap: (r.d_pro - leading_bound).abs() / leading_bound,
                average_failure: r.average_failure,
            })
        })
        .collect::<spinlogic::Result<Vec<_>>>()?;
    emit(output.as_deref(), &to_csv(&rows)?)
}

#[derive(Args, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FredkinScanArgs {
    /// Inclusive gate index range.
    #[arg(long)]
    pub n: Option<String>,
    /// Inclusive null index range; pairs with m ≤ 2n+1 are skipped.
    #[arg(long)]
    pub m: Option<String>,
    /// Search for the integer pair whose J₂₃/J₁₂ is closest to this value
    /// instead of scanning, reporting JSON.
    #[arg(long)]
    pub target: Option<f64>,
    /// Largest n considered by the search.
    #[arg(long)]
    pub max_n: Option<u32>,
}

#[derive(Debug, Serialize)]
struct FredkinRow {
    n: u32,
    m: u32,
    j_zz_over_j: f64,
    gate_time_j: f64,
    leakage: f64,
    sinc_residual: f64,
}

#[derive(Debug, Serialize)]
struct FredkinSearchReport {
    target: f64,
    max_n: u32,
    best: FredkinPair,
    best_relative_error: f64,
    quoted_pair: FredkinPair,
    quoted_claim: f64,
    quoted_consistent: bool,
}

pub fn fredkin_scan(mut a: FredkinScanArgs, cfg: Option<&Path>, output: Option<PathBuf>) -> Result<()> {
    let mut file = load::<FredkinScanArgs>(cfg, "fredkin-scan")?;
    merge!(a, file.args; n, m, target, max_n);
    let output = resolve_output(output, file.output);
    if let Some(target) = a.target {
        let max_n = a.max_n.unwrap_or(749);
        let best = fredkin_integer_search(target, max_n)?;
        let quoted_pair = evaluate_pair(675, 2340, target)?;
        let quoted_claim = 1.0 + 1e-6;
        let report = FredkinSearchReport {
            target,
            max_n,
            best_relative_error: (best.ratio / target - 1.0).abs(),
            best,
            quoted_consistent: (quoted_pair.ratio - quoted_claim).abs() <= 1e-5,
            quoted_pair,
            quoted_claim,
        };
        return emit(output.as_deref(), &to_json(&report)?);
    }
    let (n_lo, n_hi) = parse_range(a.n.as_deref().unwrap_or("1..1"))?;
    let (m_lo, m_hi) = parse_range(a.m.as_deref().context("--m is required when not searching")?)?;
    let mut rows = Vec::new();
    for n in n_lo..=n_hi {
        for m in m_lo.max(2 * n + 2)..=m_hi {
            let p = FredkinParams::designed(1.0, n, m)?;
            let r = fredkin_analysis(&p)?;
            rows.push(FredkinRow {
                n,
                m,
                j_zz_over_j: p.j_zz(),
                gate_time_j: r.gate_time,
                leakage: r.leakage,
                sinc_residual: r.sinc_residual,
            });
        }
    }
    if rows.is_empty() {
        bail!("no (n, m) pair in range has m > 2n+1");
    }
    emit(output.as_deref(), &to_csv(&rows)?)
}

#[derive(Args, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresetRunArgs {
    /// Preset name (see `preset list`).
    pub name: Option<String>,
    /// Reduced carrier ratios for the lab-frame validation of driven presets.
    #[arg(long, value_delimiter = ',')]
    pub ratios: Option<Vec<f64>>,
    /// Integration steps per period of the fastest oscillation.
    #[arg(long)]
    pub steps: Option<usize>,
    /// Report only the budget.
    #[arg(long)]
    #[serde(default)]
    pub skip_lab: bool,
}

#[derive(Debug, Serialize)]
struct PresetReport {
    budget: ErrorBudget,
    lab: Option<LabValidation>,
}

pub fn preset_run(mut a: PresetRunArgs, cfg: Option<&Path>, output: Option<PathBuf>) -> Result<()> {
    let mut file = load::<PresetRunArgs>(cfg, "preset-run")?;
    merge!(a, file.args; name, ratios, steps);
    a.skip_lab |= file.args.skip_lab;
    let output = resolve_output(output, file.output);
    let p = preset(a.name.as_deref().context("a preset name is required")?)?;
    let budget = error_budget(&p)?;
    let lab = if a.skip_lab {
        None
    } else {
        let ratios = a.ratios.unwrap_or_else(|| vec![250.0, 1000.0, 4000.0]);
        Some(lab_validation(&p, &ratios, a.steps.unwrap_or(24))?)
    };
    emit(output.as_deref(), &to_json(&PresetReport { budget, lab })?)
}

pub fn preset_list(output: Option<PathBuf>) -> Result<()> {
    emit(output.as_deref(), &(PRESET_NAMES.join("\n") + "\n"))
}

#[derive(Args, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HalfAdderArgs {
    /// Design index of the Toffoli stage.
    #[arg(long)]
    pub m1: Option<u32>,
    /// Design index of the two conditional flips.
    #[arg(long)]
    pub k: Option<u32>,
    /// J₁₂ = J₂₃ in kHz.
    #[arg(long)]
    pub j_khz: Option<f64>,
    /// J₁₃ in kHz.
    #[arg(long)]
    pub j13_khz: Option<f64>,
    /// Success threshold per input.
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Integrate the lab Hamiltonian of the flip stages at this carrier ratio.
    #[arg(long)]
    pub carrier_ratio: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    /// Keep coherences between stages.
    #[arg(long)]
    #[serde(default)]
    pub coherent: bool,
    /// `csv` for the output distributions, `json` for the full report.
    #[arg(long)]
    pub format: Option<String>,
}

#[derive(Debug, Serialize)]
struct HalfAdderReport {
    params: HalfAdderParams,
    dephase_between: bool,
    carriers: [f64; 2],
    systematic_budget: f64,
    /// Largest population change from switching inter-stage dephasing.
    dephasing_effect: f64,
    truth_table: spinlogic::circuits::TruthTableReport,
}

pub fn halfadder(mut a: HalfAdderArgs, cfg: Option<&Path>, output: Option<PathBuf>) -> Result<()> {
    let mut file = load::<HalfAdderArgs>(cfg, "halfadder")?;
    merge!(a, file.args; m1, k, j_khz, j13_khz, threshold, carrier_ratio, steps, format);
    a.coherent |= file.args.coherent;
    let output = resolve_output(output, file.output);
    let tau = std::f64::consts::TAU;
    let mut params = HalfAdderParams::default();
    params.m1 = a.m1.unwrap_or(params.m1);
    params.k = a.k.unwrap_or(params.k);
    if let Some(j) = a.j_khz {
        params.j12 = tau * j * 1e3;
        params.j23 = params.j12;
    }
    if let Some(j) = a.j13_khz {
        params.j13 = tau * j * 1e3;
    }
    let mode = match a.carrier_ratio {
        Some(carrier_ratio) => RunMode::Lab { carrier_ratio, steps_per_period: a.steps.unwrap_or(24) },
        None => RunMode::Rotating,
    };
    let adder = half_adder_schedule(&params)?;
    let schedule = adder.schedule.clone().with_dephasing(!a.coherent);
    let report = verify_truth_table(&schedule, &half_adder_table(), a.threshold.unwrap_or(0.97), mode)?;
    let text = match a.format.as_deref().unwrap_or("csv") {
        "csv" => to_csv(&report.distribution_rows(0.0))?,
        "json" => {
            let other = schedule.clone().with_dephasing(a.coherent);
            let mut dephasing_effect: f64 = 0.0;
            for (x, d) in report.distributions.iter().enumerate() {
                let o = run_schedule(&other, &ClassicalState::basis(3, x), mode)?;
                dephasing_effect = dephasing_effect.max(d.max_abs_diff(&o));
            }
            to_json(&HalfAdderReport {
                params,
                dephase_between: schedule.dephase_between,
                carriers: adder.carriers,
                systematic_budget: adder.systematic_budget,
                dephasing_effect,
                truth_table: report.clone(),
            })?
        }
        f => bail!("unknown format `{f}`; use csv or json"),
    };
    emit(output.as_deref(), &text)?;
    if !report.pass {
        eprintln!("warning: min success {:.6} below threshold {}", report.min_success, report.threshold);
    }
    Ok(())
}

#[derive(Args, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FtArgs {
    /// Physical error rates, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub p: Option<Vec<f64>>,
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// `explicit` (a simulated preceding correction round) or `injected`.
    #[arg(long)]
    pub mode: Option<String>,
    /// Trials per bisection step of the threshold search.
    #[arg(long)]
    pub threshold_trials: Option<u64>,
    /// Skip the threshold bisection.
    #[arg(long)]
    #[serde(default)]
    pub no_threshold: bool,
    /// Where to write the JSON summary; standard error when omitted.
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct FtRow {
    p: f64,
    trials: u64,
    estimate: f64,
    ci_low: f64,
    ci_high: f64,
    seed: u64,
}

#[derive(Debug, Serialize)]
struct FtSummary {
    mode: IncomingErrors,
    /// `estimate/p²` per grid point.
    coefficients: Vec<(f64, f64)>,
    exact_coefficient: f64,
    exact_threshold: f64,
    counting: SecondOrderCount,
    published_threshold: f64,
    derived_threshold: f64,
    threshold: Option<ThresholdReport>,
}

fn parse_mode(s: &str) -> Result<IncomingErrors> {
    match s {
        "explicit" => Ok(IncomingErrors::Explicit),
        "injected" => Ok(IncomingErrors::Injected),
        _ => bail!("unknown mode `{s}`; use explicit or injected"),
    }
}

pub fn ft(mut a: FtArgs, cfg: Option<&Path>, output: Option<PathBuf>) -> Result<()> {
    let mut file = load::<FtArgs>(cfg, "ft")?;
    merge!(a, file.args; p, trials, seed, mode, threshold_trials, summary);
    a.no_threshold |= file.args.no_threshold;
    let output = resolve_output(output, file.output);
    let grid = a.p.unwrap_or_else(|| vec![1e-3, 3e-3, 1e-2]);
    if grid.is_empty() {
        bail!("the p grid is empty");
    }
    for &p in &grid {
        FaultModel::new(p)?;
    }
    let trials = a.trials.unwrap_or(100_000);
    let seed = a.seed.unwrap_or(7);
    let mode = parse_mode(a.mode.as_deref().unwrap_or("explicit"))?;
    let results: Vec<MCResult> = grid.iter().map(|&p| mc_logical_error(p, trials, seed, mode)).collect::<spinlogic::Result<_>>()?;
    let rows: Vec<FtRow> = results
        .iter()
        .map(|r| FtRow { p: r.p, trials: r.trials, estimate: r.estimate, ci_low: r.ci_low, ci_high: r.ci_high, seed: r.seed })
        .collect();
    emit(output.as_deref(), &to_csv(&rows)?)?;

    let counting = second_order_count(&FaultModel::new(grid[0])?);
    let exact_coefficient = exact_second_order_coefficient(mode);
    let threshold = if a.no_threshold {
        None
    } else {
        Some(threshold_estimate(a.threshold_trials.unwrap_or(trials), seed, mode)?)
    };
    let summary = FtSummary {
        mode,
        coefficients: results.iter().map(|r| (r.p, r.estimate / (r.p * r.p))).collect(),
        exact_coefficient,
        exact_threshold: quadratic_threshold(exact_coefficient),
        published_threshold: quadratic_threshold(counting.published_total),
        derived_threshold: quadratic_threshold(counting.derived_total),
        counting,
        threshold,
    };
    let text = to_json(&summary)?;
    match a.summary {
        Some(path) => std::fs::write(&path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            eprint!("{text}");
            Ok(())
        }
    }
}

#[derive(Args, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RwaCheckArgs {
    /// Check a named preset.
    #[arg(long, conflicts_with_all = ["spec", "frame"])]
    pub preset: Option<String>,
    /// JSON spin system.
    #[arg(long, requires = "frame")]
    pub spec: Option<PathBuf>,
    /// JSON frame generator.
    #[arg(long, requires = "spec")]
    pub frame: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct RwaCheckReport {
    max_bound: f64,
    total_bound: f64,
    complete: bool,
    report: RWAReport,
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn rwa_check(mut a: RwaCheckArgs, cfg: Option<&Path>, output: Option<PathBuf>) -> Result<()> {
    let mut file = load::<RwaCheckArgs>(cfg, "rwa-check")?;
    if a.preset.is_none() && a.spec.is_none() {
        merge!(a, file.args; preset, spec, frame);
    }
    let output = resolve_output(output, file.output);
    let (spec, frame): (SpinSystemSpec, FrameGenerator) = match (&a.preset, &a.spec, &a.frame) {
        (Some(name), _, _) => {
            let p = preset(name)?;
            (p.spec, p.frame)
        }
        (None, Some(s), Some(f)) => (read_json(s)?, read_json(f)?),
        _ => bail!("give --preset, or both --spec and --frame"),
    };
    let report = rwa_reduce(&spec, &frame)?;
    let out = RwaCheckReport {
        max_bound: report.max_bound(),
        total_bound: report.total_bound(),
        complete: report.is_complete(),
        report,
    };
    emit(output.as_deref(), &to_json(&out)?)
}
