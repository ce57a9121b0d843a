use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{execute, io, ExperimentSpec, Scenario};
use crate::adversary::{tables_chsh, InactiveBehavior};
use crate::bounds::{lhs_bound, lhv_chsh_bound, quantum_value_chsh};
use crate::error::{Error, Result};
use crate::qlin::{expectation_single, tensor, StateVector};
use crate::rng::child_seed;
use crate::thermo::kt_ln2;

/// One activation probability of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub p: f64,
    pub value: f64,
    pub std_err: f64,
    #[serde(rename = "heat_per_run_J")]
    pub heat_per_run_j: f64,
    #[serde(rename = "heat_per_run_kTln2")]
    pub heat_per_run_kt_ln2: f64,
    pub detected_fraction: f64,
}

/// Activation probability at which the cheat starts to beat the classical
/// bound, and the per-run heat that costs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Threshold {
    /// `(bound − baseline) / (assisted − baseline)` from exact values.
    pub analytic_p: f64,
    /// Crossing of the least-squares line through the sweep rows.
    pub inferred_p: Option<f64>,
    /// Heat per run at the inferred (else analytic) threshold, in `k_B T ln 2`.
    pub heat_kt_ln2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub scenario: Scenario,
    pub n_runs: u64,
    pub repetitions: u32,
    pub temperature: f64,
    pub classical_bound: f64,
    /// Exact value with the demon active on every run.
    pub assisted_value: f64,
    /// Exact value with the demon never active.
    pub baseline_value: f64,
    /// Landauer bits erased per active run, over all demons.
    pub bits_per_active_run: f64,
    pub threshold: Option<Threshold>,
    pub rows: Vec<SweepRow>,
}

/// Exact (assisted, baseline, bits per active run) for a demon scenario.
fn exact_endpoints(spec: &ExperimentSpec) -> Result<(f64, f64, f64)> {
    let tables = spec.tables()?;
    match spec.scenario {
        Scenario::SteeringDemon => {
            let cfg = spec.steering_config();
            let settings = cfg.settings();
            let table = tables.steering.expect("steering table resolved");
            let m = settings.len() as f64;
            let mut assisted = 0.0;
            for (k, s) in settings.iter().enumerate() {
                let (qubit, declared) = crate::adversary::demon_transform(k, &table, &settings)?;
                assisted += declared.as_f64() * expectation_single(&qubit, s);
            }
            let baseline = match spec.demon.inactive_behavior {
                InactiveBehavior::UniformRandom => 0.0,
                InactiveBehavior::FixedPlus => {
                    settings.iter().map(|s| expectation_single(&StateVector::zero(), s)).sum::<f64>() / m
                }
            };
            Ok((assisted / m, baseline, m.log2()))
        }
        Scenario::BellDemonNonsignaling | Scenario::BellDemonSignaling => {
            let cfg = spec.bell_config();
            let a = tables.alice.expect("alice table resolved");
            let b = tables.bob.expect("bob table resolved");
            let assisted = tables_chsh(spec.scenario.bell_mode(), &a, &b, &cfg.alice_settings(), &cfg.bob_settings())?;
            let baseline = match spec.demon.inactive_behavior {
                InactiveBehavior::UniformRandom => 0.0,
                InactiveBehavior::FixedPlus => {
                    quantum_value_chsh(&tensor(&StateVector::zero(), &StateVector::zero())?, &cfg)?
                }
            };
            Ok((assisted, baseline, 2.0))
        }
        other => Err(Error::invalid(format!("{other:?} is not a demon scenario"))),
    }
}

/// Least-squares line `value = intercept + slope · p`.
fn fit_line(rows: &[SweepRow]) -> Option<(f64, f64)> {
    if rows.len() < 2 {
        return None;
    }
    let n = rows.len() as f64;
    let mean_p = rows.iter().map(|r| r.p).sum::<f64>() / n;
    let mean_v = rows.iter().map(|r| r.value).sum::<f64>() / n;
    let sxx: f64 = rows.iter().map(|r| (r.p - mean_p).powi(2)).sum();
    let sxy: f64 = rows.iter().map(|r| (r.p - mean_p) * (r.value - mean_v)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    Some((mean_v - slope * mean_p, slope))
}

/// Runs a demon scenario at each activation probability, `repetitions`
/// times each, and summarizes violation, heat and detection.
///
/// Repetition `r` of point `i` uses seed `child_seed(spec.seed, i · 2^32 + r)`.
pub fn sweep_activation(spec: &ExperimentSpec, p_values: &[f64], repetitions: u32) -> Result<SweepResult> {
    if p_values.is_empty() {
        return Err(Error::invalid("sweep needs at least one activation probability"));
    }
    if repetitions == 0 {
        return Err(Error::invalid("sweep needs at least one repetition"));
    }
    if p_values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("activation probabilities must be strictly increasing"));
    }
    if !spec.scenario.is_demon() {
        return Err(Error::invalid(format!("{:?} is not a demon scenario", spec.scenario)));
    }
    spec.validate()?;
    let (assisted, baseline, bits) = exact_endpoints(spec)?;
    let classical_bound = if spec.scenario.is_steering() {
        lhs_bound(&spec.steering_config().settings())?.value
    } else {
        lhv_chsh_bound().value
    };
    let unit = kt_ln2(spec.temperature)?;

    let mut rows = Vec::with_capacity(p_values.len());
    for (i, &p) in p_values.iter().enumerate() {
        let mut values = 0.0;
        let mut var = 0.0;
        let mut joules = 0.0;
        let mut detected = 0u32;
        for r in 0..repetitions {
            let seed = child_seed(spec.seed, ((i as u64) << 32) + u64::from(r));
            let out = execute(&spec.clone().with_activation(p).with_seed(seed))?;
            values += out.summary.estimate.value();
            var += out.summary.estimate.std_err().powi(2);
            joules += out.summary.ledger.joules();
            detected += u32::from(out.summary.detector.is_some_and(|v| v.reject));
        }
        let reps = f64::from(repetitions);
        let heat_per_run = joules / (reps * spec.n_runs as f64);
        rows.push(SweepRow {
            p,
            value: values / reps,
            std_err: var.sqrt() / reps,
            heat_per_run_j: heat_per_run,
            heat_per_run_kt_ln2: heat_per_run / unit,
            detected_fraction: f64::from(detected) / reps,
        });
    }

    let threshold = (assisted > classical_bound + 1e-12).then(|| {
        let analytic_p = ((classical_bound - baseline) / (assisted - baseline)).max(0.0);
        let inferred_p = fit_line(&rows)
            .filter(|&(_, slope)| slope > 0.0)
            .map(|(intercept, slope)| (classical_bound - intercept) / slope)
            .filter(|p| (0.0..=1.0).contains(p));
        Threshold {
            analytic_p,
            inferred_p,
            heat_kt_ln2: inferred_p.unwrap_or(analytic_p) * bits,
        }
    });

    Ok(SweepResult {
        scenario: spec.scenario,
        n_runs: spec.n_runs,
        repetitions,
        temperature: spec.temperature,
        classical_bound,
        assisted_value: assisted,
        baseline_value: baseline,
        bits_per_active_run: bits,
        threshold,
        rows,
    })
}

/// Per-run heat needed to fake steering versus faking a CHSH violation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HierarchyRow {
    pub steering_heat_kt_ln2: f64,
    pub bell_heat_kt_ln2: f64,
    pub steering_cheaper: bool,
}

pub fn hierarchy_comparison(steering: &SweepResult, bell: &SweepResult) -> Result<HierarchyRow> {
    let heat = |s: &SweepResult| {
        s.threshold
            .map(|t| t.heat_kt_ln2)
            .ok_or_else(|| Error::invalid(format!("{:?} sweep never exceeds its bound", s.scenario)))
    };
    let steering_heat_kt_ln2 = heat(steering)?;
    let bell_heat_kt_ln2 = heat(bell)?;
    Ok(HierarchyRow {
        steering_heat_kt_ln2,
        bell_heat_kt_ln2,
        steering_cheaper: steering_heat_kt_ln2 < bell_heat_kt_ln2,
    })
}

/// Writes one CSV row per activation probability.
pub fn emit_plot_data(result: &SweepResult, path: &Path) -> Result<()> {
    if result.rows.is_empty() {
        return Err(Error::invalid("sweep result has no rows"));
    }
    io::write_bytes(path, &io::to_csv_bytes(&result.rows)?)
}

pub fn read_plot_data(path: &Path) -> Result<Vec<SweepRow>> {
    io::read_csv(path)
}
