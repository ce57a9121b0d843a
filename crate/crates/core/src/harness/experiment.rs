use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{io, ExperimentSpec, Scenario, TableSet};
use crate::adversary::{run_bell_demon, run_steering_demon, DemonRun};
use crate::bounds::{lhs_bound, lhv_chsh_bound};
use crate::error::{Error, Result};
use crate::protocol::{
    chsh_value, run_bell_honest, run_steering_honest, run_steering_lhs_baseline, steering_parameter, ChshEstimate,
    SteeringEstimate, Transcript,
};
use crate::thermo::{detect_anomaly, simulate_heat_record, EnvironmentModel, ThermalLedger, Verdict};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Estimate {
    Steering(SteeringEstimate),
    Chsh(ChshEstimate),
}

impl Estimate {
    pub fn value(&self) -> f64 {
        match self {
            Estimate::Steering(e) => e.s_n,
            Estimate::Chsh(e) => e.value,
        }
    }

    pub fn std_err(&self) -> f64 {
        match self {
            Estimate::Steering(e) => e.std_err,
            Estimate::Chsh(e) => e.std_err,
        }
    }
}

/// One line of the heat CSV.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeatRow {
    pub run_index: u64,
    /// Heat observed in the trusted lab.
    pub joules: f64,
    /// Landauer heat of the demon's erasures in this run.
    #[serde(default)]
    pub demon_joules: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentSummary {
    pub scenario: Scenario,
    pub seed: u64,
    pub n_runs: u64,
    pub temperature: f64,
    pub estimate: Estimate,
    pub classical_bound: f64,
    pub exceeds_bound: bool,
    pub active_runs: usize,
    pub ledger: ThermalLedger,
    pub ledger_kt_ln2: f64,
    pub environment: EnvironmentModel,
    /// `None` when the record is too short to test.
    pub detector: Option<Verdict>,
}

/// Everything a run of [`execute`] produces, before it touches disk.
#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    pub summary: ExperimentSummary,
    pub transcript: Transcript,
    pub heat: Vec<HeatRow>,
    pub tables: Option<TableSet>,
}

impl ExperimentOutcome {
    pub fn transcript_csv(&self) -> Result<Vec<u8>> {
        let mut buf = Vec::new();
        self.transcript.write_csv(&mut buf)?;
        Ok(buf)
    }

    pub fn heat_csv(&self) -> Result<Vec<u8>> {
        io::to_csv_bytes(&self.heat)
    }

    pub fn summary_json(&self) -> Result<Vec<u8>> {
        io::to_json_bytes(&self.summary)
    }

    /// Writes `transcript.csv`, `heat.csv`, `summary.json` and, for demon
    /// scenarios, `tables.json` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        io::ensure_dir(dir)?;
        io::write_bytes(&dir.join("transcript.csv"), &self.transcript_csv()?)?;
        io::write_bytes(&dir.join("heat.csv"), &self.heat_csv()?)?;
        io::write_bytes(&dir.join("summary.json"), &self.summary_json()?)?;
        if let Some(tables) = &self.tables {
            io::write_json(&dir.join("tables.json"), tables)?;
        }
        Ok(())
    }
}

fn honest(transcript: Transcript, temperature: f64) -> Result<DemonRun> {
    let n = transcript.len();
    Ok(DemonRun {
        transcript,
        ledger: ThermalLedger::new(temperature)?,
        run_heat: vec![0.0; n],
    })
}

/// Runs the scenario end to end without touching the filesystem.
pub fn execute(spec: &ExperimentSpec) -> Result<ExperimentOutcome> {
    spec.validate()?;
    let tables = spec.tables()?;
    let env = spec.environment_model()?;
    let t = spec.temperature;
    let policy = spec.policy();

    let run = match spec.scenario {
        Scenario::SteeringHonest => honest(run_steering_honest(&spec.steering_config(), spec.seed)?, t)?,
        Scenario::SteeringLhs => honest(run_steering_lhs_baseline(&spec.steering_config(), spec.seed)?, t)?,
        Scenario::SteeringDemon => {
            let table = tables.steering.as_ref().expect("steering table resolved");
            run_steering_demon(&spec.steering_config(), &policy, table, t, spec.seed)?
        }
        Scenario::BellHonest => honest(run_bell_honest(&spec.bell_config(), spec.seed)?, t)?,
        Scenario::BellDemonNonsignaling | Scenario::BellDemonSignaling => {
            let a = tables.alice.as_ref().expect("alice table resolved");
            let b = tables.bob.as_ref().expect("bob table resolved");
            run_bell_demon(&spec.bell_config(), &policy, a, b, t, spec.seed)?
        }
    };

    let (estimate, classical_bound) = if spec.scenario.is_steering() {
        let cfg = spec.steering_config();
        (
            Estimate::Steering(steering_parameter(&run.transcript, cfg.m())?),
            lhs_bound(&cfg.settings())?.value,
        )
    } else {
        (Estimate::Chsh(chsh_value(&run.transcript)?), lhv_chsh_bound().value)
    };

    let n = run.transcript.len();
    let observed = simulate_heat_record(n, &run.run_heat, &env, spec.seed)?;
    let detector = match detect_anomaly(&observed, &env, &spec.detector) {
        Ok(v) => Some(v),
        Err(Error::InsufficientData(_)) => None,
        Err(e) => return Err(e),
    };
    let heat = observed
        .iter()
        .zip(&run.run_heat)
        .enumerate()
        .map(|(i, (&joules, &demon_joules))| HeatRow {
            run_index: i as u64,
            joules,
            demon_joules,
        })
        .collect();

    let summary = ExperimentSummary {
        scenario: spec.scenario,
        seed: spec.seed,
        n_runs: spec.n_runs,
        temperature: t,
        exceeds_bound: estimate.value() > classical_bound,
        estimate,
        classical_bound,
        active_runs: run.transcript.active_runs(),
        ledger_kt_ln2: run.ledger.kt_ln2_units(),
        ledger: run.ledger,
        environment: env,
        detector,
    };
    Ok(ExperimentOutcome {
        summary,
        transcript: run.transcript,
        heat,
        tables: spec.scenario.is_demon().then_some(tables),
    })
}

/// Executes `spec` and writes its outputs into `out_dir`.
pub fn run_experiment(spec: &ExperimentSpec, out_dir: &Path) -> Result<ExperimentSummary> {
    let outcome = execute(spec)?;
    outcome.write(out_dir)?;
    Ok(outcome.summary)
}
