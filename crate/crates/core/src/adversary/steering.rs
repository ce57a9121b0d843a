use rand::Rng;

use super::{CheatTable, DemonMemory, DemonPolicy, InactiveBehavior, TableKey};
use crate::error::{Error, Result};
use crate::protocol::{run_records, ChoiceMode, ProtocolConfig, RunRecord, SettingSource, SteeringConfig, Transcript};
use crate::qlin::{born_measure_single, eigenstate, MeasurementSetting, Outcome, StateVector};
use crate::thermo::ThermalLedger;

/// Transcript of a demon-assisted test and the heat its erasures dissipated.
#[derive(Debug, Clone, PartialEq)]
pub struct DemonRun {
    pub transcript: Transcript,
    pub ledger: ThermalLedger,
    /// Joules charged in each run, in run order.
    pub run_heat: Vec<f64>,
}

impl DemonRun {
    /// Folds per-run ledgers in run order.
    pub(crate) fn assemble(
        records: Vec<(RunRecord, ThermalLedger)>,
        config: ProtocolConfig,
        seed: u64,
        temperature: f64,
    ) -> Result<Self> {
        let mut ledger = ThermalLedger::new(temperature)?;
        let mut run_heat = Vec::with_capacity(records.len());
        let mut out = Vec::with_capacity(records.len());
        for (record, run_ledger) in records {
            ledger.merge(&run_ledger)?;
            run_heat.push(run_ledger.joules());
            out.push(record);
        }
        Ok(DemonRun {
            transcript: Transcript {
                records: out,
                config,
                seed,
            },
            ledger,
            run_heat,
        })
    }
}

/// The qubit the demon hands to Bob for setting `k`, and what Alice is told
/// to declare.
pub fn demon_transform(
    k: usize,
    table: &CheatTable,
    settings: &[MeasurementSetting],
) -> Result<(StateVector, Outcome)> {
    let setting = settings
        .get(k)
        .ok_or_else(|| Error::invalid(format!("setting {k} out of range")))?;
    let entry = table.lookup(TableKey::Setting(k))?;
    let declared = entry
        .declaration
        .ok_or_else(|| Error::invalid(format!("table entry {k} has no declaration")))?;
    Ok((eigenstate(setting, entry.target_sign), declared))
}

/// Steering test in which a demon assists Alice on a random fraction of runs.
///
/// Alice's source emits `|0⟩` every run. On active runs the demon captures
/// the setting (copying the pre-settled list, or entangling with the quantum
/// setting source), rotates the qubit per `table`, relays the declaration,
/// and erases its memory.
pub fn run_steering_demon(
    cfg: &SteeringConfig,
    policy: &DemonPolicy,
    table: &CheatTable,
    temperature: f64,
    seed: u64,
) -> Result<DemonRun> {
    cfg.validate()?;
    policy.validate()?;
    let m = cfg.m();
    table.check_steering(m)?;
    let settings = cfg.settings();
    let source = SettingSource::new(cfg, seed);
    let emitted = StateVector::zero();
    let fresh_ledger = ThermalLedger::new(temperature)?;

    let records = run_records(cfg.n_runs, seed, |i, rng| {
        let mut ledger = fresh_ledger.clone();
        let active = rng.random::<f64>() < policy.activation_probability;
        let (k, declared, measured) = if active {
            let mut memory = DemonMemory::new(m)?;
            let k = match cfg.choice_mode {
                ChoiceMode::PerRunQuantum => memory.entangle_with_setting_source(rng.random())?,
                ChoiceMode::PreSettledList => {
                    let list = source.list().expect("pre-settled mode has a list");
                    memory.capture_pre_settled(list, i as usize)?
                }
            };
            let (qubit, declared) = demon_transform(k, table, &settings)?;
            let (measured, _) = born_measure_single(&qubit, &settings[k], rng.random());
            memory.erase(&mut ledger)?;
            debug_assert!(memory.is_standard());
            (k, declared, measured)
        } else {
            let k = source.draw(i, rng);
            let (measured, _) = born_measure_single(&emitted, &settings[k], rng.random());
            let declared = match policy.inactive_behavior {
                InactiveBehavior::UniformRandom => Outcome::from_sign(rng.random_bool(0.5)),
                InactiveBehavior::FixedPlus => Outcome::Plus,
            };
            (k, declared, measured)
        };
        Ok((
            RunRecord {
                run_index: i,
                setting_a: None,
                setting_b: k,
                declared_a: declared,
                measured_b: measured,
                demon_active: active,
            },
            ledger,
        ))
    })?;
    DemonRun::assemble(records, ProtocolConfig::Steering(cfg.clone()), seed, temperature)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::steering_parameter;
    use crate::thermo::kt_ln2;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

    fn table2() -> CheatTable {
        CheatTable::correlated(&[Outcome::Plus, Outcome::Plus])
    }

    #[test]
    fn transform_examples() {
        let settings = MeasurementSetting::xz_family(&[0.0, FRAC_PI_2]);
        let table = CheatTable::steering(&[(Outcome::Plus, Outcome::Plus), (Outcome::Minus, Outcome::Minus)]);
        let (q, d) = demon_transform(0, &table, &settings).unwrap();
        assert_eq!(q, StateVector::zero());
        assert_eq!(d, Outcome::Plus);
        for r in [0.0, 0.5, 0.9999] {
            assert_eq!(born_measure_single(&q, &settings[0], r).0, Outcome::Plus);
        }
        let (q, d) = demon_transform(1, &table, &settings).unwrap();
        assert!((q.amps()[0].re - FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((q.amps()[1].re + FRAC_1_SQRT_2).abs() < 1e-12);
        assert_eq!(d, Outcome::Minus);
        for r in [0.0, 0.5, 0.9999] {
            assert_eq!(born_measure_single(&q, &settings[1], r).0 * d, Outcome::Plus);
        }
        assert!(demon_transform(2, &table, &settings).is_err());
    }

    #[test]
    fn full_activation_is_perfect_and_costs_one_bit_per_run() {
        for mode in [ChoiceMode::PerRunQuantum, ChoiceMode::PreSettledList] {
            let cfg = SteeringConfig::new(vec![0.0, FRAC_PI_2], 10_000, mode).unwrap();
            let run = run_steering_demon(&cfg, &DemonPolicy::always(), &table2(), 300.0, 5).unwrap();
            assert!(run.transcript.records.iter().all(|r| r.product() == 1.0 && r.demon_active));
            assert_eq!(steering_parameter(&run.transcript, 2).unwrap().s_n, 1.0);
            let expected = 1e4 * kt_ln2(300.0).unwrap();
            assert!(((run.ledger.joules() - expected) / expected).abs() < 1e-12);
            assert!(((run.ledger.joules() - 2.8711e-17) / 2.8711e-17).abs() < 1e-4);
            assert_eq!(run.ledger.bits(), 1e4);
            assert_eq!(run.ledger.erasures(), 10_000);
        }
    }

    #[test]
    fn inactive_demon_gives_zero() {
        let cfg = SteeringConfig::two_setting(1_000_000);
        let policy = DemonPolicy::always().with_probability(0.0);
        let run = run_steering_demon(&cfg, &policy, &table2(), 300.0, 6).unwrap();
        let s = steering_parameter(&run.transcript, 2).unwrap().s_n;
        assert!(s.abs() < 0.004, "{s}");
        assert_eq!(run.ledger.joules(), 0.0);
        assert!(run.run_heat.iter().all(|&h| h == 0.0));
    }

    #[test]
    fn fixed_plus_baseline() {
        // Bob measures |0⟩: E_k = cos θ_k, so the mean over {0°, 90°} is 1/2.
        let cfg = SteeringConfig::two_setting(400_000);
        let policy = DemonPolicy::always()
            .with_probability(0.0)
            .with_inactive(InactiveBehavior::FixedPlus);
        let run = run_steering_demon(&cfg, &policy, &table2(), 300.0, 2).unwrap();
        let est = steering_parameter(&run.transcript, 2).unwrap();
        assert!((est.s_n - 0.5).abs() < 4.0 * est.std_err, "{}", est.s_n);
    }

    #[test]
    fn partial_activation_mixes_linearly() {
        let q = kt_ln2(300.0).unwrap();
        for p in [0.25, 0.5, 0.75] {
            let cfg = SteeringConfig::two_setting(1_000_000);
            let policy = DemonPolicy::always().with_probability(p);
            let run = run_steering_demon(&cfg, &policy, &table2(), 300.0, 40).unwrap();
            let est = steering_parameter(&run.transcript, 2).unwrap();
            assert!((est.s_n - p).abs() < 4.0 * est.std_err, "p={p}: {}", est.s_n);
            let active = run.transcript.active_runs();
            assert_eq!(run.ledger.bits(), active as f64);
            let n = 1e6;
            let binomial = (n * p * (1.0 - p)).sqrt() * q;
            assert!((run.ledger.joules() - p * n * q).abs() < 5.0 * binomial);
        }
    }

    #[test]
    fn ledger_matches_run_heat() {
        let cfg = SteeringConfig::new(vec![0.0, 1.0, 2.0], 20_000, ChoiceMode::PerRunQuantum).unwrap();
        let policy = DemonPolicy::always().with_probability(0.3);
        let table = CheatTable::correlated(&[Outcome::Plus, Outcome::Minus, Outcome::Plus]);
        let run = run_steering_demon(&cfg, &policy, &table, 77.0, 1).unwrap();
        let per_active = 3f64.log2();
        assert!((run.ledger.bits() - run.transcript.active_runs() as f64 * per_active).abs() < 1e-9);
        for (r, h) in run.transcript.records.iter().zip(&run.run_heat) {
            assert_eq!(r.demon_active, *h > 0.0);
            if r.demon_active {
                assert_eq!(r.product(), 1.0);
            }
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let cfg = SteeringConfig::two_setting(10);
        let bad_p = DemonPolicy::always().with_probability(1.5);
        assert!(run_steering_demon(&cfg, &bad_p, &table2(), 300.0, 0).is_err());
        let short = CheatTable::correlated(&[Outcome::Plus]);
        assert!(run_steering_demon(&cfg, &DemonPolicy::always(), &short, 300.0, 0).is_err());
        assert!(run_steering_demon(&cfg, &DemonPolicy::always(), &table2(), 0.0, 0).is_err());
    }
}
