use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{ProtocolConfig, RunRecord, SteeringConfig, Transcript};
use crate::bounds::{lhs_bound, Witness};
use crate::error::{Error, Result};
use crate::protocol::ChoiceMode;
use crate::qlin::{born_measure_joint, born_measure_single, eigenstate, MeasurementSetting, Outcome, StateVector};
use crate::rng::{self, Domain};

/// Where the trusted party's setting for each run comes from.
#[derive(Debug, Clone)]
pub(crate) enum SettingSource {
    List(Vec<usize>),
    PerRun { m: usize },
}

impl SettingSource {
    pub(crate) fn new(cfg: &SteeringConfig, seed: u64) -> Self {
        let m = cfg.m();
        match cfg.choice_mode {
            ChoiceMode::PreSettledList => {
                let mut rng = rng::stream(seed, Domain::SettingList, 0);
                SettingSource::List((0..cfg.n_runs).map(|_| rng.random_range(0..m)).collect())
            }
            ChoiceMode::PerRunQuantum => SettingSource::PerRun { m },
        }
    }

    pub(crate) fn list(&self) -> Option<&[usize]> {
        match self {
            SettingSource::List(l) => Some(l),
            SettingSource::PerRun { .. } => None,
        }
    }

    /// Setting of run `run`; per-run draws consume one value from `rng`.
    pub(crate) fn draw(&self, run: u64, rng: &mut ChaCha8Rng) -> usize {
        match self {
            SettingSource::List(l) => l[run as usize],
            SettingSource::PerRun { m } => rng.random_range(0..*m),
        }
    }
}

/// Runs `play` for every run index on its own random stream, in parallel,
/// returning records in run order.
pub(crate) fn run_records<T, F>(n_runs: u64, seed: u64, play: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64, &mut ChaCha8Rng) -> Result<T> + Sync,
{
    (0..n_runs)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng::stream(seed, Domain::Protocol, i);
            play(i, &mut rng)
        })
        .collect()
}

/// Honest steering test on |Φ+⟩: Alice measures her half along Bob's
/// announced setting and declares the result.
pub fn run_steering_honest(cfg: &SteeringConfig, seed: u64) -> Result<Transcript> {
    cfg.validate()?;
    let settings = cfg.settings();
    let source = SettingSource::new(cfg, seed);
    let pair = StateVector::phi_plus();
    let records = run_records(cfg.n_runs, seed, |i, rng| {
        let k = source.draw(i, rng);
        let s = &settings[k];
        let (alice, bob) = born_measure_joint(&pair, s, s, [rng.random(), rng.random()]);
        Ok(RunRecord {
            run_index: i,
            setting_a: None,
            setting_b: k,
            declared_a: alice,
            measured_b: bob,
            demon_active: false,
        })
    })?;
    Ok(Transcript {
        records,
        config: ProtocolConfig::Steering(cfg.clone()),
        seed,
    })
}

/// Best local-hidden-state cheat: one fixed pure state and a fixed
/// declaration per setting.
#[derive(Debug, Clone)]
pub struct LhsStrategy {
    pub declarations: Vec<Outcome>,
    pub state: StateVector,
    settings: Vec<MeasurementSetting>,
}

impl LhsStrategy {
    /// The strategy attaining the LHS bound for `settings`.
    pub fn optimal(settings: &[MeasurementSetting]) -> Result<Self> {
        let bound = lhs_bound(settings)?;
        match bound.witness {
            Witness::SignVector { signs, state_bloch } => {
                let direction = MeasurementSetting::new(state_bloch, 0)?;
                Ok(LhsStrategy {
                    declarations: signs,
                    state: eigenstate(&direction, Outcome::Plus),
                    settings: settings.to_vec(),
                })
            }
            Witness::ResponseTables { .. } => {
                Err(Error::invalid("LHS bound returned a non-steering witness"))
            }
        }
    }

    /// Expected `declared × measured` when setting `k` is announced.
    pub fn correlation(&self, k: usize) -> f64 {
        let s = &self.settings[k];
        self.declarations[k].as_f64() * crate::qlin::expectation_single(&self.state, s)
    }

    /// One run with setting `k`: Alice's declaration and Bob's outcome.
    pub fn play(&self, k: usize, rand: f64) -> (Outcome, Outcome) {
        let (measured, _) = born_measure_single(&self.state, &self.settings[k], rand);
        (self.declarations[k], measured)
    }
}

/// Steering test against the optimal LHS cheat (no demon).
pub fn run_steering_lhs_baseline(cfg: &SteeringConfig, seed: u64) -> Result<Transcript> {
    cfg.validate()?;
    let strategy = LhsStrategy::optimal(&cfg.settings())?;
    let source = SettingSource::new(cfg, seed);
    let records = run_records(cfg.n_runs, seed, |i, rng| {
        let k = source.draw(i, rng);
        let (declared, measured) = strategy.play(k, rng.random());
        Ok(RunRecord {
            run_index: i,
            setting_a: None,
            setting_b: k,
            declared_a: declared,
            measured_b: measured,
            demon_active: false,
        })
    })?;
    Ok(Transcript {
        records,
        config: ProtocolConfig::Steering(cfg.clone()),
        seed,
    })
}
