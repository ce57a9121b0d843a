use rand::Rng;

use super::{run_records, BellConfig, ProtocolConfig, RunRecord, Transcript};
use crate::error::Result;
use crate::qlin::{born_measure_joint, StateVector};

/// Honest CHSH test on |Φ+⟩ with independent uniform setting choices.
pub fn run_bell_honest(cfg: &BellConfig, seed: u64) -> Result<Transcript> {
    cfg.validate()?;
    let alice = cfg.alice_settings();
    let bob = cfg.bob_settings();
    let pair = StateVector::phi_plus();
    let records = run_records(cfg.n_runs, seed, |i, rng| {
        let x = rng.random_range(0..2);
        let y = rng.random_range(0..2);
        let (a, b) = born_measure_joint(&pair, &alice[x], &bob[y], [rng.random(), rng.random()]);
        Ok(RunRecord {
            run_index: i,
            setting_a: Some(x),
            setting_b: y,
            declared_a: a,
            measured_b: b,
            demon_active: false,
        })
    })?;
    Ok(Transcript {
        records,
        config: ProtocolConfig::Bell(cfg.clone()),
        seed,
    })
}
