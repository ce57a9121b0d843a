use rand::Rng;

use super::steering::DemonRun;
use super::{BellMode, CheatTable, DemonMemory, DemonPolicy, InactiveBehavior, TableKey};
use crate::bounds::deterministic_response_pairs;
use crate::error::Result;
use crate::protocol::{run_records, BellConfig, ProtocolConfig, RunRecord};
use crate::qlin::{born_measure_single, eigenstate, expectation_joint, tensor, MeasurementSetting, Outcome, StateVector};
use crate::thermo::ThermalLedger;

fn table_key(mode: BellMode, local: usize, x: usize, y: usize) -> TableKey {
    match mode {
        BellMode::NonSignaling => TableKey::Setting(local),
        BellMode::Signaling => TableKey::Pair(x, y),
    }
}

/// Bell test in which two demons, one per wing, rotate Charlie's qubits
/// according to pre-agreed tables.
///
/// In non-signaling mode each table is keyed on its own wing's setting; in
/// signaling mode both tables are keyed on the pair `(x, y)`. Each demon
/// holds one bit and erases it every active run.
pub fn run_bell_demon(
    cfg: &BellConfig,
    policy: &DemonPolicy,
    table_a: &CheatTable,
    table_b: &CheatTable,
    temperature: f64,
    seed: u64,
) -> Result<DemonRun> {
    cfg.validate()?;
    policy.validate()?;
    for table in [table_a, table_b] {
        match policy.bell_mode {
            BellMode::NonSignaling => table.check_local()?,
            BellMode::Signaling => table.check_pairs()?,
        }
    }
    let fresh_ledger = ThermalLedger::new(temperature)?;
    let alice = cfg.alice_settings();
    let bob = cfg.bob_settings();
    let mode = policy.bell_mode;

    let records = run_records(cfg.n_runs, seed, |i, rng| {
        let mut ledger = fresh_ledger.clone();
        let active = rng.random::<f64>() < policy.activation_probability;
        let (x, y, qa, qb) = if active {
            let mut demon_a = DemonMemory::new(2)?;
            let mut demon_b = DemonMemory::new(2)?;
            let x = demon_a.entangle_with_setting_source(rng.random())?;
            let y = demon_b.entangle_with_setting_source(rng.random())?;
            let sign_a = table_a.lookup(table_key(mode, x, x, y))?.target_sign;
            let sign_b = table_b.lookup(table_key(mode, y, x, y))?.target_sign;
            let qa = eigenstate(&alice[x], sign_a);
            let qb = eigenstate(&bob[y], sign_b);
            demon_a.erase(&mut ledger)?;
            demon_b.erase(&mut ledger)?;
            (x, y, qa, qb)
        } else {
            let x = rng.random_range(0..2);
            let y = rng.random_range(0..2);
            let mut emit = || match policy.inactive_behavior {
                InactiveBehavior::UniformRandom => {
                    if rng.random_bool(0.5) {
                        StateVector::zero()
                    } else {
                        StateVector::one()
                    }
                }
                InactiveBehavior::FixedPlus => StateVector::zero(),
            };
            let qa = emit();
            let qb = emit();
            (x, y, qa, qb)
        };
        let (a, _) = born_measure_single(&qa, &alice[x], rng.random());
        let (b, _) = born_measure_single(&qb, &bob[y], rng.random());
        Ok((
            RunRecord {
                run_index: i,
                setting_a: Some(x),
                setting_b: y,
                declared_a: a,
                measured_b: b,
                demon_active: active,
            },
            ledger,
        ))
    })?;
    DemonRun::assemble(records, ProtocolConfig::Bell(cfg.clone()), seed, temperature)
}

/// Exact CHSH value of a table pair when both demons are always active,
/// computed from the correlators of the prepared product states.
pub fn tables_chsh(
    mode: BellMode,
    table_a: &CheatTable,
    table_b: &CheatTable,
    alice: &[MeasurementSetting],
    bob: &[MeasurementSetting],
) -> Result<f64> {
    let mut e = [[0.0; 2]; 2];
    for x in 0..2 {
        for y in 0..2 {
            let qa = eigenstate(&alice[x], table_a.lookup(table_key(mode, x, x, y))?.target_sign);
            let qb = eigenstate(&bob[y], table_b.lookup(table_key(mode, y, x, y))?.target_sign);
            e[x][y] = expectation_joint(&tensor(&qa, &qb)?, &alice[x], &bob[y]);
        }
    }
    Ok(e[0][0] + e[1][0] + e[1][1] - e[0][1])
}

/// Exhaustive search over all 16 pairs of local-setting tables.
pub fn best_nonsignaling_tables(
    alice: &[MeasurementSetting],
    bob: &[MeasurementSetting],
) -> Result<(CheatTable, CheatTable, f64)> {
    let mut best: Option<(CheatTable, CheatTable, f64)> = None;
    for (a, b) in deterministic_response_pairs() {
        let ta = CheatTable::local(a);
        let tb = CheatTable::local(b);
        let v = tables_chsh(BellMode::NonSignaling, &ta, &tb, alice, bob)?;
        if best.as_ref().is_none_or(|(_, _, bv)| v > *bv + 1e-12) {
            best = Some((ta, tb, v));
        }
    }
    Ok(best.expect("16 table pairs enumerated"))
}

/// Pair-keyed tables whose products are +1 on (0,0), (1,0), (1,1) and −1 on
/// (0,1): the algebraic maximum 4.
pub fn signaling_tables() -> (CheatTable, CheatTable) {
    use Outcome::{Minus, Plus};
    let a = CheatTable::pairs([[Plus, Plus], [Plus, Plus]]);
    let b = CheatTable::pairs([[Plus, Minus], [Plus, Plus]]);
    (a, b)
}
