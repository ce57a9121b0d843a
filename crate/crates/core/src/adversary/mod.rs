//! Maxwell-demon cheating strategies.
//!
//! A demon learns the trusted party's setting for the current run, rotates
//! the incoming qubit into the eigenstate its table prescribes, and must
//! erase its one-record memory before the next run. Every erasure is charged
//! to a [`ThermalLedger`](crate::thermo::ThermalLedger).

mod bell;
mod memory;
mod policy;
mod steering;
mod table;

pub use bell::{best_nonsignaling_tables, run_bell_demon, signaling_tables, tables_chsh};
pub use memory::DemonMemory;
pub use policy::{BellMode, DemonPolicy, InactiveBehavior};
pub use steering::{demon_transform, run_steering_demon, DemonRun};
pub use table::{CheatTable, TableEntry, TableKey};
