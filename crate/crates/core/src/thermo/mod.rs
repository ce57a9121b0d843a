//! Landauer heat accounting and the trusted lab's heat-anomaly detector.

mod detector;
mod environment;
mod landauer;

pub use detector::{detect_anomaly, required_runs, DetectorConfig, Verdict};
pub use environment::{simulate_heat_record, EnvironmentModel};
pub use landauer::{compensated_sum, kt_ln2, landauer_cost, ThermalLedger, BOLTZMANN};
