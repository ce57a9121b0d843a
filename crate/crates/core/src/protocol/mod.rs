//! Honest steering and CHSH tests, transcripts, and their estimators.

mod bell;
mod config;
mod estimate;
mod steering;
mod transcript;

pub use bell::run_bell_honest;
pub use config::{BellConfig, ChoiceMode, ProtocolConfig, SteeringConfig};
pub use estimate::{chsh_value, steering_parameter, ChshEstimate, SteeringEstimate};
pub use steering::{run_steering_honest, run_steering_lhs_baseline, LhsStrategy};
pub use transcript::{RunRecord, Transcript};

pub(crate) use steering::{run_records, SettingSource};
