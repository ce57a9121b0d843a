use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// What the demons can see in a Bell test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BellMode {
    /// Each demon acts on its own wing's setting only.
    NonSignaling,
    /// Each demon knows both wings' settings.
    Signaling,
}

/// Behavior of the cheating side on runs where the demon sits out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InactiveBehavior {
    /// Steering: Alice declares a fair coin. Bell: each qubit is sent as a
    /// uniformly random computational basis state (maximally mixed).
    UniformRandom,
    /// Steering: Alice declares +1. Bell: both qubits are sent as |0⟩.
    FixedPlus,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DemonPolicy {
    pub activation_probability: f64,
    pub bell_mode: BellMode,
    pub inactive_behavior: InactiveBehavior,
}

impl DemonPolicy {
    /// Demon active on every run, non-signaling, uniform inactive behavior.
    pub fn always() -> Self {
        DemonPolicy {
            activation_probability: 1.0,
            bell_mode: BellMode::NonSignaling,
            inactive_behavior: InactiveBehavior::UniformRandom,
        }
    }

    pub fn with_probability(mut self, p: f64) -> Self {
        self.activation_probability = p;
        self
    }

    pub fn with_bell_mode(mut self, mode: BellMode) -> Self {
        self.bell_mode = mode;
        self
    }

    pub fn with_inactive(mut self, behavior: InactiveBehavior) -> Self {
        self.inactive_behavior = behavior;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let p = self.activation_probability;
        if (0.0..=1.0).contains(&p) {
            Ok(())
        } else {
            Err(Error::invalid(format!("activation probability must lie in [0, 1], got {p}")))
        }
    }
}
