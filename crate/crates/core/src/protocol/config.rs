use std::f64::consts::FRAC_PI_2;
use std::f64::consts::FRAC_PI_4;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qlin::MeasurementSetting;

/// When the trusted party fixes its setting choices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChoiceMode {
    /// The whole list of settings is drawn before any qubit arrives.
    PreSettledList,
    /// Each setting is drawn from a quantum random source after the qubit
    /// arrives.
    PerRunQuantum,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SteeringConfig {
    /// Setting angles in the x–z plane, radians from the z axis.
    pub setting_angles: Vec<f64>,
    pub n_runs: u64,
    pub choice_mode: ChoiceMode,
}

impl SteeringConfig {
    pub fn new(setting_angles: Vec<f64>, n_runs: u64, choice_mode: ChoiceMode) -> Result<Self> {
        let cfg = SteeringConfig {
            setting_angles,
            n_runs,
            choice_mode,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Settings at 0° and 90°.
    pub fn two_setting(n_runs: u64) -> Self {
        SteeringConfig {
            setting_angles: vec![0.0, FRAC_PI_2],
            n_runs,
            choice_mode: ChoiceMode::PerRunQuantum,
        }
    }

    pub fn m(&self) -> usize {
        self.setting_angles.len()
    }

    pub fn settings(&self) -> Vec<MeasurementSetting> {
        MeasurementSetting::xz_family(&self.setting_angles)
    }

    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.setting_angles.len() < 2 {
            out.push(format!(
                "setting_angles: need at least 2 settings, got {}",
                self.setting_angles.len()
            ));
        }
        if self.setting_angles.iter().any(|a| !a.is_finite()) {
            out.push("setting_angles: angles must be finite".into());
        }
        let distinct = self.setting_angles.iter().enumerate().all(|(i, a)| {
            self.setting_angles[..i].iter().all(|b| a != b)
        });
        if !distinct {
            out.push("setting_angles: angles must be pairwise distinct".into());
        }
        if self.n_runs == 0 {
            out.push("n_runs: must be at least 1".into());
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let problems = self.problems();
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(problems))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BellConfig {
    /// Alice's two angles in the x–z plane, radians.
    pub alice_angles: [f64; 2],
    /// Bob's two angles in the x–z plane, radians.
    pub bob_angles: [f64; 2],
    pub n_runs: u64,
}

impl BellConfig {
    pub fn new(alice_angles: [f64; 2], bob_angles: [f64; 2], n_runs: u64) -> Result<Self> {
        let cfg = BellConfig {
            alice_angles,
            bob_angles,
            n_runs,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Alice at 0°/90°, Bob at 45°/135°: the settings reaching 2√2 on |Φ+⟩.
    pub fn standard(n_runs: u64) -> Self {
        BellConfig {
            alice_angles: [0.0, FRAC_PI_2],
            bob_angles: [FRAC_PI_4, 3.0 * FRAC_PI_4],
            n_runs,
        }
    }

    pub fn alice_settings(&self) -> Vec<MeasurementSetting> {
        MeasurementSetting::xz_family(&self.alice_angles)
    }

    pub fn bob_settings(&self) -> Vec<MeasurementSetting> {
        MeasurementSetting::xz_family(&self.bob_angles)
    }

    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.alice_angles.iter().chain(&self.bob_angles).any(|a| !a.is_finite()) {
            out.push("bell angles: must be finite".into());
        }
        if self.n_runs == 0 {
            out.push("n_runs: must be at least 1".into());
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let problems = self.problems();
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(problems))
        }
    }
}

/// Configuration echo carried by a transcript.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProtocolConfig {
    Steering(SteeringConfig),
    Bell(BellConfig),
}

impl ProtocolConfig {
    pub fn n_runs(&self) -> u64 {
        match self {
            ProtocolConfig::Steering(c) => c.n_runs,
            ProtocolConfig::Bell(c) => c.n_runs,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn steering_validation() {
        assert!(SteeringConfig::new(vec![0.0, 1.0], 1, ChoiceMode::PerRunQuantum).is_ok());
        let err = SteeringConfig::new(vec![0.0], 0, ChoiceMode::PerRunQuantum).unwrap_err();
        match err {
            Error::Validation(p) => assert_eq!(p.len(), 2),
            other => panic!("{other}"),
        }
        assert!(SteeringConfig::new(vec![0.5, 0.5], 3, ChoiceMode::PreSettledList).is_err());
        assert!(SteeringConfig::new(vec![0.5, f64::NAN], 3, ChoiceMode::PreSettledList).is_err());
    }

    #[test]
    fn bell_validation() {
        assert!(BellConfig::standard(1).validate().is_ok());
        assert!(BellConfig::new([0.0, 0.0], [0.0, 0.0], 0).is_err());
        assert!(BellConfig::new([f64::INFINITY, 0.0], [0.0, 0.0], 4).is_err());
    }
}
