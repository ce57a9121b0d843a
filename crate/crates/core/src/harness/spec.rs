use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::adversary::{best_nonsignaling_tables, signaling_tables, BellMode, CheatTable, DemonPolicy, InactiveBehavior};
use crate::error::{Error, Result};
use crate::protocol::{BellConfig, ChoiceMode, SteeringConfig};
use crate::qlin::Outcome;
use crate::thermo::{kt_ln2, DetectorConfig, EnvironmentModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    SteeringHonest,
    SteeringLhs,
    SteeringDemon,
    BellHonest,
    BellDemonNonsignaling,
    BellDemonSignaling,
}

impl Scenario {
    pub fn is_steering(self) -> bool {
        matches!(self, Scenario::SteeringHonest | Scenario::SteeringLhs | Scenario::SteeringDemon)
    }

    pub fn is_demon(self) -> bool {
        matches!(
            self,
            Scenario::SteeringDemon | Scenario::BellDemonNonsignaling | Scenario::BellDemonSignaling
        )
    }

    pub fn bell_mode(self) -> BellMode {
        match self {
            Scenario::BellDemonSignaling => BellMode::Signaling,
            _ => BellMode::NonSignaling,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SteeringSection {
    #[serde(default = "default_steering_angles")]
    pub angles_deg: Vec<f64>,
    #[serde(default = "default_choice_mode")]
    pub choice_mode: ChoiceMode,
}

fn default_steering_angles() -> Vec<f64> {
    vec![0.0, 90.0]
}

fn default_choice_mode() -> ChoiceMode {
    ChoiceMode::PerRunQuantum
}

impl Default for SteeringSection {
    fn default() -> Self {
        SteeringSection {
            angles_deg: default_steering_angles(),
            choice_mode: default_choice_mode(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BellSection {
    #[serde(default = "default_alice")]
    pub alice_angles_deg: [f64; 2],
    #[serde(default = "default_bob")]
    pub bob_angles_deg: [f64; 2],
}

fn default_alice() -> [f64; 2] {
    [0.0, 90.0]
}

fn default_bob() -> [f64; 2] {
    [45.0, 135.0]
}

impl Default for BellSection {
    fn default() -> Self {
        BellSection {
            alice_angles_deg: default_alice(),
            bob_angles_deg: default_bob(),
        }
    }
}

/// Cheat tables read from a JSON file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableSet {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steering: Option<CheatTable>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alice: Option<CheatTable>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bob: Option<CheatTable>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DemonSection {
    #[serde(default = "one")]
    pub activation_probability: f64,
    #[serde(default = "default_inactive", alias = "inactive_alice_behavior")]
    pub inactive_behavior: InactiveBehavior,
    /// JSON [`TableSet`]; defaults are derived from the scenario when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tables: Option<PathBuf>,
}

fn one() -> f64 {
    1.0
}

fn default_inactive() -> InactiveBehavior {
    InactiveBehavior::UniformRandom
}

impl Default for DemonSection {
    fn default() -> Self {
        DemonSection {
            activation_probability: 1.0,
            inactive_behavior: default_inactive(),
            tables: None,
        }
    }
}

/// Background heat per run in joules. The standard deviation defaults to
/// one `k_B T ln 2` at the configured temperature.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvironmentSection {
    #[serde(default)]
    pub background_mean_j: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub background_std_j: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
}

/// One experiment, as read from a TOML config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub scenario: Scenario,
    #[serde(default)]
    pub seed: u64,
    pub n_runs: u64,
    #[serde(default = "room_temperature")]
    pub temperature: f64,
    #[serde(default)]
    pub steering: SteeringSection,
    #[serde(default)]
    pub bell: BellSection,
    #[serde(default)]
    pub demon: DemonSection,
    #[serde(default)]
    pub environment: EnvironmentSection,
    #[serde(default)]
    pub detector: DetectorConfig,
    #[serde(default)]
    pub output: OutputSection,
}

fn room_temperature() -> f64 {
    300.0
}

impl ExperimentSpec {
    /// Defaults for `scenario` with `n_runs` runs.
    pub fn new(scenario: Scenario, n_runs: u64) -> Self {
        ExperimentSpec {
            scenario,
            seed: 0,
            n_runs,
            temperature: room_temperature(),
            steering: SteeringSection::default(),
            bell: BellSection::default(),
            demon: DemonSection::default(),
            environment: EnvironmentSection::default(),
            detector: DetectorConfig::default(),
            output: OutputSection::default(),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_activation(mut self, p: f64) -> Self {
        self.demon.activation_probability = p;
        self
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse {
            path: "<config>".into(),
            message: e.to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut spec: ExperimentSpec = toml::from_str(&text).map_err(|e| Error::Parse {
            path: path.into(),
            message: e.to_string(),
        })?;
        // Table paths are relative to the config file.
        if let (Some(tables), Some(dir)) = (&spec.demon.tables, path.parent()) {
            if tables.is_relative() {
                spec.demon.tables = Some(dir.join(tables));
            }
        }
        Ok(spec)
    }

    pub fn steering_config(&self) -> SteeringConfig {
        SteeringConfig {
            setting_angles: self.steering.angles_deg.iter().map(|d| d.to_radians()).collect(),
            n_runs: self.n_runs,
            choice_mode: self.steering.choice_mode,
        }
    }

    pub fn bell_config(&self) -> BellConfig {
        BellConfig {
            alice_angles: self.bell.alice_angles_deg.map(f64::to_radians),
            bob_angles: self.bell.bob_angles_deg.map(f64::to_radians),
            n_runs: self.n_runs,
        }
    }

    pub fn policy(&self) -> DemonPolicy {
        DemonPolicy {
            activation_probability: self.demon.activation_probability,
            bell_mode: self.scenario.bell_mode(),
            inactive_behavior: self.demon.inactive_behavior,
        }
    }

    pub fn environment_model(&self) -> Result<EnvironmentModel> {
        let std = match self.environment.background_std_j {
            Some(s) => s,
            None => kt_ln2(self.temperature)?,
        };
        EnvironmentModel::new(self.environment.background_mean_j, std)
    }

    /// Every problem with the spec, by field.
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.n_runs == 0 {
            out.push("n_runs: must be at least 1".into());
        }
        if !(self.temperature > 0.0 && self.temperature.is_finite()) {
            out.push(format!("temperature: must be positive, got {}", self.temperature));
        }
        if self.scenario.is_steering() {
            out.extend(
                self.steering_config()
                    .problems()
                    .into_iter()
                    .filter(|p| !p.starts_with("n_runs"))
                    .map(|p| format!("steering.{p}")),
            );
        } else {
            out.extend(
                self.bell_config()
                    .problems()
                    .into_iter()
                    .filter(|p| !p.starts_with("n_runs"))
                    .map(|p| format!("bell: {p}")),
            );
        }
        if let Err(e) = self.policy().validate() {
            out.push(format!("demon.activation_probability: {e}"));
        }
        if let Some(std) = self.environment.background_std_j {
            if !(std > 0.0 && std.is_finite()) {
                out.push(format!("environment.background_std_j: must be positive, got {std}"));
            }
        }
        if !self.environment.background_mean_j.is_finite() {
            out.push("environment.background_mean_j: must be finite".into());
        }
        if let Err(e) = self.detector.validate() {
            out.push(format!("detector: {e}"));
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

    fn table_file(&self) -> Result<Option<TableSet>> {
        let Some(path) = &self.demon.tables else {
            return Ok(None);
        };
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map(Some).map_err(|e| Error::Parse {
            path: path.clone(),
            message: e.to_string(),
        })
    }

    /// Tables for the scenario: from the configured file, else the
    /// scenario's best-known defaults.
    pub fn tables(&self) -> Result<TableSet> {
        let file = self.table_file()?.unwrap_or(TableSet {
            steering: None,
            alice: None,
            bob: None,
        });
        match self.scenario {
            Scenario::SteeringDemon => Ok(TableSet {
                steering: Some(file.steering.unwrap_or_else(|| {
                    CheatTable::correlated(&vec![Outcome::Plus; self.steering.angles_deg.len()])
                })),
                alice: None,
                bob: None,
            }),
            Scenario::BellDemonNonsignaling | Scenario::BellDemonSignaling => {
                let (alice, bob) = match (file.alice, file.bob) {
                    (Some(a), Some(b)) => (a, b),
                    (None, None) if self.scenario == Scenario::BellDemonSignaling => signaling_tables(),
                    (None, None) => {
                        let cfg = self.bell_config();
                        let (a, b, _) = best_nonsignaling_tables(&cfg.alice_settings(), &cfg.bob_settings())?;
                        (a, b)
                    }
                    _ => {
                        return Err(Error::Validation(vec![
                            "demon.tables: Bell scenarios need both alice and bob tables".into(),
                        ]))
                    }
                };
                Ok(TableSet {
                    steering: None,
                    alice: Some(alice),
                    bob: Some(bob),
                })
            }
            _ => Ok(file),
        }
    }
}
