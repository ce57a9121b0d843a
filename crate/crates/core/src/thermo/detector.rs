use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use super::EnvironmentModel;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectorConfig {
    /// Significance level of the one-sided test.
    pub alpha: f64,
    /// Target power used by [`required_runs`].
    pub power: f64,
}

impl DetectorConfig {
    pub fn new(alpha: f64, power: f64) -> Result<Self> {
        let cfg = DetectorConfig { alpha, power };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let open_unit = |v: f64| v > 0.0 && v < 1.0;
        if !open_unit(self.alpha) {
            return Err(Error::invalid(format!("alpha must lie in (0, 1), got {}", self.alpha)));
        }
        if !open_unit(self.power) {
            return Err(Error::invalid(format!("power must lie in (0, 1), got {}", self.power)));
        }
        Ok(())
    }
}

impl Default for DetectorConfig {
    fn default() -> Self {
        DetectorConfig {
            alpha: 0.05,
            power: 0.95,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub z: f64,
    pub p_value: f64,
    pub reject: bool,
    pub n: usize,
}

fn standard_normal() -> Normal {
    Normal::standard()
}

/// One-sided z-test of `mean = background` against `mean > background` with
/// the known background standard deviation.
pub fn detect_anomaly(
    heat_record: &[f64],
    env: &EnvironmentModel,
    cfg: &DetectorConfig,
) -> Result<Verdict> {
    env.validate()?;
    cfg.validate()?;
    let n = heat_record.len();
    if n < 2 {
        return Err(Error::InsufficientData(format!(
            "detector needs at least 2 heat samples, got {n}"
        )));
    }
    let mean = heat_record.iter().sum::<f64>() / n as f64;
    let z = (mean - env.per_run_background_mean) * (n as f64).sqrt() / env.per_run_background_std;
    let p_value = standard_normal().sf(z);
    Ok(Verdict {
        z,
        p_value,
        reject: p_value < cfg.alpha,
        n,
    })
}

/// Smallest run count at which the detector reaches the configured power
/// against a per-run heat excess.
pub fn required_runs(per_run_excess: f64, env: &EnvironmentModel, cfg: &DetectorConfig) -> Result<u64> {
    if !(per_run_excess > 0.0 && per_run_excess.is_finite()) {
        return Err(Error::invalid(format!(
            "per-run excess must be positive, got {per_run_excess}; an inactive demon is undetectable"
        )));
    }
    env.validate()?;
    cfg.validate()?;
    let normal = standard_normal();
    let z_alpha = normal.inverse_cdf(1.0 - cfg.alpha);
    let z_power = normal.inverse_cdf(cfg.power);
    let root = (z_alpha + z_power) * env.per_run_background_std / per_run_excess;
    Ok((root * root).ceil().max(1.0) as u64)
}
