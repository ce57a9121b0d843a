use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{self, Domain};

/// Independent Gaussian background heat per run, in joules.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvironmentModel {
    pub per_run_background_mean: f64,
    pub per_run_background_std: f64,
}

impl EnvironmentModel {
    pub fn new(mean: f64, std: f64) -> Result<Self> {
        let env = EnvironmentModel {
            per_run_background_mean: mean,
            per_run_background_std: std,
        };
        env.validate()?;
        Ok(env)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.per_run_background_mean.is_finite() {
            return Err(Error::invalid("background mean must be finite"));
        }
        if !(self.per_run_background_std > 0.0 && self.per_run_background_std.is_finite()) {
            return Err(Error::invalid(format!(
                "background std must be positive, got {}",
                self.per_run_background_std
            )));
        }
        Ok(())
    }
}

/// Observed heat per run: a background draw plus the demon's contribution.
pub fn simulate_heat_record(
    n_runs: usize,
    demon_heat_per_run: &[f64],
    env: &EnvironmentModel,
    seed: u64,
) -> Result<Vec<f64>> {
    if demon_heat_per_run.len() != n_runs {
        return Err(Error::invalid(format!(
            "expected {n_runs} demon contributions, got {}",
            demon_heat_per_run.len()
        )));
    }
    env.validate()?;
    let normal = Normal::new(env.per_run_background_mean, env.per_run_background_std)
        .map_err(|e| Error::invalid(e.to_string()))?;
    Ok(demon_heat_per_run
        .par_iter()
        .enumerate()
        .map(|(i, demon)| {
            let mut rng = rng::stream(seed, Domain::Heat, i as u64);
            normal.sample(&mut rng) + demon
        })
        .collect())
}
