use serde::{Deserialize, Serialize};

use super::Transcript;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SteeringEstimate {
    pub s_n: f64,
    pub std_err: f64,
    /// Conditional mean product per setting; `None` for unvisited settings.
    pub per_setting_correlations: Vec<Option<f64>>,
    pub n: usize,
}

/// Mean and standard error of a ±1 sample from its sum and size.
fn mean_and_std_err(sum: f64, count: usize) -> (f64, f64) {
    let n = count as f64;
    let mean = sum / n;
    if count < 2 {
        return (mean, 0.0);
    }
    // For ±1 values Σx² = n, so the unbiased variance is n(1 - mean²)/(n - 1).
    let var = (n * (1.0 - mean * mean) / (n - 1.0)).max(0.0);
    (mean, (var / n).sqrt())
}

/// Steering parameter: the sample mean of `declared × measured`.
pub fn steering_parameter(t: &Transcript, m: usize) -> Result<SteeringEstimate> {
    if t.is_empty() {
        return Err(Error::invalid("cannot estimate the steering parameter of an empty transcript"));
    }
    let mut sums = vec![0.0; m];
    let mut counts = vec![0usize; m];
    let mut total = 0.0;
    for r in &t.records {
        if r.setting_b >= m {
            return Err(Error::invalid(format!(
                "run {} has setting {} but only {m} settings exist",
                r.run_index, r.setting_b
            )));
        }
        let p = r.product();
        sums[r.setting_b] += p;
        counts[r.setting_b] += 1;
        total += p;
    }
    let (s_n, std_err) = mean_and_std_err(total, t.len());
    Ok(SteeringEstimate {
        s_n,
        std_err,
        per_setting_correlations: sums
            .iter()
            .zip(&counts)
            .map(|(s, &c)| (c > 0).then(|| s / c as f64))
            .collect(),
        n: t.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellEstimate {
    pub correlation: f64,
    pub std_err: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChshEstimate {
    pub value: f64,
    pub std_err: f64,
    /// `cells[x][y]` for Alice setting `x`, Bob setting `y`.
    pub cells: [[CellEstimate; 2]; 2],
}

/// `E(0,0) + E(1,0) + E(1,1) − E(0,1)` from conditional sample means.
pub fn chsh_value(t: &Transcript) -> Result<ChshEstimate> {
    let mut sums = [[0.0; 2]; 2];
    let mut counts = [[0usize; 2]; 2];
    for r in &t.records {
        let x = r.setting_a.ok_or_else(|| {
            Error::invalid(format!("run {} carries no Alice setting", r.run_index))
        })?;
        let y = r.setting_b;
        if x > 1 || y > 1 {
            return Err(Error::invalid(format!(
                "run {} has settings ({x}, {y}) outside {{0, 1}}",
                r.run_index
            )));
        }
        sums[x][y] += r.product();
        counts[x][y] += 1;
    }
    let mut cells = [[CellEstimate {
        correlation: 0.0,
        std_err: 0.0,
        count: 0,
    }; 2]; 2];
    for x in 0..2 {
        for y in 0..2 {
            if counts[x][y] == 0 {
                return Err(Error::InsufficientData(format!(
                    "no runs with settings ({x}, {y})"
                )));
            }
            let (correlation, std_err) = mean_and_std_err(sums[x][y], counts[x][y]);
            cells[x][y] = CellEstimate {
                correlation,
                std_err,
                count: counts[x][y],
            };
        }
    }
    let e = |x: usize, y: usize| cells[x][y].correlation;
    let value = e(0, 0) + e(1, 0) + e(1, 1) - e(0, 1);
    let std_err = cells
        .iter()
        .flatten()
        .map(|c| c.std_err * c.std_err)
        .sum::<f64>()
        .sqrt();
    Ok(ChshEstimate {
        value,
        std_err,
        cells,
    })
}
