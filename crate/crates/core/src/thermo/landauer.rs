use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Boltzmann constant in J/K (exact SI value).
pub const BOLTZMANN: f64 = 1.380649e-23;

/// Minimal heat in joules dissipated by erasing `bits` at `temperature` kelvin.
pub fn landauer_cost(bits: f64, temperature: f64) -> Result<f64> {
    if !(bits >= 0.0 && bits.is_finite()) {
        return Err(Error::invalid(format!("bits must be non-negative, got {bits}")));
    }
    check_temperature(temperature)?;
    Ok(bits * BOLTZMANN * temperature * LN_2)
}

/// `k_B T ln 2` in joules.
pub fn kt_ln2(temperature: f64) -> Result<f64> {
    landauer_cost(1.0, temperature)
}

fn check_temperature(temperature: f64) -> Result<()> {
    if temperature > 0.0 && temperature.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("temperature must be positive, got {temperature}")))
    }
}

/// Neumaier-compensated sum of `values` in iteration order; the same
/// accumulation [`ThermalLedger`] uses.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut acc = CompensatedSum::default();
    for v in values {
        acc.add(v);
    }
    acc.value()
}

/// Neumaier compensated running sum.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Cumulative Landauer heat dissipated by demon memory erasures at one
/// temperature.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermalLedger {
    temperature: f64,
    erasures: u64,
    bits: CompensatedSum,
    joules: CompensatedSum,
}

#[derive(Serialize, Deserialize)]
struct LedgerRecord {
    temperature: f64,
    boltzmann_k: f64,
    erasures: u64,
    bits: f64,
    joules: f64,
}

impl Serialize for ThermalLedger {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        LedgerRecord {
            temperature: self.temperature,
            boltzmann_k: BOLTZMANN,
            erasures: self.erasures,
            bits: self.bits(),
            joules: self.joules(),
        }
        .serialize(serializer)
    }
}

impl ThermalLedger {
    pub fn new(temperature: f64) -> Result<Self> {
        check_temperature(temperature)?;
        Ok(ThermalLedger {
            temperature,
            erasures: 0,
            bits: CompensatedSum::default(),
            joules: CompensatedSum::default(),
        })
    }

    /// Charges one erasure of `bits` bits; returns the joules charged.
    pub fn charge_erasure(&mut self, bits: f64) -> Result<f64> {
        let joules = landauer_cost(bits, self.temperature)?;
        self.erasures += 1;
        self.bits.add(bits);
        self.joules.add(joules);
        Ok(joules)
    }

    /// Adds another ledger at the same temperature.
    pub fn merge(&mut self, other: &ThermalLedger) -> Result<()> {
        if other.temperature != self.temperature {
            return Err(Error::invalid(format!(
                "cannot merge ledgers at {} K and {} K",
                self.temperature, other.temperature
            )));
        }
        self.erasures += other.erasures;
        self.bits.add(other.bits());
        self.joules.add(other.joules());
        Ok(())
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn erasures(&self) -> u64 {
        self.erasures
    }

    pub fn bits(&self) -> f64 {
        self.bits.value()
    }

    pub fn joules(&self) -> f64 {
        self.joules.value()
    }

    /// Total heat in units of `k_B T ln 2`.
    pub fn kt_ln2_units(&self) -> f64 {
        self.joules() / (BOLTZMANN * self.temperature * LN_2)
    }
}
