use crate::error::{Error, Result};
use crate::thermo::ThermalLedger;

/// One-record demon memory. Register 0 is the standard state; register
/// `k + 1` holds setting index `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DemonMemory {
    register: usize,
    settings: usize,
}

impl DemonMemory {
    pub fn new(settings: usize) -> Result<Self> {
        if settings < 2 {
            return Err(Error::invalid(format!(
                "a demon needs at least 2 settings to distinguish, got {settings}"
            )));
        }
        Ok(DemonMemory { register: 0, settings })
    }

    pub fn register(&self) -> usize {
        self.register
    }

    pub fn is_standard(&self) -> bool {
        self.register == 0
    }

    /// Bits needed to hold one setting record, `log2(m)`.
    pub fn bits_capacity(&self) -> f64 {
        (self.settings as f64).log2()
    }

    fn require_standard(&self) -> Result<()> {
        if self.is_standard() {
            Ok(())
        } else {
            Err(Error::ProtocolViolation(format!(
                "demon memory still holds setting {} (erasure skipped)",
                self.register - 1
            )))
        }
    }

    /// Entangles the memory with the trusted party's quantum setting source
    /// and lets the trusted party's confirmation collapse both.
    ///
    /// `|D=0⟩ ⊗ Σ_k |k⟩/√m → Σ_k |D=k⟩ ⊗ |k⟩/√m`; the collapse picks `k`
    /// uniformly, which is all the rest of the run can observe. Returns the
    /// collapsed setting, which is also the trusted party's choice.
    pub fn entangle_with_setting_source(&mut self, rand: f64) -> Result<usize> {
        self.require_standard()?;
        let k = ((rand * self.settings as f64) as usize).min(self.settings - 1);
        self.register = k + 1;
        Ok(k)
    }

    /// Copies a setting from a list the trusted party fixed in advance.
    pub fn capture_pre_settled(&mut self, settings_list: &[usize], run_index: usize) -> Result<usize> {
        self.require_standard()?;
        let k = *settings_list.get(run_index).ok_or_else(|| {
            Error::invalid(format!(
                "run {run_index} is outside the {}-entry settings list",
                settings_list.len()
            ))
        })?;
        if k >= self.settings {
            return Err(Error::invalid(format!(
                "setting {k} is outside 0..{}",
                self.settings
            )));
        }
        self.register = k + 1;
        Ok(k)
    }

    /// Resets to the standard state, charging `log2(m)` bits to `ledger`.
    /// Returns the joules charged.
    pub fn erase(&mut self, ledger: &mut ThermalLedger) -> Result<f64> {
        if self.is_standard() {
            return Err(Error::ProtocolViolation(
                "erasing a memory already in its standard state".into(),
            ));
        }
        let joules = ledger.charge_erasure(self.bits_capacity())?;
        self.register = 0;
        Ok(joules)
    }
}
