use std::fmt;
use std::ops::Neg;

use serde::{Deserialize, Serialize};

use super::{ALGEBRA_TOL, C64};
use crate::error::{Error, Result};

/// A dichotomic measurement result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub fn value(self) -> i8 {
        match self {
            Outcome::Plus => 1,
            Outcome::Minus => -1,
        }
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.value())
    }

    pub fn from_sign(plus: bool) -> Self {
        if plus {
            Outcome::Plus
        } else {
            Outcome::Minus
        }
    }
}

impl Neg for Outcome {
    type Output = Outcome;

    fn neg(self) -> Outcome {
        match self {
            Outcome::Plus => Outcome::Minus,
            Outcome::Minus => Outcome::Plus,
        }
    }
}

impl std::ops::Mul for Outcome {
    type Output = Outcome;

    fn mul(self, rhs: Outcome) -> Outcome {
        Outcome::from_sign(self == rhs)
    }
}

impl From<Outcome> for i8 {
    fn from(o: Outcome) -> i8 {
        o.value()
    }
}

impl TryFrom<i8> for Outcome {
    type Error = Error;

    fn try_from(v: i8) -> Result<Self> {
        match v {
            1 => Ok(Outcome::Plus),
            -1 => Ok(Outcome::Minus),
            other => Err(Error::invalid(format!("outcome must be +1 or -1, got {other}"))),
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+}", self.value())
    }
}

/// Normalized pure state of one qubit (dim 2) or two qubits (dim 4).
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<C64>,
}

impl StateVector {
    /// Builds a state from amplitudes that must already be normalized.
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        if amps.len() != 2 && amps.len() != 4 {
            return Err(Error::invalid(format!(
                "state dimension must be 2 or 4, got {}",
                amps.len()
            )));
        }
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::invalid("state amplitudes must be finite"));
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > ALGEBRA_TOL {
            return Err(Error::invalid(format!(
                "state is not normalized: sum |amp|^2 = {norm}"
            )));
        }
        Ok(StateVector { amps })
    }

    /// Rescales arbitrary non-zero amplitudes to unit norm.
    pub fn normalized(amps: Vec<C64>) -> Result<Self> {
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::invalid("cannot normalize a zero or non-finite vector"));
        }
        StateVector::new(amps.into_iter().map(|a| a / norm).collect())
    }

    /// Computational basis state `|index⟩` of dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::invalid(format!("basis index {index} out of range for dim {dim}")));
        }
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[index] = C64::new(1.0, 0.0);
        StateVector::new(amps)
    }

    pub fn zero() -> Self {
        StateVector {
            amps: vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
        }
    }

    pub fn one() -> Self {
        StateVector {
            amps: vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
        }
    }

    /// `(|00⟩ + |11⟩)/√2`.
    pub fn phi_plus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        StateVector {
            amps: vec![
                C64::new(h, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(h, 0.0),
            ],
        }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Multiplies by a global phase so the first non-negligible amplitude is
    /// real and positive.
    pub(crate) fn with_canonical_phase(mut self) -> Self {
        if let Some(lead) = self.amps.iter().position(|a| a.norm() > ALGEBRA_TOL) {
            let magnitude = self.amps[lead].norm();
            let phase = self.amps[lead].conj() / magnitude;
            for a in &mut self.amps {
                *a *= phase;
            }
            self.amps[lead] = C64::new(magnitude, 0.0);
        }
        self
    }

    pub(crate) fn from_raw(amps: Vec<C64>) -> Self {
        debug_assert!(amps.len() == 2 || amps.len() == 4);
        StateVector { amps }
    }
}

/// Composite state `a ⊗ b` of two qubits.
pub fn tensor(a: &StateVector, b: &StateVector) -> Result<StateVector> {
    if a.dim() != 2 || b.dim() != 2 {
        return Err(Error::invalid("tensor expects two single-qubit states"));
    }
    let amps = a
        .amps
        .iter()
        .flat_map(|x| b.amps.iter().map(move |y| x * y))
        .collect();
    Ok(StateVector::from_raw(amps))
}
