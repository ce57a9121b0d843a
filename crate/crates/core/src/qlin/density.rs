use super::{Operator, StateVector, ALGEBRA_TOL, PSD_TOL};
use crate::error::{Error, Result};

/// Mixed state of one or two qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOp {
    op: Operator,
}

impl DensityOp {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(op: Operator) -> Result<Self> {
        if op.dim() != 2 && op.dim() != 4 {
            return Err(Error::invalid(format!("density dimension must be 2 or 4, got {}", op.dim())));
        }
        if !op.is_finite() {
            return Err(Error::invalid("density entries must be finite"));
        }
        if !op.is_hermitian(ALGEBRA_TOL) {
            return Err(Error::invalid("density operator is not Hermitian"));
        }
        let tr = op.trace();
        if (tr.re - 1.0).abs() > ALGEBRA_TOL || tr.im.abs() > ALGEBRA_TOL {
            return Err(Error::invalid(format!("density trace must be 1, got {tr}")));
        }
        let min_eig = op.hermitian_eigenvalues()[0];
        if min_eig < -PSD_TOL {
            return Err(Error::invalid(format!(
                "density operator is not positive semidefinite (eigenvalue {min_eig})"
            )));
        }
        Ok(DensityOp { op })
    }

    pub fn pure(state: &StateVector) -> Self {
        DensityOp {
            op: Operator::outer(state),
        }
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        DensityOp::new(Operator::identity(dim).scale(1.0 / dim as f64))
    }

    /// Convex combination `Σ w_i ρ_i`; weights must be non-negative and sum to 1.
    pub fn mixture(parts: &[(f64, DensityOp)]) -> Result<Self> {
        let dim = parts
            .first()
            .map(|(_, rho)| rho.dim())
            .ok_or_else(|| Error::invalid("empty mixture"))?;
        if parts.iter().any(|(w, rho)| *w < 0.0 || rho.dim() != dim) {
            return Err(Error::invalid("mixture weights must be non-negative over equal dimensions"));
        }
        let total = parts
            .iter()
            .fold(Operator::zeros(dim), |acc, (w, rho)| &acc + &rho.op.scale(*w));
        DensityOp::new(total)
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn operator(&self) -> &Operator {
        &self.op
    }

    /// `Tr(ρ O)`, real part.
    pub fn expectation(&self, observable: &Operator) -> f64 {
        (&self.op * observable).trace().re
    }

    pub fn purity(&self) -> f64 {
        (&self.op * &self.op).trace().re
    }
}
