//! Dense complex linear algebra for one and two qubits.
//!
//! Amplitude ordering for two qubits is row-major: index `2 * a + b` for
//! first-qubit basis state `a` and second-qubit basis state `b`.

mod density;
mod measure;
mod operator;
mod setting;
mod state;

pub use density::DensityOp;
pub use measure::{
    born_measure_joint, born_measure_single, expectation_joint, expectation_joint_detail,
    expectation_single, JointExpectation,
};
pub use operator::Operator;
pub use setting::{eigenstate, pauli_observable, MeasurementSetting};
pub use state::{tensor, Outcome, StateVector};

pub use num_complex::Complex64 as C64;

/// Tolerance for algebraic identities (normalization, eigen-equations).
pub const ALGEBRA_TOL: f64 = 1e-12;
/// Tolerance for accumulated expectation values.
pub const EXPECTATION_TOL: f64 = 1e-10;
/// Smallest eigenvalue still accepted as positive semidefinite.
pub const PSD_TOL: f64 = 1e-10;
