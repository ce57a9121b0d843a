use serde::{Deserialize, Serialize};

use super::{Operator, Outcome, StateVector, ALGEBRA_TOL, C64};
use crate::error::{Error, Result};

/// A dichotomic qubit observable `n·σ` labelled by its setting index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSetting", into = "RawSetting")]
pub struct MeasurementSetting {
    bloch: [f64; 3],
    label: usize,
}

#[derive(Serialize, Deserialize)]
struct RawSetting {
    bloch: [f64; 3],
    label: usize,
}

impl TryFrom<RawSetting> for MeasurementSetting {
    type Error = Error;

    fn try_from(raw: RawSetting) -> Result<Self> {
        MeasurementSetting::new(raw.bloch, raw.label)
    }
}

impl From<MeasurementSetting> for RawSetting {
    fn from(s: MeasurementSetting) -> Self {
        RawSetting {
            bloch: s.bloch,
            label: s.label,
        }
    }
}

impl MeasurementSetting {
    /// Fails unless `bloch` is a finite unit vector.
    pub fn new(bloch: [f64; 3], label: usize) -> Result<Self> {
        if bloch.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("Bloch vector must be finite"));
        }
        let norm = bloch.iter().map(|c| c * c).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > ALGEBRA_TOL {
            return Err(Error::invalid(format!(
                "Bloch vector must have unit length, got {norm}"
            )));
        }
        Ok(MeasurementSetting { bloch, label })
    }

    /// Setting at angle `theta` (radians) from the z axis towards x in the
    /// x–z plane: `n = (sin θ, 0, cos θ)`.
    pub fn xz(theta: f64, label: usize) -> Self {
        MeasurementSetting {
            bloch: [theta.sin(), 0.0, theta.cos()],
            label,
        }
    }

    /// [`MeasurementSetting::xz`] for every angle, labelled by position.
    pub fn xz_family(angles: &[f64]) -> Vec<Self> {
        angles
            .iter()
            .enumerate()
            .map(|(k, &theta)| MeasurementSetting::xz(theta, k))
            .collect()
    }

    pub fn bloch(&self) -> [f64; 3] {
        self.bloch
    }

    pub fn label(&self) -> usize {
        self.label
    }

    pub fn with_label(mut self, label: usize) -> Self {
        self.label = label;
        self
    }

    pub fn negated(&self) -> Self {
        MeasurementSetting {
            bloch: self.bloch.map(|c| -c),
            label: self.label,
        }
    }

    pub fn dot(&self, other: &MeasurementSetting) -> f64 {
        self.bloch.iter().zip(&other.bloch).map(|(a, b)| a * b).sum()
    }
}

/// The operator `n_x σ_x + n_y σ_y + n_z σ_z`.
pub fn pauli_observable(setting: &MeasurementSetting) -> Operator {
    let [x, y, z] = setting.bloch;
    Operator::from_rows(vec![
        vec![C64::new(z, 0.0), C64::new(x, -y)],
        vec![C64::new(x, y), C64::new(-z, 0.0)],
    ])
}

/// Eigenstate of `n·σ` with eigenvalue `sign`, first non-zero amplitude real
/// and positive.
pub fn eigenstate(setting: &MeasurementSetting, sign: Outcome) -> StateVector {
    let [x, y, z] = match sign {
        Outcome::Plus => setting.bloch,
        Outcome::Minus => setting.negated().bloch,
    };
    // (1+z, x+iy) and (x-iy, 1-z) are both (unnormalized) +1 eigenvectors of
    // n·σ; pick the one that is not close to zero.
    let amps = if z >= 0.0 {
        vec![C64::new(1.0 + z, 0.0), C64::new(x, y)]
    } else {
        vec![C64::new(x, -y), C64::new(1.0 - z, 0.0)]
    };
    StateVector::normalized(amps)
        .expect("unit Bloch vector gives a non-zero eigenvector")
        .with_canonical_phase()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_3, FRAC_PI_4};

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn pauli_z_and_x() {
        let z = pauli_observable(&MeasurementSetting::new([0.0, 0.0, 1.0], 0).unwrap());
        assert_eq!(z, Operator::from_rows(vec![vec![c(1.0), c(0.0)], vec![c(0.0), c(-1.0)]]));
        let x = pauli_observable(&MeasurementSetting::new([1.0, 0.0, 0.0], 0).unwrap());
        assert_eq!(x, Operator::from_rows(vec![vec![c(0.0), c(1.0)], vec![c(1.0), c(0.0)]]));
    }

    #[test]
    fn diagonal_setting_has_unit_eigenvalues() {
        let s = MeasurementSetting::new([FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2], 0).unwrap();
        let op = pauli_observable(&s);
        assert!(op.is_hermitian(ALGEBRA_TOL));
        assert!(op.is_traceless());
        // Closed form for [[a, b], [b, -a]]: ±sqrt(a² + b²).
        let eig = op.hermitian_eigenvalues();
        assert!((eig[0] + 1.0).abs() < ALGEBRA_TOL);
        assert!((eig[1] - 1.0).abs() < ALGEBRA_TOL);
        let expected = Operator::from_rows(vec![
            vec![c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2)],
            vec![c(FRAC_1_SQRT_2), c(-FRAC_1_SQRT_2)],
        ]);
        assert!(op.approx_eq(&expected, ALGEBRA_TOL));
    }

    #[test]
    fn non_unit_bloch_rejected() {
        assert!(matches!(
            MeasurementSetting::new([1.0, 1.0, 0.0], 0),
            Err(Error::InvalidArgument(_))
        ));
        assert!(MeasurementSetting::new([0.0, 0.0, f64::NAN], 0).is_err());
        assert!(serde_json::from_str::<MeasurementSetting>(r#"{"bloch":[0,0,2],"label":0}"#).is_err());
    }

    #[test]
    fn named_eigenstates() {
        let z = MeasurementSetting::xz(0.0, 0);
        assert_eq!(eigenstate(&z, Outcome::Plus).amps(), &[c(1.0), c(0.0)]);
        assert_eq!(eigenstate(&z, Outcome::Minus).amps(), &[c(0.0), c(1.0)]);
        let x = MeasurementSetting::new([1.0, 0.0, 0.0], 1).unwrap();
        let plus = eigenstate(&x, Outcome::Plus);
        assert!((plus.amps()[0] - c(FRAC_1_SQRT_2)).norm() < ALGEBRA_TOL);
        assert!((plus.amps()[1] - c(FRAC_1_SQRT_2)).norm() < ALGEBRA_TOL);
        let minus = eigenstate(&x, Outcome::Minus);
        assert!((minus.amps()[0] - c(FRAC_1_SQRT_2)).norm() < ALGEBRA_TOL);
        assert!((minus.amps()[1] - c(-FRAC_1_SQRT_2)).norm() < ALGEBRA_TOL);
    }

    fn assert_eigen(setting: &MeasurementSetting, sign: Outcome) {
        let psi = eigenstate(setting, sign);
        assert!((psi.norm_sqr() - 1.0).abs() < ALGEBRA_TOL);
        let applied = pauli_observable(setting).apply(&psi);
        for (a, b) in applied.iter().zip(psi.amps()) {
            assert!((a - b * sign.as_f64()).norm() < ALGEBRA_TOL);
        }
        let lead = psi.amps().iter().find(|a| a.norm() > ALGEBRA_TOL).unwrap();
        assert!(lead.im == 0.0 && lead.re > 0.0);
    }

    #[test]
    fn sixty_degree_minus_eigenstate() {
        assert_eigen(&MeasurementSetting::xz(FRAC_PI_3, 0), Outcome::Minus);
        assert_eigen(&MeasurementSetting::xz(FRAC_PI_2, 0), Outcome::Minus);
        assert_eigen(&MeasurementSetting::xz(FRAC_PI_4, 0), Outcome::Plus);
        assert_eigen(&MeasurementSetting::xz(std::f64::consts::PI, 0), Outcome::Plus);
    }

    proptest! {
        #[test]
        fn eigen_equation_holds_anywhere_on_the_sphere(
            theta in 0.0..std::f64::consts::PI,
            phi in 0.0..std::f64::consts::TAU,
            plus in any::<bool>(),
        ) {
            let s = MeasurementSetting::new(
                [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()],
                0,
            ).unwrap();
            assert_eigen(&s, Outcome::from_sign(plus));
            let op = pauli_observable(&s);
            prop_assert!(op.is_hermitian(ALGEBRA_TOL) && op.is_traceless());
        }
    }
}
