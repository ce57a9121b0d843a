//! Classical bounds by exhaustive enumeration of deterministic strategies.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::protocol::BellConfig;
use crate::qlin::{eigenstate, expectation_joint, expectation_single, MeasurementSetting, Outcome, StateVector};

/// Largest setting count [`lhs_bound`] will enumerate.
pub const MAX_LHS_SETTINGS: usize = 24;

/// Optimal deterministic strategy behind a bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Witness {
    /// Declared sign per setting and the Bloch vector of the pure hidden state.
    SignVector {
        signs: Vec<Outcome>,
        state_bloch: [f64; 3],
    },
    /// Local response per setting for each wing.
    ResponseTables {
        alice: [Outcome; 2],
        bob: [Outcome; 2],
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundResult {
    pub value: f64,
    pub witness: Witness,
    pub enumerated_count: u64,
}

fn sign_of(mask: u64, k: usize) -> f64 {
    if mask >> k & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn signed_sum(settings: &[MeasurementSetting], mask: u64) -> [f64; 3] {
    let mut v = [0.0; 3];
    for (k, s) in settings.iter().enumerate() {
        let b = s.bloch();
        let a = sign_of(mask, k);
        for i in 0..3 {
            v[i] += a * b[i];
        }
    }
    v
}

fn norm(v: [f64; 3]) -> f64 {
    v.iter().map(|c| c * c).sum::<f64>().sqrt()
}

/// LHS bound of the linear steering functional over `settings`:
/// `max_a ‖Σ_k a_k n_k‖ / m` over all sign vectors `a`.
///
/// For a fixed sign vector the best hidden state is the +1 eigenstate along
/// `Σ a_k n_k`, whose spin expectation equals that vector's norm.
pub fn lhs_bound(settings: &[MeasurementSetting]) -> Result<BoundResult> {
    let m = settings.len();
    if m == 0 {
        return Err(Error::invalid("at least one setting is required"));
    }
    if m > MAX_LHS_SETTINGS {
        return Err(Error::invalid(format!(
            "{m} settings exceed the enumeration limit of {MAX_LHS_SETTINGS}; use sampling instead"
        )));
    }
    let count = 1u64 << m;
    // Ties go to the smallest mask so the witness is independent of the
    // thread partition.
    let (best_norm, best_mask) = (0..count)
        .into_par_iter()
        .map(|mask| (norm(signed_sum(settings, mask)), mask))
        .reduce(
            || (f64::NEG_INFINITY, u64::MAX),
            |a, b| {
                if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                    b
                } else {
                    a
                }
            },
        );
    let sum = signed_sum(settings, best_mask);
    let state_bloch = sum.map(|c| c / best_norm);
    Ok(BoundResult {
        value: best_norm / m as f64,
        witness: Witness::SignVector {
            signs: (0..m).map(|k| Outcome::from_sign(sign_of(best_mask, k) > 0.0)).collect(),
            state_bloch,
        },
        enumerated_count: count,
    })
}

/// Steering functional of a sign-vector strategy, computed from the hidden
/// state's spin expectations.
pub fn evaluate_lhs_witness(settings: &[MeasurementSetting], signs: &[Outcome], state_bloch: [f64; 3]) -> Result<f64> {
    if signs.len() != settings.len() {
        return Err(Error::invalid("sign vector and settings differ in length"));
    }
    let state = eigenstate(&MeasurementSetting::new(state_bloch, 0)?, Outcome::Plus);
    Ok(settings
        .iter()
        .zip(signs)
        .map(|(s, a)| a.as_f64() * expectation_single(&state, s))
        .sum::<f64>()
        / settings.len() as f64)
}

/// CHSH combination of deterministic local responses.
pub fn chsh_of_responses(alice: [Outcome; 2], bob: [Outcome; 2]) -> f64 {
    let e = |x: usize, y: usize| (alice[x] * bob[y]).as_f64();
    e(0, 0) + e(1, 0) + e(1, 1) - e(0, 1)
}

/// All 16 pairs of deterministic local response functions, in a fixed order.
pub fn deterministic_response_pairs() -> impl Iterator<Item = ([Outcome; 2], [Outcome; 2])> {
    (0u8..16).map(|code| {
        let bit = |i: u8| Outcome::from_sign(code >> i & 1 == 0);
        ([bit(0), bit(1)], [bit(2), bit(3)])
    })
}

/// LHV bound of CHSH over all deterministic local response pairs.
pub fn lhv_chsh_bound() -> BoundResult {
    let mut best = None;
    for (alice, bob) in deterministic_response_pairs() {
        let v = chsh_of_responses(alice, bob);
        if best.as_ref().is_none_or(|(b, _, _)| v > *b) {
            best = Some((v, alice, bob));
        }
    }
    let (value, alice, bob) = best.expect("16 strategies enumerated");
    BoundResult {
        value,
        witness: Witness::ResponseTables { alice, bob },
        enumerated_count: 16,
    }
}

/// CHSH combination of the exact correlators of `state`.
pub fn quantum_value_chsh(state: &StateVector, cfg: &BellConfig) -> Result<f64> {
    if state.dim() != 4 {
        return Err(Error::invalid("CHSH value needs a two-qubit state"));
    }
    let a = cfg.alice_settings();
    let b = cfg.bob_settings();
    let e = |x: usize, y: usize| expectation_joint(state, &a[x], &b[y]);
    Ok(e(0, 0) + e(1, 0) + e(1, 1) - e(0, 1))
}

#[cfg(test)]
#[allow(clippy::approx_constant)] // frozen reference values
mod tests {
    use super::*;
    use crate::protocol::{chsh_value, ProtocolConfig, RunRecord, Transcript};
    use crate::qlin::tensor;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

    /// Independent oracle: brute force over sign vectors and a grid of pure
    /// hidden states on the Bloch sphere, scored by spin expectations.
    fn grid_lhs(settings: &[MeasurementSetting]) -> f64 {
        let m = settings.len();
        let mut best = f64::NEG_INFINITY;
        let (n_theta, n_phi) = (400, 800);
        for i in 0..=n_theta {
            let theta = i as f64 * std::f64::consts::PI / n_theta as f64;
            for j in 0..n_phi {
                let phi = j as f64 * std::f64::consts::TAU / n_phi as f64;
                let hidden = MeasurementSetting::new(
                    [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()],
                    0,
                )
                .unwrap();
                let state = eigenstate(&hidden, Outcome::Plus);
                let spins: Vec<f64> = settings.iter().map(|s| expectation_single(&state, s)).collect();
                // The best declaration for each setting is the sign of its spin.
                let v = spins.iter().map(|s| s.abs()).sum::<f64>() / m as f64;
                best = best.max(v);
            }
        }
        best
    }

    fn pauli_triple() -> Vec<MeasurementSetting> {
        vec![
            MeasurementSetting::new([1.0, 0.0, 0.0], 0).unwrap(),
            MeasurementSetting::new([0.0, 1.0, 0.0], 1).unwrap(),
            MeasurementSetting::new([0.0, 0.0, 1.0], 2).unwrap(),
        ]
    }

    #[test]
    fn grid_oracle_freezes_the_reference_values() {
        let two = MeasurementSetting::xz_family(&[0.0, FRAC_PI_2]);
        assert!((grid_lhs(&two) - 0.7071067811865476).abs() < 1e-4);
        // Coplanar settings 60° apart: (+, +, -) aligns all three within 60°.
        let planar = MeasurementSetting::xz_family(&[0.0, FRAC_PI_3, 2.0 * FRAC_PI_3]);
        assert!((grid_lhs(&planar) - 2.0 / 3.0).abs() < 1e-4);
        assert!((grid_lhs(&pauli_triple()) - 0.5773502691896258).abs() < 1e-4);
    }

    /// `1 / (m sin(π / 2m))` for `m` coplanar settings spaced π/m apart.
    fn planar_closed_form(m: usize) -> f64 {
        1.0 / (m as f64 * (std::f64::consts::PI / (2.0 * m as f64)).sin())
    }

    #[test]
    fn lhs_reference_values() {
        let two = lhs_bound(&MeasurementSetting::xz_family(&[0.0, FRAC_PI_2])).unwrap();
        assert!((two.value - 0.7071067811865476).abs() < 1e-12);
        assert!((two.value - planar_closed_form(2)).abs() < 1e-12);
        assert_eq!(two.enumerated_count, 4);
        let planar = lhs_bound(&MeasurementSetting::xz_family(&[0.0, FRAC_PI_3, 2.0 * FRAC_PI_3])).unwrap();
        assert!((planar.value - 2.0 / 3.0).abs() < 1e-12);
        assert!((planar.value - planar_closed_form(3)).abs() < 1e-12);
        assert_eq!(planar.enumerated_count, 8);
        let triple = lhs_bound(&pauli_triple()).unwrap();
        assert!((triple.value - 0.5773502691896258).abs() < 1e-12);
        let one = lhs_bound(&MeasurementSetting::xz_family(&[0.3])).unwrap();
        assert!((one.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lhs_limits() {
        assert!(lhs_bound(&[]).is_err());
        let many = MeasurementSetting::xz_family(&(0..25).map(|i| i as f64 * 0.1).collect::<Vec<_>>());
        assert!(matches!(lhs_bound(&many), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn lhs_witness_reproduces_value() {
        for angles in [vec![0.0, FRAC_PI_2], vec![0.0, FRAC_PI_3, 2.0 * FRAC_PI_3], vec![0.1, 0.9, 2.2, 3.0]] {
            let settings = MeasurementSetting::xz_family(&angles);
            let bound = lhs_bound(&settings).unwrap();
            let Witness::SignVector { signs, state_bloch } = &bound.witness else {
                panic!("wrong witness kind");
            };
            let v = evaluate_lhs_witness(&settings, signs, *state_bloch).unwrap();
            assert!((v - bound.value).abs() < 1e-12);
        }
    }

    fn rotate(b: [f64; 3], axis: [f64; 3], angle: f64) -> [f64; 3] {
        // Rodrigues' rotation formula.
        let (s, c) = angle.sin_cos();
        let dot: f64 = (0..3).map(|i| axis[i] * b[i]).sum();
        let cross = [
            axis[1] * b[2] - axis[2] * b[1],
            axis[2] * b[0] - axis[0] * b[2],
            axis[0] * b[1] - axis[1] * b[0],
        ];
        [0, 1, 2].map(|i| b[i] * c + cross[i] * s + axis[i] * dot * (1.0 - c))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]
        #[test]
        fn lhs_invariant_under_rotation_and_relabeling(
            angles in proptest::collection::vec(0.0f64..std::f64::consts::TAU, 2..6),
            theta in 0.0f64..std::f64::consts::PI, phi in 0.0f64..std::f64::consts::TAU, angle in 0.0f64..std::f64::consts::TAU,
        ) {
            let settings = MeasurementSetting::xz_family(&angles);
            let base = lhs_bound(&settings).unwrap().value;
            let axis = [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()];
            let rotated: Vec<_> = settings
                .iter()
                .map(|s| MeasurementSetting::new(rotate(s.bloch(), axis, angle), s.label()).unwrap())
                .collect();
            prop_assert!((lhs_bound(&rotated).unwrap().value - base).abs() < 1e-10);
            let mut reversed = settings.clone();
            reversed.reverse();
            prop_assert!((lhs_bound(&reversed).unwrap().value - base).abs() < 1e-10);
        }
    }

    #[test]
    fn lhv_bound_is_two() {
        let b = lhv_chsh_bound();
        assert_eq!(b.value, 2.0);
        assert_eq!(b.enumerated_count, 16);
        assert_eq!(deterministic_response_pairs().count(), 16);
        assert!(deterministic_response_pairs().all(|(a, b)| chsh_of_responses(a, b).abs() <= 2.0));
    }

    #[test]
    fn lhv_witness_round_trips_through_estimator() {
        let Witness::ResponseTables { alice, bob } = lhv_chsh_bound().witness else {
            panic!("wrong witness kind");
        };
        let records = (0..8u64)
            .map(|i| {
                let (x, y) = ((i % 2) as usize, (i / 2 % 2) as usize);
                RunRecord {
                    run_index: i,
                    setting_a: Some(x),
                    setting_b: y,
                    declared_a: alice[x],
                    measured_b: bob[y],
                    demon_active: false,
                }
            })
            .collect();
        let t = Transcript {
            records,
            config: ProtocolConfig::Bell(BellConfig::standard(8)),
            seed: 0,
        };
        assert_eq!(chsh_value(&t).unwrap().value, 2.0);
        // CHSH = a0(b0 - b1) + a1(b0 + b1): some single flip must break the
        // optimum, and none can exceed it.
        let flipped: Vec<f64> = (0..4)
            .map(|flip| {
                let (mut a, mut b) = (alice, bob);
                if flip < 2 {
                    a[flip] = -a[flip];
                } else {
                    b[flip - 2] = -b[flip - 2];
                }
                chsh_of_responses(a, b)
            })
            .collect();
        assert!(flipped.iter().any(|&v| v <= 0.0), "{flipped:?}");
        assert!(flipped.iter().all(|&v| v <= 2.0));
    }

    #[test]
    fn quantum_values() {
        let phi = StateVector::phi_plus();
        let q = quantum_value_chsh(&phi, &BellConfig::standard(1)).unwrap();
        assert!((q - 2.8284271247461903).abs() < 1e-12);
        let same = BellConfig::new([0.4, 0.4], [0.4, 0.4], 1).unwrap();
        assert!((quantum_value_chsh(&phi, &same).unwrap() - 2.0).abs() < 1e-12);
        let zz = tensor(&StateVector::zero(), &StateVector::zero()).unwrap();
        let p = quantum_value_chsh(&zz, &BellConfig::standard(1)).unwrap();
        // ⟨a·σ⟩⟨b·σ⟩ on |00⟩ is cos θa cos θb.
        let c = |t: f64| t.cos();
        let expected = c(0.0) * c(FRAC_PI_2 / 2.0) + c(FRAC_PI_2) * c(FRAC_PI_2 / 2.0)
            + c(FRAC_PI_2) * c(3.0 * FRAC_PI_2 / 2.0)
            - c(0.0) * c(3.0 * FRAC_PI_2 / 2.0);
        assert!((p - expected).abs() < 1e-12);
        assert!(p.abs() <= 2.0);
    }

    #[test]
    fn sandwich() {
        let lhs = lhs_bound(&MeasurementSetting::xz_family(&[0.0, FRAC_PI_2])).unwrap().value;
        assert!(lhs < 1.0);
        let q = quantum_value_chsh(&StateVector::phi_plus(), &BellConfig::standard(1)).unwrap();
        assert!(lhv_chsh_bound().value < q);
    }
}
