use super::{eigenstate, pauli_observable, MeasurementSetting, Outcome, StateVector, ALGEBRA_TOL, C64};

/// `⟨ψ|n·σ|ψ⟩` for a single qubit.
pub fn expectation_single(state: &StateVector, setting: &MeasurementSetting) -> f64 {
    assert_eq!(state.dim(), 2, "single-qubit expectation needs dim 2");
    pauli_observable(setting).expectation(state).re.clamp(-1.0, 1.0)
}

/// Correlator together with the discarded imaginary part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointExpectation {
    pub value: f64,
    pub imag_residue: f64,
}

/// `⟨ψ|(a·σ) ⊗ (b·σ)|ψ⟩` with its imaginary roundoff reported.
pub fn expectation_joint_detail(
    state: &StateVector,
    a: &MeasurementSetting,
    b: &MeasurementSetting,
) -> JointExpectation {
    assert_eq!(state.dim(), 4, "joint expectation needs dim 4");
    let op = pauli_observable(a).kron(&pauli_observable(b));
    let e = op.expectation(state);
    JointExpectation {
        value: e.re.clamp(-1.0, 1.0),
        imag_residue: e.im.abs(),
    }
}

/// `⟨ψ|(a·σ) ⊗ (b·σ)|ψ⟩`.
pub fn expectation_joint(state: &StateVector, a: &MeasurementSetting, b: &MeasurementSetting) -> f64 {
    expectation_joint_detail(state, a, b).value
}

/// Clamps to [0, 1] and snaps values within roundoff of either end, so that
/// eigenstate inputs give deterministic outcomes.
fn snap_probability(p: f64) -> f64 {
    if p <= ALGEBRA_TOL {
        0.0
    } else if p >= 1.0 - ALGEBRA_TOL {
        1.0
    } else {
        p
    }
}

/// Born-rule measurement of one qubit along `setting`.
///
/// Outcome is `+1` iff `rand < P(+1)`; the post-measurement state is the
/// matching eigenstate.
pub fn born_measure_single(
    state: &StateVector,
    setting: &MeasurementSetting,
    rand: f64,
) -> (Outcome, StateVector) {
    let p_plus = snap_probability((1.0 + expectation_single(state, setting)) / 2.0);
    let outcome = Outcome::from_sign(rand < p_plus);
    (outcome, eigenstate(setting, outcome))
}

/// Local measurements of `a` on the first qubit and `b` on the second.
///
/// The first outcome is drawn from its marginal with `rand[0]`, the second
/// from the conditional distribution with `rand[1]`.
pub fn born_measure_joint(
    state: &StateVector,
    a: &MeasurementSetting,
    b: &MeasurementSetting,
    rand: [f64; 2],
) -> (Outcome, Outcome) {
    assert_eq!(state.dim(), 4, "joint measurement needs dim 4");
    let amps = state.amps();
    let joint = |x: Outcome, y: Outcome| -> f64 {
        let ea = eigenstate(a, x);
        let eb = eigenstate(b, y);
        let ea = ea.amps();
        let eb = eb.amps();
        let amp: C64 = (0..4)
            .map(|i| (ea[i / 2] * eb[i % 2]).conj() * amps[i])
            .sum();
        amp.norm_sqr()
    };
    let pp = joint(Outcome::Plus, Outcome::Plus);
    let pm = joint(Outcome::Plus, Outcome::Minus);
    let mp = joint(Outcome::Minus, Outcome::Plus);
    let mm = joint(Outcome::Minus, Outcome::Minus);

    let p_first_plus = snap_probability((pp + pm) / (pp + pm + mp + mm));
    let x = Outcome::from_sign(rand[0] < p_first_plus);
    let (same, other) = match x {
        Outcome::Plus => (pp, pm),
        Outcome::Minus => (mp, mm),
    };
    let p_second_plus = snap_probability(same / (same + other));
    let y = Outcome::from_sign(rand[1] < p_second_plus);
    (x, y)
}
