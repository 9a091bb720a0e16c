//! Protocol-level invariants: pulse algebra, intermediate states, and
//! cross-protocol agreement.

mod common;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use common::{random_logical, random_state};
use num_complex::Complex64;
use otsim_core::protocols::{
    encode_cnot_baseline, encode_protocol1, encode_protocol2, ghz_phases_from_one,
    ghz_phases_from_zero, protocol1_residual_phase, BranchSelect, Protocol2Output,
};
use otsim_core::statevec::{Gate1q, StateVector};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

fn arb_state(n_qubits: usize) -> impl Strategy<Value = StateVector> {
    let dim = 1usize << n_qubits;
    proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim)
        .prop_filter_map("state norm too small", |parts| {
            let amps: Vec<Complex64> = parts
                .into_iter()
                .map(|(re, im)| Complex64::new(re, im))
                .collect();
            let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-3 {
                return None;
            }
            StateVector::from_amplitudes(amps.into_iter().map(|a| a / norm).collect()).ok()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normalization_survives_pulse_chains(
        state in arb_state(3),
        theta1 in 0.0..(2.0 * PI),
        theta2 in 0.0..(2.0 * PI),
        qubit in 0usize..3,
    ) {
        let mut s = state;
        s.apply_jx2(theta1, &[0, 1, 2]).unwrap();
        s.apply_jx(theta2, &[0, 2]).unwrap();
        s.apply_cz(0, 1).unwrap();
        s.apply_cnot(1, 2).unwrap();
        s.apply_1q(qubit, Gate1q::H).unwrap();
        s.apply_1q(qubit, Gate1q::Rz(theta1)).unwrap();
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn quadratic_pulse_angles_compose(
        state in arb_state(3),
        theta1 in 0.0..(2.0 * PI),
        theta2 in 0.0..(2.0 * PI),
    ) {
        let targets = [0usize, 1, 2];
        let mut split = state.clone();
        split.apply_jx2(theta1, &targets).unwrap();
        split.apply_jx2(theta2, &targets).unwrap();
        let mut joint = state;
        joint.apply_jx2(theta1 + theta2, &targets).unwrap();
        prop_assert!(split.max_amplitude_deviation(&joint).unwrap() < 1e-12);
    }

    #[test]
    fn involutions(state in arb_state(2)) {
        let reference = state.clone();

        let mut s = state.clone();
        s.apply_cz(0, 1).unwrap();
        s.apply_cz(0, 1).unwrap();
        prop_assert!(s.max_amplitude_deviation(&reference).unwrap() < 1e-12);

        let mut s = state.clone();
        s.apply_cnot(0, 1).unwrap();
        s.apply_cnot(0, 1).unwrap();
        prop_assert!(s.max_amplitude_deviation(&reference).unwrap() < 1e-12);

        let mut s = state;
        s.apply_1q(1, Gate1q::H).unwrap();
        s.apply_1q(1, Gate1q::H).unwrap();
        prop_assert!(s.max_amplitude_deviation(&reference).unwrap() < 1e-12);
    }

    #[test]
    fn measurement_branch_probabilities_sum_to_one(state in arb_state(3), qubit in 0usize..3) {
        let mut zero_branch = state.clone();
        let mut one_branch = state;
        let p0 = match zero_branch.project_z(qubit, 0) {
            Ok(record) => record.probability,
            Err(_) => 0.0, // degenerate branch carries (almost) no weight
        };
        let p1 = match one_branch.project_z(qubit, 1) {
            Ok(record) => record.probability,
            Err(_) => 0.0,
        };
        prop_assert!((p0 + p1 - 1.0).abs() < 1e-12);
    }
}

#[test]
fn protocol1_intermediate_state_after_phase_gate() {
    // After the first pulse and the phase gate the state must match
    // α|0⟩|φ0⟩ - i(-1)^{N/2} β|1⟩|φ1⟩ amplitude for amplitude, with the
    // |φ⟩ phases given by the GHZ formulas.
    let mut rng = ChaCha12Rng::seed_from_u64(99);
    for n in [2usize, 4, 6] {
        let logical = random_logical(&mut rng);
        let appended: Vec<usize> = (1..=n).collect();
        let mut state = StateVector::from_logical(logical, n).unwrap();
        state.apply_jx2(FRAC_PI_2, &appended).unwrap();
        state.apply_cz(0, 1).unwrap();

        let (phase0, phase1) = ghz_phases_from_zero(n);
        let (swap0, swap1) = ghz_phases_from_one(n);
        let front = if (n / 2) % 2 == 0 {
            Complex64::new(0.0, -1.0)
        } else {
            Complex64::new(0.0, 1.0)
        };
        let half = std::f64::consts::FRAC_1_SQRT_2;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << (n + 1)];
        let appended_mask = ((1usize << n) - 1) << 1;
        amps[0] = logical.alpha * Complex64::from_polar(half, phase0);
        amps[appended_mask] = logical.alpha * Complex64::from_polar(half, phase1);
        amps[1] = front * logical.beta * Complex64::from_polar(half, swap0);
        amps[1 | appended_mask] = front * logical.beta * Complex64::from_polar(half, swap1);
        let expected = StateVector::from_amplitudes(amps).unwrap();

        let dev = state.max_amplitude_deviation(&expected).unwrap();
        assert!(dev < 1e-12, "n={n}: deviation {dev}");
    }
}

#[test]
fn protocol1_residual_phase_matches_closed_form() {
    for n in [2usize, 4, 6, 8] {
        let expected = if (n / 2) % 2 == 0 { -FRAC_PI_2 } else { FRAC_PI_2 };
        assert_eq!(protocol1_residual_phase(n), expected);
    }
}

#[test]
fn protocols_agree_on_the_logical_state() {
    let mut rng = ChaCha12Rng::seed_from_u64(4242);
    for _ in 0..10 {
        let logical = random_logical(&mut rng);

        // Even block: protocol 1 vs the CNOT ladder on N+1 qubits.
        let (p1_state, p1_report) = encode_protocol1(logical, 4).unwrap();
        let (cnot_state, cnot_report) = encode_cnot_baseline(logical, 4).unwrap();
        assert!((p1_state.fidelity(&cnot_state).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(p1_report.entangling_pulse_count, 3);
        assert_eq!(cnot_report.entangling_pulse_count, 4);

        // Odd block: protocol 2 leaves the logical state on N qubits; the
        // ladder on N-1 appended qubits produces the same N-qubit word.
        let out = encode_protocol2(logical, 3, BranchSelect::Both).unwrap();
        let Protocol2Output::Both { zero, one } = out else {
            panic!("expected both branches");
        };
        let (ladder_state, _) = encode_cnot_baseline(logical, 2).unwrap();
        for branch in [zero, one] {
            assert!((branch.state.fidelity(&ladder_state).unwrap() - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn ghz_pulse_phase_formula_spot_check_against_fast_path() {
    // The formula constants double as the acceptance table; pin two rows.
    let (p0, p1) = ghz_phases_from_zero(4);
    assert!((p0 + FRAC_PI_4).abs() < 1e-15);
    assert!((p1 - FRAC_PI_4).abs() < 1e-15);
    let (q0, q1) = ghz_phases_from_zero(2);
    assert!((q0 + FRAC_PI_4).abs() < 1e-15);
    assert!((q1 - (FRAC_PI_4 + PI - 2.0 * PI)).abs() < 1e-12);
}

#[test]
fn random_state_helper_is_normalized() {
    let mut rng = ChaCha12Rng::seed_from_u64(1);
    let s = random_state(&mut rng, 5);
    assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
}
