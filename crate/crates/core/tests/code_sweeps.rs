//! Exhaustive and randomized error-correction sweeps.

mod common;

use common::random_logical;
use otsim_core::codes::{
    apply_error, logical_fidelity, measure_pauli_parity, phase_codeword, phase_repetition_correct,
    repetition_codeword, repetition_correct, shor_codeword, shor_correct, shor_stabilizers,
    CodeKind, ErrorKind, ErrorSpec,
};
use otsim_core::statevec::LogicalAmplitudes;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

fn sampler(rng: &mut ChaCha12Rng) -> impl FnMut() -> f64 + '_ {
    move || rng.gen::<f64>()
}

#[test]
fn repetition_threshold_exhaustive() {
    let mut rng = ChaCha12Rng::seed_from_u64(50);
    for block_len in [3usize, 5, 7] {
        let block: Vec<usize> = (0..block_len).collect();
        let logicals: Vec<LogicalAmplitudes> =
            (0..5).map(|_| random_logical(&mut rng)).collect();
        for mask in 0..(1u32 << block_len) {
            if mask.count_ones() as usize > block_len / 2 {
                continue;
            }
            for &logical in &logicals {
                let mut state = repetition_codeword(logical, block_len).unwrap();
                for q in 0..block_len {
                    if mask & (1 << q) != 0 {
                        apply_error(&mut state, &ErrorSpec::new(q, ErrorKind::X)).unwrap();
                    }
                }
                let mut draw = sampler(&mut rng);
                repetition_correct(&mut state, &block, &mut draw).unwrap();
                let fidelity =
                    logical_fidelity(&state, logical, CodeKind::Repetition(block_len)).unwrap();
                assert!(
                    (fidelity - 1.0).abs() < 1e-12,
                    "block {block_len}, error mask {mask:#b}: fidelity {fidelity}"
                );
            }
        }
    }
}

#[test]
fn repetition_above_threshold_fails() {
    let mut rng = ChaCha12Rng::seed_from_u64(51);
    for block_len in [3usize, 5, 7] {
        let block: Vec<usize> = (0..block_len).collect();
        let logical = random_logical(&mut rng);
        let mut state = repetition_codeword(logical, block_len).unwrap();
        // Flip a majority: qubits 0 ..= block_len/2.
        for q in 0..=(block_len / 2) {
            apply_error(&mut state, &ErrorSpec::new(q, ErrorKind::X)).unwrap();
        }
        let mut draw = sampler(&mut rng);
        repetition_correct(&mut state, &block, &mut draw).unwrap();
        let fidelity = logical_fidelity(&state, logical, CodeKind::Repetition(block_len)).unwrap();
        assert!(fidelity < 1.0 - 1e-6, "block {block_len}: fidelity {fidelity}");
        // The decoder lands on the logically flipped word.
        let flipped = LogicalAmplitudes::new(logical.beta, logical.alpha).unwrap();
        let flipped_fidelity =
            logical_fidelity(&state, flipped, CodeKind::Repetition(block_len)).unwrap();
        assert!((flipped_fidelity - 1.0).abs() < 1e-12);
    }
}

#[test]
fn phase_code_threshold_exhaustive() {
    let mut rng = ChaCha12Rng::seed_from_u64(52);
    for block_len in [3usize, 5, 7] {
        let block: Vec<usize> = (0..block_len).collect();
        let logicals: Vec<LogicalAmplitudes> =
            (0..5).map(|_| random_logical(&mut rng)).collect();
        for mask in 0..(1u32 << block_len) {
            if mask.count_ones() as usize > block_len / 2 {
                continue;
            }
            for &logical in &logicals {
                let mut state = phase_codeword(logical, block_len).unwrap();
                for q in 0..block_len {
                    if mask & (1 << q) != 0 {
                        apply_error(&mut state, &ErrorSpec::new(q, ErrorKind::Z)).unwrap();
                    }
                }
                let mut draw = sampler(&mut rng);
                phase_repetition_correct(&mut state, &block, &mut draw).unwrap();
                let fidelity =
                    logical_fidelity(&state, logical, CodeKind::PhaseRep(block_len)).unwrap();
                assert!(
                    (fidelity - 1.0).abs() < 1e-12,
                    "block {block_len}, error mask {mask:#b}: fidelity {fidelity}"
                );
            }
        }
    }
}

#[test]
fn phase_code_above_threshold_fails() {
    let mut rng = ChaCha12Rng::seed_from_u64(53);
    let logical = random_logical(&mut rng);
    let mut state = phase_codeword(logical, 3).unwrap();
    for q in [0, 1] {
        apply_error(&mut state, &ErrorSpec::new(q, ErrorKind::Z)).unwrap();
    }
    let mut draw = sampler(&mut rng);
    phase_repetition_correct(&mut state, &[0, 1, 2], &mut draw).unwrap();
    let fidelity = logical_fidelity(&state, logical, CodeKind::PhaseRep(3)).unwrap();
    assert!(fidelity < 1.0 - 1e-6);
}

#[test]
fn shor_random_continuous_errors() {
    let mut rng = ChaCha12Rng::seed_from_u64(54);
    for qubit in 0..9 {
        for _ in 0..5 {
            let logical = random_logical(&mut rng);
            let theta = rng.gen::<f64>() * 2.0 * std::f64::consts::PI;
            let z = 1.0 - 2.0 * rng.gen::<f64>();
            let azimuth = rng.gen::<f64>() * std::f64::consts::TAU;
            let r = (1.0 - z * z).sqrt();
            let axis = [r * azimuth.cos(), r * azimuth.sin(), z];

            let mut state = shor_codeword(logical).unwrap();
            apply_error(&mut state, &ErrorSpec::new(qubit, ErrorKind::Unitary { theta, axis }))
                .unwrap();
            let mut draw = sampler(&mut rng);
            shor_correct(&mut state, &mut draw).unwrap();
            let fidelity = logical_fidelity(&state, logical, CodeKind::Shor).unwrap();
            assert!(
                (fidelity - 1.0).abs() < 1e-10,
                "qubit {qubit}, theta {theta}: fidelity {fidelity}"
            );
        }
    }
}

#[test]
fn stabilizer_measurement_preserves_codewords() {
    let mut rng = ChaCha12Rng::seed_from_u64(55);
    let logical = random_logical(&mut rng);
    let reference = shor_codeword(logical).unwrap();
    for stabilizer in shor_stabilizers() {
        let mut state = reference.clone();
        let parity = measure_pauli_parity(&mut state, &stabilizer, rng.gen()).unwrap();
        assert_eq!(parity.outcome, 1, "stabilizer {stabilizer}");
        assert!((parity.probability - 1.0).abs() < 1e-12);
        assert!(state.max_amplitude_deviation(&reference).unwrap() < 1e-12);
    }
}
