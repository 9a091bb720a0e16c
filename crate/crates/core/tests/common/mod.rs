#![allow(dead_code)]

//! Shared helpers for the integration tests.

use num_complex::Complex64;
use otsim_core::statevec::{LogicalAmplitudes, StateVector};
use rand::Rng;

/// Dense random normalized state over `n` qubits.
pub fn random_state(rng: &mut impl Rng, n_qubits: usize) -> StateVector {
    let dim = 1usize << n_qubits;
    loop {
        let amps: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-3 {
            let amps = amps.into_iter().map(|a| a / norm).collect();
            return StateVector::from_amplitudes(amps).unwrap();
        }
    }
}

/// Random point on the Bloch sphere.
pub fn random_logical(rng: &mut impl Rng) -> LogicalAmplitudes {
    let theta = (1.0 - 2.0 * rng.gen::<f64>()).acos();
    let phi = rng.gen::<f64>() * core::f64::consts::TAU;
    LogicalAmplitudes::from_bloch_angles(theta, phi)
}

/// Random non-empty target subset of `0..n`.
pub fn random_targets(rng: &mut impl Rng, n_qubits: usize) -> Vec<usize> {
    loop {
        let targets: Vec<usize> = (0..n_qubits).filter(|_| rng.gen::<bool>()).collect();
        if !targets.is_empty() {
            return targets;
        }
    }
}
