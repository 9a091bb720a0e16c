//! Error injection and correction.
//!
//! Syndromes are extracted by direct Born-rule projection of Pauli-string
//! parities (no ancilla qubits are simulated). Corrections are always Pauli
//! gates on the flagged qubits. Randomness enters through explicit uniform
//! samples supplied by the caller, one per parity measurement.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::fmath;
use crate::statevec::{
    Gate1q, LogicalAmplitudes, StateVector, DEGENERATE_BRANCH_PROBABILITY, NORM_TOLERANCE,
};
use crate::{Error, Result};

/// One-qubit error kinds. `Unitary` applies `exp(-i(θ/2)·(axis·σ))` for a
/// unit-norm axis, realizing the continuous case.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ErrorKind {
    X,
    Z,
    Y,
    Unitary { theta: f64, axis: [f64; 3] },
}

/// A single-qubit error injected at a chosen location.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorSpec {
    pub qubit: usize,
    pub kind: ErrorKind,
}

impl ErrorSpec {
    pub fn new(qubit: usize, kind: ErrorKind) -> Self {
        Self { qubit, kind }
    }
}

/// Per-qubit Pauli letters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PauliLetter {
    I,
    X,
    Y,
    Z,
}

impl PauliLetter {
    pub fn as_char(&self) -> char {
        match self {
            PauliLetter::I => 'I',
            PauliLetter::X => 'X',
            PauliLetter::Y => 'Y',
            PauliLetter::Z => 'Z',
        }
    }
}

/// A Pauli string over the full register; letter `j` acts on qubit `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PauliString {
    letters: Vec<PauliLetter>,
}

impl PauliString {
    pub fn identity(n_qubits: usize) -> Self {
        Self {
            letters: vec![PauliLetter::I; n_qubits],
        }
    }

    /// Builder: sets one letter.
    pub fn with(mut self, qubit: usize, letter: PauliLetter) -> Self {
        self.letters[qubit] = letter;
        self
    }

    /// `Z_a Z_b` on an `n`-qubit register.
    pub fn zz(n_qubits: usize, a: usize, b: usize) -> Self {
        Self::identity(n_qubits)
            .with(a, PauliLetter::Z)
            .with(b, PauliLetter::Z)
    }

    /// `X_a X_b` on an `n`-qubit register.
    pub fn xx(n_qubits: usize, a: usize, b: usize) -> Self {
        Self::identity(n_qubits)
            .with(a, PauliLetter::X)
            .with(b, PauliLetter::X)
    }

    /// X on every listed qubit.
    pub fn x_support(n_qubits: usize, qubits: &[usize]) -> Self {
        let mut s = Self::identity(n_qubits);
        for &q in qubits {
            s.letters[q] = PauliLetter::X;
        }
        s
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[PauliLetter] {
        &self.letters
    }

    /// Number of non-identity letters.
    pub fn weight(&self) -> usize {
        self.letters
            .iter()
            .filter(|l| **l != PauliLetter::I)
            .count()
    }

    /// Applies the string to raw amplitudes, returning `P|ψ⟩`.
    fn apply_to(&self, amps: &[Complex64]) -> Vec<Complex64> {
        let mut flip_mask = 0usize; // X and Y flip the bit
        let mut phase_mask = 0usize; // Z and Y read the bit sign
        let mut y_count = 0u32;
        for (q, letter) in self.letters.iter().enumerate() {
            match letter {
                PauliLetter::I => {}
                PauliLetter::X => flip_mask |= 1 << q,
                PauliLetter::Y => {
                    flip_mask |= 1 << q;
                    phase_mask |= 1 << q;
                    y_count += 1;
                }
                PauliLetter::Z => phase_mask |= 1 << q,
            }
        }
        // i^{#Y} overall, then (-1) for every set bit under a Z or Y letter.
        let i_power = match y_count % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        let mut out = vec![Complex64::new(0.0, 0.0); amps.len()];
        for (b, amp) in amps.iter().enumerate() {
            let sign = if (b & phase_mask).count_ones().is_multiple_of(2) {
                1.0
            } else {
                -1.0
            };
            out[b ^ flip_mask] = i_power * sign * amp;
        }
        out
    }
}

impl fmt::Display for PauliString {
    /// Letters printed qubit 0 first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for letter in &self.letters {
            write!(f, "{}", letter.as_char())?;
        }
        Ok(())
    }
}

/// One measured stabilizer parity.
#[derive(Clone, Debug)]
pub struct ParityOutcome {
    pub pauli: PauliString,
    pub outcome: i8,
    pub probability: f64,
}

/// One applied correction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Correction {
    pub qubit: usize,
    pub pauli: PauliLetter,
}

/// Parity outcomes plus the corrections they triggered.
#[derive(Clone, Debug, Default)]
pub struct SyndromeResult {
    pub parities: Vec<ParityOutcome>,
    pub corrections: Vec<Correction>,
}

/// Codes understood by [`logical_fidelity`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CodeKind {
    Repetition(usize),
    PhaseRep(usize),
    Shor,
}

/// Applies a single-qubit error operator; always unitary.
pub fn apply_error(state: &mut StateVector, error: &ErrorSpec) -> Result<()> {
    match error.kind {
        ErrorKind::X => state.apply_1q(error.qubit, Gate1q::X),
        ErrorKind::Z => state.apply_1q(error.qubit, Gate1q::Z),
        ErrorKind::Y => {
            let i = Complex64::new(0.0, 1.0);
            state.apply_unitary_1q(
                error.qubit,
                [
                    [Complex64::new(0.0, 0.0), -i],
                    [i, Complex64::new(0.0, 0.0)],
                ],
            )
        }
        ErrorKind::Unitary { theta, axis } => {
            let norm = fmath::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
            if fmath::abs(norm - 1.0) > NORM_TOLERANCE {
                return Err(Error::InvalidArgument(format!(
                    "rotation axis must have unit norm, got {norm}"
                )));
            }
            if !theta.is_finite() {
                return Err(Error::InvalidArgument("non-finite rotation angle".into()));
            }
            let c = fmath::cos(theta / 2.0);
            let s = fmath::sin(theta / 2.0);
            let (ax, ay, az) = (axis[0], axis[1], axis[2]);
            // cos(θ/2) I - i sin(θ/2) (axis · σ)
            let u = [
                [
                    Complex64::new(c, -s * az),
                    Complex64::new(-s * ay, -s * ax),
                ],
                [Complex64::new(s * ay, -s * ax), Complex64::new(c, s * az)],
            ];
            state.apply_unitary_1q(error.qubit, u)
        }
    }
}

/// Projects onto a ±1 eigenspace of a Pauli string, sampled by the Born
/// rule. Deterministic (and state-preserving) when the state is an
/// eigenstate.
pub fn measure_pauli_parity(
    state: &mut StateVector,
    pauli: &PauliString,
    sample: f64,
) -> Result<ParityOutcome> {
    if pauli.len() != state.n_qubits() {
        return Err(Error::DimensionMismatch {
            left: 1 << pauli.len(),
            right: state.dim(),
        });
    }
    if pauli.weight() == 0 {
        return Err(Error::InvalidArgument(
            "cannot measure the identity string".into(),
        ));
    }
    if !(0.0..1.0).contains(&sample) {
        return Err(Error::InvalidArgument(format!(
            "measurement sample {sample} outside [0, 1)"
        )));
    }

    let applied = pauli.apply_to(state.amplitudes());
    let mut p_plus = 0.0;
    for (a, pa) in state.amplitudes().iter().zip(&applied) {
        p_plus += (a + pa).norm_sqr();
    }
    p_plus = (p_plus / 4.0).clamp(0.0, 1.0);

    let outcome: i8 = if sample < p_plus { 1 } else { -1 };
    let probability = if outcome == 1 { p_plus } else { 1.0 - p_plus };
    if probability < DEGENERATE_BRANCH_PROBABILITY {
        return Err(Error::DegenerateBranch { probability });
    }

    let scale = 0.5 / fmath::sqrt(probability);
    let sign = f64::from(outcome);
    let collapsed: Vec<Complex64> = state
        .amplitudes()
        .iter()
        .zip(&applied)
        .map(|(a, pa)| (a + sign * pa) * scale)
        .collect();
    *state = StateVector::from_amplitudes(collapsed)?;

    Ok(ParityOutcome {
        pauli: pauli.clone(),
        outcome,
        probability,
    })
}

fn validate_block(block: &[usize], n_qubits: usize, min_len: usize) -> Result<()> {
    if block.len() < min_len {
        return Err(Error::InvalidArgument(format!(
            "code block needs at least {min_len} qubits, got {}",
            block.len()
        )));
    }
    let mut mask = 0usize;
    for &q in block {
        if q >= n_qubits {
            return Err(Error::QubitOutOfRange { qubit: q, n_qubits });
        }
        if mask & (1 << q) != 0 {
            return Err(Error::InvalidArgument(format!("duplicate block qubit {q}")));
        }
        mask |= 1 << q;
    }
    Ok(())
}

/// Decodes a chain of pairwise parities into the minimal consistent flip
/// set. The two candidates are complements; the lighter one wins, and a tie
/// (possible only for even block sizes) applies no correction.
fn minority_flip_set(block_len: usize, parities: &[i8]) -> Vec<bool> {
    let mut pattern = vec![false; block_len];
    for (i, &p) in parities.iter().enumerate() {
        pattern[i + 1] = pattern[i] ^ (p == -1);
    }
    let flipped = pattern.iter().filter(|&&b| b).count();
    let unflipped = block_len - flipped;
    if flipped < unflipped {
        pattern
    } else if unflipped < flipped {
        pattern.iter().map(|b| !b).collect()
    } else {
        vec![false; block_len]
    }
}

/// Majority-vote correction of bit flips on a repetition block: measures
/// `Z_i Z_{i+1}` along the block and applies X to the minority side.
/// Restores any error of weight at most ⌊|block|/2⌋ for odd block sizes.
pub fn repetition_correct(
    state: &mut StateVector,
    block: &[usize],
    samples: &mut impl FnMut() -> f64,
) -> Result<SyndromeResult> {
    validate_block(block, state.n_qubits(), 3)?;
    let n = state.n_qubits();
    let mut result = SyndromeResult::default();
    let mut outcomes = Vec::with_capacity(block.len() - 1);
    for pair in block.windows(2) {
        let parity = measure_pauli_parity(state, &PauliString::zz(n, pair[0], pair[1]), samples())?;
        outcomes.push(parity.outcome);
        result.parities.push(parity);
    }
    for (i, flip) in minority_flip_set(block.len(), &outcomes).iter().enumerate() {
        if *flip {
            state.apply_1q(block[i], Gate1q::X)?;
            result.corrections.push(Correction {
                qubit: block[i],
                pauli: PauliLetter::X,
            });
        }
    }
    Ok(result)
}

/// Hadamard-conjugate of [`repetition_correct`]: measures `X_i X_{i+1}` and
/// corrects phase flips with Z, for states in the phase-basis code.
pub fn phase_repetition_correct(
    state: &mut StateVector,
    block: &[usize],
    samples: &mut impl FnMut() -> f64,
) -> Result<SyndromeResult> {
    validate_block(block, state.n_qubits(), 3)?;
    let n = state.n_qubits();
    let mut result = SyndromeResult::default();
    let mut outcomes = Vec::with_capacity(block.len() - 1);
    for pair in block.windows(2) {
        let parity = measure_pauli_parity(state, &PauliString::xx(n, pair[0], pair[1]), samples())?;
        outcomes.push(parity.outcome);
        result.parities.push(parity);
    }
    for (i, flip) in minority_flip_set(block.len(), &outcomes).iter().enumerate() {
        if *flip {
            state.apply_1q(block[i], Gate1q::Z)?;
            result.corrections.push(Correction {
                qubit: block[i],
                pauli: PauliLetter::Z,
            });
        }
    }
    Ok(result)
}

/// The canonical stabilizer generators of the nine-qubit code: pairwise Z
/// parities inside each triplet, plus the two six-qubit X parities across
/// neighboring triplets.
pub fn shor_stabilizers() -> Vec<PauliString> {
    vec![
        PauliString::zz(9, 0, 1),
        PauliString::zz(9, 1, 2),
        PauliString::zz(9, 3, 4),
        PauliString::zz(9, 4, 5),
        PauliString::zz(9, 6, 7),
        PauliString::zz(9, 7, 8),
        PauliString::x_support(9, &[0, 1, 2, 3, 4, 5]),
        PauliString::x_support(9, &[3, 4, 5, 6, 7, 8]),
    ]
}

/// Measures the eight nine-qubit-code stabilizers and applies the indicated
/// Pauli correction. Any single-qubit error — including an arbitrary
/// unitary, which the syndrome collapse discretizes — is corrected exactly.
pub fn shor_correct(
    state: &mut StateVector,
    samples: &mut impl FnMut() -> f64,
) -> Result<SyndromeResult> {
    if state.n_qubits() != 9 {
        return Err(Error::InvalidArgument(format!(
            "the nine-qubit code needs 9 qubits, got {}",
            state.n_qubits()
        )));
    }
    let mut result = SyndromeResult::default();
    for stabilizer in shor_stabilizers() {
        let parity = measure_pauli_parity(state, &stabilizer, samples())?;
        result.parities.push(parity);
    }
    let out: Vec<i8> = result.parities.iter().map(|p| p.outcome).collect();

    // Z-parities locate bit flips within each triplet.
    for triplet in 0..3 {
        let (first, second) = (out[2 * triplet], out[2 * triplet + 1]);
        let flipped = match (first, second) {
            (-1, 1) => Some(3 * triplet),
            (-1, -1) => Some(3 * triplet + 1),
            (1, -1) => Some(3 * triplet + 2),
            _ => None,
        };
        if let Some(q) = flipped {
            state.apply_1q(q, Gate1q::X)?;
            result.corrections.push(Correction {
                qubit: q,
                pauli: PauliLetter::X,
            });
        }
    }

    // X-parities locate the triplet carrying a phase flip; Z on any qubit of
    // that triplet is equivalent modulo the Z stabilizers.
    let phase_triplet = match (out[6], out[7]) {
        (-1, 1) => Some(0),
        (-1, -1) => Some(1),
        (1, -1) => Some(2),
        _ => None,
    };
    if let Some(t) = phase_triplet {
        let q = 3 * t;
        state.apply_1q(q, Gate1q::Z)?;
        result.corrections.push(Correction {
            qubit: q,
            pauli: PauliLetter::Z,
        });
    }
    Ok(result)
}

/// `α|0…0⟩ + β|1…1⟩` on `n` qubits.
pub fn repetition_codeword(logical: LogicalAmplitudes, n_qubits: usize) -> Result<StateVector> {
    if !logical.is_normalized() {
        return Err(Error::NotNormalized {
            norm_sqr: logical.norm_sqr(),
        });
    }
    if n_qubits < 2 {
        return Err(Error::InvalidArgument(
            "a repetition block needs at least 2 qubits".into(),
        ));
    }
    let dim = 1usize << n_qubits;
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    amps[0] = logical.alpha;
    amps[dim - 1] = logical.beta;
    StateVector::from_amplitudes(amps)
}

/// `α|+…+⟩ + β|-…-⟩` on `n` qubits.
pub fn phase_codeword(logical: LogicalAmplitudes, n_qubits: usize) -> Result<StateVector> {
    let mut state = repetition_codeword(logical, n_qubits)?;
    for q in 0..n_qubits {
        state.apply_1q(q, Gate1q::H)?;
    }
    Ok(state)
}

/// The canonical nine-qubit code word with the (−, +) triplet signs:
/// `α[(|000⟩-|111⟩)/√2]^⊗3 + β[(|000⟩+|111⟩)/√2]^⊗3`.
pub fn shor_codeword(logical: LogicalAmplitudes) -> Result<StateVector> {
    shor_codeword_with_phase(logical, 0.0)
}

/// Nine-qubit code word with an extra recorded phase on the β word.
pub fn shor_codeword_with_phase(
    logical: LogicalAmplitudes,
    beta_phase: f64,
) -> Result<StateVector> {
    if !logical.is_normalized() {
        return Err(Error::NotNormalized {
            norm_sqr: logical.norm_sqr(),
        });
    }
    let weight = 0.5 * core::f64::consts::FRAC_1_SQRT_2; // (1/sqrt2)^3 per expanded term
    let alpha = logical.alpha * weight;
    let beta = logical.beta * Complex64::from_polar(weight, beta_phase);
    let mut amps = vec![Complex64::new(0.0, 0.0); 512];
    for combo in 0..8usize {
        let mut index = 0usize;
        let mut ones = 0u32;
        for triplet in 0..3 {
            if combo & (1 << triplet) != 0 {
                index |= 0b111 << (3 * triplet);
                ones += 1;
            }
        }
        let sign = if ones.is_multiple_of(2) { 1.0 } else { -1.0 };
        amps[index] = alpha * sign + beta;
    }
    StateVector::from_amplitudes(amps)
}

/// |⟨codeword(l)|s⟩|² against the canonical code word built directly.
pub fn logical_fidelity(
    state: &StateVector,
    logical: LogicalAmplitudes,
    code: CodeKind,
) -> Result<f64> {
    let codeword = match code {
        CodeKind::Repetition(n) => repetition_codeword(logical, n)?,
        CodeKind::PhaseRep(n) => phase_codeword(logical, n)?,
        CodeKind::Shor => shor_codeword(logical)?,
    };
    state.fidelity(&codeword)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn logical(theta: f64, phi: f64) -> LogicalAmplitudes {
        LogicalAmplitudes::from_bloch_angles(theta, phi)
    }

    fn no_randomness() -> impl FnMut() -> f64 {
        || 0.5
    }

    #[test]
    fn apply_error_pauli_cases() {
        let mut s = StateVector::zero_state(3).unwrap();
        apply_error(&mut s, &ErrorSpec::new(2, ErrorKind::X)).unwrap();
        assert!((s.amplitude(4).norm_sqr() - 1.0).abs() < 1e-12);

        // Z on |+> gives |->
        let mut s = StateVector::zero_state(1).unwrap();
        s.apply_1q(0, Gate1q::H).unwrap();
        apply_error(&mut s, &ErrorSpec::new(0, ErrorKind::Z)).unwrap();
        let minus = {
            let mut m = StateVector::new_basis_state(1, "1").unwrap();
            m.apply_1q(0, Gate1q::H).unwrap();
            m
        };
        assert!((s.fidelity(&minus).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unitary_pi_about_x_is_minus_i_x() {
        let mut s = StateVector::zero_state(1).unwrap();
        apply_error(
            &mut s,
            &ErrorSpec::new(
                0,
                ErrorKind::Unitary {
                    theta: PI,
                    axis: [1.0, 0.0, 0.0],
                },
            ),
        )
        .unwrap();
        assert!((s.amplitude(1) - Complex64::new(0.0, -1.0)).norm() < 1e-12);
    }

    #[test]
    fn unitary_rejects_bad_axis() {
        let mut s = StateVector::zero_state(1).unwrap();
        let err = ErrorSpec::new(
            0,
            ErrorKind::Unitary {
                theta: 0.5,
                axis: [0.9, 0.0, 0.0],
            },
        );
        assert!(apply_error(&mut s, &err).is_err());
    }

    #[test]
    fn parity_on_eigenstates_is_deterministic() {
        let l = logical(0.8, 1.2);
        let mut s = repetition_codeword(l, 2).unwrap();
        let before = s.clone();
        let parity = measure_pauli_parity(&mut s, &PauliString::zz(2, 0, 1), 0.999).unwrap();
        assert_eq!(parity.outcome, 1);
        assert!((parity.probability - 1.0).abs() < 1e-12);
        assert!(s.max_amplitude_deviation(&before).unwrap() < 1e-12);

        // X-corrupted word: deterministic -1.
        let mut s = repetition_codeword(l, 2).unwrap();
        apply_error(&mut s, &ErrorSpec::new(0, ErrorKind::X)).unwrap();
        let parity = measure_pauli_parity(&mut s, &PauliString::zz(2, 0, 1), 0.0).unwrap();
        assert_eq!(parity.outcome, -1);
        assert!((parity.probability - 1.0).abs() < 1e-12);
    }

    #[test]
    fn six_qubit_x_parity_on_shor_codeword() {
        let l = logical(1.4, -0.6);
        let mut s = shor_codeword(l).unwrap();
        let stab = PauliString::x_support(9, &[0, 1, 2, 3, 4, 5]);
        let parity = measure_pauli_parity(&mut s, &stab, 0.7).unwrap();
        assert_eq!(parity.outcome, 1);
        assert!((parity.probability - 1.0).abs() < 1e-12);
    }

    #[test]
    fn parity_rejects_identity_and_bad_dims() {
        let mut s = StateVector::zero_state(2).unwrap();
        assert!(measure_pauli_parity(&mut s, &PauliString::identity(2), 0.5).is_err());
        assert!(measure_pauli_parity(&mut s, &PauliString::zz(3, 0, 1), 0.5).is_err());
    }

    #[test]
    fn repetition_no_error_leaves_state() {
        let l = logical(0.4, 2.0);
        let mut s = repetition_codeword(l, 5).unwrap();
        let result = repetition_correct(&mut s, &[0, 1, 2, 3, 4], &mut no_randomness()).unwrap();
        assert!(result.corrections.is_empty());
        assert!(result.parities.iter().all(|p| p.outcome == 1));
        assert!((logical_fidelity(&s, l, CodeKind::Repetition(5)).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn repetition_single_flip_on_qubit_3() {
        let l = logical(1.0, 0.0);
        let mut s = repetition_codeword(l, 5).unwrap();
        apply_error(&mut s, &ErrorSpec::new(3, ErrorKind::X)).unwrap();
        let result = repetition_correct(&mut s, &[0, 1, 2, 3, 4], &mut no_randomness()).unwrap();
        assert_eq!(
            result.corrections,
            vec![Correction {
                qubit: 3,
                pauli: PauliLetter::X
            }]
        );
        assert!((logical_fidelity(&s, l, CodeKind::Repetition(5)).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn repetition_over_threshold_flips_logical() {
        let l = logical(0.9, 0.3);
        let mut s = repetition_codeword(l, 5).unwrap();
        for q in [0, 2, 4] {
            apply_error(&mut s, &ErrorSpec::new(q, ErrorKind::X)).unwrap();
        }
        repetition_correct(&mut s, &[0, 1, 2, 3, 4], &mut no_randomness()).unwrap();
        // Three flips on five qubits: decode lands on the logically flipped
        // word (β, α), not on the original.
        assert!(logical_fidelity(&s, l, CodeKind::Repetition(5)).unwrap() < 1.0 - 1e-6);
        let flipped = LogicalAmplitudes::new(l.beta, l.alpha).unwrap();
        assert!(
            (logical_fidelity(&s, flipped, CodeKind::Repetition(5)).unwrap() - 1.0).abs() < 1e-12
        );
    }

    #[test]
    fn phase_code_corrects_z_and_ignores_out_of_model_x() {
        let l = logical(2.1, 0.2);
        let mut s = phase_codeword(l, 3).unwrap();
        apply_error(&mut s, &ErrorSpec::new(1, ErrorKind::Z)).unwrap();
        let result = phase_repetition_correct(&mut s, &[0, 1, 2], &mut no_randomness()).unwrap();
        assert_eq!(
            result.corrections,
            vec![Correction {
                qubit: 1,
                pauli: PauliLetter::Z
            }]
        );
        assert!((logical_fidelity(&s, l, CodeKind::PhaseRep(3)).unwrap() - 1.0).abs() < 1e-12);

        // No error: identity.
        let mut s = phase_codeword(l, 3).unwrap();
        let result = phase_repetition_correct(&mut s, &[0, 1, 2], &mut no_randomness()).unwrap();
        assert!(result.corrections.is_empty());

        // Bit flip is outside this code's error model.
        let mut s = phase_codeword(l, 3).unwrap();
        apply_error(&mut s, &ErrorSpec::new(0, ErrorKind::X)).unwrap();
        phase_repetition_correct(&mut s, &[0, 1, 2], &mut no_randomness()).unwrap();
        assert!(logical_fidelity(&s, l, CodeKind::PhaseRep(3)).unwrap() < 1.0 - 1e-6);
    }

    #[test]
    fn shor_no_error_trivial_syndrome() {
        let l = logical(0.7, 1.9);
        let mut s = shor_codeword(l).unwrap();
        let result = shor_correct(&mut s, &mut no_randomness()).unwrap();
        assert!(result.corrections.is_empty());
        assert!(result.parities.iter().all(|p| p.outcome == 1));
        assert!((logical_fidelity(&s, l, CodeKind::Shor).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn shor_corrects_x_on_qubit_4() {
        let l = logical(1.1, 0.8);
        let mut s = shor_codeword(l).unwrap();
        apply_error(&mut s, &ErrorSpec::new(4, ErrorKind::X)).unwrap();
        let result = shor_correct(&mut s, &mut no_randomness()).unwrap();
        // Middle qubit of the second triplet: both of that triplet's
        // Z-parities flag it.
        assert_eq!(result.parities[2].outcome, -1);
        assert_eq!(result.parities[3].outcome, -1);
        assert_eq!(
            result.corrections,
            vec![Correction {
                qubit: 4,
                pauli: PauliLetter::X
            }]
        );
        assert!((logical_fidelity(&s, l, CodeKind::Shor).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn shor_corrects_all_27_pauli_errors() {
        let l = logical(2.4, -1.0);
        for qubit in 0..9 {
            for kind in [ErrorKind::X, ErrorKind::Y, ErrorKind::Z] {
                let mut s = shor_codeword(l).unwrap();
                apply_error(&mut s, &ErrorSpec::new(qubit, kind)).unwrap();
                shor_correct(&mut s, &mut no_randomness()).unwrap();
                let f = logical_fidelity(&s, l, CodeKind::Shor).unwrap();
                assert!(
                    (f - 1.0).abs() < 1e-10,
                    "{kind:?} on qubit {qubit}: fidelity {f}"
                );
            }
        }
    }

    #[test]
    fn shor_corrects_continuous_error_example() {
        let l = logical(1.3, 0.4);
        let mut s = shor_codeword(l).unwrap();
        apply_error(
            &mut s,
            &ErrorSpec::new(
                7,
                ErrorKind::Unitary {
                    theta: 1.234,
                    axis: [0.6, 0.0, 0.8],
                },
            ),
        )
        .unwrap();
        let mut counter = 0u32;
        let mut samples = move || {
            counter += 1;
            // Spread the draws so both syndrome branches get exercised.
            (counter as f64 * 0.31) % 1.0
        };
        shor_correct(&mut s, &mut samples).unwrap();
        assert!((logical_fidelity(&s, l, CodeKind::Shor).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn logical_fidelity_orthogonal_input_is_zero() {
        let l = logical(0.6, 0.9);
        let s = repetition_codeword(l, 3).unwrap();
        assert!(logical_fidelity(&s, l.orthogonal(), CodeKind::Repetition(3)).unwrap() < 1e-12);
    }

    #[test]
    fn pauli_string_display_and_weight() {
        let p = PauliString::identity(4)
            .with(0, PauliLetter::X)
            .with(2, PauliLetter::Z);
        assert_eq!(p.to_string(), "XIZI");
        assert_eq!(p.weight(), 2);
    }
}
