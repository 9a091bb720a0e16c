//! Dense state-vector representation with exact-convention gate kernels.
//!
//! Basis convention: basis index `b` stores qubit `j` in bit `j`, so qubit 0
//! is the least significant bit and, throughout the protocols, the data
//! qubit. Every operation is either unitary or a renormalized projection;
//! normalization is preserved to [`NORM_TOLERANCE`].

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::fmath;
use crate::{Error, Result};

/// Hard cap on the simulator size (dense `2^n` amplitude array).
pub const MAX_QUBITS: usize = 24;

/// Tolerance for normalization and amplitude-equality checks.
pub const NORM_TOLERANCE: f64 = 1e-12;

/// Born probabilities below this make a projection degenerate.
pub const DEGENERATE_BRANCH_PROBABILITY: f64 = 1e-15;

/// The unknown qubit pair (α, β); used to build protocol inputs and to score
/// outputs against the matching code word.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogicalAmplitudes {
    pub alpha: Complex64,
    pub beta: Complex64,
}

impl LogicalAmplitudes {
    /// Validates |α|² + |β|² = 1 within [`NORM_TOLERANCE`].
    pub fn new(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let l = Self { alpha, beta };
        if !l.is_normalized() {
            return Err(Error::NotNormalized {
                norm_sqr: l.norm_sqr(),
            });
        }
        Ok(l)
    }

    /// `(cos(θ/2), e^{iφ} sin(θ/2))`; normalized for any angles.
    pub fn from_bloch_angles(theta: f64, phi: f64) -> Self {
        let alpha = Complex64::new(fmath::cos(theta / 2.0), 0.0);
        let beta = Complex64::from_polar(fmath::sin(theta / 2.0), phi);
        Self { alpha, beta }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.alpha.norm_sqr() + self.beta.norm_sqr()
    }

    pub fn is_normalized(&self) -> bool {
        fmath::abs(self.norm_sqr() - 1.0) <= NORM_TOLERANCE
    }

    /// The orthogonal companion `(-β̄, ᾱ)`.
    pub fn orthogonal(&self) -> Self {
        Self {
            alpha: -self.beta.conj(),
            beta: self.alpha.conj(),
        }
    }
}

/// Single-qubit gates supported by [`StateVector::apply_1q`].
///
/// `Rz(φ)` multiplies the qubit's |1⟩ component by `e^{iφ}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gate1q {
    H,
    X,
    Z,
    Rz(f64),
}

/// Pulse kinds recorded in protocol reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PulseKind {
    Jx2,
    Jx,
    Cz,
    Cnot,
    H,
    X,
    Z,
    Rz,
    MeasureZ,
    PauliStringParity,
}

impl PulseKind {
    /// Collective/two-qubit pulses that count toward the entangling budget.
    pub fn is_entangling(&self) -> bool {
        matches!(self, PulseKind::Jx2 | PulseKind::Cz | PulseKind::Cnot)
    }
}

/// Declarative record of one applied pulse. `theta` is the pulse angle
/// `θ = u·t` (ħ = 1) for `Jx2`/`Jx`/`Rz` and 0 otherwise.
#[derive(Clone, Debug, PartialEq)]
pub struct PulseSpec {
    pub kind: PulseKind,
    pub theta: f64,
    pub targets: Vec<usize>,
}

impl PulseSpec {
    pub fn new(kind: PulseKind, theta: f64, targets: Vec<usize>) -> Self {
        Self {
            kind,
            theta,
            targets,
        }
    }
}

/// Outcome of a σ_z measurement together with its Born probability.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasurementRecord {
    pub qubit: usize,
    pub outcome: u8,
    pub probability: f64,
}

/// Dense state vector over `n` qubits.
#[derive(Clone, Debug)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// All-zeros computational basis state |0…0⟩.
    pub fn zero_state(n_qubits: usize) -> Result<Self> {
        Self::computational_basis(n_qubits, 0)
    }

    /// Basis state |index⟩ with the index read in the bit convention above.
    pub fn computational_basis(n_qubits: usize, index: usize) -> Result<Self> {
        check_qubit_count(n_qubits)?;
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::InvalidArgument(format!(
                "basis index {index} out of range for {n_qubits} qubits"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    /// Basis state from a bit string; `bits` is read as a binary literal, so
    /// `new_basis_state(2, "10")` sets qubit 1 and clears qubit 0.
    pub fn new_basis_state(n_qubits: usize, bits: &str) -> Result<Self> {
        check_qubit_count(n_qubits)?;
        if bits.len() != n_qubits {
            return Err(Error::InvalidArgument(format!(
                "bit string of length {} does not match {n_qubits} qubits",
                bits.len()
            )));
        }
        let mut index = 0usize;
        for c in bits.chars() {
            index <<= 1;
            match c {
                '0' => {}
                '1' => index |= 1,
                other => {
                    return Err(Error::InvalidArgument(format!(
                        "bit string may only contain 0/1, got {other:?}"
                    )))
                }
            }
        }
        Self::computational_basis(n_qubits, index)
    }

    /// `(α|0⟩ + β|1⟩) ⊗ |0…0⟩` over `n_appended + 1` qubits; qubit 0 is the
    /// data qubit.
    pub fn from_logical(logical: LogicalAmplitudes, n_appended: usize) -> Result<Self> {
        if n_appended == 0 {
            return Err(Error::InvalidArgument(
                "at least one appended qubit is required".into(),
            ));
        }
        if !logical.is_normalized() {
            return Err(Error::NotNormalized {
                norm_sqr: logical.norm_sqr(),
            });
        }
        let n_qubits = n_appended + 1;
        check_qubit_count(n_qubits)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1usize << n_qubits];
        amps[0] = logical.alpha;
        amps[1] = logical.beta;
        Ok(Self { n_qubits, amps })
    }

    /// Wraps a raw amplitude array; the length must be a power of two and the
    /// vector normalized within [`NORM_TOLERANCE`].
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let dim = amps.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "amplitude array length {dim} is not a power of two >= 2"
            )));
        }
        let n_qubits = dim.trailing_zeros() as usize;
        check_qubit_count(n_qubits)?;
        let state = Self { n_qubits, amps };
        let norm_sqr = state.norm_sqr();
        if fmath::abs(norm_sqr - 1.0) > NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(state)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum()
    }

    /// Total probability on basis states where all `mask` bits equal the
    /// pattern (all zero, or all one).
    pub(crate) fn pattern_probability(&self, mask: usize, ones: bool) -> f64 {
        let want = if ones { mask } else { 0 };
        self.amps
            .iter()
            .enumerate()
            .filter(|(b, _)| b & mask == want)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.n_qubits {
            return Err(Error::QubitOutOfRange {
                qubit,
                n_qubits: self.n_qubits,
            });
        }
        Ok(())
    }

    /// Validates a target list (non-empty, distinct, in range) and returns
    /// its bit mask.
    fn targets_mask(&self, targets: &[usize]) -> Result<usize> {
        if targets.is_empty() {
            return Err(Error::InvalidArgument("empty target set".into()));
        }
        let mut mask = 0usize;
        for &q in targets {
            self.check_qubit(q)?;
            let bit = 1usize << q;
            if mask & bit != 0 {
                return Err(Error::InvalidArgument(format!(
                    "duplicate target qubit {q}"
                )));
            }
            mask |= bit;
        }
        Ok(mask)
    }

    #[inline]
    fn debug_assert_normalized(&self) {
        debug_assert!(
            fmath::abs(self.norm_sqr() - 1.0) <= 1e-9,
            "state norm drifted: {}",
            self.norm_sqr()
        );
    }

    /// Applies an arbitrary 2x2 matrix `[[u00, u01], [u10, u11]]` to `qubit`.
    pub fn apply_unitary_1q(&mut self, qubit: usize, u: [[Complex64; 2]; 2]) -> Result<()> {
        self.check_qubit(qubit)?;
        self.apply_unitary_1q_unchecked(qubit, u);
        self.debug_assert_normalized();
        Ok(())
    }

    fn apply_unitary_1q_unchecked(&mut self, qubit: usize, u: [[Complex64; 2]; 2]) {
        let step = 1usize << qubit;
        for base in (0..self.amps.len()).step_by(2 * step) {
            for offset in 0..step {
                let i = base + offset;
                let j = i + step;
                let a = self.amps[i];
                let b = self.amps[j];
                self.amps[i] = u[0][0] * a + u[0][1] * b;
                self.amps[j] = u[1][0] * a + u[1][1] * b;
            }
        }
    }

    fn hadamard_unchecked(&mut self, qubit: usize) {
        let step = 1usize << qubit;
        for base in (0..self.amps.len()).step_by(2 * step) {
            for offset in 0..step {
                let i = base + offset;
                let j = i + step;
                let a = self.amps[i];
                let b = self.amps[j];
                self.amps[i] = FRAC_1_SQRT_2 * (a + b);
                self.amps[j] = FRAC_1_SQRT_2 * (a - b);
            }
        }
    }

    /// Applies H, X, Z, or Rz(φ) to one qubit.
    pub fn apply_1q(&mut self, qubit: usize, gate: Gate1q) -> Result<()> {
        self.check_qubit(qubit)?;
        let step = 1usize << qubit;
        match gate {
            Gate1q::H => self.hadamard_unchecked(qubit),
            Gate1q::X => {
                for base in (0..self.amps.len()).step_by(2 * step) {
                    for offset in 0..step {
                        self.amps.swap(base + offset, base + offset + step);
                    }
                }
            }
            Gate1q::Z => {
                for (b, amp) in self.amps.iter_mut().enumerate() {
                    if b & step != 0 {
                        *amp = -*amp;
                    }
                }
            }
            Gate1q::Rz(phi) => {
                if !phi.is_finite() {
                    return Err(Error::InvalidArgument("non-finite Rz angle".into()));
                }
                let phase = Complex64::from_polar(1.0, phi);
                for (b, amp) in self.amps.iter_mut().enumerate() {
                    if b & step != 0 {
                        *amp *= phase;
                    }
                }
            }
        }
        self.debug_assert_normalized();
        Ok(())
    }

    /// Applies `exp(-iθ Jx²)` with `Jx = (1/2) Σ_{j ∈ targets} σ_x^{(j)}`.
    ///
    /// Fast path: conjugate by Hadamard on every target (σ_x → σ_z), multiply
    /// the amplitude at index `b` by `exp(-iθ m²)` with
    /// `m = (|targets| - 2·popcount(b ∩ targets)) / 2`, then undo the
    /// Hadamards.
    pub fn apply_jx2(&mut self, theta: f64, targets: &[usize]) -> Result<()> {
        let mask = self.targets_mask(targets)?;
        if !theta.is_finite() {
            return Err(Error::InvalidArgument("non-finite pulse angle".into()));
        }
        for &q in targets {
            self.hadamard_unchecked(q);
        }
        let k = targets.len() as i64;
        let phase_by_weight: Vec<Complex64> = (0..=targets.len())
            .map(|w| {
                let twice_m = k - 2 * w as i64;
                let m_sqr = (twice_m * twice_m) as f64 / 4.0;
                Complex64::from_polar(1.0, -theta * m_sqr)
            })
            .collect();
        for (b, amp) in self.amps.iter_mut().enumerate() {
            let w = (b & mask).count_ones() as usize;
            *amp *= phase_by_weight[w];
        }
        for &q in targets {
            self.hadamard_unchecked(q);
        }
        self.debug_assert_normalized();
        Ok(())
    }

    /// Applies `exp(-iθ Jx)`, i.e. `exp(-i(θ/2)σ_x)` on every target.
    pub fn apply_jx(&mut self, theta: f64, targets: &[usize]) -> Result<()> {
        self.targets_mask(targets)?;
        if !theta.is_finite() {
            return Err(Error::InvalidArgument("non-finite pulse angle".into()));
        }
        let c = Complex64::new(fmath::cos(theta / 2.0), 0.0);
        let s = Complex64::new(0.0, -fmath::sin(theta / 2.0));
        for &q in targets {
            self.apply_unitary_1q_unchecked(q, [[c, s], [s, c]]);
        }
        self.debug_assert_normalized();
        Ok(())
    }

    /// Phase gate: negates every amplitude with both qubit bits set.
    pub fn apply_cz(&mut self, q1: usize, q2: usize) -> Result<()> {
        self.check_qubit(q1)?;
        self.check_qubit(q2)?;
        if q1 == q2 {
            return Err(Error::InvalidArgument(format!(
                "cz requires distinct qubits, got {q1} twice"
            )));
        }
        let both = (1usize << q1) | (1usize << q2);
        for (b, amp) in self.amps.iter_mut().enumerate() {
            if b & both == both {
                *amp = -*amp;
            }
        }
        self.debug_assert_normalized();
        Ok(())
    }

    /// CNOT with the given control and target.
    pub fn apply_cnot(&mut self, control: usize, target: usize) -> Result<()> {
        self.check_qubit(control)?;
        self.check_qubit(target)?;
        if control == target {
            return Err(Error::InvalidArgument(format!(
                "cnot requires distinct qubits, got {control} twice"
            )));
        }
        let cbit = 1usize << control;
        let tbit = 1usize << target;
        for b in 0..self.amps.len() {
            if b & cbit != 0 && b & tbit == 0 {
                self.amps.swap(b, b | tbit);
            }
        }
        self.debug_assert_normalized();
        Ok(())
    }

    fn prob_one(&self, qubit: usize) -> f64 {
        let bit = 1usize << qubit;
        self.amps
            .iter()
            .enumerate()
            .filter(|(b, _)| b & bit != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Measures one qubit in the σ_z basis, collapsing in place.
    ///
    /// `sample` is a uniform draw from [0, 1); outcome 0 is realized when
    /// `sample < P(0)`. The record carries the Born probability of the
    /// realized outcome.
    pub fn measure_z(&mut self, qubit: usize, sample: f64) -> Result<MeasurementRecord> {
        self.check_qubit(qubit)?;
        if !(0.0..1.0).contains(&sample) {
            return Err(Error::InvalidArgument(format!(
                "measurement sample {sample} outside [0, 1)"
            )));
        }
        let p0 = 1.0 - self.prob_one(qubit);
        let outcome = u8::from(sample >= p0);
        self.collapse_z(qubit, outcome)
    }

    /// Forces the projection onto `outcome`; errors on a degenerate branch.
    pub fn project_z(&mut self, qubit: usize, outcome: u8) -> Result<MeasurementRecord> {
        self.check_qubit(qubit)?;
        if outcome > 1 {
            return Err(Error::InvalidArgument(format!(
                "measurement outcome must be 0 or 1, got {outcome}"
            )));
        }
        self.collapse_z(qubit, outcome)
    }

    fn collapse_z(&mut self, qubit: usize, outcome: u8) -> Result<MeasurementRecord> {
        let p1 = self.prob_one(qubit);
        let probability = if outcome == 1 { p1 } else { 1.0 - p1 };
        if probability < DEGENERATE_BRANCH_PROBABILITY {
            return Err(Error::DegenerateBranch { probability });
        }
        let bit = 1usize << qubit;
        let keep = if outcome == 1 { bit } else { 0 };
        let scale = 1.0 / fmath::sqrt(probability);
        for (b, amp) in self.amps.iter_mut().enumerate() {
            if b & bit == keep {
                *amp *= scale;
            } else {
                *amp = Complex64::new(0.0, 0.0);
            }
        }
        self.debug_assert_normalized();
        Ok(MeasurementRecord {
            qubit,
            outcome,
            probability,
        })
    }

    /// Removes a qubit that has already collapsed to `|outcome⟩`, returning
    /// the state of the remaining qubits. Errors if the qubit still has
    /// support on the opposite branch.
    pub fn drop_qubit(&self, qubit: usize, outcome: u8) -> Result<StateVector> {
        self.check_qubit(qubit)?;
        if self.n_qubits < 2 {
            return Err(Error::InvalidArgument(
                "cannot drop the only qubit".into(),
            ));
        }
        let bit = 1usize << qubit;
        let keep = if outcome == 1 { bit } else { 0 };
        let residual: f64 = self
            .amps
            .iter()
            .enumerate()
            .filter(|(b, _)| b & bit != keep)
            .map(|(_, a)| a.norm_sqr())
            .sum();
        if residual > NORM_TOLERANCE {
            return Err(Error::InvalidArgument(format!(
                "qubit {qubit} is not collapsed to |{outcome}>: residual probability {residual}"
            )));
        }
        let mut amps = Vec::with_capacity(self.amps.len() / 2);
        for reduced in 0..self.amps.len() / 2 {
            let low = reduced & (bit - 1);
            let high = (reduced >> qubit) << (qubit + 1);
            amps.push(self.amps[high | keep | low]);
        }
        let norm = fmath::sqrt(amps.iter().map(|a| a.norm_sqr()).sum::<f64>());
        for a in &mut amps {
            *a /= norm;
        }
        StateVector::from_amplitudes(amps)
    }

    /// ⟨self|other⟩.
    pub fn inner_product(&self, other: &StateVector) -> Result<Complex64> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// |⟨self|other⟩|²; insensitive to global phase by construction.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner_product(other)?.norm_sqr())
    }

    /// Largest per-amplitude deviation, with no phase alignment.
    pub fn max_amplitude_deviation(&self, other: &StateVector) -> Result<f64> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

fn check_qubit_count(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 {
        return Err(Error::InvalidArgument("qubit count must be >= 1".into()));
    }
    if n_qubits > MAX_QUBITS {
        return Err(Error::InvalidArgument(format!(
            "qubit count {n_qubits} exceeds the {MAX_QUBITS}-qubit cap"
        )));
    }
    Ok(())
}
