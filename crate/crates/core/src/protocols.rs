//! Encoding pipelines built from collective pulses.
//!
//! Two routes map an unknown qubit `α|0⟩ + β|1⟩` onto a repetition block
//! with a constant number of entangling pulses:
//!
//! * [`encode_protocol1`] — quadratic pulse, one two-qubit phase gate,
//!   quadratic pulse (three entangling pulses for any even block size);
//! * [`encode_protocol2`] — one quadratic pulse over all qubits followed by a
//!   single measurement of the data qubit (one entangling pulse).
//!
//! The CNOT ladder ([`encode_cnot_baseline`]) is the linear-cost baseline the
//! pulse counts are compared against. [`shor_encode`] chains protocol 1 with
//! per-triplet GHZ pulses to produce the nine-qubit code, and
//! [`to_phase_basis`] conjugates a repetition block into its phase-code twin.
//!
//! Every pipeline emits an [`EncodingReport`] listing the applied pulses, the
//! entangling-pulse count, the known residual phase it removed, and the
//! fidelity against the ideal code word.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;

use crate::codes;
use crate::fmath;
use crate::statevec::{
    Gate1q, LogicalAmplitudes, MeasurementRecord, PulseKind, PulseSpec, StateVector,
};
use crate::{Error, Result};

/// Linear-pulse angle that closes the GHZ pulse on odd-size target sets.
///
/// Recorded by the dense-oracle sweep over {π/2, -π/2, π, -π}
/// (`oracle::DerivationTarget::OddNLinearAngle`); the ±π candidates scatter
/// the state over four components, and +π/2 is the first candidate reaching
/// full two-component support.
pub const ODD_N_LINEAR_ANGLE: f64 = FRAC_PI_2;

/// Per-triplet `Rz` angle that turns the measured triplet phases into the
/// canonical (−, +) sign pattern of the nine-qubit code words. Equals
/// `π - γ0` for the recorded triplet phase `γ0`.
pub const SHOR_TRIPLET_FIX_ANGLE: f64 = FRAC_PI_2;

/// Residual phase between the two nine-qubit code words after the
/// per-triplet fix-ups. Single-qubit rotations shift both code words
/// together, so this phase is recorded rather than removed.
pub const SHOR_LOGICAL_PHASE: f64 = -FRAC_PI_2;

/// Total probability allowed outside the two GHZ components.
pub const GHZ_LEAK_TOLERANCE: f64 = 1e-10;

/// Wraps an angle into (-π, π].
pub fn wrap_phase(angle: f64) -> f64 {
    let tau = 2.0 * PI;
    let mut a = angle % tau;
    if a <= -PI {
        a += tau;
    } else if a > PI {
        a -= tau;
    }
    a
}

/// Absolute distance between two angles modulo 2π.
pub fn phase_distance(a: f64, b: f64) -> f64 {
    fmath::abs(wrap_phase(a - b))
}

/// Coefficient phases `(e^{-iπ/4}, e^{i(π/4 + Nπ/2)})` produced by the
/// quadratic pulse on an all-zeros register of even size.
pub fn ghz_phases_from_zero(n_targets: usize) -> (f64, f64) {
    (
        -FRAC_PI_4,
        wrap_phase(FRAC_PI_4 + n_targets as f64 * FRAC_PI_2),
    )
}

/// Same pulse on the all-ones register: the two phases swap places.
pub fn ghz_phases_from_one(n_targets: usize) -> (f64, f64) {
    let (phase0, phase1) = ghz_phases_from_zero(n_targets);
    (phase1, phase0)
}

/// The known relative phase `arg(-i·(-1)^{N/2})` left on the all-ones
/// component by protocol 1 before its fix-up (N even).
pub fn protocol1_residual_phase(n_appended: usize) -> f64 {
    debug_assert!(n_appended.is_multiple_of(2));
    if (n_appended / 2).is_multiple_of(2) {
        -FRAC_PI_2
    } else {
        FRAC_PI_2
    }
}

/// Relative phase `(N+2)π/2 mod 2π` carried by the collective-flip component
/// of protocol 2's intermediate state (N odd, pulse on all N+1 qubits).
///
/// Measured by the dense oracle
/// (`oracle::DerivationTarget::Protocol2IntermediatePhase`); note it sits a
/// quarter turn away from the `(N+1)π/2` one might expect from the
/// even-block formula, which is what the adjudication report tracks.
pub fn protocol2_intermediate_phase(n_appended: usize) -> f64 {
    debug_assert!(n_appended % 2 == 1);
    wrap_phase((n_appended as f64 + 2.0) * FRAC_PI_2)
}

/// Protocols covered by an [`EncodingReport`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Protocol {
    P1,
    P2,
    CnotBaseline,
    Shor,
}

/// Full pulse/phase accounting for one encoding run.
#[derive(Clone, Debug)]
pub struct EncodingReport {
    pub protocol: Protocol,
    pub n_appended: usize,
    pub pulses: Vec<PulseSpec>,
    pub entangling_pulse_count: usize,
    pub measurement: Option<MeasurementRecord>,
    /// The known relative phase present before the fix-up pulse, in (-π, π].
    pub residual_phase: f64,
    pub fidelity_to_target: f64,
}

impl EncodingReport {
    fn new(protocol: Protocol, n_appended: usize) -> Self {
        Self {
            protocol,
            n_appended,
            pulses: Vec::new(),
            entangling_pulse_count: 0,
            measurement: None,
            residual_phase: 0.0,
            fidelity_to_target: 0.0,
        }
    }

    fn push_pulse(&mut self, pulse: PulseSpec) {
        if pulse.kind.is_entangling() {
            self.entangling_pulse_count += 1;
        }
        self.pulses.push(pulse);
    }
}

/// Coefficient phases of the two GHZ components produced by a pulse.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GhzPhasePair {
    /// Phase of the all-zeros component.
    pub phase0: f64,
    /// Phase of the all-ones component.
    pub phase1: f64,
}

impl GhzPhasePair {
    /// `phase1 - phase0`, wrapped into (-π, π].
    pub fn relative(&self) -> f64 {
        wrap_phase(self.phase1 - self.phase0)
    }
}

fn targets_mask(targets: &[usize]) -> usize {
    targets.iter().fold(0usize, |m, &q| m | (1usize << q))
}

/// Applies the GHZ pulse sequence (quadratic pulse at θ = π/2, plus the
/// linear pulse at [`ODD_N_LINEAR_ANGLE`] for odd-size target sets),
/// recording the pulses in `report` when given. No support check.
fn apply_ghz_sequence(
    state: &mut StateVector,
    targets: &[usize],
    report: Option<&mut EncodingReport>,
) -> Result<()> {
    state.apply_jx2(FRAC_PI_2, targets)?;
    let mut pulses = vec![PulseSpec::new(PulseKind::Jx2, FRAC_PI_2, targets.to_vec())];
    if targets.len() % 2 == 1 {
        state.apply_jx(ODD_N_LINEAR_ANGLE, targets)?;
        pulses.push(PulseSpec::new(
            PulseKind::Jx,
            ODD_N_LINEAR_ANGLE,
            targets.to_vec(),
        ));
    }
    if let Some(report) = report {
        for pulse in pulses {
            report.push_pulse(pulse);
        }
    }
    Ok(())
}

/// Probability outside the all-zeros/all-ones patterns of the target set; a
/// macroscopic value signals a wrong [`ODD_N_LINEAR_ANGLE`].
fn ghz_support_leak(state: &StateVector, targets: &[usize]) -> f64 {
    let mask = targets_mask(targets);
    1.0 - state.pattern_probability(mask, false) - state.pattern_probability(mask, true)
}

fn check_ghz_support(state: &StateVector, targets: &[usize]) -> Result<()> {
    let leak = ghz_support_leak(state, targets);
    if leak > GHZ_LEAK_TOLERANCE {
        return Err(Error::ProtocolFailure {
            leaked_probability: leak,
        });
    }
    Ok(())
}

/// Raw GHZ pulse: applies the pulse sequence with no phase extraction and no
/// support contract, for inputs that need not factor over the targets.
pub fn ghz_pulse_raw(state: &StateVector, targets: &[usize]) -> Result<StateVector> {
    let mut out = state.clone();
    apply_ghz_sequence(&mut out, targets, None)?;
    Ok(out)
}

/// GHZ pulse with phase extraction.
///
/// The input must be a tensor factor of |0…0⟩ or |1…1⟩ on `targets` (the
/// rest of the register is arbitrary). Returns the pulsed state together
/// with the coefficient phases of the two components.
pub fn ghz_pulse(state: &StateVector, targets: &[usize]) -> Result<(StateVector, GhzPhasePair)> {
    let mask = targets_mask(targets);
    let p_zero = state.pattern_probability(mask, false);
    let p_one = state.pattern_probability(mask, true);
    let input_ones = if fmath::abs(p_zero - 1.0) <= 1e-12 {
        false
    } else if fmath::abs(p_one - 1.0) <= 1e-12 {
        true
    } else {
        return Err(Error::InvalidArgument(
            "ghz_pulse input must be |0...0> or |1...1> on the target set; \
             use ghz_pulse_raw otherwise"
                .into(),
        ));
    };

    let out = ghz_pulse_raw(state, targets)?;
    check_ghz_support(&out, targets)?;

    // Overlaps with the input re-pinned to the all-zeros / all-ones pattern
    // give the two coefficients directly: <ref_b|out> = e^{i phase_b}/sqrt(2).
    let flip_to_zero = if input_ones { mask } else { 0 };
    let flip_to_one = if input_ones { 0 } else { mask };
    let mut overlap0 = Complex64::new(0.0, 0.0);
    let mut overlap1 = Complex64::new(0.0, 0.0);
    for (b, amp) in out.amplitudes().iter().enumerate() {
        overlap0 += state.amplitude(b ^ flip_to_zero).conj() * amp;
        overlap1 += state.amplitude(b ^ flip_to_one).conj() * amp;
    }
    for overlap in [overlap0, overlap1] {
        if fmath::abs(overlap.norm() - core::f64::consts::FRAC_1_SQRT_2) > 1e-10 {
            return Err(Error::ProtocolFailure {
                leaked_probability: fmath::abs(overlap.norm_sqr() - 0.5),
            });
        }
    }
    Ok((
        out,
        GhzPhasePair {
            phase0: overlap0.arg(),
            phase1: overlap1.arg(),
        },
    ))
}

/// Protocol 1 with the default phase-gate partner (qubit 1).
pub fn encode_protocol1(
    logical: LogicalAmplitudes,
    n_appended: usize,
) -> Result<(StateVector, EncodingReport)> {
    encode_protocol1_with_partner(logical, n_appended, 1)
}

/// Protocol 1: quadratic pulse on the appended block, phase gate between the
/// data qubit and an arbitrary appended partner, quadratic pulse completing
/// the period, then a single `Rz` removing the known residual phase.
///
/// Requires `n_appended` even and >= 2. Three entangling pulses regardless
/// of the block size.
pub fn encode_protocol1_with_partner(
    logical: LogicalAmplitudes,
    n_appended: usize,
    partner: usize,
) -> Result<(StateVector, EncodingReport)> {
    if n_appended < 2 || !n_appended.is_multiple_of(2) {
        return Err(Error::InvalidArgument(
            "protocol 1 requires an even number of appended qubits (>= 2)".into(),
        ));
    }
    if partner == 0 || partner > n_appended {
        return Err(Error::InvalidArgument(
            "phase-gate partner must be one of the appended qubits".into(),
        ));
    }

    let mut report = EncodingReport::new(Protocol::P1, n_appended);
    let appended: Vec<usize> = (1..=n_appended).collect();
    let mut state = StateVector::from_logical(logical, n_appended)?;

    state.apply_jx2(FRAC_PI_2, &appended)?;
    report.push_pulse(PulseSpec::new(PulseKind::Jx2, FRAC_PI_2, appended.clone()));

    state.apply_cz(0, partner)?;
    report.push_pulse(PulseSpec::new(PulseKind::Cz, 0.0, vec![0, partner]));

    state.apply_jx2(1.5 * PI, &appended)?;
    report.push_pulse(PulseSpec::new(PulseKind::Jx2, 1.5 * PI, appended));

    let residual = protocol1_residual_phase(n_appended);
    state.apply_1q(0, Gate1q::Rz(-residual))?;
    report.push_pulse(PulseSpec::new(PulseKind::Rz, -residual, vec![0]));

    report.residual_phase = residual;
    let target = codes::repetition_codeword(logical, n_appended + 1)?;
    report.fidelity_to_target = state.fidelity(&target)?;
    Ok((state, report))
}

/// How protocol 2 resolves the measurement branch.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BranchSelect {
    /// Sample the outcome from the given uniform draw in [0, 1).
    Sampled(f64),
    /// Force the |0⟩ outcome.
    Forced0,
    /// Force the |1⟩ outcome.
    Forced1,
    /// Post-select and return both branches.
    Both,
}

/// Correction applied to the appended block on the |1⟩ outcome.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlipCorrection {
    /// Simultaneous X pulses on every appended qubit (the primary path).
    RabiFlip,
    /// A quadratic pulse at θ = π. On an odd-size block this acts as the
    /// identity up to a global phase rather than exchanging |0…0⟩ and
    /// |1…1⟩, so the branch fidelity records the failure; kept as an
    /// empirically adjudicated alternate path.
    CollectivePulse,
}

/// One resolved branch of protocol 2. The returned state lives on the N
/// appended qubits; the measured data qubit is dropped from the register.
#[derive(Clone, Debug)]
pub struct Protocol2Branch {
    pub state: StateVector,
    pub report: EncodingReport,
}

/// Protocol-2 result: one branch, or both post-selected branches.
#[derive(Clone, Debug)]
pub enum Protocol2Output {
    Single(Protocol2Branch),
    Both {
        zero: Protocol2Branch,
        one: Protocol2Branch,
    },
}

/// Protocol 2 with the primary flip correction.
pub fn encode_protocol2(
    logical: LogicalAmplitudes,
    n_appended: usize,
    branch: BranchSelect,
) -> Result<Protocol2Output> {
    encode_protocol2_with_correction(logical, n_appended, branch, FlipCorrection::RabiFlip)
}

/// Protocol 2: one quadratic pulse over all N+1 qubits, then a σ_z
/// measurement of the data qubit. The |0⟩ branch needs only the phase
/// fix-up; the |1⟩ branch first flips the appended block. Requires
/// `n_appended` odd and >= 3, so the pulsed set is even and needs no linear
/// pulse. One entangling pulse on the primary path.
pub fn encode_protocol2_with_correction(
    logical: LogicalAmplitudes,
    n_appended: usize,
    branch: BranchSelect,
    correction: FlipCorrection,
) -> Result<Protocol2Output> {
    if n_appended < 3 || n_appended % 2 != 1 {
        return Err(Error::InvalidArgument(
            "protocol 2 requires an odd number of appended qubits (>= 3)".into(),
        ));
    }

    let all_qubits: Vec<usize> = (0..=n_appended).collect();
    let mut pulsed = StateVector::from_logical(logical, n_appended)?;
    pulsed.apply_jx2(FRAC_PI_2, &all_qubits)?;
    let pulse = PulseSpec::new(PulseKind::Jx2, FRAC_PI_2, all_qubits);

    let resolve = |outcome_request: Option<u8>, sample: Option<f64>| -> Result<Protocol2Branch> {
        let mut state = pulsed.clone();
        let record = match (outcome_request, sample) {
            (Some(outcome), _) => state.project_z(0, outcome)?,
            (None, Some(u)) => state.measure_z(0, u)?,
            _ => unreachable!(),
        };
        finish_protocol2_branch(state, record, logical, n_appended, &pulse, correction)
    };

    match branch {
        BranchSelect::Sampled(u) => Ok(Protocol2Output::Single(resolve(None, Some(u))?)),
        BranchSelect::Forced0 => Ok(Protocol2Output::Single(resolve(Some(0), None)?)),
        BranchSelect::Forced1 => Ok(Protocol2Output::Single(resolve(Some(1), None)?)),
        BranchSelect::Both => Ok(Protocol2Output::Both {
            zero: resolve(Some(0), None)?,
            one: resolve(Some(1), None)?,
        }),
    }
}

fn finish_protocol2_branch(
    state: StateVector,
    record: MeasurementRecord,
    logical: LogicalAmplitudes,
    n_appended: usize,
    pulse: &PulseSpec,
    correction: FlipCorrection,
) -> Result<Protocol2Branch> {
    let mut report = EncodingReport::new(Protocol::P2, n_appended);
    report.push_pulse(pulse.clone());
    report.push_pulse(PulseSpec::new(PulseKind::MeasureZ, 0.0, vec![0]));
    report.measurement = Some(record);

    // The data qubit is consumed by the measurement; the logical block is
    // the N appended qubits (indices shift down by one).
    let mut state = state.drop_qubit(0, record.outcome)?;
    let block: Vec<usize> = (0..n_appended).collect();

    let phi = protocol2_intermediate_phase(n_appended);
    let residual = if record.outcome == 0 {
        phi
    } else {
        match correction {
            FlipCorrection::RabiFlip => {
                for &q in &block {
                    state.apply_1q(q, Gate1q::X)?;
                    report.push_pulse(PulseSpec::new(PulseKind::X, 0.0, vec![q + 1]));
                }
            }
            FlipCorrection::CollectivePulse => {
                state.apply_jx2(PI, &block)?;
                report.push_pulse(PulseSpec::new(
                    PulseKind::Jx2,
                    PI,
                    block.iter().map(|q| q + 1).collect(),
                ));
            }
        }
        // After the flip the phase sits on the α component, so the relative
        // phase of |1…1⟩ against |0…0⟩ is -φ.
        -phi
    };

    state.apply_1q(0, Gate1q::Rz(-residual))?;
    report.push_pulse(PulseSpec::new(PulseKind::Rz, -residual, vec![1]));
    report.residual_phase = wrap_phase(residual);

    let target = codes::repetition_codeword(logical, n_appended)?;
    report.fidelity_to_target = state.fidelity(&target)?;
    Ok(Protocol2Branch { state, report })
}

/// Baseline encoder: N CNOT gates with the data qubit as control. Exact
/// output with zero residual phase, at the cost of N entangling pulses.
pub fn encode_cnot_baseline(
    logical: LogicalAmplitudes,
    n_appended: usize,
) -> Result<(StateVector, EncodingReport)> {
    if n_appended == 0 {
        return Err(Error::InvalidArgument(
            "at least one appended qubit is required".into(),
        ));
    }
    let mut report = EncodingReport::new(Protocol::CnotBaseline, n_appended);
    let mut state = StateVector::from_logical(logical, n_appended)?;
    for target in 1..=n_appended {
        state.apply_cnot(0, target)?;
        report.push_pulse(PulseSpec::new(PulseKind::Cnot, 0.0, vec![0, target]));
    }
    report.residual_phase = 0.0;
    let target = codes::repetition_codeword(logical, n_appended + 1)?;
    report.fidelity_to_target = state.fidelity(&target)?;
    Ok((state, report))
}

/// The nine-qubit construction together with its recorded phases.
#[derive(Clone, Debug)]
pub struct ShorEncoding {
    pub state: StateVector,
    pub report: EncodingReport,
    /// Triplet phases measured on the |000⟩ probe (the α branch).
    pub triplet_phases_on_zero: GhzPhasePair,
    /// Triplet phases measured on the |111⟩ probe (the β branch).
    pub triplet_phases_on_one: GhzPhasePair,
    /// Residual phase on the β code word after the per-triplet fix-ups.
    pub logical_phase: f64,
}

/// Shor encoder entry point: protocol 1 with N = 8 produces the nine-qubit
/// repetition state, then one GHZ pulse per triplet and a per-triplet `Rz`
/// fix-up produce the code words with the canonical (−, +) signs, up to the
/// recorded [`ShorEncoding::logical_phase`] on the β word.
pub fn shor_encode(logical: LogicalAmplitudes) -> Result<ShorEncoding> {
    let (state, report) = encode_protocol1(logical, 8)?;
    shor_encode_from_repetition(logical, state, report)
}

/// Cross-check variant that seeds the triplet pulses from the CNOT-ladder
/// repetition state instead of protocol 1.
pub fn shor_encode_via_cnot(logical: LogicalAmplitudes) -> Result<ShorEncoding> {
    let (state, report) = encode_cnot_baseline(logical, 8)?;
    shor_encode_from_repetition(logical, state, report)
}

fn shor_encode_from_repetition(
    logical: LogicalAmplitudes,
    mut state: StateVector,
    mut report: EncodingReport,
) -> Result<ShorEncoding> {
    report.protocol = Protocol::Shor;

    // Characterize the triplet pulse on 3-qubit probes; the phases are
    // input-independent, so this stays a legal unknown-state protocol.
    let probe_targets = [0usize, 1, 2];
    let (_, phases_on_zero) = ghz_pulse(&StateVector::zero_state(3)?, &probe_targets)?;
    let (_, phases_on_one) = ghz_pulse(
        &StateVector::new_basis_state(3, "111")?,
        &probe_targets,
    )?;

    let gamma0 = phases_on_zero.relative();
    let gamma1 = phases_on_one.relative();
    if phase_distance(gamma0 - gamma1, PI) > 1e-10 {
        return Err(Error::ProtocolFailure {
            leaked_probability: phase_distance(gamma0 - gamma1, PI),
        });
    }
    // One Rz angle maps both branches onto the (−, +) sign pattern.
    let fix_angle = wrap_phase(PI - gamma0);

    for triplet_start in [0usize, 3, 6] {
        let triplet = [triplet_start, triplet_start + 1, triplet_start + 2];
        apply_ghz_sequence(&mut state, &triplet, Some(&mut report))?;
        check_ghz_support(&state, &triplet)?;
        state.apply_1q(triplet_start, Gate1q::Rz(fix_angle))?;
        report.push_pulse(PulseSpec::new(PulseKind::Rz, fix_angle, vec![triplet_start]));
    }

    let logical_phase = wrap_phase(3.0 * (phases_on_one.phase0 - phases_on_zero.phase0));
    report.residual_phase = logical_phase;

    let target = codes::shor_codeword_with_phase(logical, logical_phase)?;
    report.fidelity_to_target = state.fidelity(&target)?;

    Ok(ShorEncoding {
        state,
        report,
        triplet_phases_on_zero: phases_on_zero,
        triplet_phases_on_one: phases_on_one,
        logical_phase,
    })
}

/// Hadamard on every qubit: maps a repetition block `α|0…0⟩ + β|1…1⟩` to the
/// phase code `α|+…+⟩ + β|-…-⟩`.
pub fn to_phase_basis(state: &StateVector) -> StateVector {
    let mut out = state.clone();
    for q in 0..out.n_qubits() {
        out.apply_1q(q, Gate1q::H).expect("qubit index in range");
    }
    out
}
