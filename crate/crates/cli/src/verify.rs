//! Verification suites behind `otsim verify`.
//!
//! `kernels` replays random collective pulses through both the fast kernels
//! and the dense eigendecomposition oracle. `phases` tabulates every known
//! coefficient phase (GHZ pulse, residual phases, the measurement protocol's
//! intermediate phase) against the closed forms, and carries the two
//! adjudication rows whose documented values differ from the measured ones.
//! `constants` re-derives the recorded constants file.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt::Write as _;

use otsim_core::oracle::{
    build_hamiltonian, dense_evolve, DerivedConstants, HamiltonianKind, RECORDED_CONSTANTS,
};
use otsim_core::protocols::{
    ghz_phases_from_one, ghz_phases_from_zero, ghz_pulse, phase_distance,
    protocol1_residual_phase, protocol2_intermediate_phase, wrap_phase, SHOR_LOGICAL_PHASE,
};
use otsim_core::statevec::{LogicalAmplitudes, StateVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::Serialize;

pub const KERNEL_TOLERANCE: f64 = 1e-12;
pub const PHASE_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, Serialize)]
pub struct KernelReport {
    pub samples: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Fast path vs dense oracle over random (kind, θ, state) triples, n <= 8.
pub fn verify_kernels(samples: usize, seed: u64) -> anyhow::Result<KernelReport> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut max_deviation = 0.0f64;
    for trial in 0..samples {
        let n = rng.gen_range(1..=8);
        let targets: Vec<usize> = loop {
            let t: Vec<usize> = (0..n).filter(|_| rng.gen::<bool>()).collect();
            if !t.is_empty() {
                break t;
            }
        };
        let theta = rng.gen::<f64>() * 2.0 * PI;
        let state = random_state(&mut rng, n);

        let quadratic = trial % 2 == 0;
        let kind = if quadratic {
            HamiltonianKind::Jx2
        } else {
            HamiltonianKind::Jx
        };
        let h = build_hamiltonian(kind, &targets, n).map_err(|e| anyhow::anyhow!("{e}"))?;
        let slow = dense_evolve(&state, &h, theta).map_err(|e| anyhow::anyhow!("{e}"))?;
        let mut fast = state;
        if quadratic {
            fast.apply_jx2(theta, &targets)
        } else {
            fast.apply_jx(theta, &targets)
        }
        .map_err(|e| anyhow::anyhow!("{e}"))?;
        let dev = fast
            .max_amplitude_deviation(&slow)
            .map_err(|e| anyhow::anyhow!("{e}"))?;
        max_deviation = max_deviation.max(dev);
    }
    Ok(KernelReport {
        samples,
        max_deviation,
        tolerance: KERNEL_TOLERANCE,
        pass: max_deviation < KERNEL_TOLERANCE,
    })
}

fn random_state(rng: &mut impl Rng, n_qubits: usize) -> StateVector {
    let dim = 1usize << n_qubits;
    loop {
        let amps: Vec<num_complex::Complex64> = (0..dim)
            .map(|_| num_complex::Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-3 {
            return StateVector::from_amplitudes(amps.into_iter().map(|a| a / norm).collect())
                .expect("normalized by construction");
        }
    }
}

/// One expected-vs-measured row of the phase table.
#[derive(Clone, Debug, Serialize)]
pub struct PhaseRow {
    pub label: String,
    pub measured: f64,
    /// The verified closed form the row is checked against.
    pub expected: f64,
    /// Documented/alternative value tracked for adjudication; not enforced.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub documented: Option<f64>,
    /// Whether a measured/expected mismatch fails the run.
    pub checked: bool,
    pub pass: bool,
}

impl PhaseRow {
    fn checked(label: String, measured: f64, expected: f64) -> Self {
        Self {
            label,
            measured,
            expected,
            documented: None,
            checked: true,
            pass: phase_distance(measured, expected) < PHASE_TOLERANCE,
        }
    }

    fn adjudicated(label: String, measured: f64, expected: f64, documented: f64) -> Self {
        let mut row = Self::checked(label, measured, expected);
        row.documented = Some(documented);
        row
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PhaseReport {
    pub rows: Vec<PhaseRow>,
    pub pass: bool,
}

impl PhaseReport {
    pub fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<44} {:>24} {:>24} {:>24} {:>6}",
            "check", "measured", "expected", "documented", "pass"
        );
        for row in &self.rows {
            let documented = row
                .documented
                .map(|v| format!("{v:.16e}"))
                .unwrap_or_else(|| "-".to_string());
            let _ = writeln!(
                out,
                "{:<44} {:>24.16e} {:>24.16e} {:>24} {:>6}",
                row.label,
                row.measured,
                row.expected,
                documented,
                if row.pass { "ok" } else { "FAIL" }
            );
        }
        out
    }
}

/// Measures every recorded phase and compares against the closed forms.
pub fn verify_phases() -> anyhow::Result<PhaseReport> {
    let mut rows = Vec::new();

    // GHZ pulse phases on even registers, both seed patterns.
    for n in [2usize, 4, 6, 8] {
        let targets: Vec<usize> = (0..n).collect();
        let zeros = StateVector::zero_state(n).map_err(|e| anyhow::anyhow!("{e}"))?;
        let (_, pair) = ghz_pulse(&zeros, &targets).map_err(|e| anyhow::anyhow!("{e}"))?;
        let (want0, want1) = ghz_phases_from_zero(n);
        rows.push(PhaseRow::checked(
            format!("ghz from zeros N={n}: phase(|0..0>)"),
            pair.phase0,
            want0,
        ));
        rows.push(PhaseRow::checked(
            format!("ghz from zeros N={n}: phase(|1..1>)"),
            pair.phase1,
            want1,
        ));

        let ones = StateVector::computational_basis(n, (1 << n) - 1)
            .map_err(|e| anyhow::anyhow!("{e}"))?;
        let (_, pair) = ghz_pulse(&ones, &targets).map_err(|e| anyhow::anyhow!("{e}"))?;
        let (want0, want1) = ghz_phases_from_one(n);
        rows.push(PhaseRow::checked(
            format!("ghz from ones N={n}: phase(|0..0>)"),
            pair.phase0,
            want0,
        ));
        rows.push(PhaseRow::checked(
            format!("ghz from ones N={n}: phase(|1..1>)"),
            pair.phase1,
            want1,
        ));
    }

    // Residual phase of the three-pulse protocol, measured before fix-up.
    for n in [2usize, 4, 6] {
        let logical = LogicalAmplitudes::from_bloch_angles(FRAC_PI_2, 0.3);
        let appended: Vec<usize> = (1..=n).collect();
        let mut state =
            StateVector::from_logical(logical, n).map_err(|e| anyhow::anyhow!("{e}"))?;
        state
            .apply_jx2(FRAC_PI_2, &appended)
            .and_then(|_| state.apply_cz(0, 1))
            .and_then(|_| state.apply_jx2(1.5 * PI, &appended))
            .map_err(|e| anyhow::anyhow!("{e}"))?;
        let top = (1usize << (n + 1)) - 1;
        let measured = wrap_phase(
            (state.amplitude(top) / logical.beta).arg()
                - (state.amplitude(0) / logical.alpha).arg(),
        );
        rows.push(PhaseRow::checked(
            format!("three-pulse residual N={n}"),
            measured,
            protocol1_residual_phase(n),
        ));
    }

    // Intermediate phase of the measurement protocol. Checked against the
    // measured closed form (N+2)π/2; the documented column carries the
    // (N+1)π/2 variant, a quarter turn away.
    for n in [3usize, 5, 7] {
        let all: Vec<usize> = (0..=n).collect();
        let mut state = StateVector::zero_state(n + 1).map_err(|e| anyhow::anyhow!("{e}"))?;
        state
            .apply_jx2(FRAC_PI_2, &all)
            .map_err(|e| anyhow::anyhow!("{e}"))?;
        let top = (1usize << (n + 1)) - 1;
        let measured = wrap_phase(state.amplitude(top).arg() - state.amplitude(0).arg());
        rows.push(PhaseRow::adjudicated(
            format!("measurement-protocol phase N={n}"),
            measured,
            protocol2_intermediate_phase(n),
            wrap_phase((n as f64 + 1.0) * FRAC_PI_2),
        ));
    }

    // Adjudication: does exp(-iπ Jx²) exchange |0…0⟩ and |1…1⟩?  Measured
    // answer: only on even target sets; on odd sets it is the identity up to
    // the global phase e^{-iπ/4}. The documented column carries the claimed
    // full-exchange fidelity.
    for n in [3usize, 5] {
        let targets: Vec<usize> = (0..n).collect();
        let h = build_hamiltonian(HamiltonianKind::Jx2, &targets, n)
            .map_err(|e| anyhow::anyhow!("{e}"))?;
        let zeros = StateVector::zero_state(n).map_err(|e| anyhow::anyhow!("{e}"))?;
        let out = dense_evolve(&zeros, &h, PI).map_err(|e| anyhow::anyhow!("{e}"))?;
        let ones = StateVector::computational_basis(n, (1 << n) - 1)
            .map_err(|e| anyhow::anyhow!("{e}"))?;
        let exchange = out.fidelity(&ones).map_err(|e| anyhow::anyhow!("{e}"))?;
        let identity = out.fidelity(&zeros).map_err(|e| anyhow::anyhow!("{e}"))?;
        rows.push(PhaseRow {
            label: format!("half-period exchange fidelity, odd set n={n}"),
            measured: exchange,
            expected: 0.0,
            documented: Some(1.0),
            checked: true,
            pass: exchange.abs() < PHASE_TOLERANCE,
        });
        rows.push(PhaseRow::checked(
            format!("half-period identity fidelity, odd set n={n}"),
            identity,
            1.0,
        ));
    }
    for n in [2usize, 4] {
        let targets: Vec<usize> = (0..n).collect();
        let h = build_hamiltonian(HamiltonianKind::Jx2, &targets, n)
            .map_err(|e| anyhow::anyhow!("{e}"))?;
        let zeros = StateVector::zero_state(n).map_err(|e| anyhow::anyhow!("{e}"))?;
        let out = dense_evolve(&zeros, &h, PI).map_err(|e| anyhow::anyhow!("{e}"))?;
        let ones = StateVector::computational_basis(n, (1 << n) - 1)
            .map_err(|e| anyhow::anyhow!("{e}"))?;
        let exchange = out.fidelity(&ones).map_err(|e| anyhow::anyhow!("{e}"))?;
        rows.push(PhaseRow::checked(
            format!("half-period exchange fidelity, even set n={n}"),
            exchange,
            1.0,
        ));
    }

    // GHZ-component magnitude sanity: |coefficient| must be 1/sqrt(2).
    {
        let (_, pair) = ghz_pulse(
            &StateVector::zero_state(3).map_err(|e| anyhow::anyhow!("{e}"))?,
            &[0, 1, 2],
        )
        .map_err(|e| anyhow::anyhow!("{e}"))?;
        rows.push(PhaseRow::checked(
            "triplet pulse phase(|000>) from zeros".to_string(),
            pair.phase0,
            -FRAC_PI_4 / 2.0,
        ));
        rows.push(PhaseRow::checked(
            "triplet pulse phase(|111>) from zeros".to_string(),
            pair.phase1,
            3.0 * PI / 8.0,
        ));
        rows.push(PhaseRow::checked(
            "nine-qubit logical phase".to_string(),
            wrap_phase(3.0 * (ghz_phases_from_one_probe()?.phase0 - pair.phase0)),
            SHOR_LOGICAL_PHASE,
        ));
    }

    let pass = rows.iter().all(|r| r.pass);
    Ok(PhaseReport { rows, pass })
}

fn ghz_phases_from_one_probe() -> anyhow::Result<otsim_core::protocols::GhzPhasePair> {
    let (_, pair) = ghz_pulse(
        &StateVector::new_basis_state(3, "111").map_err(|e| anyhow::anyhow!("{e}"))?,
        &[0, 1, 2],
    )
    .map_err(|e| anyhow::anyhow!("{e}"))?;
    Ok(pair)
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstantRow {
    pub key: String,
    pub recorded: f64,
    pub derived: f64,
    pub bit_identical: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstantsReport {
    pub rows: Vec<ConstantRow>,
    pub file_matches: bool,
    pub pass: bool,
}

impl ConstantsReport {
    pub fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<36} {:>24} {:>24} {:>6}",
            "constant", "recorded", "re-derived", "exact"
        );
        for row in &self.rows {
            let _ = writeln!(
                out,
                "{:<36} {:>24.16e} {:>24.16e} {:>6}",
                row.key,
                row.recorded,
                row.derived,
                if row.bit_identical { "yes" } else { "NO" }
            );
        }
        out
    }
}

/// Re-derives every constant and diff-checks the recorded file.
pub fn verify_constants() -> anyhow::Result<ConstantsReport> {
    let derived = DerivedConstants::derive().map_err(|e| anyhow::anyhow!("{e}"))?;
    let recorded = DerivedConstants::recorded().map_err(|e| anyhow::anyhow!("{e}"))?;
    let rows: Vec<ConstantRow> = recorded
        .entries()
        .into_iter()
        .zip(derived.entries())
        .map(|((key, rec), (_, der))| ConstantRow {
            key: key.to_string(),
            recorded: rec,
            derived: der,
            bit_identical: rec.to_bits() == der.to_bits(),
        })
        .collect();
    let file_matches = derived.to_file_text() == RECORDED_CONSTANTS;
    let pass = file_matches && rows.iter().all(|r| r.bit_identical);
    Ok(ConstantsReport {
        rows,
        file_matches,
        pass,
    })
}

/// Fresh derivation rendered as constants-file text (for `--emit`).
pub fn derived_constants_text() -> anyhow::Result<String> {
    Ok(DerivedConstants::derive()
        .map_err(|e| anyhow::anyhow!("{e}"))?
        .to_file_text())
}
