//! Slow, independent brute-force evolution engine.
//!
//! Hamiltonians are assembled as explicit `2^n x 2^n` matrices via Kronecker
//! products and exponentiated through a Hermitian (cyclic Jacobi)
//! eigendecomposition. Nothing here shares code with the fast kernels in
//! [`crate::statevec`]; the oracle exists to validate them and to derive the
//! recorded pulse constants.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::fmath;
use crate::statevec::StateVector;
use crate::{Error, Result};

/// Oracle work is capped at dense 1024x1024 matrices.
pub const ORACLE_MAX_QUBITS: usize = 10;

/// Contents of the checked-in constants file (regenerate with
/// `otsim verify constants --emit <path>`).
pub const RECORDED_CONSTANTS: &str = include_str!("../data/derived_constants.txt");

const HERMITIAN_TOLERANCE: f64 = 1e-12;
const UNITARITY_TOLERANCE: f64 = 1e-12;
const GHZ_SUPPORT_TOLERANCE: f64 = 1e-10;
const MAX_JACOBI_SWEEPS: usize = 64;

/// Dense complex matrix in row-major order.
#[derive(Clone, Debug)]
pub struct DenseOperator {
    dim: usize,
    entries: Vec<Complex64>,
}

impl DenseOperator {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn at(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.entries[row * self.dim + col] = value;
    }

    pub fn scale(&mut self, factor: f64) {
        for e in &mut self.entries {
            *e *= factor;
        }
    }

    pub fn add_assign(&mut self, other: &DenseOperator) -> Result<()> {
        self.check_dim(other)?;
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            *a += b;
        }
        Ok(())
    }

    pub fn matmul(&self, other: &DenseOperator) -> Result<DenseOperator> {
        self.check_dim(other)?;
        let dim = self.dim;
        let mut out = DenseOperator::zeros(dim);
        for r in 0..dim {
            for k in 0..dim {
                let a = self.entries[r * dim + k];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for c in 0..dim {
                    out.entries[r * dim + c] += a * other.entries[k * dim + c];
                }
            }
        }
        Ok(out)
    }

    pub fn adjoint(&self) -> DenseOperator {
        let dim = self.dim;
        let mut out = DenseOperator::zeros(dim);
        for r in 0..dim {
            for c in 0..dim {
                out.entries[c * dim + r] = self.entries[r * dim + c].conj();
            }
        }
        out
    }

    /// Kronecker product with `self` as the most significant factor.
    pub fn kronecker(&self, other: &DenseOperator) -> DenseOperator {
        let dim = self.dim * other.dim;
        let mut out = DenseOperator::zeros(dim);
        for ra in 0..self.dim {
            for ca in 0..self.dim {
                let a = self.entries[ra * self.dim + ca];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for rb in 0..other.dim {
                    for cb in 0..other.dim {
                        let row = ra * other.dim + rb;
                        let col = ca * other.dim + cb;
                        out.entries[row * dim + col] = a * other.entries[rb * other.dim + cb];
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, amps: &[Complex64]) -> Result<Vec<Complex64>> {
        if amps.len() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: amps.len(),
            });
        }
        let out = self
            .entries
            .chunks_exact(self.dim)
            .map(|row| row.iter().zip(amps).map(|(e, a)| e * a).sum())
            .collect();
        Ok(out)
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.entries.iter().map(|e| e.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &DenseOperator) -> Result<f64> {
        self.check_dim(other)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Max |A - A†| entry.
    pub fn hermitian_deviation(&self) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..self.dim {
            for c in r..self.dim {
                let dev = (self.at(r, c) - self.at(c, r).conj()).norm();
                worst = worst.max(dev);
            }
        }
        worst
    }

    /// Max |U†U - I| entry.
    pub fn unitarity_deviation(&self) -> f64 {
        let product = self.adjoint().matmul(self).expect("same dims");
        let mut worst = 0.0f64;
        for r in 0..self.dim {
            for c in 0..self.dim {
                let expected = if r == c { 1.0 } else { 0.0 };
                let dev = (product.at(r, c) - Complex64::new(expected, 0.0)).norm();
                worst = worst.max(dev);
            }
        }
        worst
    }

    fn check_dim(&self, other: &DenseOperator) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }
}

/// Hamiltonians the oracle can assemble.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HamiltonianKind {
    /// `Jx² = [(1/2) Σ σ_x]²`, assembled from the pair expansion
    /// `(|T| I + 2 Σ_{i<j} X_i X_j) / 4` so it stays an independent route
    /// from squaring [`HamiltonianKind::Jx`].
    Jx2,
    /// `Jx = (1/2) Σ σ_x`.
    Jx,
    /// `σ_z ⊗ σ_z` on two qubits.
    ZZ { q1: usize, q2: usize },
}

fn pauli_x() -> DenseOperator {
    let mut m = DenseOperator::zeros(2);
    m.set(0, 1, Complex64::new(1.0, 0.0));
    m.set(1, 0, Complex64::new(1.0, 0.0));
    m
}

fn pauli_z() -> DenseOperator {
    let mut m = DenseOperator::zeros(2);
    m.set(0, 0, Complex64::new(1.0, 0.0));
    m.set(1, 1, Complex64::new(-1.0, 0.0));
    m
}

/// Kronecker-assembles an operator that acts with the given 2x2 factors on
/// the listed qubits and the identity elsewhere. Qubit 0 is the least
/// significant factor.
fn product_operator(n_qubits: usize, factors: &[(usize, &DenseOperator)]) -> DenseOperator {
    let identity = DenseOperator::identity(2);
    let mut acc = DenseOperator::identity(1);
    for qubit in (0..n_qubits).rev() {
        let factor = factors
            .iter()
            .find(|(q, _)| *q == qubit)
            .map(|(_, m)| *m)
            .unwrap_or(&identity);
        acc = acc.kronecker(factor);
    }
    acc
}

fn check_oracle_scale(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 {
        return Err(Error::InvalidArgument("qubit count must be >= 1".into()));
    }
    if n_qubits > ORACLE_MAX_QUBITS {
        return Err(Error::OracleScaleExceeded {
            n_qubits,
            max: ORACLE_MAX_QUBITS,
        });
    }
    Ok(())
}

fn validate_targets(targets: &[usize], n_qubits: usize) -> Result<()> {
    if targets.is_empty() {
        return Err(Error::InvalidArgument("empty target set".into()));
    }
    let mut mask = 0usize;
    for &q in targets {
        if q >= n_qubits {
            return Err(Error::QubitOutOfRange { qubit: q, n_qubits });
        }
        let bit = 1usize << q;
        if mask & bit != 0 {
            return Err(Error::InvalidArgument(format!("duplicate target qubit {q}")));
        }
        mask |= bit;
    }
    Ok(())
}

/// Builds the requested Hamiltonian as an explicit dense matrix.
pub fn build_hamiltonian(
    kind: HamiltonianKind,
    targets: &[usize],
    n_qubits: usize,
) -> Result<DenseOperator> {
    check_oracle_scale(n_qubits)?;
    let dim = 1usize << n_qubits;
    let x = pauli_x();
    match kind {
        HamiltonianKind::Jx => {
            validate_targets(targets, n_qubits)?;
            let mut h = DenseOperator::zeros(dim);
            for &q in targets {
                h.add_assign(&product_operator(n_qubits, &[(q, &x)]))?;
            }
            h.scale(0.5);
            Ok(h)
        }
        HamiltonianKind::Jx2 => {
            validate_targets(targets, n_qubits)?;
            let mut h = DenseOperator::identity(dim);
            h.scale(targets.len() as f64);
            for (i, &qa) in targets.iter().enumerate() {
                for &qb in &targets[i + 1..] {
                    let mut pair = product_operator(n_qubits, &[(qa, &x), (qb, &x)]);
                    pair.scale(2.0);
                    h.add_assign(&pair)?;
                }
            }
            h.scale(0.25);
            Ok(h)
        }
        HamiltonianKind::ZZ { q1, q2 } => {
            if q1 == q2 {
                return Err(Error::InvalidArgument(format!(
                    "zz requires distinct qubits, got {q1} twice"
                )));
            }
            validate_targets(&[q1, q2], n_qubits)?;
            let z = pauli_z();
            Ok(product_operator(n_qubits, &[(q1, &z), (q2, &z)]))
        }
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Returns the real eigenvalues and the unitary of eigenvectors (columns),
/// so that `H = V diag(λ) V†`.
pub fn hermitian_eigen(op: &DenseOperator) -> Result<(Vec<f64>, DenseOperator)> {
    let scale = op.max_abs_entry().max(1.0);
    let herm_dev = op.hermitian_deviation();
    if herm_dev > HERMITIAN_TOLERANCE * scale {
        return Err(Error::NonHermitian {
            max_deviation: herm_dev,
        });
    }

    let dim = op.dim;
    let mut a = op.entries.clone();
    let mut v = DenseOperator::identity(dim).entries;
    let stop = 1e-16 * scale;

    for _sweep in 0..MAX_JACOBI_SWEEPS {
        let mut off_max = 0.0f64;
        for p in 0..dim {
            for q in p + 1..dim {
                off_max = off_max.max(a[p * dim + q].norm());
            }
        }
        if off_max <= stop {
            break;
        }
        for p in 0..dim {
            for q in p + 1..dim {
                let apq = a[p * dim + q];
                let abs_b = apq.norm();
                if abs_b <= stop {
                    continue;
                }
                let app = a[p * dim + p].re;
                let aqq = a[q * dim + q].re;
                // Phase factor e^{iφ} of the off-diagonal entry, then a real
                // Jacobi rotation angle from tan(2θ) = 2|b|/(app - aqq).
                let phase = apq / abs_b;
                let tau = (app - aqq) / (2.0 * abs_b);
                let t = if tau >= 0.0 {
                    1.0 / (tau + fmath::sqrt(1.0 + tau * tau))
                } else {
                    -1.0 / (-tau + fmath::sqrt(1.0 + tau * tau))
                };
                let c = 1.0 / fmath::sqrt(1.0 + t * t);
                let s = t * c;

                let s_conj_phase = s * phase.conj();
                let s_phase = s * phase;

                // A <- A U (columns p, q)
                for k in 0..dim {
                    let akp = a[k * dim + p];
                    let akq = a[k * dim + q];
                    a[k * dim + p] = c * akp + s_conj_phase * akq;
                    a[k * dim + q] = -s_phase * akp + c * akq;
                }
                // A <- U† A (rows p, q)
                for k in 0..dim {
                    let apk = a[p * dim + k];
                    let aqk = a[q * dim + k];
                    a[p * dim + k] = c * apk + s_phase * aqk;
                    a[q * dim + k] = -s_conj_phase * apk + c * aqk;
                }
                // V <- V U
                for k in 0..dim {
                    let vkp = v[k * dim + p];
                    let vkq = v[k * dim + q];
                    v[k * dim + p] = c * vkp + s_conj_phase * vkq;
                    v[k * dim + q] = -s_phase * vkp + c * vkq;
                }
            }
        }
    }

    let eigenvalues = (0..dim).map(|i| a[i * dim + i].re).collect();
    Ok((eigenvalues, DenseOperator { dim, entries: v }))
}

/// `exp(-iθH)` computed from the Hermitian eigendecomposition. The result is
/// checked for unitarity to 1e-12 on every call.
pub fn propagator(h: &DenseOperator, theta: f64) -> Result<DenseOperator> {
    if !theta.is_finite() {
        return Err(Error::InvalidArgument("non-finite pulse angle".into()));
    }
    let (eigenvalues, v) = hermitian_eigen(h)?;
    let dim = h.dim;
    // V diag(e^{-iθλ}) V†
    let mut scaled = v.clone();
    for (col, lambda) in eigenvalues.iter().enumerate() {
        let phase = Complex64::from_polar(1.0, -theta * lambda);
        for row in 0..dim {
            let e = scaled.at(row, col) * phase;
            scaled.set(row, col, e);
        }
    }
    let u = scaled.matmul(&v.adjoint())?;
    let dev = u.unitarity_deviation();
    if dev > UNITARITY_TOLERANCE {
        return Err(Error::UnitarityViolation { max_deviation: dev });
    }
    Ok(u)
}

/// Evolves a state under `exp(-iθH)` via the dense propagator.
pub fn dense_evolve(state: &StateVector, h: &DenseOperator, theta: f64) -> Result<StateVector> {
    if h.dim != state.dim() {
        return Err(Error::DimensionMismatch {
            left: h.dim,
            right: state.dim(),
        });
    }
    let u = propagator(h, theta)?;
    StateVector::from_amplitudes(u.apply(state.amplitudes())?)
}

/// Named derivations; each is an oracle search or extraction that produces
/// `(key, radians)` entries for the constants file.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DerivationTarget {
    /// Linear-pulse angle that closes the GHZ pulse on odd-size target sets,
    /// swept over {π/2, -π/2, π, -π} at n = 3.
    OddNLinearAngle,
    /// Relative phase between the collective-flip and identity components of
    /// the measurement protocol's intermediate state at N = 3.
    Protocol2IntermediatePhase,
    /// Triplet coefficient phases of the nine-qubit construction, plus the
    /// residual logical phase left after the per-triplet fix-ups.
    ShorTripletPhases,
}

/// All oracle-derived constants, in file order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DerivedConstants {
    pub odd_n_linear_angle: f64,
    pub protocol2_intermediate_phase_n3: f64,
    pub shor_triplet_phase0_on_zero: f64,
    pub shor_triplet_phase1_on_zero: f64,
    pub shor_triplet_phase0_on_one: f64,
    pub shor_triplet_phase1_on_one: f64,
    pub shor_triplet_gamma0: f64,
    pub shor_triplet_gamma1: f64,
    pub shor_logical_phase: f64,
}

const CONSTANT_KEYS: [&str; 9] = [
    "odd_n_linear_angle",
    "protocol2_intermediate_phase_n3",
    "shor_triplet_phase0_on_zero",
    "shor_triplet_phase1_on_zero",
    "shor_triplet_phase0_on_one",
    "shor_triplet_phase1_on_one",
    "shor_triplet_gamma0",
    "shor_triplet_gamma1",
    "shor_logical_phase",
];

impl DerivedConstants {
    /// Runs every derivation; deterministic and reproducible bit-for-bit.
    pub fn derive() -> Result<Self> {
        let odd_angle = derive_odd_n_linear_angle()?;
        let p2_phase = derive_protocol2_phase()?;
        let shor = derive_shor_triplet_phases(odd_angle)?;
        Ok(Self {
            odd_n_linear_angle: odd_angle,
            protocol2_intermediate_phase_n3: p2_phase,
            shor_triplet_phase0_on_zero: shor[0],
            shor_triplet_phase1_on_zero: shor[1],
            shor_triplet_phase0_on_one: shor[2],
            shor_triplet_phase1_on_one: shor[3],
            shor_triplet_gamma0: shor[4],
            shor_triplet_gamma1: shor[5],
            shor_logical_phase: shor[6],
        })
    }

    /// Parses the checked-in constants file.
    pub fn recorded() -> Result<Self> {
        Self::from_file_text(RECORDED_CONSTANTS)
    }

    pub fn values(&self) -> [f64; 9] {
        [
            self.odd_n_linear_angle,
            self.protocol2_intermediate_phase_n3,
            self.shor_triplet_phase0_on_zero,
            self.shor_triplet_phase1_on_zero,
            self.shor_triplet_phase0_on_one,
            self.shor_triplet_phase1_on_one,
            self.shor_triplet_gamma0,
            self.shor_triplet_gamma1,
            self.shor_logical_phase,
        ]
    }

    pub fn entries(&self) -> Vec<(&'static str, f64)> {
        CONSTANT_KEYS.iter().copied().zip(self.values()).collect()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.values()
            .iter()
            .zip(other.values())
            .map(|(a, b)| fmath::abs(a - b))
            .fold(0.0, f64::max)
    }

    /// Renders the `key = value` file, radians at 17 significant digits.
    pub fn to_file_text(&self) -> String {
        let mut text = String::from(
            "# Pulse constants derived by the dense oracle (radians).\n\
             # Regenerate with: otsim verify constants --emit <path>\n",
        );
        for (key, value) in self.entries() {
            text.push_str(&format!("{key} = {value:.16e}\n"));
        }
        text
    }

    pub fn from_file_text(text: &str) -> Result<Self> {
        let mut values = [None::<f64>; 9];
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::InvalidArgument(format!("malformed constants line: {line:?}"))
            })?;
            let key = key.trim();
            let value: f64 = value.trim().parse().map_err(|_| {
                Error::InvalidArgument(format!("malformed constant value in line: {line:?}"))
            })?;
            match CONSTANT_KEYS.iter().position(|k| *k == key) {
                Some(i) => values[i] = Some(value),
                None => {
                    return Err(Error::InvalidArgument(format!(
                        "unknown constant key {key:?}"
                    )))
                }
            }
        }
        let mut out = [0.0f64; 9];
        for (i, v) in values.iter().enumerate() {
            out[i] = v.ok_or_else(|| {
                Error::InvalidArgument(format!("missing constant {:?}", CONSTANT_KEYS[i]))
            })?;
        }
        Ok(Self {
            odd_n_linear_angle: out[0],
            protocol2_intermediate_phase_n3: out[1],
            shor_triplet_phase0_on_zero: out[2],
            shor_triplet_phase1_on_zero: out[3],
            shor_triplet_phase0_on_one: out[4],
            shor_triplet_phase1_on_one: out[5],
            shor_triplet_gamma0: out[6],
            shor_triplet_gamma1: out[7],
            shor_logical_phase: out[8],
        })
    }
}

/// Runs one named derivation and returns its `(key, value)` entries.
pub fn derive_constant(target: DerivationTarget) -> Result<Vec<(&'static str, f64)>> {
    match target {
        DerivationTarget::OddNLinearAngle => {
            let angle = derive_odd_n_linear_angle()?;
            Ok(vec![("odd_n_linear_angle", angle)])
        }
        DerivationTarget::Protocol2IntermediatePhase => {
            let phase = derive_protocol2_phase()?;
            Ok(vec![("protocol2_intermediate_phase_n3", phase)])
        }
        DerivationTarget::ShorTripletPhases => {
            let angle = derive_odd_n_linear_angle()?;
            let shor = derive_shor_triplet_phases(angle)?;
            Ok(CONSTANT_KEYS[2..].iter().copied().zip(shor).collect())
        }
    }
}

fn wrap(angle: f64) -> f64 {
    let tau = 2.0 * PI;
    let mut a = angle % tau;
    if a <= -PI {
        a += tau;
    } else if a > PI {
        a -= tau;
    }
    a
}

/// Applies the odd-set GHZ pulse pair (quadratic then linear) with the dense
/// oracle on a 3-qubit basis state and returns the output.
fn oracle_ghz_pulse_3(input_index: usize, linear_angle: f64) -> Result<StateVector> {
    let targets = [0usize, 1, 2];
    let h_quad = build_hamiltonian(HamiltonianKind::Jx2, &targets, 3)?;
    let h_lin = build_hamiltonian(HamiltonianKind::Jx, &targets, 3)?;
    let state = StateVector::computational_basis(3, input_index)?;
    let state = dense_evolve(&state, &h_quad, FRAC_PI_2)?;
    dense_evolve(&state, &h_lin, linear_angle)
}

fn derive_odd_n_linear_angle() -> Result<f64> {
    // First candidate reaching full two-component support wins; candidates
    // below the threshold differ from it by a macroscopic margin (they
    // scatter the state over four components).
    let candidates = [FRAC_PI_2, -FRAC_PI_2, PI, -PI];
    let mut best_score = 0.0f64;
    for &angle in &candidates {
        let out = oracle_ghz_pulse_3(0, angle)?;
        let score = out.amplitude(0).norm_sqr() + out.amplitude(7).norm_sqr();
        if score >= 1.0 - GHZ_SUPPORT_TOLERANCE {
            return Ok(angle);
        }
        best_score = best_score.max(score);
    }
    Err(Error::DerivationFailure(format!(
        "no candidate linear angle reaches two-component support (best score {best_score})"
    )))
}

fn derive_protocol2_phase() -> Result<f64> {
    // N = 3 appended qubits: the collective pulse acts on all 4.
    let targets = [0usize, 1, 2, 3];
    let h = build_hamiltonian(HamiltonianKind::Jx2, &targets, 4)?;

    let from_zero = dense_evolve(&StateVector::computational_basis(4, 0)?, &h, FRAC_PI_2)?;
    let phase_alpha = wrap(from_zero.amplitude(15).arg() - from_zero.amplitude(0).arg());

    // The branch seeded by |1,0,0,0> must carry the same relative phase on
    // its collective flip.
    let from_one = dense_evolve(&StateVector::computational_basis(4, 1)?, &h, FRAC_PI_2)?;
    let phase_beta = wrap(from_one.amplitude(14).arg() - from_one.amplitude(1).arg());

    if fmath::abs(wrap(phase_alpha - phase_beta)) > 1e-10 {
        return Err(Error::DerivationFailure(format!(
            "branch phases disagree: {phase_alpha} vs {phase_beta}"
        )));
    }
    Ok(phase_alpha)
}

fn derive_shor_triplet_phases(linear_angle: f64) -> Result<[f64; 7]> {
    let from_zero = oracle_ghz_pulse_3(0, linear_angle)?;
    let from_one = oracle_ghz_pulse_3(7, linear_angle)?;
    for state in [&from_zero, &from_one] {
        let support = state.amplitude(0).norm_sqr() + state.amplitude(7).norm_sqr();
        if support < 1.0 - GHZ_SUPPORT_TOLERANCE {
            return Err(Error::DerivationFailure(format!(
                "triplet pulse leaks outside GHZ support (support {support})"
            )));
        }
    }
    let phase0_on_zero = from_zero.amplitude(0).arg();
    let phase1_on_zero = from_zero.amplitude(7).arg();
    let phase0_on_one = from_one.amplitude(0).arg();
    let phase1_on_one = from_one.amplitude(7).arg();
    let gamma0 = wrap(phase1_on_zero - phase0_on_zero);
    let gamma1 = wrap(phase1_on_one - phase0_on_one);
    // Residual phase between the two logical code words after the three
    // per-triplet fix-ups (which shift both branches identically).
    let logical_phase = wrap(3.0 * (phase0_on_one - phase0_on_zero));
    Ok([
        phase0_on_zero,
        phase1_on_zero,
        phase0_on_one,
        phase1_on_one,
        gamma0,
        gamma1,
        logical_phase,
    ])
}
