//! Exact state-vector simulation of collective-pulse logical-qubit encoding.
//!
//! The crate simulates up to 24 qubits with dense complex amplitudes and
//! provides:
//!
//! * [`statevec`] — the state-vector type with exact gate kernels, collective
//!   `Jx²`/`Jx` pulses, projective measurement, and fidelity metrics;
//! * [`protocols`] — encoding pipelines that map an unknown qubit onto a
//!   repetition block with a constant number of entangling pulses, plus the
//!   CNOT-ladder baseline, the nine-qubit code construction, and the
//!   Hadamard-basis transform;
//! * [`codes`] — error injection, stabilizer parity measurement, and
//!   majority-vote / nine-qubit syndrome correction;
//! * [`oracle`] — a deliberately slow dense-matrix engine (Kronecker assembly
//!   plus Hermitian eigendecomposition) used to validate every fast kernel
//!   and to derive the recorded pulse constants.
//!
//! The crate is `no_std` (with `alloc`); randomness always enters through
//! explicit uniform samples so the library itself carries no RNG.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod codes;
mod error;
pub(crate) mod fmath;
pub mod oracle;
pub mod protocols;
pub mod statevec;

pub use error::{Error, Result};
pub use statevec::{
    Gate1q, LogicalAmplitudes, MeasurementRecord, PulseKind, PulseSpec, StateVector,
};
