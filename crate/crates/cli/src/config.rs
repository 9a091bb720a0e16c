//! Experiment configuration and validation.

use anyhow::{bail, Context};
use clap::ValueEnum;
use num_complex::Complex64;
use otsim_core::codes::{ErrorKind, ErrorSpec};
use otsim_core::statevec::LogicalAmplitudes;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ProtocolKind {
    P1,
    P2,
    Cnot,
    Shor,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum LogicalSource {
    /// Fresh Bloch-sphere point per trial, drawn from the trial stream.
    Random,
    /// Fixed (α, β) for every trial.
    Explicit {
        alpha_re: f64,
        alpha_im: f64,
        beta_re: f64,
        beta_im: f64,
    },
}

impl LogicalSource {
    pub fn explicit(&self) -> anyhow::Result<Option<LogicalAmplitudes>> {
        match *self {
            LogicalSource::Random => Ok(None),
            LogicalSource::Explicit {
                alpha_re,
                alpha_im,
                beta_re,
                beta_im,
            } => {
                let logical = LogicalAmplitudes::new(
                    Complex64::new(alpha_re, alpha_im),
                    Complex64::new(beta_re, beta_im),
                )
                .map_err(|e| anyhow::anyhow!("{e}"))?;
                Ok(Some(logical))
            }
        }
    }
}

/// One explicitly requested Pauli error, parsed from `x@3` / `y@0` / `z@7`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PauliErrorCase {
    pub qubit: usize,
    pub pauli: char,
}

impl PauliErrorCase {
    pub fn parse(text: &str) -> anyhow::Result<Self> {
        let (letter, qubit) = text
            .split_once('@')
            .with_context(|| format!("error case {text:?} is not of the form x@3"))?;
        let pauli = match letter.trim().to_ascii_lowercase().as_str() {
            "x" => 'x',
            "y" => 'y',
            "z" => 'z',
            other => bail!("unknown Pauli letter {other:?} in error case {text:?}"),
        };
        let qubit = qubit
            .trim()
            .parse()
            .with_context(|| format!("bad qubit index in error case {text:?}"))?;
        Ok(Self { qubit, pauli })
    }

    pub fn to_spec(self) -> ErrorSpec {
        let kind = match self.pauli {
            'x' => ErrorKind::X,
            'y' => ErrorKind::Y,
            _ => ErrorKind::Z,
        };
        ErrorSpec::new(self.qubit, kind)
    }
}

/// What errors each trial injects before correction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "plan")]
pub enum ErrorPlan {
    None,
    /// The listed Pauli errors, one case per entry, injected individually.
    List { cases: Vec<PauliErrorCase> },
    /// All 27 single-Pauli errors of the nine-qubit code.
    ExhaustivePauli,
    /// `count` random single-qubit unitaries, round-robin over positions.
    RandomUnitary { count: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum BranchModeCfg {
    Sampled,
    Forced0,
    Forced1,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

/// A full batch-experiment description; serialized verbatim into the report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub protocol: ProtocolKind,
    pub n_appended: usize,
    pub logical: LogicalSource,
    pub errors: ErrorPlan,
    pub trials: usize,
    pub branch_mode: BranchModeCfg,
    pub seed: u64,
    pub tolerance: f64,
}

impl ExperimentConfig {
    /// Parity and range checks; called before any trial runs.
    pub fn validate(&self) -> anyhow::Result<()> {
        if self.trials == 0 {
            bail!("at least one trial is required");
        }
        if !self.tolerance.is_finite() || self.tolerance <= 0.0 {
            bail!("tolerance must be positive");
        }
        match self.protocol {
            ProtocolKind::P1 => {
                if self.n_appended < 2 || !self.n_appended.is_multiple_of(2) {
                    bail!("protocol p1 requires an even number of appended qubits (>= 2)");
                }
            }
            ProtocolKind::P2 => {
                if self.n_appended < 3 || self.n_appended % 2 != 1 {
                    bail!("protocol p2 requires an odd number of appended qubits (>= 3)");
                }
            }
            ProtocolKind::Cnot => {
                if self.n_appended < 1 {
                    bail!("the cnot baseline requires at least one appended qubit");
                }
            }
            ProtocolKind::Shor => {
                if self.n_appended != 8 {
                    bail!("the shor construction fixes 9 qubits total (8 appended)");
                }
            }
        }
        if self.n_appended > 23 {
            bail!("n_appended exceeds the 24-qubit simulator cap");
        }
        match &self.errors {
            ErrorPlan::ExhaustivePauli | ErrorPlan::RandomUnitary { .. }
                if self.protocol != ProtocolKind::Shor =>
            {
                bail!("error sweeps are defined for the shor protocol only")
            }
            ErrorPlan::RandomUnitary { count } if *count == 0 => {
                bail!("random-unitary sweep needs a positive count")
            }
            ErrorPlan::List { cases } => {
                let block = self.code_block_len();
                for case in cases {
                    if case.qubit >= block {
                        bail!(
                            "error case targets qubit {} outside the {}-qubit code block",
                            case.qubit,
                            block
                        );
                    }
                }
            }
            _ => {}
        }
        self.logical.explicit()?;
        Ok(())
    }

    /// Number of qubits carrying the logical state after encoding.
    pub fn code_block_len(&self) -> usize {
        match self.protocol {
            ProtocolKind::P1 | ProtocolKind::Cnot => self.n_appended + 1,
            ProtocolKind::P2 => self.n_appended,
            ProtocolKind::Shor => 9,
        }
    }
}
