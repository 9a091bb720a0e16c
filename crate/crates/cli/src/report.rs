//! Machine-readable run reports.
//!
//! JSON is the full format (schema-versioned, byte-identical for a given
//! config and seed except for the `timestamp` field); CSV is a flat
//! projection of the per-trial rows with floats at 17 significant digits.

use std::io::Write;
use std::path::Path;

use otsim_core::codes::{ErrorKind, ErrorSpec, SyndromeResult};
use otsim_core::protocols::EncodingReport;
use otsim_core::statevec::{MeasurementRecord, PulseKind, PulseSpec};
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PulseRow {
    pub kind: String,
    pub theta: f64,
    pub targets: Vec<usize>,
}

impl From<&PulseSpec> for PulseRow {
    fn from(pulse: &PulseSpec) -> Self {
        let kind = match pulse.kind {
            PulseKind::Jx2 => "jx2",
            PulseKind::Jx => "jx",
            PulseKind::Cz => "cz",
            PulseKind::Cnot => "cnot",
            PulseKind::H => "h",
            PulseKind::X => "x",
            PulseKind::Z => "z",
            PulseKind::Rz => "rz",
            PulseKind::MeasureZ => "measure_z",
            PulseKind::PauliStringParity => "pauli_parity",
        };
        Self {
            kind: kind.to_string(),
            theta: pulse.theta,
            targets: pulse.targets.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct MeasurementRow {
    pub qubit: usize,
    pub outcome: u8,
    pub probability: f64,
}

impl From<MeasurementRecord> for MeasurementRow {
    fn from(record: MeasurementRecord) -> Self {
        Self {
            qubit: record.qubit,
            outcome: record.outcome,
            probability: record.probability,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ParityRow {
    pub pauli: String,
    pub outcome: i8,
    pub probability: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CorrectionRow {
    pub qubit: usize,
    pub pauli: char,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SyndromeRow {
    pub parities: Vec<ParityRow>,
    pub corrections: Vec<CorrectionRow>,
}

impl From<&SyndromeResult> for SyndromeRow {
    fn from(result: &SyndromeResult) -> Self {
        Self {
            parities: result
                .parities
                .iter()
                .map(|p| ParityRow {
                    pauli: p.pauli.to_string(),
                    outcome: p.outcome,
                    probability: p.probability,
                })
                .collect(),
            corrections: result
                .corrections
                .iter()
                .map(|c| CorrectionRow {
                    qubit: c.qubit,
                    pauli: c.pauli.as_char(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ErrorRow {
    pub qubit: usize,
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axis: Option<[f64; 3]>,
}

impl From<&ErrorSpec> for ErrorRow {
    fn from(spec: &ErrorSpec) -> Self {
        match spec.kind {
            ErrorKind::X => Self::pauli(spec.qubit, 'x'),
            ErrorKind::Y => Self::pauli(spec.qubit, 'y'),
            ErrorKind::Z => Self::pauli(spec.qubit, 'z'),
            ErrorKind::Unitary { theta, axis } => Self {
                qubit: spec.qubit,
                kind: "unitary".to_string(),
                theta: Some(theta),
                axis: Some(axis),
            },
        }
    }
}

impl ErrorRow {
    fn pauli(qubit: usize, letter: char) -> Self {
        Self {
            qubit,
            kind: letter.to_string(),
            theta: None,
            axis: None,
        }
    }
}

/// Everything needed to replay one trial row.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TrialRow {
    pub trial: usize,
    pub case: usize,
    /// Measurement branch for the measurement protocol (0/1), 0 otherwise.
    pub branch: u8,
    pub alpha_re: f64,
    pub alpha_im: f64,
    pub beta_re: f64,
    pub beta_im: f64,
    pub entangling_pulses: usize,
    pub residual_phase: f64,
    pub pulses: Vec<PulseRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measurement: Option<MeasurementRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub syndrome: Option<SyndromeRow>,
    /// Fidelity straight out of the encoder.
    pub fidelity_encoded: f64,
    /// Fidelity scored after error injection and correction (equals
    /// `fidelity_encoded` when no error plan is active).
    pub fidelity_final: f64,
    pub pass: bool,
}

impl TrialRow {
    pub fn encoding_fields(&mut self, report: &EncodingReport) {
        self.entangling_pulses = report.entangling_pulse_count;
        self.residual_phase = report.residual_phase;
        self.pulses = report.pulses.iter().map(PulseRow::from).collect();
        self.measurement = report.measurement.map(MeasurementRow::from);
        self.fidelity_encoded = report.fidelity_to_target;
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Aggregate {
    pub rows: usize,
    pub min_fidelity: f64,
    pub mean_fidelity: f64,
    pub max_entangling_pulses: usize,
    /// Distinct residual phases observed, sorted.
    pub residual_phases: Vec<f64>,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: u32,
    pub artifact_version: String,
    pub config: ExperimentConfig,
    pub config_hash: String,
    pub seed: u64,
    pub timestamp: u64,
    pub trials: Vec<TrialRow>,
    pub aggregate: Aggregate,
}

impl RunReport {
    pub fn assemble(config: ExperimentConfig, rows: Vec<TrialRow>) -> Self {
        let min_fidelity = rows.iter().map(|r| r.fidelity_final).fold(f64::MAX, f64::min);
        let mean_fidelity =
            rows.iter().map(|r| r.fidelity_final).sum::<f64>() / rows.len().max(1) as f64;
        let max_entangling = rows.iter().map(|r| r.entangling_pulses).max().unwrap_or(0);
        let mut phases: Vec<f64> = rows.iter().map(|r| r.residual_phase).collect();
        phases.sort_by(f64::total_cmp);
        phases.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
        let pass = rows.iter().all(|r| r.pass);
        let aggregate = Aggregate {
            rows: rows.len(),
            min_fidelity: if rows.is_empty() { f64::NAN } else { min_fidelity },
            mean_fidelity,
            max_entangling_pulses: max_entangling,
            residual_phases: phases,
            tolerance: config.tolerance,
            pass,
        };
        let config_hash = config_hash(&config);
        let seed = config.seed;
        Self {
            schema: SCHEMA_VERSION,
            artifact_version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            config_hash,
            seed,
            timestamp: unix_timestamp(),
            trials: rows,
            aggregate,
        }
    }

    pub fn to_json(&self) -> anyhow::Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Flat per-trial projection; floats are printed at 17 significant
    /// digits.
    pub fn to_csv(&self) -> anyhow::Result<String> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record([
            "trial",
            "case",
            "branch",
            "alpha_re",
            "alpha_im",
            "beta_re",
            "beta_im",
            "entangling_pulses",
            "residual_phase",
            "error",
            "corrections",
            "fidelity_encoded",
            "fidelity_final",
            "pass",
        ])?;
        for row in &self.trials {
            let error = row
                .error
                .as_ref()
                .map(|e| match (e.theta, e.axis) {
                    (Some(theta), Some(axis)) => format!(
                        "unitary@{} theta={} axis=({},{},{})",
                        e.qubit,
                        sig17(theta),
                        sig17(axis[0]),
                        sig17(axis[1]),
                        sig17(axis[2])
                    ),
                    _ => format!("{}@{}", e.kind, e.qubit),
                })
                .unwrap_or_default();
            let corrections = row
                .syndrome
                .as_ref()
                .map(|s| {
                    s.corrections
                        .iter()
                        .map(|c| format!("{}@{}", c.pauli, c.qubit))
                        .collect::<Vec<_>>()
                        .join(";")
                })
                .unwrap_or_default();
            writer.write_record([
                row.trial.to_string(),
                row.case.to_string(),
                row.branch.to_string(),
                sig17(row.alpha_re),
                sig17(row.alpha_im),
                sig17(row.beta_re),
                sig17(row.beta_im),
                row.entangling_pulses.to_string(),
                sig17(row.residual_phase),
                error,
                corrections,
                sig17(row.fidelity_encoded),
                sig17(row.fidelity_final),
                row.pass.to_string(),
            ])?;
        }
        Ok(String::from_utf8(writer.into_inner()?)?)
    }

    pub fn write(&self, path: &Path, format: crate::config::OutputFormat) -> anyhow::Result<()> {
        let text = match format {
            crate::config::OutputFormat::Json => self.to_json()?,
            crate::config::OutputFormat::Csv => self.to_csv()?,
        };
        let mut file = std::fs::File::create(path)
            .map_err(|e| anyhow::anyhow!("cannot write report to {}: {e}", path.display()))?;
        file.write_all(text.as_bytes())?;
        Ok(())
    }
}

/// 17 significant digits, enough to round-trip any f64.
pub fn sig17(value: f64) -> String {
    format!("{value:.16e}")
}

fn unix_timestamp() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// FNV-1a over the canonical config JSON; provenance, not cryptography.
pub fn config_hash(config: &ExperimentConfig) -> String {
    let canonical = serde_json::to_string(config).unwrap_or_default();
    let mut hash = 0xcbf29ce484222325u64;
    for byte in canonical.as_bytes() {
        hash ^= u64::from(*byte);
        hash = hash.wrapping_mul(0x100000001b3);
    }
    format!("{hash:016x}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{BranchModeCfg, ErrorPlan, LogicalSource, ProtocolKind};

    fn dummy_config() -> ExperimentConfig {
        ExperimentConfig {
            protocol: ProtocolKind::P1,
            n_appended: 4,
            logical: LogicalSource::Random,
            errors: ErrorPlan::None,
            trials: 2,
            branch_mode: BranchModeCfg::Both,
            seed: 9,
            tolerance: 1e-12,
        }
    }

    #[test]
    fn config_hash_is_stable_and_sensitive() {
        let a = config_hash(&dummy_config());
        let b = config_hash(&dummy_config());
        assert_eq!(a, b);
        let mut other = dummy_config();
        other.seed = 10;
        assert_ne!(a, config_hash(&other));
    }

    #[test]
    fn sig17_round_trips() {
        for value in [std::f64::consts::PI, -0.1, 1.0 / 3.0, 1e-300] {
            let text = sig17(value);
            let back: f64 = text.parse().unwrap();
            assert_eq!(value.to_bits(), back.to_bits(), "{text}");
        }
    }

    #[test]
    fn aggregate_recomputable_from_rows() {
        let row = TrialRow {
            trial: 0,
            case: 0,
            branch: 0,
            alpha_re: 1.0,
            alpha_im: 0.0,
            beta_re: 0.0,
            beta_im: 0.0,
            entangling_pulses: 3,
            residual_phase: 0.5,
            pulses: vec![],
            measurement: None,
            error: None,
            syndrome: None,
            fidelity_encoded: 1.0,
            fidelity_final: 1.0,
            pass: true,
        };
        let report = RunReport::assemble(dummy_config(), vec![row.clone(), row]);
        assert_eq!(report.aggregate.rows, 2);
        assert!((report.aggregate.min_fidelity - 1.0).abs() < 1e-15);
        assert_eq!(report.aggregate.max_entangling_pulses, 3);
        assert_eq!(report.aggregate.residual_phases, vec![0.5]);
        assert!(report.aggregate.pass);
    }
}
