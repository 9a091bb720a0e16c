//! `otsim` — batch experiment runner for the collective-pulse encoder.
//!
//! Exit codes: 0 when every configured tolerance is met, 1 on a tolerance
//! violation (the report is still written), 2 on usage or I/O errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use otsim_cli::config::{
    BranchModeCfg, ErrorPlan, ExperimentConfig, LogicalSource, OutputFormat, PauliErrorCase,
    ProtocolKind,
};
use otsim_cli::{runner, verify};

/// Environment variable naming the default output directory.
const OUT_DIR_ENV: &str = "OTSIM_OUT_DIR";

#[derive(Parser)]
#[command(
    name = "otsim",
    version,
    about = "State-vector simulation of collective-pulse logical-qubit encoding"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a batch encoding/correction experiment and write a report.
    Run(RunArgs),
    /// Re-run the oracle-equivalence, phase, or constants checks.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Encoding protocol.
    #[arg(long, value_enum)]
    protocol: ProtocolKind,
    /// Number of appended qubits (p1: even, p2: odd, shor: fixed 8).
    #[arg(long, short = 'n', default_value_t = 0)]
    n: usize,
    /// Logical input: "random" or "explicit".
    #[arg(long, default_value = "random")]
    logical: String,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    alpha_re: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    alpha_im: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    beta_re: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    beta_im: f64,
    /// Error plan: "none", "exhaustive-pauli", "random-unitary", or a
    /// comma-separated list of Pauli cases like "x@3,z@0".
    #[arg(long, default_value = "none")]
    errors: String,
    /// Case count for the random-unitary sweep.
    #[arg(long, default_value_t = 900)]
    error_count: usize,
    #[arg(long, default_value_t = 1)]
    trials: usize,
    /// Measurement-branch handling for p2.
    #[arg(long, value_enum, default_value_t = BranchModeCfg::Both)]
    branch_mode: BranchModeCfg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Pass/fail fidelity tolerance (rows must reach 1 - tolerance).
    #[arg(long, default_value_t = 1e-12)]
    tolerance: f64,
    /// Report path; relative paths resolve under $OTSIM_OUT_DIR when set.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
}

#[derive(Args)]
struct VerifyArgs {
    /// One of: kernels, phases, constants.
    scope: String,
    /// Random triples for the kernels scope.
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 1801)]
    seed: u64,
    /// constants scope: also write a freshly derived constants file here.
    #[arg(long)]
    emit: Option<PathBuf>,
}

fn main() -> ExitCode {
    match dispatch() {
        Ok(pass) => {
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn dispatch() -> anyhow::Result<bool> {
    match Cli::parse().command {
        Command::Run(args) => run_command(args),
        Command::Verify(args) => verify_command(args),
    }
}

fn run_command(args: RunArgs) -> anyhow::Result<bool> {
    let logical = match args.logical.as_str() {
        "random" => LogicalSource::Random,
        "explicit" => LogicalSource::Explicit {
            alpha_re: args.alpha_re,
            alpha_im: args.alpha_im,
            beta_re: args.beta_re,
            beta_im: args.beta_im,
        },
        other => anyhow::bail!("--logical must be random or explicit, got {other:?}"),
    };
    let errors = parse_error_plan(&args.errors, args.error_count)?;
    let n_appended = match (args.protocol, args.n) {
        (ProtocolKind::Shor, 0) => 8,
        (_, 0) => anyhow::bail!("--n is required for this protocol"),
        (_, n) => n,
    };
    let config = ExperimentConfig {
        protocol: args.protocol,
        n_appended,
        logical,
        errors,
        trials: args.trials,
        branch_mode: args.branch_mode,
        seed: args.seed,
        tolerance: args.tolerance,
    };

    let run_report = runner::run(&config)?;
    let path = resolve_output(args.output, args.format);
    run_report.write(&path, args.format)?;

    println!(
        "{} rows, min fidelity {:.3e} from 1, max entangling pulses {}, report {}",
        run_report.aggregate.rows,
        (1.0 - run_report.aggregate.min_fidelity).abs(),
        run_report.aggregate.max_entangling_pulses,
        path.display()
    );
    println!("result: {}", if run_report.aggregate.pass { "PASS" } else { "FAIL" });
    Ok(run_report.aggregate.pass)
}

fn verify_command(args: VerifyArgs) -> anyhow::Result<bool> {
    match args.scope.as_str() {
        "kernels" => {
            let report = verify::verify_kernels(args.samples, args.seed)?;
            println!(
                "kernels: {} samples, max deviation {:.3e} (tolerance {:.1e}): {}",
                report.samples,
                report.max_deviation,
                report.tolerance,
                if report.pass { "PASS" } else { "FAIL" }
            );
            Ok(report.pass)
        }
        "phases" => {
            let report = verify::verify_phases()?;
            print!("{}", report.table());
            println!("phases: {}", if report.pass { "PASS" } else { "FAIL" });
            Ok(report.pass)
        }
        "constants" => {
            if let Some(path) = &args.emit {
                std::fs::write(path, verify::derived_constants_text()?)?;
                println!("wrote fresh constants to {}", path.display());
            }
            let report = verify::verify_constants()?;
            print!("{}", report.table());
            println!(
                "constants file {}: {}",
                if report.file_matches { "matches" } else { "DIFFERS" },
                if report.pass { "PASS" } else { "FAIL" }
            );
            Ok(report.pass)
        }
        other => anyhow::bail!("unknown verify scope {other:?} (kernels | phases | constants)"),
    }
}

fn parse_error_plan(text: &str, count: usize) -> anyhow::Result<ErrorPlan> {
    match text {
        "none" => Ok(ErrorPlan::None),
        "exhaustive-pauli" => Ok(ErrorPlan::ExhaustivePauli),
        "random-unitary" => Ok(ErrorPlan::RandomUnitary { count }),
        list => {
            let cases = list
                .split(',')
                .map(PauliErrorCase::parse)
                .collect::<anyhow::Result<Vec<_>>>()?;
            Ok(ErrorPlan::List { cases })
        }
    }
}

fn resolve_output(requested: Option<PathBuf>, format: OutputFormat) -> PathBuf {
    let default_name = match format {
        OutputFormat::Json => "otsim_report.json",
        OutputFormat::Csv => "otsim_report.csv",
    };
    let path = requested.unwrap_or_else(|| PathBuf::from(default_name));
    if path.is_absolute() {
        return path;
    }
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) => Path::new(&dir).join(path),
        None => path,
    }
}
