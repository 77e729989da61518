//! Command surface behind the `nohiding-lab` binary.
//!
//! Exit codes: 0 success, 1 internal failure, 2 configuration or input error.
//! Primary output goes to `--out` (written to a temporary file and renamed on
//! success) or to stdout.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::circuits::{parse_circuit, run_statevector, ParseError};
use crate::nohiding::{default_grid, run_perfect, run_sweep, sweep_to_csv, sweep_to_json, Variant};
use crate::qmath::StateVector;
use crate::tomo::Shots;
use crate::zx::{eq6_full_diagram, scripted_derivation, steps_to_json, verified_simplify, ZxError};

#[derive(Debug, Parser)]
#[command(name = "nohiding-lab", version, about = "Quantum bleaching, recovery and ZX rewriting experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Erase and recover a qubit, with tomography of the Bell pair and the recovered qubit.
    Perfect(CommonArgs),
    /// Sweep the imperfect erasure over p.
    Imperfect(CommonArgs),
    /// Scripted ZX derivation plus automatic simplification of the EQ6 circuit.
    Zx(CommonArgs),
    /// Run a circuit file from |0…0⟩ and print the statevector.
    Simulate {
        file: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Grid {
    Default,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    #[arg(long, default_value = "eq2")]
    pub variant: Variant,
    /// Repeatable; overrides the grid.
    #[arg(long = "p", allow_negative_numbers = true)]
    pub p: Vec<f64>,
    #[arg(long, value_enum, default_value = "default")]
    pub grid: Grid,
    /// Shot count per basis, or `exact`.
    #[arg(long, default_value = "exact")]
    pub shots: Shots,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Perfect,
    Imperfect,
    Zx,
    Simulate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub variant: Variant,
    pub p_values: Vec<f64>,
    pub shots: Shots,
    pub seed: u64,
    pub output_path: Option<PathBuf>,
    pub format: Format,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Internal(_) => 1,
            CliError::Config(_) | CliError::Parse { .. } => 2,
        }
    }
}

fn internal(e: impl ToString) -> CliError {
    CliError::Internal(e.to_string())
}

impl RunConfig {
    pub fn new(command: CommandKind, args: &CommonArgs) -> Result<Self, CliError> {
        let p_values = if !args.p.is_empty() {
            args.p.clone()
        } else if args.grid == Grid::Default {
            default_grid()
        } else {
            Vec::new()
        };
        if let Some(bad) = p_values.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(CliError::Config(format!("p = {bad} outside [0, 1]")));
        }
        if command == CommandKind::Imperfect && p_values.is_empty() {
            return Err(CliError::Config("no p values: pass --p or --grid default".into()));
        }
        if args.format == Format::Csv && command != CommandKind::Imperfect {
            return Err(CliError::Config("csv output is only available for `imperfect`".into()));
        }
        Ok(Self {
            command,
            variant: args.variant,
            p_values,
            shots: args.shots,
            seed: args.seed,
            output_path: args.out.clone(),
            format: args.format,
        })
    }
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

pub fn cmd_perfect(cfg: &RunConfig) -> Result<String, CliError> {
    let report = run_perfect(cfg.variant, None, cfg.shots, cfg.seed).map_err(internal)?;
    Ok(report.to_json())
}

pub fn cmd_imperfect(cfg: &RunConfig) -> Result<String, CliError> {
    let records = run_sweep(cfg.variant, &cfg.p_values, cfg.shots, cfg.seed).map_err(internal)?;
    Ok(match cfg.format {
        Format::Csv => sweep_to_csv(&records),
        Format::Json => sweep_to_json(&records),
    })
}

pub fn cmd_zx(_cfg: &RunConfig) -> Result<String, CliError> {
    let derivation = scripted_derivation().map_err(|e| match e {
        ZxError::StageFailed { stage, reason } => CliError::Internal(format!("derivation stage {stage} failed: {reason}")),
        e => internal(e),
    })?;
    let stages: Vec<serde_json::Value> = derivation
        .stages
        .iter()
        .enumerate()
        .map(|(i, s)| {
            serde_json::json!({
                "stage": i + 1,
                "label": s.label,
                "steps": s.steps.len(),
            })
        })
        .collect();
    let trace: serde_json::Value = serde_json::from_str(&steps_to_json(&derivation.steps())).map_err(internal)?;

    let before = eq6_full_diagram().map_err(internal)?;
    let simplified = verified_simplify(&before);
    if let Some(reason) = &simplified.stopped {
        return Err(CliError::Internal(format!("simplification check failed: {reason}")));
    }
    let simp_trace: serde_json::Value = serde_json::from_str(&steps_to_json(&simplified.steps)).map_err(internal)?;

    Ok(pretty(&serde_json::json!({
        "derivation": {
            "stages": stages,
            "trace": trace,
            "before": derivation.initial.to_json_value(),
            "after": derivation.final_diagram().to_json_value(),
        },
        "simplify": {
            "trace": simp_trace,
            "scalar_re": simplified.scalar.re,
            "scalar_im": simplified.scalar.im,
            "before": before.to_json_value(),
            "after": simplified.diagram.to_json_value(),
        },
    })))
}

pub fn cmd_simulate(_cfg: &RunConfig, circuit_file: &Path) -> Result<String, CliError> {
    let text = fs::read_to_string(circuit_file)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", circuit_file.display())))?;
    let circuit = parse_circuit(&text).map_err(|source| CliError::Parse {
        path: circuit_file.display().to_string(),
        source,
    })?;
    let out = run_statevector(&circuit, &StateVector::zero(circuit.num_qubits())).map_err(internal)?;
    let (re, im): (Vec<f64>, Vec<f64>) = out.amplitudes().iter().map(|a| (a.re, a.im)).unzip();
    Ok(pretty(&serde_json::json!({
        "num_qubits": out.num_qubits(),
        "amplitudes_re": re,
        "amplitudes_im": im,
    })))
}

/// Writes `contents` next to `path` and renames it into place.
pub fn write_atomically(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    let (cfg, output) = match &cli.command {
        Command::Perfect(a) => {
            let cfg = RunConfig::new(CommandKind::Perfect, a)?;
            let out = cmd_perfect(&cfg)?;
            (cfg, out)
        }
        Command::Imperfect(a) => {
            let cfg = RunConfig::new(CommandKind::Imperfect, a)?;
            let out = cmd_imperfect(&cfg)?;
            (cfg, out)
        }
        Command::Zx(a) => {
            let cfg = RunConfig::new(CommandKind::Zx, a)?;
            let out = cmd_zx(&cfg)?;
            (cfg, out)
        }
        Command::Simulate { file, common } => {
            let cfg = RunConfig::new(CommandKind::Simulate, common)?;
            let out = cmd_simulate(&cfg, file)?;
            (cfg, out)
        }
    };
    match &cfg.output_path {
        Some(path) => write_atomically(path, &output)
            .map_err(|e| CliError::Internal(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{output}");
            Ok(())
        }
    }
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run_from_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
