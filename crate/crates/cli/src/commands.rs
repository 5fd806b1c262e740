//! Subcommands and the exit-code contract.
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success, or verification passed |
//! | 1 | mathematical failure: a mode precondition or a verification check |
//! | 2 | input or usage error |

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use naimark_core::dilation::{dilate, project};
use naimark_core::frames::classify;
use naimark_core::gen::{generate, GenKind, GenSpec};
use naimark_core::verify::{verify_dilation_with, INTERCHANGE_PROJECTION_TOL};
use naimark_core::{DilationMode, Tolerances};
use serde::Serialize;
use thiserror::Error;

use crate::format::{FormatError, SystemFile};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("{0}")]
    Usage(String),
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Math(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Math(_) => 1,
            _ => 2,
        }
    }
}

/// Result of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    VerificationFailed,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Success => 0,
            Status::VerificationFailed => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "naimark",
    version,
    about = "Analyze vector systems and build ambient dilations"
)]
pub struct Cli {
    #[command(flatten)]
    pub tol: TolArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct TolArgs {
    /// Relative singular-value cutoff for numerical rank.
    #[arg(long = "tol-rank", global = true, default_value_t = 1e-10)]
    pub tol_rank: f64,
    /// Relative tolerance for equality of bounds.
    #[arg(long = "tol-eq", global = true, default_value_t = 1e-8)]
    pub tol_eq: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print frame, Riesz and independence properties as JSON.
    Analyze { input: PathBuf },
    /// Build an ambient system whose leading coordinates recover the input.
    Dilate {
        input: PathBuf,
        #[arg(long, value_parser = parse_mode)]
        mode: DilationMode,
        /// Output file; standard output if omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Recover the original system from a dilation file.
    Project {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check a dilation file against the original system.
    Verify {
        original: PathBuf,
        dilation: PathBuf,
    },
    /// Write a seeded test system.
    Generate(GenerateArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_parser = parse_kind)]
    pub kind: GenKind,
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub rank: Option<usize>,
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub b: Option<f64>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

fn parse_mode(s: &str) -> Result<DilationMode, String> {
    s.parse()
        .map_err(|e: naimark_core::DilationError| e.to_string())
}

fn parse_kind(s: &str) -> Result<GenKind, String> {
    s.parse().map_err(|e: naimark_core::GenError| e.to_string())
}

impl TolArgs {
    pub fn tolerances(&self) -> Result<Tolerances, CliError> {
        Tolerances::new(self.tol_rank, self.tol_eq).map_err(|e| CliError::Usage(e.to_string()))
    }
}

impl GenerateArgs {
    pub fn spec(&self) -> Result<GenSpec, CliError> {
        let (dim, count) = match (self.kind, self.dim, self.count) {
            (GenKind::Mercedes, d, n) => (d.unwrap_or(2), n.unwrap_or(3)),
            (_, Some(d), Some(n)) => (d, n),
            (kind, _, _) => {
                return Err(CliError::Usage(format!(
                    "--kind {kind} requires --dim and --count"
                )))
            }
        };
        let mut spec = GenSpec::new(self.kind, dim, count, self.seed).with_scales(self.a, self.b);
        spec.rank = self.rank;
        spec.validate()
            .map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(spec)
    }
}

pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<Status, CliError> {
    let tol = cli.tol.tolerances()?;
    match &cli.command {
        Command::Analyze { input } => {
            let file = SystemFile::read(input)?;
            emit_json(stdout, &classify(&file.system, &tol))?;
        }
        Command::Dilate {
            input,
            mode,
            output,
        } => {
            let file = SystemFile::read(input)?;
            let dil =
                dilate(&file.system, *mode, &tol).map_err(|e| CliError::Math(e.to_string()))?;
            emit_file(stdout, output.as_deref(), &SystemFile::from_dilation(&dil))?;
        }
        Command::Project { input, output } => {
            let dil = read_dilation(input)?;
            emit_file(stdout, output.as_deref(), &SystemFile::plain(project(&dil)))?;
        }
        Command::Verify { original, dilation } => {
            let sys = SystemFile::read(original)?.system;
            let dil = read_dilation(dilation)?;
            let report = verify_dilation_with(&sys, &dil, &tol, INTERCHANGE_PROJECTION_TOL)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            emit_json(stdout, &report)?;
            if !report.overall {
                return Ok(Status::VerificationFailed);
            }
        }
        Command::Generate(args) => {
            let sys = generate(&args.spec()?).map_err(|e| CliError::Usage(e.to_string()))?;
            emit_file(stdout, args.output.as_deref(), &SystemFile::plain(sys))?;
        }
    }
    Ok(Status::Success)
}

fn read_dilation(path: &Path) -> Result<naimark_core::Dilation, CliError> {
    SystemFile::read(path)?
        .to_dilation()?
        .ok_or_else(|| CliError::Usage(format!("{}: no dilation block", path.display())))
}

fn stdout_err(source: std::io::Error) -> CliError {
    CliError::Io {
        path: "<stdout>".into(),
        source,
    }
}

fn emit_json<T: Serialize>(stdout: &mut dyn Write, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).expect("reports serialize");
    writeln!(stdout, "{text}").map_err(stdout_err)
}

fn emit_file(
    stdout: &mut dyn Write,
    output: Option<&Path>,
    file: &SystemFile,
) -> Result<(), CliError> {
    match output {
        Some(path) => file.write(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => stdout
            .write_all(file.to_canonical_string().as_bytes())
            .map_err(stdout_err),
    }
}
