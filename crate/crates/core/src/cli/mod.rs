//! Command-line front end: problem files in, deterministic JSON reports out.
//!
//! Exit codes: 0 the claim holds, 1 I/O or usage error, 2 parse or format
//! error, 3 hypothesis violation, 4 mathematical failure, 5 unsupported
//! spectrum, 6 mode mismatch.

mod commands;
pub mod parser;
pub mod problem;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

pub use commands::{
    cmd_check_pdnf, cmd_extract, cmd_invariance, cmd_normalize, cmd_resonance, cmd_weights, ExtractOptions, Report,
};
pub use parser::{parse_expression, Context, ParseError, ParseErrorKind};
pub use problem::{FieldMode, Problem, ProblemFile};

use crate::ideals::IdealError;
use crate::linalg::LinalgError;
use crate::normalform::NormalFormError;
use crate::poly::PolyError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_HYPOTHESIS: i32 = 3;
pub const EXIT_FAILURE: i32 = 4;
pub const EXIT_UNSUPPORTED: i32 = 5;
pub const EXIT_MODE: i32 = 6;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Usage(String),
    #[error("malformed problem file: {0}")]
    Json(String),
    #[error("{context}: {error}")]
    Parse { context: String, error: ParseError },
    #[error("invalid problem: {0}")]
    Invalid(String),
    #[error("mode mismatch: {0}")]
    ModeMismatch(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("{0}")]
    Failure(String),
    #[error("unsupported spectrum: {0}")]
    Unsupported(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) | CliError::Usage(_) => EXIT_IO,
            CliError::Parse { error, .. } if error.kind == ParseErrorKind::ModeMismatch => EXIT_MODE,
            CliError::Json(_) | CliError::Parse { .. } | CliError::Invalid(_) => EXIT_PARSE,
            CliError::ModeMismatch(_) => EXIT_MODE,
            CliError::Hypothesis(_) => EXIT_HYPOTHESIS,
            CliError::Failure(_) => EXIT_FAILURE,
            CliError::Unsupported(_) => EXIT_UNSUPPORTED,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Io(_) => "io",
            CliError::Usage(_) => "usage",
            CliError::Json(_) => "format",
            CliError::Parse { error, .. } if error.kind == ParseErrorKind::ModeMismatch => "mode-mismatch",
            CliError::Parse { .. } => "parse",
            CliError::Invalid(_) => "invalid",
            CliError::ModeMismatch(_) => "mode-mismatch",
            CliError::Hypothesis(_) => "hypothesis",
            CliError::Failure(_) => "failure",
            CliError::Unsupported(_) => "unsupported-spectrum",
        }
    }

    fn to_json(&self) -> Value {
        let mut v = json!({
            "kind": self.kind(),
            "exit_code": self.exit_code(),
            "message": self.to_string(),
        });
        if let CliError::Parse { error, .. } = self {
            v["line"] = json!(error.line);
            v["column"] = json!(error.column);
        }
        v
    }
}

impl From<LinalgError> for CliError {
    fn from(e: LinalgError) -> Self {
        match e {
            LinalgError::UnsupportedSpectrum { .. } => CliError::Unsupported(e.to_string()),
            other => CliError::Failure(other.to_string()),
        }
    }
}

impl From<PolyError> for CliError {
    fn from(e: PolyError) -> Self {
        match e {
            PolyError::NonzeroConstantTerm { .. } | PolyError::InvalidLinearPart(_) => {
                CliError::Hypothesis(e.to_string())
            }
            PolyError::NoEmbedding => CliError::ModeMismatch(e.to_string()),
            PolyError::Linalg(l) => l.into(),
            other => CliError::Failure(other.to_string()),
        }
    }
}

impl From<IdealError> for CliError {
    fn from(e: IdealError) -> Self {
        match e {
            IdealError::Hypothesis(msg) => CliError::Hypothesis(msg),
            IdealError::NotPdnf { .. } | IdealError::NotDiagonal => CliError::Hypothesis(e.to_string()),
            IdealError::NoEmbedding => CliError::ModeMismatch(e.to_string()),
            IdealError::Poly(p) => p.into(),
            IdealError::Linalg(l) => l.into(),
            other => CliError::Failure(other.to_string()),
        }
    }
}

impl From<NormalFormError> for CliError {
    fn from(e: NormalFormError) -> Self {
        match e {
            NormalFormError::NotPdnf { .. } => CliError::Hypothesis(e.to_string()),
            NormalFormError::Poly(p) => p.into(),
            other => CliError::Failure(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "pdnf", version, about = "Normal forms, invariant ideals and semi-invariants of formal vector fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Problem file (JSON).
    problem: PathBuf,
    /// Truncation order N; overrides the file.
    #[arg(long)]
    trunc_order: Option<u32>,
    /// Human-readable summary on standard error.
    #[arg(long)]
    verbose: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Basis {
    /// Coordinates in which the semisimple part is diagonal.
    Diagonal,
    /// The coordinates of the input.
    Original,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Poincaré–Dulac normal form and conjugating transformation.
    Normalize {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "diagonal")]
        basis: Basis,
    },
    /// Whether the field commutes with its semisimple linear part.
    CheckPdnf {
        #[command(flatten)]
        common: Common,
    },
    /// Weight decomposition of ideal generators.
    Weights {
        #[command(flatten)]
        common: Common,
        /// Restrict to one ideal.
        #[arg(long)]
        ideal: Option<String>,
    },
    /// Invariance of ideals under the field.
    Invariance {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        ideal: Option<String>,
    },
    /// Semi-invariant generators with exact certificates.
    Extract {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        ideal: Option<String>,
        /// Include right-hand sides and solutions of every certificate.
        #[arg(long)]
        certificate: bool,
        /// Work in the smallest invariant ideal containing the generators.
        #[arg(long)]
        close: bool,
    },
    /// Candidate invariant primes in the single resonance case.
    Resonance {
        #[command(flatten)]
        common: Common,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Normalize { .. } => "normalize",
            Command::CheckPdnf { .. } => "check-pdnf",
            Command::Weights { .. } => "weights",
            Command::Invariance { .. } => "invariance",
            Command::Extract { .. } => "extract",
            Command::Resonance { .. } => "resonance",
        }
    }

    fn common(&self) -> &Common {
        match self {
            Command::Normalize { common, .. }
            | Command::CheckPdnf { common }
            | Command::Weights { common, .. }
            | Command::Invariance { common, .. }
            | Command::Extract { common, .. }
            | Command::Resonance { common } => common,
        }
    }
}

fn dispatch(command: &Command) -> Result<Report, CliError> {
    let common = command.common();
    let src = std::fs::read_to_string(&common.problem)
        .map_err(|e| CliError::Io(format!("{}: {e}", common.problem.display())))?;
    let problem = Problem::from_json(&src, common.trunc_order)?;
    match command {
        Command::Normalize { basis, .. } => cmd_normalize(&problem, *basis),
        Command::CheckPdnf { .. } => cmd_check_pdnf(&problem),
        Command::Weights { ideal, .. } => cmd_weights(&problem, ideal.as_deref()),
        Command::Invariance { ideal, .. } => cmd_invariance(&problem, ideal.as_deref()),
        Command::Extract {
            ideal,
            certificate,
            close,
            ..
        } => cmd_extract(
            &problem,
            &ExtractOptions {
                ideal: ideal.clone(),
                certificate: *certificate,
                close: *close,
            },
        ),
        Command::Resonance { .. } => cmd_resonance(&problem),
    }
}

/// Runs the command line `args` and returns the exit code. The report goes
/// to `out`; diagnostics and the `--verbose` summary go to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_IO } else { EXIT_OK };
        }
    };
    let name = cli.command.name();
    let verbose = cli.command.common().verbose;
    let (report, code) = match dispatch(&cli.command) {
        Ok(r) => {
            if verbose {
                let _ = writeln!(err, "{}", r.summary);
            }
            let code = r.exit_code;
            (r.value, code)
        }
        Err(e) => {
            let _ = writeln!(err, "pdnf {name}: {e}");
            (json!({ "command": name, "error": e.to_json() }), e.exit_code())
        }
    };
    let text = serde_json::to_string_pretty(&report).expect("reports are plain JSON");
    if writeln!(out, "{text}").is_err() {
        return EXIT_IO;
    }
    code
}
