//! Command-line surface. Exit codes: 0 success, 1 failed verification,
//! 2 I/O, 3 negative decision or numerical failure, 4 invalid input.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::diagonals::{fan_construct_traced, parker_basis};
use crate::error::{Error, Result};
use crate::io::{self, DiagonalDoc, ProbeDoc};
use crate::jointrange::{min_distance, JointPoint, ProbeConfig, RangeMode};
use crate::kadison::{self, Convention, Decision};
use crate::linalg::C64;
use crate::numrange::boundary_polygon;
use crate::verify::{verify_paper, Group, DEFAULT_SEED};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_NEGATIVE: i32 = 3;
pub const EXIT_INVALID: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "numrange", version, about = "Numerical ranges, constant diagonals and projection diagonals")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample the boundary of W(T) and print its polygon as CSV.
    Boundary {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, default_value_t = crate::numrange::DEFAULT_ANGLES)]
        angles: usize,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Distance from a target to the joint or Asplund-Ptak range of a tuple.
    Probe(ProbeArgs),
    /// Constant-diagonal constructions.
    Diag {
        #[command(subcommand)]
        command: DiagCommand,
    },
    /// Projection-diagonal decisions.
    Kadison {
        #[command(subcommand)]
        command: KadisonCommand,
    },
    /// Run the named checks and write a JSON report.
    Verify {
        #[arg(long, env = "NUMRANGE_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Restrict to these groups.
        #[arg(long, value_enum, value_delimiter = ',')]
        only: Vec<Group>,
    },
}

#[derive(Debug, Args)]
pub struct ProbeArgs {
    #[arg(long)]
    pub tuple: PathBuf,
    /// Comma-separated coordinates; a coordinate `re:im` is complex.
    #[arg(long, allow_hyphen_values = true)]
    pub target: String,
    #[arg(long, default_value_t = 200)]
    pub restarts: usize,
    #[arg(long, env = "NUMRANGE_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "joint")]
    pub mode: ModeArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
pub enum ModeArg {
    Joint,
    Ap,
}

#[derive(Debug, Subcommand)]
pub enum DiagCommand {
    /// Orthonormal basis of C^N on which T has constant diagonal tr T / N.
    Parker {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Nested frames with compressed traces below 1/k on an operator model.
    Fan {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, allow_hyphen_values = true)]
        beta: f64,
        #[arg(long, default_value_t = 10)]
        levels: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum KadisonCommand {
    /// Decide whether a sequence is the diagonal of a projection.
    Check {
        #[arg(long)]
        seq: PathBuf,
        /// Put entries equal to 1/2 in the a-sum.
        #[arg(long)]
        le_half: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KadisonDoc {
    pub decision: String,
    pub a: String,
    pub b: String,
    /// Entries equal to 1/2; absent when there are infinitely many.
    pub halves: Option<usize>,
    pub convention: String,
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) => EXIT_IO,
        Error::InvalidInput(_)
        | Error::DimensionMismatch { .. }
        | Error::OutOfRangeEntry { .. }
        | Error::BadSignConfiguration { .. }
        | Error::DegeneratePair
        | Error::IncompatibleStreams(_) => EXIT_INVALID,
        _ => EXIT_NEGATIVE,
    }
}

fn parse_target(s: &str) -> Result<JointPoint> {
    let coords = s
        .split(',')
        .map(|c| {
            let c = c.trim();
            let (re, im) = c.split_once(':').unwrap_or((c, "0"));
            match (re.trim().parse::<f64>(), im.trim().parse::<f64>()) {
                (Ok(re), Ok(im)) if re.is_finite() && im.is_finite() => Ok(C64::new(re, im)),
                _ => Err(Error::InvalidInput(format!("target coordinate {c:?} is not a number"))),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(JointPoint(coords))
}

fn emit(out: &mut dyn Write, path: Option<&PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => io::write_file(p, text),
        None => writeln!(out, "{text}").map_err(|e| Error::Io(e.to_string())),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_INVALID;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Boundary { matrix, angles, csv } => {
            let t = io::matrix_from_json(&io::read_file(&matrix)?)?;
            let poly = boundary_polygon(&t, angles)?;
            emit(out, csv.as_ref(), poly.to_csv().trim_end())?;
            Ok(EXIT_OK)
        }
        Command::Probe(a) => {
            let ts = io::tuple_from_json(&io::read_file(&a.tuple)?)?;
            let target = parse_target(&a.target)?;
            let mode = match a.mode {
                ModeArg::Joint => RangeMode::Joint,
                ModeArg::Ap => RangeMode::Ap,
            };
            let cfg = ProbeConfig {
                restarts: a.restarts,
                seed: a.seed,
                ..ProbeConfig::default()
            };
            let report = min_distance(&ts, &target, mode, &cfg)?;
            emit(out, a.out.as_ref(), &io::to_pretty(&ProbeDoc::from(&report)))?;
            Ok(EXIT_OK)
        }
        Command::Diag { command } => match command {
            DiagCommand::Parker { matrix, tol, out: path } => {
                let t = io::matrix_from_json(&io::read_file(&matrix)?)?;
                let report = parker_basis(&t, tol)?;
                emit(out, path.as_ref(), &io::to_pretty(&DiagonalDoc::new(&report, &[])))?;
                Ok(EXIT_OK)
            }
            DiagCommand::Fan {
                model,
                alpha,
                beta,
                levels,
                out: path,
            } => {
                let m = io::model_from_json(&io::read_file(&model)?)?;
                let (report, lv) = fan_construct_traced(&m, alpha, beta, levels)?;
                emit(out, path.as_ref(), &io::to_pretty(&DiagonalDoc::new(&report, &lv)))?;
                Ok(EXIT_OK)
            }
        },
        Command::Kadison {
            command: KadisonCommand::Check { seq, le_half },
        } => {
            let d = io::seq_from_json(&io::read_file(&seq)?)?;
            let convention = if le_half { Convention::LeHalf } else { Convention::Strict };
            let s = kadison::sums_with(&d, convention);
            let decision = kadison::decide_with(&d, convention);
            let doc = KadisonDoc {
                decision: format!("{decision:?}"),
                a: s.a.to_string(),
                b: s.b.to_string(),
                halves: s.halves,
                convention: format!("{convention:?}"),
            };
            emit(out, None, &io::to_pretty(&doc))?;
            Ok(match decision {
                Decision::Diagonal => EXIT_OK,
                Decision::NotDiagonal => EXIT_NEGATIVE,
            })
        }
        Command::Verify { seed, out: path, only } => {
            let report = verify_paper(seed, &only);
            let text = io::to_pretty(&report);
            match &path {
                Some(p) => {
                    io::write_file(p, &text)?;
                    for c in &report.checks {
                        let status = if c.passed { "pass" } else { "FAIL" };
                        let _ = writeln!(out, "{status} {}", c.name);
                    }
                }
                None => emit(out, None, &text)?,
            }
            Ok(if report.passed { EXIT_OK } else { EXIT_CHECK_FAILED })
        }
    }
}
