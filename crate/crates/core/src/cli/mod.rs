//! The `bhlab` command line.
//!
//! Exit codes: 0 success, 2 argument or domain error, 3 inadmissible
//! exponents, 4 bad input data, 5 enumeration cap.

mod commands;
pub mod parse;
pub mod render;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::error::Error;
use crate::exponents::DEFAULT_TOL;
use crate::khinchine::ScalarField;
use crate::scalar::ExtendedReal;
use crate::verifier::{DEFAULT_CAP, HARD_CAP};
use render::Format;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_ADMISSIBILITY: i32 = 3;
pub const EXIT_INPUT: i32 = 4;
pub const EXIT_CAP: i32 = 5;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn new(code: i32, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Domain(_) | Error::Convergence { .. } => EXIT_USAGE,
            Error::Admissibility(_) => EXIT_ADMISSIBILITY,
            Error::DimensionMismatch(_)
            | Error::InvalidTensor(_)
            | Error::CeilingViolation { .. } => EXIT_INPUT,
            Error::CapExceeded { .. } => EXIT_CAP,
        };
        CliError::new(code, e.to_string())
    }
}

/// Comma-separated exponent list such as `4/3,4/3`.
#[derive(Debug, Clone)]
pub struct QList(pub Vec<f64>);

fn q_list(s: &str) -> Result<QList, String> {
    parse::parse_q_list(s).map(QList)
}

const FIELD_HELP: &str = "scalar field: real or complex";
const Q_HELP: &str = "comma-separated exponents; fractions like 4/3 are parsed exactly";
const P_HELP: &str = "exponent p of the l_p factors, or inf";

#[derive(Debug, Parser)]
#[command(
    name = "bhlab",
    version,
    about = "Bohnenblust-Hille and Hardy-Littlewood constants, exponent interpolation and numerical checks",
    after_help = "Exit codes: 0 ok, 2 argument/domain error, 3 inadmissible exponents, 4 bad input data, 5 enumeration cap.\nEvery command accepts --format json; see each command's --help for its keys."
)]
pub struct Cli {
    /// Output format (default: csv for scan, table otherwise)
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Seed for randomized steps
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Exact enumeration limit on n*(m-1), at most 28
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    pub cap: usize,
    /// Absolute tolerance on exponent-sum admissibility checks
    #[arg(long, global = true, default_value_t = DEFAULT_TOL, allow_negative_numbers = true)]
    pub tol: f64,
    /// Write output to this file instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bohnenblust-Hille upper bound, its envelope and (real) lower bound
    #[command(
        after_help = "JSON keys: command, m, field, bounds[{value, formula, field, m, p, valid, note}]"
    )]
    BhConst {
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        m: u32,
        #[arg(long, default_value = "real", help = FIELD_HELP)]
        field: ScalarField,
    },
    /// Hardy-Littlewood upper bounds, the winning formula and the lower bound
    #[command(
        after_help = "JSON keys: command, m, p, field, threshold, above_threshold, winner, best, bounds[...]"
    )]
    HlConst {
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        m: u32,
        #[arg(long, value_parser = parse::parse_p, help = P_HELP)]
        p: ExtendedReal,
        #[arg(long, default_value = "real", help = FIELD_HELP)]
        field: ScalarField,
    },
    /// Upper bound for a multiple exponent (q_1, ..., q_m)
    #[command(
        after_help = "JSON keys: command, m, p, field, q, case, max_q, cutoff, bound, legacy, prior (null unless complex, p = inf, case i, ascending q)"
    )]
    GenConst {
        #[arg(long, value_parser = q_list, help = Q_HELP)]
        q: QList,
        #[arg(long, value_parser = parse::parse_p, help = P_HELP)]
        p: ExtendedReal,
        #[arg(long, default_value = "real", help = FIELD_HELP)]
        field: ScalarField,
    },
    /// Convex decomposition of 1/q over the interpolation vertices
    #[command(
        after_help = "JSON keys: command, m, p, q, s, s_default, lambda, thetas, theta_sum, vertices, residuals"
    )]
    Interpolate {
        #[arg(long, value_parser = q_list, help = Q_HELP)]
        q: QList,
        #[arg(long, value_parser = parse::parse_p, help = P_HELP)]
        p: ExtendedReal,
        /// Interpolation parameter in (max q, 2]; default is the midpoint
        #[arg(long, value_parser = parse::parse_number)]
        s: Option<f64>,
    },
    /// Certified ratio of a coefficient tensor against the proven bound
    #[command(
        after_help = "JSON keys: command, m, n, field, p, q, mixed_norm, norm{lower, upper, exact, lower_method, upper_method}, denominator, ratio, bound, verdict, seed"
    )]
    Verify {
        /// Tensor JSON file with keys m, n, field, entries and optional layout ("row-major")
        #[arg(long)]
        tensor: PathBuf,
        #[arg(long, value_parser = q_list, help = Q_HELP)]
        q: QList,
        #[arg(long, value_parser = parse::parse_p, help = P_HELP)]
        p: ExtendedReal,
    },
    /// Hardy-Littlewood bounds over a range of p
    #[command(
        after_help = "Columns: m,p,legacy,p_dependent,p_free,best,lower,above_threshold (empty where a formula does not apply).\nJSON keys: command, m, field, threshold, rows[{m, p, legacy, p_dependent, p_free, best, lower, above_threshold}]"
    )]
    Scan {
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        m: u32,
        #[arg(long, value_parser = parse::parse_number)]
        p_min: f64,
        #[arg(long, value_parser = parse::parse_number)]
        p_max: f64,
        #[arg(long, value_parser = parse::parse_number, default_value = "1")]
        step: f64,
        #[arg(long, default_value = "real", help = FIELD_HELP)]
        field: ScalarField,
    },
    /// Hill-climbing search for real forms with a large certified ratio
    #[command(
        after_help = "JSON keys: command, m, n, p, q, iters, seed, ratio, bound, gap, accepted, tensor"
    )]
    Search {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        m: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, value_parser = parse::parse_p, help = P_HELP)]
        p: ExtendedReal,
        #[arg(long, value_parser = q_list, help = Q_HELP)]
        q: QList,
        #[arg(long, default_value_t = 10_000)]
        iters: usize,
    },
}

fn execute(cli: &Cli) -> Result<String, CliError> {
    if cli.cap > HARD_CAP {
        return Err(CliError::new(
            EXIT_CAP,
            format!("--cap {} exceeds the hard limit {HARD_CAP}", cli.cap),
        ));
    }
    if !(cli.tol.is_finite() && cli.tol >= 0.0) {
        return Err(CliError::new(
            EXIT_USAGE,
            format!("--tol must be finite and >= 0, got {}", cli.tol),
        ));
    }
    let (output, default_format) = commands::dispatch(cli)?;
    output
        .render(cli.format.unwrap_or(default_format))
        .map_err(|e| CliError::new(EXIT_USAGE, e))
}

/// Parse `args` (including the program name), run, and return the exit code.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let text = match execute(&cli) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {}", e.message);
            return e.code;
        }
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, text.as_bytes())
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| e.to_string()),
    };
    match written {
        Ok(()) => EXIT_OK,
        Err(msg) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
    }
}

pub fn run() -> i32 {
    run_from(std::env::args_os())
}
