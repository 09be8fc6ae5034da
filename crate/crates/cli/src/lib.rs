//! Command-line front end for `qeta-core`.
//!
//! [`run`] does all the work and returns the exit code together with what
//! would be written to stdout and stderr, so the binary and the tests share
//! one path.

use std::ffi::OsString;
use std::io::Read;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

mod commands;
pub mod parse;

/// Environment variable holding the default truncation for `--T`.
pub const DEFAULT_T_VAR: &str = "QETA_DEFAULT_T";
pub const DEFAULT_T: usize = 100;
/// Truncations above this are refused rather than left to run for hours.
pub const MAX_T: usize = 20_000;

#[derive(Parser, Debug)]
#[command(name = "qeta", version, about = "Exact q-series, eta quotients and division polynomials")]
pub(crate) struct Cli {
    /// Emit a JSON report instead of text
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    group: Group,
}

#[derive(Subcommand, Debug)]
pub(crate) enum Group {
    /// Eta quotients
    #[command(subcommand)]
    Eta(EtaCmd),
    /// q-series operations
    #[command(subcommand)]
    Series(SeriesCmd),
    /// Unbounded-denominator certificates and profiles
    #[command(subcommand)]
    Ubd(UbdCmd),
    /// Newton-Puiseux branches of g(x, q) = 0
    #[command(subcommand)]
    Puiseux(PuiseuxCmd),
    /// Division polynomials of elliptic curves
    #[command(subcommand)]
    Ec(EcCmd),
    /// Counting formulas
    #[command(subcommand)]
    Count(CountCmd),
}

#[derive(Subcommand, Debug)]
pub(crate) enum EtaCmd {
    /// q-expansion of an eta quotient
    Expand {
        #[arg(long)]
        eta: String,
        /// Number of coefficients from the leading term
        #[arg(long = "T")]
        t: Option<usize>,
    },
    /// Read a series as an eta quotient through its product form
    Recognize(SeriesSource),
}

#[derive(Subcommand, Debug)]
pub(crate) enum SeriesCmd {
    /// n-th root of a series with leading coefficient 1 (or a rational n-th power)
    Root {
        #[command(flatten)]
        src: SeriesSource,
        #[arg(long)]
        n: u32,
    },
    /// Exponents c(n) of q^r prod (1 - q^n)^c(n)
    ProductForm(SeriesSource),
    /// Multiplicative inverse
    Invert(SeriesSource),
}

#[derive(Subcommand, Debug)]
pub(crate) enum UbdCmd {
    /// Certify that the p^e-th root of an eta quotient has unbounded denominators
    Certify {
        #[arg(long)]
        eta: String,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        e: u32,
    },
    /// Observed p-adic denominator growth of a series or its n-th root
    Profile {
        #[command(flatten)]
        src: SeriesSource,
        #[arg(long)]
        p: u64,
        /// Profile the n-th root instead of the series itself
        #[arg(long)]
        n: Option<u32>,
    },
}

#[derive(Subcommand, Debug)]
pub(crate) enum PuiseuxCmd {
    /// All branches y(q) with g(y(q), q) = 0
    Solve {
        /// Sum of terms c*x^i*q^j, optionally ending in + O(q^k); "-" reads stdin
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        /// Coefficients a_0..a_T per branch
        #[arg(long = "T", default_value_t = 10)]
        t: usize,
        /// Candidate root as JSON {"field":{"minpoly":[..]},"coords":[..]}
        #[arg(long)]
        hint: Vec<String>,
        #[arg(long, default_value_t = 16)]
        max_depth: usize,
    },
}

#[derive(Args, Debug)]
pub(crate) struct CurveArgs {
    /// Coefficient A of y^2 = x^3 + Ax + B
    #[arg(long = "A", allow_hyphen_values = true, requires = "b", conflicts_with = "general")]
    pub a: Option<String>,
    #[arg(long = "B", allow_hyphen_values = true, requires = "a")]
    pub b: Option<String>,
    /// a1,a2,a3,a4,a6 of the general Weierstrass equation
    #[arg(long, allow_hyphen_values = true, conflicts_with = "b")]
    pub general: Option<String>,
}

#[derive(Subcommand, Debug)]
pub(crate) enum EcCmd {
    /// psi_p as a polynomial in x
    Divpoly {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long)]
        p: u64,
    },
    /// p-adic Newton polygon of a polynomial or of psi_n
    Newton {
        #[arg(long)]
        p: u64,
        /// Polynomial in x; "-" reads stdin
        #[arg(long, allow_hyphen_values = true)]
        poly: Option<String>,
        #[command(flatten)]
        curve: CurveArgs,
        /// Use psi_n of the curve (defaults to n = p)
        #[arg(long)]
        n: Option<u64>,
    },
    /// Shape, integrality witness and irreducibility of psi_p for odd p <= pmax
    Screen {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long)]
        pmax: u64,
        /// Auxiliary primes: "LO..HI" or a comma list
        #[arg(long)]
        aux_primes: Option<String>,
        #[arg(long)]
        jobs: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
pub(crate) enum CountCmd {
    /// Number of character groups of index p^e on a group with t cusps
    Groups {
        #[arg(long)]
        cusps: u32,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        e: u32,
    },
}

#[derive(Args, Debug)]
pub(crate) struct SeriesSource {
    /// Series in q, e.g. "1 + q - 1/2*q^(3/2)"; "-" reads stdin
    #[arg(long, allow_hyphen_values = true, conflicts_with = "eta", required_unless_present = "eta")]
    pub input: Option<String>,
    /// Use the expansion of this eta quotient
    #[arg(long)]
    pub eta: Option<String>,
    #[arg(long = "T")]
    pub t: Option<usize>,
}

/// What the process prints and returns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Result of a successful dispatch.
pub(crate) struct Report {
    pub command: &'static str,
    pub inputs: Value,
    pub result: Value,
    pub method: &'static str,
    pub text: String,
    /// `false` when the computation ran but found no certificate or was
    /// inconclusive.
    pub found: bool,
    pub warnings: Vec<String>,
}

#[derive(Debug)]
pub(crate) enum CliError {
    Parse { what: String, err: parse::ParseError },
    Core(qeta_core::Error),
    Usage(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Parse { what, err } => write!(f, "cannot parse {what}: {err}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Usage(s) => f.write_str(s),
        }
    }
}

impl From<qeta_core::Error> for CliError {
    fn from(e: qeta_core::Error) -> Self {
        CliError::Core(e)
    }
}

/// Inputs that do not come from argv.
pub struct Env<'a> {
    pub default_t: Option<String>,
    pub stdin: &'a mut dyn Read,
}

/// Run with the process environment and stdin.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let mut stdin = std::io::stdin();
    run_with(args, Env { default_t: std::env::var(DEFAULT_T_VAR).ok(), stdin: &mut stdin })
}

pub fn run_with<I, T>(args: I, env: Env<'_>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome { code: 0, stdout: text, stderr: String::new() },
                _ => Outcome { code: 1, stdout: String::new(), stderr: text },
            };
        }
    };
    let start = Instant::now();
    let json_mode = cli.json;
    match commands::dispatch(cli.group, env) {
        Ok(rep) => {
            let code = if rep.found { 0 } else { 2 };
            let mut stderr = String::new();
            for w in &rep.warnings {
                stderr.push_str(&format!("warning: {w}\n"));
            }
            let stdout = if json_mode {
                let envelope = json!({
                    "v": 1,
                    "command": rep.command,
                    "inputs": rep.inputs,
                    "result": rep.result,
                    "method": rep.method,
                    "status": if rep.found { "ok" } else { "not-found" },
                    "warnings": rep.warnings,
                    "millis": start.elapsed().as_millis() as u64,
                });
                format!("{}\n", serde_json::to_string_pretty(&envelope).expect("json values serialize"))
            } else {
                let mut t = rep.text;
                if !t.ends_with('\n') {
                    t.push('\n');
                }
                t
            };
            Outcome { code, stdout, stderr }
        }
        Err(e) => Outcome { code: 1, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}
