//! Command-line driver: verification sweeps and bound computations, each
//! producing a [`RunReport`].

mod commands;
mod report;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use commands::{BoundConfig, PairSource};
pub use report::{Check, RunReport, Status};

use crate::codebounds::parse_angle;
use crate::error::Error;

/// Exit status for usage and input errors.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "gegenpsd",
    version,
    about = "Multivariate Gegenbauer polynomials, PSD checks and spherical code bounds"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Seed for every random stream.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Also write the JSON report here.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Kernel matrices of random configurations are positive semidefinite.
    VerifyPsd {
        #[arg(long)]
        n: u32,
        /// Inclusive range such as `0..4`, or a single value.
        #[arg(long)]
        m: IntRange,
        #[arg(long)]
        k: IntRange,
        #[arg(long, default_value_t = 30)]
        r: usize,
        /// Number of seeded configurations; 0 skips every cell.
        #[arg(long, default_value_t = 5)]
        seeds: u32,
    },
    /// Monte Carlo orthogonality of `G_k^{(n,m)}` and `G_l^{(n,m)}`.
    VerifyOrthogonality {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        l: u32,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
    },
    /// The multivariate addition theorem at random points.
    VerifyAddition {
        #[arg(long)]
        n: u32,
        /// Levels, at least 1.
        #[arg(long)]
        m: Option<IntRange>,
        #[arg(long, default_value = "0..5")]
        k: IntRange,
        /// Random points per `(m, k)`.
        #[arg(long, default_value_t = 100)]
        samples: u64,
    },
    /// Membership of a feasible pair in every level of the hierarchy.
    Hierarchy {
        /// Pair JSON `{"n", "T", "U"}`.
        #[arg(long, conflicts_with = "generate")]
        pair: Option<PathBuf>,
        /// Generate a pair instead of reading one.
        #[arg(long, value_enum)]
        generate: Option<PairSource>,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 12)]
        r: usize,
        /// Highest degree checked at every level.
        #[arg(long, default_value_t = 4)]
        d: u32,
    },
    /// Bound for spherical codes from a config file or from LP flags.
    Bound {
        /// Bound config JSON; without it `--n --theta --degree` run the LP.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        theta: Option<Angle>,
        #[arg(long)]
        degree: Option<u32>,
        #[arg(long, default_value_t = 4096)]
        grid: usize,
        /// Write the certificate JSON here and its `k,f_k` table next to it.
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Soundness audit of named and greedy codes against certified bounds.
    Codes {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        theta: Angle,
        /// Greedy codes to audit.
        #[arg(long, default_value_t = 5)]
        seeds: u32,
        /// LP degree for the audit certificate when `theta < pi/2`.
        #[arg(long, default_value_t = 8)]
        degree: u32,
    },
}

/// Inclusive integer range `a..b`, or a single integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntRange {
    pub lo: u32,
    pub hi: u32,
}

impl IntRange {
    pub fn iter(self) -> std::ops::RangeInclusive<u32> {
        self.lo..=self.hi
    }
}

impl FromStr for IntRange {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parse = |x: &str| x.trim().parse::<u32>().map_err(|_| format!("bad integer `{x}` in range `{s}`"));
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
            None => {
                let v = parse(s)?;
                (v, v)
            }
        };
        if lo > hi {
            return Err(format!("empty range `{s}`"));
        }
        Ok(Self { lo, hi })
    }
}

impl fmt::Display for IntRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.lo, self.hi)
    }
}

/// Angle in radians or a `pi` literal such as `pi/3`.
#[derive(Debug, Clone, PartialEq)]
pub struct Angle {
    pub text: String,
    pub radians: f64,
}

impl FromStr for Angle {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let radians = parse_angle(s).map_err(|e| e.to_string())?;
        Ok(Self { text: s.to_string(), radians })
    }
}

/// Outcome of one invocation: the report (if any), text for stdout, and the
/// exit code.
pub struct Outcome {
    pub report: Option<RunReport>,
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let text = e.render().to_string();
            let (stdout, stderr) = if code == 0 { (text, String::new()) } else { (String::new(), text) };
            return Outcome { report: None, stdout, stderr, code };
        }
    };
    match commands::execute(&cli) {
        Ok(report) => {
            let stdout = match cli.common.format {
                Format::Json => report.to_json() + "\n",
                Format::Csv => report.checks_csv(),
            };
            let mut stderr = String::new();
            if let Some(path) = &cli.common.out {
                if let Err(e) = std::fs::write(path, report.to_json() + "\n") {
                    stderr = format!("error: cannot write {}: {e}\n", path.display());
                    return Outcome { report: Some(report), stdout, stderr, code: EXIT_USAGE };
                }
            }
            let code = report.exit_code();
            Outcome { report: Some(report), stdout, stderr, code }
        }
        Err(e) => Outcome { report: None, stdout: String::new(), stderr: format!("error: {e}\n"), code: exit_code(&e) },
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::CertificateRejected(_) | Error::Lp(_) => 1,
        _ => EXIT_USAGE,
    }
}

pub(crate) fn usage(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!("0..4".parse::<IntRange>().unwrap(), IntRange { lo: 0, hi: 4 });
        assert_eq!("3".parse::<IntRange>().unwrap(), IntRange { lo: 3, hi: 3 });
        assert_eq!("1..=2".parse::<IntRange>().unwrap(), IntRange { lo: 1, hi: 2 });
        assert!("4..1".parse::<IntRange>().is_err());
        assert!("a..1".parse::<IntRange>().is_err());
    }

    #[test]
    fn angles() {
        let a: Angle = "pi/2".parse().unwrap();
        assert!((a.radians - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert!("half".parse::<Angle>().is_err());
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run(["gegenpsd", "verify-psd", "--n", "3", "--m", "2..2", "--k", "0..1"]).code, 2);
        assert_eq!(run(["gegenpsd", "nonsense"]).code, 2);
        assert_eq!(run(["gegenpsd", "--help"]).code, 0);
    }
}
