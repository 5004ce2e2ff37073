//! Command-line front end for `chernoff-core`.

pub mod commands;
pub mod format;
pub mod gamma;

use std::io::Write;

use chernoff_core::{BoundError, Method, Mode, Side, Tail};
use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use format::Format;
use gamma::{parse_gamma, parse_gamma_list, Gamma};

/// γ values of the reference tables.
pub const DEFAULT_GAMMAS: &str = "0.05,0.01,0.000000002,5.421e-20";

/// Process exit statuses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    Usage = 1,
    Verification = 2,
    Infeasible = 3,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error("write failed: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit(&self) -> Exit {
        match self {
            CliError::Bound(e) if e.is_infeasible() => Exit::Infeasible,
            _ => Exit::Usage,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "chernoff",
    version,
    about = "Invert Chernoff tail bounds for sums of Poisson trials"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tables of δ_U and δ_L over a list of γ.
    #[command(subcommand)]
    Table(TableCommand),
    /// Solve one query and print δ, endpoints and residual.
    Invert(InvertArgs),
    /// Check emitted thresholds against exact binomial tails.
    Verify(VerifyArgs),
}

#[derive(Debug, Subcommand)]
pub enum TableCommand {
    /// Tail thresholds for a sum with known mean μ.
    Tail(TailArgs),
    /// Confidence bounds on the mean from an observed sum μ̂.
    Ci(CiArgs),
}

/// A parsed `--gamma` list. Wrapped so clap treats it as one value.
#[derive(Debug, Clone)]
pub struct GammaList(pub Vec<Gamma>);

fn gamma_list(s: &str) -> Result<GammaList, String> {
    parse_gamma_list(s).map(GammaList)
}

fn method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: BoundError| e.to_string())
}

fn side(s: &str) -> Result<Side, String> {
    s.parse().map_err(|e: BoundError| e.to_string())
}

fn positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("must be finite and positive, got {s}"))
    }
}

fn probability(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("must lie in [0, 1], got {s}"))
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Significant figures (ties round to even).
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u8).range(1..=17))]
    pub digits: u8,
}

#[derive(Debug, Args)]
pub struct TailArgs {
    /// Comma-separated tail probabilities: decimals or powers like 2^-64.
    #[arg(long, default_value = DEFAULT_GAMMAS, value_parser = gamma_list)]
    pub gamma: GammaList,
    /// Mean of the sum.
    #[arg(long, default_value = "200", allow_hyphen_values = true, value_parser = positive)]
    pub mu: f64,
    #[arg(long, value_delimiter = ',', default_value = "exact,classic,pade2", value_parser = method)]
    pub method: Vec<Method>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CiArgs {
    /// Comma-separated tail probabilities: decimals or powers like 2^-64.
    #[arg(long, default_value = DEFAULT_GAMMAS, value_parser = gamma_list)]
    pub gamma: GammaList,
    /// Observed sum.
    #[arg(long = "mu-hat", default_value = "212", allow_hyphen_values = true, value_parser = positive)]
    pub mu_hat: f64,
    #[arg(long, value_delimiter = ',', default_value = "exact,pade2", value_parser = method)]
    pub method: Vec<Method>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("level").required(true).args(["gamma", "log_gamma"])))]
#[command(group(clap::ArgGroup::new("mean").required(true).args(["mu", "mu_hat"])))]
pub struct InvertArgs {
    /// Tail probability: a decimal or a power like 2^-64.
    #[arg(long, value_parser = parse_gamma)]
    pub gamma: Option<Gamma>,
    /// Natural log of the tail probability.
    #[arg(long = "log-gamma", allow_hyphen_values = true)]
    pub log_gamma: Option<f64>,
    /// Known mean (prediction mode).
    #[arg(long, allow_hyphen_values = true, value_parser = positive)]
    pub mu: Option<f64>,
    /// Observed sum (regression mode).
    #[arg(long = "mu-hat", allow_hyphen_values = true, value_parser = positive)]
    pub mu_hat: Option<f64>,
    #[arg(long, default_value = "pade2", value_parser = method)]
    pub method: Method,
    /// upper, lower, two-sided or symmetric.
    #[arg(long, default_value = "upper", value_parser = side)]
    pub side: Side,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Comma-separated tail probabilities: decimals or powers like 2^-64.
    #[arg(long, default_value = DEFAULT_GAMMAS, value_parser = gamma_list)]
    pub gamma: GammaList,
    /// Number of Bernoulli trials.
    #[arg(long, default_value_t = 1_000_000)]
    pub n: u64,
    /// Success probability of each trial.
    #[arg(long, default_value = "0.0002", allow_hyphen_values = true, value_parser = probability)]
    pub p: f64,
    #[arg(long, value_delimiter = ',', default_value = "exact,classic,pade2", value_parser = method)]
    pub method: Vec<Method>,
    /// upper, lower, or two-sided for both tails.
    #[arg(long, default_value = "two-sided", value_parser = side)]
    pub side: Side,
    /// Also simulate each threshold with this many replications.
    #[arg(long, default_value_t = 0)]
    pub reps: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Runs a parsed command line, writing the report to `out`.
pub fn run(cli: Cli, out: &mut impl Write) -> Result<Exit, CliError> {
    match cli.command {
        Command::Table(TableCommand::Tail(a)) => commands::table(
            &a.gamma.0,
            a.mu,
            Mode::Prediction,
            &a.method,
            a.output.format,
            a.output.digits.into(),
            out,
        ),
        Command::Table(TableCommand::Ci(a)) => commands::table(
            &a.gamma.0,
            a.mu_hat,
            Mode::Regression,
            &a.method,
            a.output.format,
            a.output.digits.into(),
            out,
        ),
        Command::Invert(a) => {
            let gamma = match (a.gamma, a.log_gamma) {
                (Some(g), _) => g,
                (None, Some(l)) => {
                    Gamma::from_log(l).map_err(|e| CliError::Usage(format!("--log-gamma: {e}")))?
                }
                (None, None) => unreachable!("clap enforces the level group"),
            };
            let (mean, mode) = match (a.mu, a.mu_hat) {
                (Some(m), _) => (m, Mode::Prediction),
                (None, Some(m)) => (m, Mode::Regression),
                (None, None) => unreachable!("clap enforces the mean group"),
            };
            commands::invert(
                &gamma,
                mean,
                mode,
                a.method,
                a.side,
                a.output.format,
                a.output.digits.into(),
                out,
            )
        }
        Command::Verify(a) => {
            let tails = match a.side {
                Side::Upper => vec![Tail::Upper],
                Side::Lower => vec![Tail::Lower],
                _ => vec![Tail::Upper, Tail::Lower],
            };
            let plan = commands::VerifyPlan {
                gammas: a.gamma.0,
                n: a.n,
                p: a.p,
                methods: a.method,
                tails,
                reps: a.reps,
                seed: a.seed,
            };
            commands::verify(&plan, a.output.format, a.output.digits.into(), out)
        }
    }
}
