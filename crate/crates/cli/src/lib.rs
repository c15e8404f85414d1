//! Batch command-line front end for `tensor-hermite`.
//!
//! Every command produces a single [`report::Report`], printed as JSON or
//! CSV. Exit codes: 0 pass, 1 verification failure, 2 usage or configuration
//! error, 3 non-finite value encountered.

use clap::{Parser, Subcommand, ValueEnum};

mod commands;
pub mod report;
mod verify;

use report::Report;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "tensor-hermite",
    version,
    about = "Tensor Hermite polynomials: evaluation, expansion and verification"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Seed for every randomly sampled point or map.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Convention {
    Physicist,
    Probabilist,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Ortho,
    Translate,
    Scale,
    Rotate,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the components of H_N at a point, or its closed form.
    Basis {
        #[arg(long)]
        rank: usize,
        /// Evaluation point `z0,z1,z2`.
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            conflicts_with = "symbolic"
        )]
        point: Option<Vec<f64>>,
        /// Print the exact integer closed form instead of numbers.
        #[arg(long)]
        symbolic: bool,
        #[arg(long, value_enum, default_value_t = Convention::Physicist)]
        convention: Convention,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long)]
        max_rank: Option<usize>,
        #[arg(long)]
        quad_order: Option<usize>,
        /// Scale factors to probe; defaults to 0.5,1.0,1.3,1.5,2.0.
        #[arg(long, value_delimiter = ',')]
        alpha: Vec<f64>,
        /// Centre of the scaling map.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        z0: Option<Vec<f64>>,
        /// Mass of species s in atomic mass units.
        #[arg(long, default_value_t = 16.0)]
        ms: f64,
        /// Mass of species s' in atomic mass units.
        #[arg(long, default_value_t = 16.0)]
        msp: f64,
        /// Temperature in kelvin.
        #[arg(long, default_value_t = 1000.0)]
        temperature: f64,
        /// Random points or maps per check.
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Admissible common temperature window for a hot and a cold species.
    Window {
        /// Hotter species temperature in kelvin.
        #[arg(long)]
        ti: f64,
        /// Cooler species temperature in kelvin.
        #[arg(long)]
        tn: f64,
    },
    /// Expand a drifting Maxwellian about a resting weight.
    Expand {
        /// Molecular mass in atomic mass units.
        #[arg(long)]
        mass: f64,
        /// Weight temperature in kelvin.
        #[arg(long)]
        temperature: f64,
        /// Temperature of the expanded distribution; defaults to the weight's.
        #[arg(long)]
        field_temperature: Option<f64>,
        /// Drift velocity `vx,vy,vz` in m/s.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        drift: Option<Vec<f64>>,
        /// Number density in m^-3.
        #[arg(long, default_value_t = 1.0)]
        density: f64,
        #[arg(long, default_value_t = 4)]
        max_rank: usize,
        #[arg(long, default_value_t = 24)]
        quad_order: usize,
    },
}

/// Failure modes that abort a command before a report exists.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Usage(String),
    Numeric(String),
}

impl From<tensor_hermite::Error> for CliError {
    fn from(e: tensor_hermite::Error) -> Self {
        match e {
            tensor_hermite::Error::NonFinite { .. } => CliError::Numeric(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

/// Exit code and captured streams of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    match execute(&cli) {
        Ok(report) => Outcome {
            code: if report.pass { EXIT_PASS } else { EXIT_FAIL },
            stdout: match cli.format {
                Format::Json => report.to_json(),
                Format::Csv => report.to_csv(),
            },
            stderr: String::new(),
        },
        Err(CliError::Usage(msg)) => Outcome {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
        Err(CliError::Numeric(msg)) => Outcome {
            code: EXIT_NUMERIC,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
    }
}

pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Basis {
            rank,
            point,
            symbolic,
            convention,
        } => commands::basis(cli, *rank, point.as_deref(), *symbolic, *convention),
        Command::Verify { suite, .. } => verify::run(cli, *suite),
        Command::Window { ti, tn } => commands::window(cli, *ti, *tn),
        Command::Expand { .. } => commands::expand(cli),
    }
}

pub(crate) fn three(values: &[f64], name: &str) -> Result<[f64; 3], CliError> {
    match values {
        [a, b, c] if values.iter().all(|v| v.is_finite()) => Ok([*a, *b, *c]),
        _ => Err(CliError::Usage(format!(
            "--{name} expects three finite comma-separated numbers, got {values:?}"
        ))),
    }
}
