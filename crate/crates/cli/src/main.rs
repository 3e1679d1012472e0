use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use implicit_dd::implicit::IndexStyle;
use implicit_dd::MultiIndex;

mod derivative;
mod divdiff;
mod enumerate;
mod error;
mod output;
mod problem;
mod verify;

use error::{CliError, CliResult};
use output::{Format, Output};

/// Divided differences and partial derivatives of implicitly defined functions.
#[derive(Debug, Parser)]
#[command(name = "idd", version)]
struct Cli {
    /// Output style.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Divided difference of y over a grid.
    Divdiff(divdiff::DivdiffArgs),
    /// Partial derivative of y at a point, or its symbolic formula.
    Derivative(derivative::DerivativeArgs),
    /// List paths, polygon partitions, trees, tuples or derivative partitions.
    Enumerate(enumerate::EnumerateArgs),
    /// Run a verification suite.
    Verify(verify::VerifyArgs),
}

/// Where `g` comes from: a problem file or a built-in case.
#[derive(Debug, Args)]
pub struct Source {
    /// Problem file (TOML).
    #[arg(conflicts_with = "case")]
    pub file: Option<PathBuf>,

    /// Built-in case: product, sphere, quadratic, exp or sphere3.
    #[arg(long)]
    pub case: Option<String>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Style {
    /// Multi-indices as sums of basis vectors, e.g. `e1+e2`.
    #[default]
    Basis,
    /// Multi-indices as comma tuples, e.g. `(1,1)`.
    Tuple,
}

impl From<Style> for IndexStyle {
    fn from(s: Style) -> Self {
        match s {
            Style::Basis => IndexStyle::Basis,
            Style::Tuple => IndexStyle::Tuple,
        }
    }
}

/// Parses `1,1` or `(1,1)`.
pub fn parse_index(s: &str) -> Result<MultiIndex, String> {
    s.parse().map_err(|e: implicit_dd::Error| e.to_string())
}

/// A comma separated list of reals, e.g. `0.2,0.3`.
#[derive(Clone, Debug, PartialEq)]
pub struct Point(pub Vec<f64>);

impl FromStr for Point {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        s.trim()
            .trim_start_matches('(')
            .trim_end_matches(')')
            .split(',')
            .map(|c| {
                c.trim()
                    .parse::<f64>()
                    .map_err(|_| format!("bad number `{}`", c.trim()))
            })
            .collect::<Result<_, _>>()
            .map(Point)
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let out = Output::new(cli.format);
    match cli.command {
        Command::Divdiff(args) => divdiff::run(args, &out),
        Command::Derivative(args) => derivative::run(args, &out),
        Command::Enumerate(args) => enumerate::run(args, &out),
        Command::Verify(args) => verify::run(args, &out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

impl From<String> for CliError {
    fn from(s: String) -> Self {
        CliError::Usage(s)
    }
}
