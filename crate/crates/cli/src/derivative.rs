use clap::Args;
use implicit_dd::hideriv::{derivative_corollary, derivative_formula};
use implicit_dd::oracle::{solve_y, test_case, RootStart};
use implicit_dd::{ExprG, MultiIndex};
use serde_json::json;

use crate::error::{CliError, CliResult};
use crate::output::Output;
use crate::{parse_index, problem, Point, Source};

#[derive(Debug, Args)]
pub struct DerivativeArgs {
    #[command(flatten)]
    source: Source,

    /// Expression for g in x1..xq and y, instead of a file or case.
    #[arg(long, conflicts_with_all = ["file", "case"], requires = "q")]
    g: Option<String>,

    /// Number of x variables for `--g`.
    #[arg(long)]
    q: Option<usize>,

    /// Order n, e.g. `1,1`.
    #[arg(long, value_parser = parse_index)]
    n: MultiIndex,

    /// Evaluation point x, e.g. `0.3,0.4`.
    #[arg(long)]
    at: Option<Point>,

    /// y(x) at the point; solved for when omitted.
    #[arg(long)]
    y: Option<f64>,

    /// Bracket `lo,hi` for solving y.
    #[arg(long, conflicts_with = "guess")]
    bracket: Option<Point>,

    /// Newton starting value for solving y.
    #[arg(long)]
    guess: Option<f64>,

    /// Print the formula in terms of partial derivatives of g instead of a value.
    #[arg(long)]
    symbolic: bool,
}

pub fn run(args: DerivativeArgs, out: &Output) -> CliResult<()> {
    if args.n.is_zero() {
        return Err(CliError::Usage("|n| >= 1 required".into()));
    }
    if args.symbolic {
        let f = derivative_formula(&args.n)?;
        out.record("formula", json!({"n": args.n.coords(), "formula": f}), &f);
        return Ok(());
    }
    let x = args
        .at
        .clone()
        .map(|p| p.0)
        .ok_or_else(|| CliError::Usage("--at is required for a numeric derivative".into()))?;

    let explicit_start = match (&args.bracket, args.guess) {
        (Some(Point(b)), _) if b.len() == 2 => Some(RootStart::Bracket(b[0], b[1])),
        (Some(_), _) => return Err(CliError::Usage("--bracket takes two numbers".into())),
        (None, Some(y0)) => Some(RootStart::Guess(y0)),
        (None, None) => None,
    };

    let owned_g;
    let case;
    let (g, default_start): (&ExprG, Option<RootStart>) =
        match (&args.source.file, &args.source.case, &args.g) {
            (Some(path), _, _) => {
                let p = problem::load(path)?;
                owned_g = p.g;
                (&owned_g, p.start)
            }
            (None, Some(name), _) => {
                case = test_case(name)?;
                (&case.g, Some(case.start))
            }
            (None, None, Some(expr)) => {
                owned_g = ExprG::parse(expr, args.q.unwrap_or(0))?;
                (&owned_g, None)
            }
            (None, None, None) => {
                return Err(CliError::Usage("give a problem file, --case or --g".into()))
            }
        };

    let y = match (args.y, explicit_start.or(default_start)) {
        (Some(y), _) => y,
        (None, Some(start)) => solve_y(g, &x, start)?,
        (None, None) => {
            return Err(CliError::Usage(
                "pass --y, --bracket or --guess to fix y(x)".into(),
            ));
        }
    };
    let v = derivative_corollary(g, &x, y, &args.n)?;
    out.record(
        "derivative",
        json!({"n": args.n.coords(), "x": x, "y": y, "value": v}),
        v.to_string(),
    );
    Ok(())
}
