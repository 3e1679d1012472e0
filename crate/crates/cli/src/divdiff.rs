use clap::{Args, ValueEnum};
use implicit_dd::implicit::{emit_curly_products, emit_terms, Form, ImplicitProblem};
use implicit_dd::oracle::{random_grid, test_case};
use implicit_dd::{Grid, MultiIndex};
use serde_json::json;

use crate::error::{CliError, CliResult};
use crate::output::Output;
use crate::{parse_index, problem, Point, Source, Style};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Recursive formula over increasing paths.
    Recursive,
    /// Sum over unit paths and polygon partitions.
    Polygon,
    /// Sum over unit paths and extended plane trees.
    Tree,
    /// Newton table of the y samples.
    Oracle,
}

impl Method {
    const ALL: [Method; 4] = [
        Method::Recursive,
        Method::Polygon,
        Method::Tree,
        Method::Oracle,
    ];

    fn name(self) -> &'static str {
        match self {
            Method::Recursive => "recursive",
            Method::Polygon => "polygon",
            Method::Tree => "tree",
            Method::Oracle => "oracle",
        }
    }

    fn evaluate(self, problem: &ImplicitProblem<'_>, n: &MultiIndex) -> implicit_dd::Result<f64> {
        match self {
            Method::Recursive => problem.r2prime(n),
            Method::Polygon => problem.main_theorem_polygon(n),
            Method::Tree => problem.main_theorem_tree(n),
            Method::Oracle => problem.direct(n),
        }
    }
}

#[derive(Debug, Args)]
pub struct DivdiffArgs {
    #[command(flatten)]
    source: Source,

    /// Order n, e.g. `2,1`. Defaults to the problem file's `n`.
    #[arg(long, value_parser = parse_index)]
    n: Option<MultiIndex>,

    #[arg(long, value_enum, default_value_t = Method::Polygon)]
    method: Method,

    /// Evaluate with every method and report the largest pairwise deviation.
    #[arg(long, conflicts_with = "method")]
    all: bool,

    /// Also print the expanded terms (tree terms for `--method tree`).
    #[arg(long)]
    terms: bool,

    /// Also print the products of curly brackets, one per line.
    #[arg(long)]
    curly: bool,

    #[arg(long, value_enum, default_value_t = Style::Basis)]
    index_style: Style,

    /// Seed for the random grid of a built-in case.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Use the uniform grid `at + j h` instead of a random one (built-in cases).
    #[arg(long, requires = "h")]
    at: Option<Point>,

    /// Grid spacing for `--at`.
    #[arg(long, requires = "at")]
    h: Option<f64>,
}

pub fn run(args: DivdiffArgs, out: &Output) -> CliResult<()> {
    match (&args.source.file, &args.source.case) {
        (Some(path), _) => {
            let p = problem::load(path)?;
            let n = args.n.clone().or(p.n.clone()).ok_or_else(|| {
                CliError::Usage("no order given: pass --n or set `n` in the file".into())
            })?;
            let ip = ImplicitProblem::new(&p.g, p.grid, p.y)?;
            report(&args, &ip, &n, out)
        }
        (None, Some(name)) => {
            let case = test_case(name)?;
            let n = args
                .n
                .clone()
                .ok_or_else(|| CliError::Usage("--n is required with --case".into()))?;
            let grid = match (&args.at, args.h) {
                (Some(Point(at)), Some(h)) => Grid::uniform(at, h, &n)?,
                _ => random_grid(&case, &n, args.seed)?,
            };
            let ip = case.problem(grid)?;
            report(&args, &ip, &n, out)
        }
        (None, None) => Err(CliError::Usage("give a problem file or --case".into())),
    }
}

fn report(
    args: &DivdiffArgs,
    problem: &ImplicitProblem<'_>,
    n: &MultiIndex,
    out: &Output,
) -> CliResult<()> {
    if n.is_zero() {
        return Err(CliError::Usage("|n| >= 1 required".into()));
    }
    if n.q() != problem.grid().q() {
        return Err(implicit_dd::Error::DimensionMismatch {
            expected: problem.grid().q(),
            found: n.q(),
        }
        .into());
    }
    let style = args.index_style.into();
    if args.all {
        let mut values = Vec::new();
        for m in Method::ALL {
            let v = m.evaluate(problem, n)?;
            out.record(
                "value",
                json!({"method": m.name(), "n": n.coords(), "value": v}),
                format!("{:<9} {v}", m.name()),
            );
            values.push(v);
        }
        let mut worst: f64 = 0.0;
        for (i, a) in values.iter().enumerate() {
            for b in &values[i + 1..] {
                worst = worst.max((a - b).abs() / a.abs().max(b.abs()).max(1.0));
            }
        }
        out.record(
            "deviation",
            json!({"max_relative": worst}),
            format!("max deviation {worst:e}"),
        );
    } else {
        let v = args.method.evaluate(problem, n)?;
        out.record(
            "value",
            json!({"method": args.method.name(), "n": n.coords(), "value": v}),
            v.to_string(),
        );
    }
    if args.terms {
        let form = if args.method == Method::Tree {
            Form::Tree
        } else {
            Form::Polygon
        };
        for t in emit_terms(n, form)? {
            let s = t.render(style);
            out.record("term", json!({"term": s}), &s);
        }
    }
    if args.curly && n.order() >= 2 {
        for s in emit_curly_products(n, style)? {
            out.record("product", json!({"product": s}), &s);
        }
    }
    Ok(())
}
