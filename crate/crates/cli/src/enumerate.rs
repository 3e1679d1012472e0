use clap::{Args, ValueEnum};
use implicit_dd::hideriv::enumerate_deriv_partitions;
use implicit_dd::mindex::{compatible_tuples, enumerate_increasing_paths, enumerate_unit_paths};
use implicit_dd::polytree::{enumerate_partitions, enumerate_tprime, enumerate_trees};
use implicit_dd::{LatticePath, MultiIndex};
use serde_json::json;

use crate::error::{CliError, CliResult};
use crate::output::Output;
use crate::parse_index;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    /// Lattice paths from 0 to n (unit steps, or k increasing steps with --k).
    Paths,
    /// Polygon partitions, as lists of faces.
    Partitions,
    /// Plane trees without unary nodes, as bracket shapes.
    Trees,
    /// Trees with every star extended to a typed star, per unit path.
    Tprime,
    /// Compatible tuples (s, t) of a path.
    Tuples,
    /// Derivative partitions of n.
    Derivparts,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::Paths => "paths",
            Kind::Partitions => "partitions",
            Kind::Trees => "trees",
            Kind::Tprime => "tprime",
            Kind::Tuples => "tuples",
            Kind::Derivparts => "derivparts",
        }
    }
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[arg(value_enum)]
    kind: Kind,

    /// Target multi-index, e.g. `1,1`.
    #[arg(long, value_parser = parse_index)]
    n: Option<MultiIndex>,

    /// Number of polygon vertices, labelled 0, 1, 2, ...
    #[arg(long)]
    vertices: Option<usize>,

    /// Path, e.g. `"(0,0) (1,0) (2,0)"`.
    #[arg(long)]
    path: Option<String>,

    /// Number of steps for increasing (not necessarily unit) paths.
    #[arg(long)]
    k: Option<usize>,

    /// Print only the count.
    #[arg(long)]
    count: bool,
}

fn require<T: Clone>(v: &Option<T>, flag: &str, kind: Kind) -> CliResult<T> {
    v.clone()
        .ok_or_else(|| CliError::Usage(format!("{} needs {flag}", kind.name())))
}

/// Vertex labels from `--path`, or `0..vertices` on a line.
fn labels(args: &EnumerateArgs) -> CliResult<Vec<MultiIndex>> {
    match (&args.path, args.vertices) {
        (Some(p), _) => Ok(p.parse::<LatticePath>()?.points().to_vec()),
        (None, Some(v)) => Ok((0..v).map(|i| MultiIndex::new(vec![i])).collect()),
        (None, None) => Err(CliError::Usage(format!(
            "{} needs --vertices or --path",
            args.kind.name()
        ))),
    }
}

fn listing(args: &EnumerateArgs) -> CliResult<Vec<String>> {
    let kind = args.kind;
    Ok(match kind {
        Kind::Paths => {
            let n = require(&args.n, "--n", kind)?;
            let zero = MultiIndex::zeros(n.q());
            let paths = match args.k {
                Some(k) => enumerate_increasing_paths(&zero, &n, k)?,
                None => enumerate_unit_paths(&zero, &n)?,
            };
            paths.iter().map(|p| p.to_string()).collect()
        }
        Kind::Partitions => enumerate_partitions(&labels(args)?)?
            .iter()
            .map(|p| p.notation())
            .collect(),
        Kind::Trees => enumerate_trees(&labels(args)?)?
            .iter()
            .map(|t| t.to_string())
            .collect(),
        Kind::Tprime => match (&args.path, &args.n) {
            (Some(_), _) => enumerate_tprime(&labels(args)?)?
                .iter()
                .map(|t| t.to_string())
                .collect(),
            (None, Some(n)) => {
                let mut lines = Vec::new();
                for path in enumerate_unit_paths(&MultiIndex::zeros(n.q()), n)? {
                    for t in enumerate_tprime(path.points())? {
                        lines.push(format!("{path}: {t}"));
                    }
                }
                lines
            }
            (None, None) => return Err(CliError::Usage("tprime needs --path or --n".into())),
        },
        Kind::Tuples => {
            let path: LatticePath = require(&args.path, "--path", kind)?.parse()?;
            compatible_tuples(&path)
                .iter()
                .map(|t| t.to_string())
                .collect()
        }
        Kind::Derivparts => {
            let n = require(&args.n, "--n", kind)?;
            enumerate_deriv_partitions(&n)?
                .iter()
                .map(|p| p.to_string())
                .collect()
        }
    })
}

pub fn run(args: EnumerateArgs, out: &Output) -> CliResult<()> {
    let items = listing(&args)?;
    let kind = args.kind.name();
    if !args.count {
        for (i, item) in items.iter().enumerate() {
            out.record(
                "item",
                json!({"kind": kind, "index": i, "value": item}),
                item,
            );
        }
    }
    let text = if args.count {
        items.len().to_string()
    } else {
        format!("count {}", items.len())
    };
    out.record("count", json!({"kind": kind, "count": items.len()}), text);
    Ok(())
}
