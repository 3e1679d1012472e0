use std::collections::BTreeMap;

use clap::{Args, ValueEnum};
use implicit_dd::hideriv::{
    coalesced_tree_form, derivative_corollary, enumerate_deriv_partitions, partition_coefficient,
    star_type_census,
};
use implicit_dd::mindex::{box_points, enumerate_unit_paths};
use implicit_dd::oracle::{direct_dd_y, random_grid, test_case, TestCase};
use implicit_dd::polytree::{
    count_trees_by_outdegree, enumerate_partitions, enumerate_tprime, enumerate_trees,
    tprime_extensions,
};
use implicit_dd::MultiIndex;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::error::{CliError, CliResult};
use crate::output::Output;

const EQUIVALENCE_TOL: f64 = 1e-11;
const ORACLE_TOL: f64 = 1e-7;
const COROLLARY_TOL: f64 = 1e-11;
const Q2_CASES: [&str; 4] = ["product", "sphere", "quadratic", "exp"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// Recursive, polygon and tree forms agree with each other.
    Equivalence,
    /// Every form agrees with the Newton table of the solved y.
    Oracle,
    /// Tree census matches derivative-partition coefficients.
    Coefficients,
    /// Partition, tree and extended-tree counts.
    Counts,
    /// All of the above.
    All,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    suite: Suite,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Largest |n| swept (q = 2).
    #[arg(long, default_value_t = 3)]
    max_order: usize,

    /// Random grids per order and case.
    #[arg(long, default_value_t = 3)]
    grids: u64,
}

struct Check {
    suite: &'static str,
    name: String,
    pass: bool,
    detail: String,
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

fn orders(q: usize, lo: usize, hi: usize) -> Vec<MultiIndex> {
    box_points(&MultiIndex::zeros(q), &MultiIndex::new(vec![hi; q]))
        .into_iter()
        .filter(|n| (lo..=hi).contains(&n.order()))
        .collect()
}

struct Deviations {
    equivalence: f64,
    oracle: f64,
    problems: usize,
}

fn sweep_case(case: &TestCase, ns: &[MultiIndex], args: &VerifyArgs) -> CliResult<Deviations> {
    let mut d = Deviations {
        equivalence: 0.0,
        oracle: 0.0,
        problems: 0,
    };
    for (k, n) in ns.iter().enumerate() {
        for g in 0..args.grids {
            let seed = args
                .seed
                .wrapping_mul(1_000_003)
                .wrapping_add(1000 * k as u64 + g);
            let grid = random_grid(case, n, seed)?;
            let direct = direct_dd_y(case, &grid)?;
            let problem = case.problem(grid)?;
            let values = [
                problem.r2prime(n)?,
                problem.main_theorem_polygon(n)?,
                problem.main_theorem_tree(n)?,
            ];
            for i in 0..3 {
                for j in i + 1..3 {
                    d.equivalence = d.equivalence.max(rel(values[i], values[j]));
                }
                d.oracle = d.oracle.max(rel(values[i], direct));
            }
            d.problems += 1;
        }
    }
    Ok(d)
}

fn forms(args: &VerifyArgs, suites: (bool, bool), checks: &mut Vec<Check>) -> CliResult<()> {
    let mut runs: Vec<(&str, Vec<MultiIndex>)> = Q2_CASES
        .iter()
        .map(|&c| (c, orders(2, 2, args.max_order)))
        .collect();
    runs.push(("sphere3", vec![MultiIndex::new(vec![1, 1, 1])]));
    for (name, ns) in runs {
        let case = test_case(name)?;
        let d = sweep_case(&case, &ns, args)?;
        if suites.0 {
            checks.push(Check {
                suite: "equivalence",
                name: name.to_string(),
                pass: d.equivalence <= EQUIVALENCE_TOL,
                detail: format!(
                    "{} grids, max rel diff {:e} (tol {EQUIVALENCE_TOL:e})",
                    d.problems, d.equivalence
                ),
            });
        }
        if suites.1 {
            checks.push(Check {
                suite: "oracle",
                name: name.to_string(),
                pass: d.oracle <= ORACLE_TOL,
                detail: format!(
                    "{} grids, max rel diff {:e} (tol {ORACLE_TOL:e})",
                    d.problems, d.oracle
                ),
            });
        }
    }
    Ok(())
}

fn coefficients(args: &VerifyArgs, checks: &mut Vec<Check>) -> CliResult<()> {
    let mut mismatches = Vec::new();
    let mut total = 0;
    for n in orders(2, 1, args.max_order) {
        let census = star_type_census(&n)?;
        for p in enumerate_deriv_partitions(&n)? {
            total += 1;
            let count = census.get(&p).copied().unwrap_or(0);
            if Ratio::from_integer(count) != partition_coefficient(&p) {
                mismatches.push(format!("{n} {p}"));
            }
        }
        if census.len() != enumerate_deriv_partitions(&n)?.len() {
            mismatches.push(format!("{n}: extra star-type classes"));
        }
    }
    checks.push(Check {
        suite: "coefficients",
        name: "census".into(),
        pass: mismatches.is_empty(),
        detail: if mismatches.is_empty() {
            format!("{total} partitions, exact")
        } else {
            mismatches.join("; ")
        },
    });

    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut worst: f64 = 0.0;
    for name in Q2_CASES {
        let case = test_case(name)?;
        for n in orders(2, 1, args.max_order) {
            let x: Vec<f64> = case
                .domain
                .iter()
                .map(|&(lo, hi)| rng.gen_range(lo..hi))
                .collect();
            let y = case.solve(&x)?;
            let a = derivative_corollary(&case.g, &x, y, &n)?;
            let b = coalesced_tree_form(&case.g, &x, y, &n)?.value * n.factorial() as f64;
            worst = worst.max(rel(b, a));
        }
    }
    checks.push(Check {
        suite: "coefficients",
        name: "tree-form".into(),
        pass: worst <= COROLLARY_TOL,
        detail: format!("max rel diff {worst:e} (tol {COROLLARY_TOL:e})"),
    });
    Ok(())
}

/// Preorder outdegree words of all plane trees with `vertices` vertices.
fn plane_tree_words(vertices: usize) -> Vec<Vec<usize>> {
    fn go(left: usize, open: usize, w: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            if open == 0 {
                out.push(w.clone());
            }
            return;
        }
        if open == 0 {
            return;
        }
        for d in 0..left {
            w.push(d);
            go(left - 1, open - 1 + d, w, out);
            w.pop();
        }
    }
    let mut out = Vec::new();
    go(vertices, 1, &mut Vec::new(), &mut out);
    out
}

fn counts(checks: &mut Vec<Check>) -> CliResult<()> {
    let gon = (2..=5)
        .map(|k| {
            let labels: Vec<MultiIndex> = (0..=k).map(|i| MultiIndex::new(vec![i])).collect();
            enumerate_partitions(&labels).map(|p| p.len())
        })
        .collect::<implicit_dd::Result<Vec<_>>>()?;
    checks.push(Check {
        suite: "counts",
        name: "polygon-partitions".into(),
        pass: gon == [1, 3, 11, 45],
        detail: format!("{gon:?} for 3..6 vertices"),
    });

    let mut bad = Vec::new();
    let mut profiles = 0;
    for v in 1..=8 {
        let mut census: BTreeMap<BTreeMap<usize, usize>, u128> = BTreeMap::new();
        for w in plane_tree_words(v) {
            let mut profile = BTreeMap::new();
            for d in w {
                *profile.entry(d).or_insert(0) += 1;
            }
            *census.entry(profile).or_insert(0) += 1;
        }
        for (profile, count) in census {
            profiles += 1;
            if count_trees_by_outdegree(&profile).ok() != Some(count) {
                bad.push(format!("{profile:?}"));
            }
        }
    }
    checks.push(Check {
        suite: "counts",
        name: "outdegree-formula".into(),
        pass: bad.is_empty(),
        detail: if bad.is_empty() {
            format!("{profiles} profiles up to 8 vertices")
        } else {
            bad.join("; ")
        },
    });

    let path: Vec<MultiIndex> = [[0, 0], [1, 0], [1, 1], [2, 1]]
        .iter()
        .map(|c| MultiIndex::new(c.to_vec()))
        .collect();
    let mut per_tree = enumerate_trees(&path)?
        .iter()
        .map(|t| tprime_extensions(t).map(|e| e.len()))
        .collect::<implicit_dd::Result<Vec<_>>>()?;
    per_tree.sort_unstable_by(|a, b| b.cmp(a));
    checks.push(Check {
        suite: "counts",
        name: "extended-trees".into(),
        pass: per_tree == [4, 3, 3],
        detail: format!("{per_tree:?} for path (0,0) (1,0) (1,1) (2,1)"),
    });

    let n = MultiIndex::new(vec![1, 1]);
    let mut table = 0;
    for p in enumerate_unit_paths(&MultiIndex::zeros(2), &n)? {
        table += enumerate_tprime(p.points())?.len();
    }
    checks.push(Check {
        suite: "counts",
        name: "trees-n11".into(),
        pass: table == 5,
        detail: format!("{table} trees"),
    });
    Ok(())
}

pub fn run(args: VerifyArgs, out: &Output) -> CliResult<()> {
    if args.max_order < 2 {
        return Err(CliError::Usage("--max-order must be at least 2".into()));
    }
    let mut checks = Vec::new();
    let all = args.suite == Suite::All;
    let eq = all || args.suite == Suite::Equivalence;
    let or = all || args.suite == Suite::Oracle;
    if eq || or {
        forms(&args, (eq, or), &mut checks)?;
    }
    if all || args.suite == Suite::Coefficients {
        coefficients(&args, &mut checks)?;
    }
    if all || args.suite == Suite::Counts {
        counts(&mut checks)?;
    }

    let mut failed = Vec::new();
    for c in &checks {
        let verdict = if c.pass { "PASS" } else { "FAIL" };
        out.record(
            "check",
            json!({"suite": c.suite, "name": c.name, "pass": c.pass, "detail": c.detail}),
            format!("{verdict} {} {}: {}", c.suite, c.name, c.detail),
        );
        if !c.pass {
            failed.push(format!("{} {}", c.suite, c.name));
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verification(failed.join(", ")))
    }
}
