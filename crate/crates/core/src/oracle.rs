//! Ground truth for the implicit evaluators: a catalog of test functions,
//! a one-dimensional root solver for `y(x)`, direct divided differences of the
//! solved samples and exact derivatives of closed-form solutions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ddcore::{divided_difference, ExprG, GProvider, Grid, Tensor};
use crate::error::{Error, Result};
use crate::exprsym::{self, Expr};
use crate::implicit::ImplicitProblem;
use crate::mindex::MultiIndex;

const NEWTON_MAX_ITER: usize = 50;
const NEWTON_TOLERANCE: f64 = 1e-14;
const BRACKETED_MAX_ITER: usize = 200;

/// Minimum node gap in random grids, relative to the domain width.
pub const MIN_SEPARATION: f64 = 0.05;
/// Random grids whose solved `y` values come closer than this are redrawn.
pub const MIN_Y_GAP: f64 = 1e-8;

/// How to pick the branch of `y` at a point.
#[derive(Clone, Copy, PartialEq, Debug)]
pub enum RootStart {
    /// `g` changes sign on `[lo, hi]`.
    Bracket(f64, f64),
    /// Plain Newton from this value.
    Guess(f64),
}

/// A named implicit equation with its domain and, when known, the explicit solution.
#[derive(Debug)]
pub struct TestCase {
    pub name: &'static str,
    pub g: ExprG,
    pub domain: Vec<(f64, f64)>,
    pub start: RootStart,
    pub closed_form: Option<Expr>,
}

impl TestCase {
    fn build(
        name: &'static str,
        q: usize,
        g: &str,
        domain: Vec<(f64, f64)>,
        start: RootStart,
        closed_form: Option<&str>,
    ) -> Self {
        let g = ExprG::parse(g, q).expect("catalog expression parses");
        let closed_form =
            closed_form.map(|s| exprsym::parse(s, q).expect("catalog closed form parses"));
        TestCase {
            name,
            g,
            domain,
            start,
            closed_form,
        }
    }

    pub fn q(&self) -> usize {
        self.g.q()
    }

    /// Solves `g(x, y) = 0` for `y` using the case's branch selection.
    pub fn solve(&self, x: &[f64]) -> Result<f64> {
        solve_y(&self.g, x, self.start)
    }

    /// The closed-form `y(x)`.
    pub fn exact_y(&self, x: &[f64]) -> Result<f64> {
        let form = self.closed_form()?;
        Ok(form.eval(&with_dummy_y(x))?)
    }

    fn closed_form(&self) -> Result<&Expr> {
        self.closed_form
            .as_ref()
            .ok_or_else(|| Error::MissingClosedForm(self.name.to_string()))
    }

    /// Solved `y` at every grid point.
    pub fn sample(&self, grid: &Grid) -> Result<Tensor> {
        if grid.q() != self.q() {
            return Err(Error::DimensionMismatch {
                expected: self.q(),
                found: grid.q(),
            });
        }
        Tensor::try_from_fn(grid.shape(), |i| self.solve(&grid.point(i)))
    }

    /// Grid plus solved samples, ready for the implicit evaluators.
    pub fn problem(&self, grid: Grid) -> Result<ImplicitProblem<'_>> {
        let y = self.sample(&grid)?;
        ImplicitProblem::new(&self.g, grid, y)
    }
}

fn with_dummy_y(x: &[f64]) -> Vec<f64> {
    let mut p = x.to_vec();
    p.push(0.0);
    p
}

/// Names of the built-in cases.
pub const CATALOG: [&str; 5] = ["product", "sphere", "quadratic", "exp", "sphere3"];

/// Builds the named catalog case.
pub fn test_case(name: &str) -> Result<TestCase> {
    let case = match name {
        "product" => TestCase::build(
            "product",
            2,
            "y - x1*x2",
            vec![(0.5, 1.5); 2],
            RootStart::Guess(0.0),
            Some("x1*x2"),
        ),
        "sphere" => TestCase::build(
            "sphere",
            2,
            "x1^2 + x2^2 + y^2 - 1",
            vec![(0.0, 0.6); 2],
            RootStart::Bracket(0.0, 1.5),
            Some("sqrt(1 - x1^2 - x2^2)"),
        ),
        "quadratic" => TestCase::build(
            "quadratic",
            2,
            "x1*y^2 + x2*y - 1",
            vec![(0.5, 1.5); 2],
            RootStart::Bracket(0.0, 3.0),
            Some("(sqrt(x2^2 + 4*x1) - x2)/(2*x1)"),
        ),
        "exp" => TestCase::build(
            "exp",
            2,
            "y - exp(x1 + x2)",
            vec![(0.0, 1.0); 2],
            RootStart::Guess(1.0),
            Some("exp(x1 + x2)"),
        ),
        "sphere3" => TestCase::build(
            "sphere3",
            3,
            "x1^2 + x2^2 + x3^2 + y^2 - 1",
            vec![(0.0, 0.5); 3],
            RootStart::Bracket(0.0, 1.5),
            Some("sqrt(1 - x1^2 - x2^2 - x3^2)"),
        ),
        _ => return Err(Error::UnknownCase(name.to_string())),
    };
    Ok(case)
}

/// Root of `y -> g(x, y)`: safeguarded Newton on a sign-changing bracket, or
/// plain Newton from a guess.
pub fn solve_y(g: &dyn GProvider, x: &[f64], start: RootStart) -> Result<f64> {
    if x.len() != g.q() {
        return Err(Error::DimensionMismatch {
            expected: g.q(),
            found: x.len(),
        });
    }
    match start {
        RootStart::Bracket(lo, hi) => bracketed(g, x, lo, hi),
        RootStart::Guess(y0) => newton(g, x, y0),
    }
}

fn unsolvable(x: &[f64], reason: impl Into<String>) -> Error {
    Error::Unsolvable {
        x: x.to_vec(),
        reason: reason.into(),
    }
}

fn g_y(g: &dyn GProvider, x: &[f64], y: f64) -> Result<f64> {
    g.partial(&MultiIndex::zeros(g.q()), 1, x, y)
}

fn newton(g: &dyn GProvider, x: &[f64], mut y: f64) -> Result<f64> {
    for _ in 0..NEWTON_MAX_ITER {
        let v = g.value(x, y)?;
        if v == 0.0 {
            return Ok(y);
        }
        let d = g_y(g, x, y)?;
        if d == 0.0 {
            return Err(unsolvable(x, format!("zero derivative in y at y = {y}")));
        }
        let step = v / d;
        y -= step;
        if !y.is_finite() {
            return Err(unsolvable(x, "Newton iteration diverged"));
        }
        if step.abs() <= NEWTON_TOLERANCE * y.abs().max(1.0) {
            return Ok(y);
        }
    }
    Err(unsolvable(
        x,
        format!("Newton did not converge in {NEWTON_MAX_ITER} steps"),
    ))
}

fn bracketed(g: &dyn GProvider, x: &[f64], mut lo: f64, mut hi: f64) -> Result<f64> {
    if lo.is_nan() || hi.is_nan() || lo >= hi {
        return Err(Error::invalid(format!("empty bracket ({lo}, {hi})")));
    }
    let mut f_lo = g.value(x, lo)?;
    let f_hi = g.value(x, hi)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        // Without a sign change the bracket is only a starting region.
        return newton(g, x, 0.5 * (lo + hi)).map_err(|_| {
            unsolvable(
                x,
                format!("no sign change on ({lo}, {hi}) and Newton failed"),
            )
        });
    }
    let mut y = 0.5 * (lo + hi);
    for _ in 0..BRACKETED_MAX_ITER {
        let v = g.value(x, y)?;
        if v == 0.0 {
            return Ok(y);
        }
        if v.signum() == f_lo.signum() {
            lo = y;
            f_lo = v;
        } else {
            hi = y;
        }
        let d = g_y(g, x, y)?;
        let candidate = y - v / d;
        let next = if d != 0.0 && candidate > lo && candidate < hi {
            candidate
        } else {
            0.5 * (lo + hi)
        };
        let step = (next - y).abs();
        y = next;
        if step <= NEWTON_TOLERANCE * y.abs().max(1.0)
            || hi - lo <= NEWTON_TOLERANCE * y.abs().max(1.0)
        {
            return Ok(y);
        }
    }
    Err(unsolvable(x, "bracketed iteration did not converge"))
}

/// Divided difference of the solved `y` over the whole grid.
pub fn direct_dd_y(case: &TestCase, grid: &Grid) -> Result<f64> {
    divided_difference(&case.sample(grid)?, grid)
}

/// `∂^n y` of the closed form at `x`.
pub fn exact_derivative_y(case: &TestCase, x: &[f64], n: &MultiIndex) -> Result<f64> {
    if n.q() != case.q() || x.len() != case.q() {
        return Err(Error::DimensionMismatch {
            expected: case.q(),
            found: if n.q() != case.q() { n.q() } else { x.len() },
        });
    }
    let d = case.closed_form()?.partial(n.coords(), 0);
    Ok(d.eval(&with_dummy_y(x))?)
}

/// Sorted nodes on `(lo, hi)` with gaps of at least `MIN_SEPARATION · (hi - lo)`.
fn random_axis(rng: &mut ChaCha8Rng, lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let gap = MIN_SEPARATION * (hi - lo);
    loop {
        let mut nodes: Vec<f64> = (0..count).map(|_| rng.gen_range(lo..hi)).collect();
        nodes.sort_by(f64::total_cmp);
        if nodes.windows(2).all(|w| w[1] - w[0] >= gap) {
            return nodes;
        }
    }
}

fn ys_separated(y: &Tensor) -> bool {
    let d = y.data();
    (0..d.len()).all(|i| (i + 1..d.len()).all(|j| (d[i] - d[j]).abs() >= MIN_Y_GAP))
}

/// A reproducible random grid with `n_j + 1` nodes per axis in the case's
/// domain, redrawn until all solved `y` values are pairwise distinct.
pub fn random_grid(case: &TestCase, n: &MultiIndex, seed: u64) -> Result<Grid> {
    if n.q() != case.q() {
        return Err(Error::DimensionMismatch {
            expected: case.q(),
            found: n.q(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..1000 {
        let axes = case
            .domain
            .iter()
            .zip(n.coords())
            .map(|(&(lo, hi), &nj)| random_axis(&mut rng, lo, hi, nj + 1))
            .collect();
        let grid = Grid::new(axes)?;
        if ys_separated(&case.sample(&grid)?) {
            return Ok(grid);
        }
    }
    Err(Error::invalid(format!(
        "could not draw a grid with distinct y values for `{}`",
        case.name
    )))
}
