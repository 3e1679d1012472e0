//! Divided differences of an implicitly defined `y` expressed through divided
//! differences of `g` only.
//!
//! Three evaluators compute `[x: a, b]y` on a grid where `y` is known at every
//! node:
//!
//! * [`Evaluator::recursive`]: the recursion over increasing paths, with lower
//!   order divided differences of `y` obtained by recursive self-calls;
//! * [`Evaluator::polygon`]: unit paths × polygon partitions × curly brackets;
//! * [`Evaluator::tree`]: unit paths × extended plane trees, one quotient per star.
//!
//! All three reduce to the first-order formula when `|b - a| = 1`.

mod terms;

use std::cell::RefCell;
use std::collections::HashMap;

pub use terms::{
    curly_symbol, curly_terms, emit_curly_products, emit_terms, main_quotient, unit_quotient, Form,
    GBracket, IndexStyle, Quotient, TermExpr,
};

use crate::ddcore::{divided_difference, g_divided_difference, GProvider, Grid, Tensor};
use crate::error::{Error, Result};
use crate::mindex::{enumerate_increasing_paths, enumerate_unit_paths, LatticePath, MultiIndex};
use crate::polytree::{enumerate_partitions, enumerate_tprime, star_type};

/// Residual allowed for `g(x_i, y_i)` at construction.
pub const RESIDUAL_TOLERANCE: f64 = 1e-10;

/// Relative size below which a denominator counts as zero.
pub const SINGULAR_TOLERANCE: f64 = 1e-12;

/// Neumaier's compensated summation.
#[derive(Default, Clone, Copy, Debug)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// `g`, a grid, and `y` sampled at every grid node.
pub struct ImplicitProblem<'g> {
    g: &'g dyn GProvider,
    grid: Grid,
    y: Tensor,
}

impl<'g> ImplicitProblem<'g> {
    /// Checks dimensions and that `|g(x_i, y_i)| < 1e-10` at every node.
    pub fn new(g: &'g dyn GProvider, grid: Grid, y: Tensor) -> Result<Self> {
        if g.q() != grid.q() {
            return Err(Error::DimensionMismatch {
                expected: g.q(),
                found: grid.q(),
            });
        }
        if y.shape() != grid.shape().as_slice() {
            return Err(Error::ShapeMismatch {
                expected: grid.shape(),
                found: y.shape().to_vec(),
            });
        }
        let mut worst: f64 = 0.0;
        Tensor::try_from_fn(grid.shape(), |i| {
            let r = g.value(&grid.point(i), y.get(i))?;
            worst = worst.max(r.abs());
            Ok(r)
        })?;
        if worst.is_nan() || worst >= RESIDUAL_TOLERANCE {
            return Err(Error::InconsistentPoint { residual: worst });
        }
        Ok(ImplicitProblem { g, grid, y })
    }

    pub fn g(&self) -> &'g dyn GProvider {
        self.g
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn y_values(&self) -> &Tensor {
        &self.y
    }

    pub fn y_at(&self, i: &MultiIndex) -> f64 {
        self.y.get(i)
    }

    /// A fresh evaluator with empty caches.
    pub fn evaluator(&self) -> Evaluator<'_> {
        Evaluator::new(self)
    }

    /// `[x: a, b]y` straight from the sampled `y` values.
    pub fn direct_between(&self, a: &MultiIndex, b: &MultiIndex) -> Result<f64> {
        self.check_box(a, b)?;
        let axes = (0..self.grid.q())
            .map(|j| self.grid.axis(j)[a.coords()[j]..=b.coords()[j]].to_vec())
            .collect();
        divided_difference(&self.y.slice(a, b), &Grid::new(axes)?)
    }

    fn check_box(&self, a: &MultiIndex, b: &MultiIndex) -> Result<()> {
        if !a.leq(b)? {
            return Err(Error::NotOrdered {
                from: a.to_string(),
                to: b.to_string(),
            });
        }
        if !self.grid.contains(b) {
            return Err(Error::invalid(format!(
                "index {b} lies outside the grid of shape {:?}",
                self.grid.shape()
            )));
        }
        Ok(())
    }
}

/// Evaluates the formulas on one problem, memoizing divided differences of `g`,
/// curly brackets and intermediate divided differences of `y`.
pub struct Evaluator<'a> {
    problem: &'a ImplicitProblem<'a>,
    brackets: RefCell<HashMap<GBracket, f64>>,
    curly: RefCell<HashMap<Vec<MultiIndex>, f64>>,
    ydd: RefCell<HashMap<(MultiIndex, MultiIndex), f64>>,
}

impl<'a> Evaluator<'a> {
    pub fn new(problem: &'a ImplicitProblem<'a>) -> Self {
        Evaluator {
            problem,
            brackets: RefCell::default(),
            curly: RefCell::default(),
            ydd: RefCell::default(),
        }
    }

    pub fn problem(&self) -> &ImplicitProblem<'a> {
        self.problem
    }

    /// Value of a divided difference of `g`.
    pub fn bracket(&self, b: &GBracket) -> Result<f64> {
        if let Some(v) = self.brackets.borrow().get(b) {
            return Ok(*v);
        }
        let grid = &self.problem.grid;
        if b.x.len() != grid.q() {
            return Err(Error::DimensionMismatch {
                expected: grid.q(),
                found: b.x.len(),
            });
        }
        let mut x_nodes = Vec::with_capacity(b.x.len());
        for (j, &(lo, hi)) in b.x.iter().enumerate() {
            let axis = grid.axis(j);
            if lo > hi || hi >= axis.len() {
                return Err(Error::invalid(format!("{b} reaches outside the grid")));
            }
            x_nodes.push(&axis[lo..=hi]);
        }
        let mut y_nodes = Vec::with_capacity(b.y.len());
        for i in &b.y {
            if !grid.contains(i) {
                return Err(Error::invalid(format!("{b} reaches outside the grid")));
            }
            y_nodes.push(self.problem.y_at(i));
        }
        let v = g_divided_difference(self.problem.g, &x_nodes, &y_nodes)?;
        self.brackets.borrow_mut().insert(b.clone(), v);
        Ok(v)
    }

    /// `num / den` with the denominator guard.
    pub fn quotient(&self, q: &Quotient) -> Result<f64> {
        let num = self.bracket(&q.num)?;
        let den = self.bracket(&q.den)?;
        let scale = num.abs().max(den.abs()).max(1.0);
        if den.abs() < SINGULAR_TOLERANCE * scale {
            return Err(Error::Singular {
                bracket: q.render(IndexStyle::Basis),
                denominator: den.abs(),
            });
        }
        Ok(num / den)
    }

    pub fn term(&self, t: &TermExpr) -> Result<f64> {
        let mut v = if t.negative { -1.0 } else { 1.0 };
        for q in &t.factors {
            v *= self.quotient(q)?;
        }
        Ok(v)
    }

    /// Sum of a list of terms, compensated.
    pub fn sum_terms(&self, terms: &[TermExpr]) -> Result<f64> {
        let mut acc = CompensatedSum::default();
        for t in terms {
            acc.add(self.term(t)?);
        }
        Ok(acc.value())
    }

    /// `[x: base, base + e_axis]y` by the first-order formula.
    pub fn r1(&self, base: &MultiIndex, axis: usize) -> Result<f64> {
        if axis >= base.q() {
            return Err(Error::invalid(format!("axis {} out of range", axis + 1)));
        }
        Ok(-self.quotient(&unit_quotient(base, axis))?)
    }

    /// The curly bracket `{i0 ... ik}g`.
    pub fn curly_bracket(&self, path: &LatticePath) -> Result<f64> {
        if let Some(v) = self.curly.borrow().get(path.points()) {
            return Ok(*v);
        }
        let v = self.sum_terms(&curly_terms(path)?)?;
        self.curly.borrow_mut().insert(path.points().to_vec(), v);
        Ok(v)
    }

    fn order_between(&self, a: &MultiIndex, b: &MultiIndex) -> Result<usize> {
        self.problem.check_box(a, b)?;
        let m = a.diff_to(b).expect("checked").order();
        if m == 0 {
            return Err(Error::invalid("the order n must satisfy |n| >= 1"));
        }
        Ok(m)
    }

    fn first_order(&self, a: &MultiIndex, b: &MultiIndex) -> Result<f64> {
        let axis = a.diff_to(b).and_then(|d| d.unit_axis()).expect("unit step");
        self.r1(a, axis)
    }

    /// `[x: a, b]y` by the recursion over increasing paths.
    pub fn recursive(&self, a: &MultiIndex, b: &MultiIndex) -> Result<f64> {
        self.order_between(a, b)?;
        self.recursive_inner(a, b)
    }

    fn recursive_inner(&self, a: &MultiIndex, b: &MultiIndex) -> Result<f64> {
        let key = (a.clone(), b.clone());
        if let Some(v) = self.ydd.borrow().get(&key) {
            return Ok(*v);
        }
        let m = a.diff_to(b).expect("a <= b").order();
        let v = match m {
            0 => self.problem.y_at(a),
            1 => self.first_order(a, b)?,
            _ => {
                let mut acc = CompensatedSum::default();
                for k in 2..=m {
                    for path in enumerate_increasing_paths(a, b, k)? {
                        let mut term = self.curly_bracket(&path)?;
                        for w in path.points().windows(2) {
                            if w[0].diff_to(&w[1]).expect("increasing").order() >= 2 {
                                term *= self.recursive_inner(&w[0], &w[1])?;
                            }
                        }
                        acc.add(term);
                    }
                }
                acc.value()
            }
        };
        self.ydd.borrow_mut().insert(key, v);
        Ok(v)
    }

    /// `[x: a, b]y` as a sum over unit paths and polygon partitions of products
    /// of curly brackets.
    pub fn polygon(&self, a: &MultiIndex, b: &MultiIndex) -> Result<f64> {
        if self.order_between(a, b)? == 1 {
            return self.first_order(a, b);
        }
        let mut acc = CompensatedSum::default();
        for path in enumerate_unit_paths(a, b)? {
            for partition in enumerate_partitions(path.points())? {
                let mut term = 1.0;
                for face in partition.face_labels() {
                    term *= self.curly_bracket(&LatticePath::new(face)?)?;
                }
                acc.add(term);
            }
        }
        Ok(acc.value())
    }

    /// `[x: a, b]y` as a sum over unit paths and extended trees of products of
    /// one quotient per star.
    pub fn tree(&self, a: &MultiIndex, b: &MultiIndex) -> Result<f64> {
        self.order_between(a, b)?;
        let mut acc = CompensatedSum::default();
        for path in enumerate_unit_paths(a, b)? {
            for tree in enumerate_tprime(path.points())? {
                let mut term = 1.0;
                for star in tree.stars() {
                    let ty = star_type(&star)
                        .ok_or_else(|| Error::MalformedTree(format!("untyped star in {tree}")))?;
                    term *= -self.quotient(&main_quotient(&star.root, &ty))?;
                }
                acc.add(term);
            }
        }
        Ok(acc.value())
    }
}

/// Shorthands evaluating `[x: 0, n]y` with a fresh evaluator.
impl ImplicitProblem<'_> {
    fn zero(&self) -> MultiIndex {
        MultiIndex::zeros(self.grid.q())
    }

    pub fn r1(&self, base: &MultiIndex, axis: usize) -> Result<f64> {
        self.evaluator().r1(base, axis)
    }

    pub fn curly_bracket(&self, path: &LatticePath) -> Result<f64> {
        self.evaluator().curly_bracket(path)
    }

    pub fn r2prime(&self, n: &MultiIndex) -> Result<f64> {
        self.evaluator().recursive(&self.zero(), n)
    }

    pub fn main_theorem_polygon(&self, n: &MultiIndex) -> Result<f64> {
        self.evaluator().polygon(&self.zero(), n)
    }

    pub fn main_theorem_tree(&self, n: &MultiIndex) -> Result<f64> {
        self.evaluator().tree(&self.zero(), n)
    }

    pub fn direct(&self, n: &MultiIndex) -> Result<f64> {
        self.direct_between(&self.zero(), n)
    }
}
