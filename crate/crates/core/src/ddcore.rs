//! Tensor-grid divided differences, the bar form `[x-nodes | y-nodes]g`, and the
//! [`GProvider`] abstraction over a concrete `g`.

use std::collections::HashMap;
use std::sync::Mutex;

use crate::combinat::factorial;
use crate::error::{Error, Result};
use crate::exprsym::{self, Expr, Var};
use crate::mindex::MultiIndex;

/// Per-axis node lists `x^j_0 < ... < x^j_{n_j}`.
#[derive(Clone, PartialEq, Debug)]
pub struct Grid {
    axes: Vec<Vec<f64>>,
}

impl Grid {
    /// Rejects empty axes, non-finite nodes, decreasing nodes and nodes closer
    /// than `1e-12` times the axis span.
    pub fn new(axes: Vec<Vec<f64>>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::invalid("a grid needs at least one axis"));
        }
        for (axis, nodes) in axes.iter().enumerate() {
            if nodes.is_empty() {
                return Err(Error::invalid(format!("axis {} has no nodes", axis + 1)));
            }
            if nodes.iter().any(|x| !x.is_finite()) {
                return Err(Error::invalid(format!(
                    "axis {} has a non-finite node",
                    axis + 1
                )));
            }
            let span = nodes[nodes.len() - 1] - nodes[0];
            for i in 1..nodes.len() {
                if nodes[i] < nodes[i - 1] {
                    return Err(Error::invalid(format!(
                        "nodes on axis {} must be increasing",
                        axis + 1
                    )));
                }
                if nodes[i] - nodes[i - 1] <= 1e-12 * span.abs() || nodes[i] == nodes[i - 1] {
                    return Err(Error::CoincidentNodes {
                        axis: axis + 1,
                        i: i - 1,
                        j: i,
                    });
                }
            }
        }
        Ok(Grid { axes })
    }

    /// Equispaced grid `x0_j + i h`, `i = 0..=n_j`.
    pub fn uniform(x0: &[f64], h: f64, n: &MultiIndex) -> Result<Self> {
        if x0.len() != n.q() {
            return Err(Error::DimensionMismatch {
                expected: n.q(),
                found: x0.len(),
            });
        }
        Grid::new(
            x0.iter()
                .zip(n.coords())
                .map(|(&a, &nj)| (0..=nj).map(|i| a + i as f64 * h).collect())
                .collect(),
        )
    }

    pub fn q(&self) -> usize {
        self.axes.len()
    }

    pub fn axis(&self, j: usize) -> &[f64] {
        &self.axes[j]
    }

    pub fn axes(&self) -> &[Vec<f64>] {
        &self.axes
    }

    /// Number of nodes per axis.
    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.len()).collect()
    }

    /// Whether `i` indexes a grid point.
    pub fn contains(&self, i: &MultiIndex) -> bool {
        i.q() == self.q() && i.coords().iter().zip(&self.axes).all(|(&c, a)| c < a.len())
    }

    /// The point `x_i`.
    pub fn point(&self, i: &MultiIndex) -> Vec<f64> {
        i.coords()
            .iter()
            .zip(&self.axes)
            .map(|(&c, a)| a[c])
            .collect()
    }
}

/// Dense row-major array of samples.
#[derive(Clone, PartialEq, Debug)]
pub struct Tensor {
    shape: Vec<usize>,
    data: Vec<f64>,
}

impl Tensor {
    pub fn new(shape: Vec<usize>, data: Vec<f64>) -> Result<Self> {
        let size: usize = shape.iter().product();
        if size != data.len() {
            return Err(Error::ShapeMismatch {
                expected: shape,
                found: vec![data.len()],
            });
        }
        Ok(Tensor { shape, data })
    }

    /// Fills each entry from its multi-index.
    pub fn try_from_fn(
        shape: Vec<usize>,
        mut f: impl FnMut(&MultiIndex) -> Result<f64>,
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(shape.iter().product());
        for_each_index(&shape, |idx| {
            data.push(f(&MultiIndex::new(idx.to_vec()))?);
            Ok(())
        })?;
        Ok(Tensor { shape, data })
    }

    pub fn from_fn(shape: Vec<usize>, mut f: impl FnMut(&MultiIndex) -> f64) -> Self {
        Self::try_from_fn(shape, |i| Ok(f(i))).expect("infallible")
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    fn offset(&self, idx: &[usize]) -> usize {
        idx.iter()
            .zip(&self.shape)
            .fold(0, |acc, (&i, &n)| acc * n + i)
    }

    /// Panics when `idx` is out of bounds.
    pub fn get(&self, idx: &MultiIndex) -> f64 {
        assert!(
            idx.coords().iter().zip(&self.shape).all(|(i, n)| i < n) && idx.q() == self.shape.len(),
            "index {idx} outside tensor of shape {:?}",
            self.shape
        );
        self.data[self.offset(idx.coords())]
    }

    /// Sub-box `lo..=hi` as a new tensor.
    pub fn slice(&self, lo: &MultiIndex, hi: &MultiIndex) -> Tensor {
        let shape: Vec<usize> = lo
            .coords()
            .iter()
            .zip(hi.coords())
            .map(|(a, b)| b - a + 1)
            .collect();
        Tensor::from_fn(shape, |i| self.get(&lo.plus(i)))
    }
}

fn for_each_index(shape: &[usize], mut f: impl FnMut(&[usize]) -> Result<()>) -> Result<()> {
    if shape.contains(&0) {
        return Ok(());
    }
    let mut idx = vec![0usize; shape.len()];
    loop {
        f(&idx)?;
        let mut axis = shape.len();
        loop {
            if axis == 0 {
                return Ok(());
            }
            axis -= 1;
            idx[axis] += 1;
            if idx[axis] < shape[axis] {
                break;
            }
            idx[axis] = 0;
        }
    }
}

/// Top divided difference `[x_0, ..., x_m]f` from samples, via the Newton table.
/// Nodes need to be distinct but not sorted.
pub fn divided_difference_1d(nodes: &[f64], values: &[f64]) -> f64 {
    debug_assert_eq!(nodes.len(), values.len());
    let mut c = values.to_vec();
    let m = c.len();
    for j in 1..m {
        for i in (j..m).rev() {
            c[i] = (c[i] - c[i - 1]) / (nodes[i] - nodes[i - j]);
        }
    }
    c[m - 1]
}

/// Reduces `data` (row-major, `shape`) one axis at a time in `order`.
fn reduce(mut data: Vec<f64>, shape: &[usize], nodes: &[&[f64]], order: &[usize]) -> f64 {
    let mut shape = shape.to_vec();
    for &axis in order {
        let n = shape[axis];
        let inner: usize = shape[axis + 1..].iter().product();
        let outer: usize = shape[..axis].iter().product();
        let mut next = Vec::with_capacity(outer * inner);
        let mut fiber = vec![0.0; n];
        for o in 0..outer {
            for i in 0..inner {
                for (k, v) in fiber.iter_mut().enumerate() {
                    *v = data[(o * n + k) * inner + i];
                }
                next.push(divided_difference_1d(nodes[axis], &fiber));
            }
        }
        // Still row-major, with the reduced axis collapsed to length 1.
        data = next;
        shape[axis] = 1;
    }
    data[0]
}

fn check_shape(values: &Tensor, grid: &Grid) -> Result<()> {
    if values.shape() != grid.shape().as_slice() {
        return Err(Error::ShapeMismatch {
            expected: grid.shape(),
            found: values.shape().to_vec(),
        });
    }
    Ok(())
}

/// The multivariate divided difference of `values` over the whole grid,
/// reducing the last axis first.
pub fn divided_difference(values: &Tensor, grid: &Grid) -> Result<f64> {
    let order: Vec<usize> = (0..grid.q()).rev().collect();
    divided_difference_in_order(values, grid, &order)
}

/// As [`divided_difference`] but reducing axes in the given order.
pub fn divided_difference_in_order(values: &Tensor, grid: &Grid, order: &[usize]) -> Result<f64> {
    check_shape(values, grid)?;
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != (0..grid.q()).collect::<Vec<_>>() {
        return Err(Error::invalid(format!(
            "{order:?} is not a permutation of the axes"
        )));
    }
    let nodes: Vec<&[f64]> = grid.axes().iter().map(|a| a.as_slice()).collect();
    Ok(reduce(
        values.data().to_vec(),
        values.shape(),
        &nodes,
        order,
    ))
}

/// Source of samples and exact partial derivatives of `g(x1, ..., xq, y)`.
///
/// Implementations must be deterministic: repeated queries return identical bits.
pub trait GProvider: Sync {
    fn q(&self) -> usize;

    fn value(&self, x: &[f64], y: f64) -> Result<f64>;

    /// `∂^{|s|+t} g / ∂x^s ∂y^t` at `(x, y)`.
    fn partial(&self, s: &MultiIndex, t: usize, x: &[f64], y: f64) -> Result<f64>;
}

/// A [`GProvider`] backed by a parsed expression; partial derivatives are built
/// symbolically on first use and cached.
pub struct ExprG {
    expr: Expr,
    q: usize,
    partials: Mutex<HashMap<(Vec<usize>, usize), Expr>>,
}

impl std::fmt::Debug for ExprG {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ExprG")
            .field("expr", &self.expr.to_string())
            .field("q", &self.q)
            .finish()
    }
}

impl ExprG {
    pub fn new(expr: Expr, q: usize) -> Self {
        ExprG {
            expr,
            q,
            partials: Mutex::new(HashMap::new()),
        }
    }

    pub fn parse(source: &str, q: usize) -> Result<Self> {
        Ok(Self::new(exprsym::parse(source, q)?, q))
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    /// The symbolic partial `g_{s,t}`.
    pub fn partial_expr(&self, s: &[usize], t: usize) -> Expr {
        let mut cache = self.partials.lock().expect("partials cache poisoned");
        partial_rec(&self.expr, s, t, &mut cache)
    }

    fn point(&self, x: &[f64], y: f64) -> Result<Vec<f64>> {
        if x.len() != self.q {
            return Err(Error::DimensionMismatch {
                expected: self.q,
                found: x.len(),
            });
        }
        let mut p = x.to_vec();
        p.push(y);
        Ok(p)
    }
}

fn partial_rec(
    base: &Expr,
    s: &[usize],
    t: usize,
    cache: &mut HashMap<(Vec<usize>, usize), Expr>,
) -> Expr {
    if t == 0 && s.iter().all(|&c| c == 0) {
        return base.clone();
    }
    let key = (s.to_vec(), t);
    if let Some(e) = cache.get(&key) {
        return e.clone();
    }
    let e = if t > 0 {
        partial_rec(base, s, t - 1, cache).diff(Var::Y)
    } else {
        let axis = s.iter().rposition(|&c| c > 0).expect("nonzero s");
        let mut lower = s.to_vec();
        lower[axis] -= 1;
        partial_rec(base, &lower, 0, cache).diff(Var::X(axis))
    };
    cache.insert(key, e.clone());
    e
}

impl GProvider for ExprG {
    fn q(&self) -> usize {
        self.q
    }

    fn value(&self, x: &[f64], y: f64) -> Result<f64> {
        Ok(self.expr.eval(&self.point(x, y)?)?)
    }

    fn partial(&self, s: &MultiIndex, t: usize, x: &[f64], y: f64) -> Result<f64> {
        if s.q() != self.q {
            return Err(Error::DimensionMismatch {
                expected: self.q,
                found: s.q(),
            });
        }
        let point = self.point(x, y)?;
        Ok(self.partial_expr(s.coords(), t).eval(&point)?)
    }
}

/// Checks that `y_nodes` are pairwise distinct (relative to their magnitude).
pub fn check_distinct_y(y_nodes: &[f64]) -> Result<()> {
    for i in 0..y_nodes.len() {
        for j in i + 1..y_nodes.len() {
            let (a, b) = (y_nodes[i], y_nodes[j]);
            if (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0) {
                return Err(Error::CoincidentY { i, j, value: a });
            }
        }
    }
    Ok(())
}

/// `[x-nodes | y-nodes]g`: divided difference of `g` with `y` as an extra axis.
/// `x_nodes[j]` lists the nodes used on axis `j`; `y_nodes` may be unsorted but
/// must be distinct.
pub fn g_divided_difference(p: &dyn GProvider, x_nodes: &[&[f64]], y_nodes: &[f64]) -> Result<f64> {
    let q = p.q();
    if x_nodes.len() != q {
        return Err(Error::DimensionMismatch {
            expected: q,
            found: x_nodes.len(),
        });
    }
    for (axis, nodes) in x_nodes.iter().enumerate() {
        if nodes.is_empty() {
            return Err(Error::invalid(format!("no nodes on axis {}", axis + 1)));
        }
        for i in 0..nodes.len() {
            for j in i + 1..nodes.len() {
                if nodes[i] == nodes[j] {
                    return Err(Error::CoincidentNodes {
                        axis: axis + 1,
                        i,
                        j,
                    });
                }
            }
        }
    }
    if y_nodes.is_empty() {
        return Err(Error::invalid("no y nodes"));
    }
    check_distinct_y(y_nodes)?;

    let mut shape: Vec<usize> = x_nodes.iter().map(|n| n.len()).collect();
    shape.push(y_nodes.len());
    let mut data = Vec::with_capacity(shape.iter().product());
    let mut x = vec![0.0; q];
    for_each_index(&shape, |idx| {
        for j in 0..q {
            x[j] = x_nodes[j][idx[j]];
        }
        data.push(p.value(&x, y_nodes[idx[q]])?);
        Ok(())
    })?;
    let mut nodes: Vec<&[f64]> = x_nodes.to_vec();
    nodes.push(y_nodes);
    let order: Vec<usize> = (0..=q).rev().collect();
    Ok(reduce(data, &shape, &nodes, &order))
}

/// `s! t!`: a fully coalesced `[x | y]g` of order `(s, t)` equals `g_{s,t} / (s! t!)`.
/// With `t = 0` this is the `n!` relating coalesced divided differences of `y`
/// to `y_n`.
pub fn coalescence_factor(s: &MultiIndex, t: usize) -> u128 {
    s.factorial() * factorial(t)
}
