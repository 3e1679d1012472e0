//! Multi-indices in ℕ^q, the componentwise partial order, monotone lattice
//! paths, and the compatible tuples attached to a path.
//!
//! All enumerations return fully materialized lists in a fixed order so that
//! downstream term listings are deterministic:
//!
//! * unit-step paths are listed lexicographically by their step axes
//!   (`e1` before `e2`),
//! * increasing paths lexicographically by their point sequence,
//! * compatible tuples by decreasing `t`.

use std::fmt;
use std::str::FromStr;

use crate::combinat;
use crate::error::{Error, Result};

/// A point of ℕ^q. The dimension `q` travels with every value.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    /// Panics if `coords` is empty.
    pub fn new(coords: Vec<usize>) -> Self {
        assert!(!coords.is_empty(), "a multi-index needs q >= 1 coordinates");
        MultiIndex(coords)
    }

    pub fn zeros(q: usize) -> Self {
        Self::new(vec![0; q])
    }

    /// The standard basis vector `e_{axis+1}` (axes are 0-based here).
    pub fn unit(q: usize, axis: usize) -> Self {
        let mut c = vec![0; q];
        c[axis] = 1;
        Self::new(c)
    }

    pub fn q(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[usize] {
        &self.0
    }

    /// `|a|`, the sum of the coordinates.
    pub fn order(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// `a!` = product of coordinate factorials.
    pub fn factorial(&self) -> u128 {
        self.0.iter().map(|&c| combinat::factorial(c)).product()
    }

    pub fn check_dim(&self, other: &MultiIndex) -> Result<()> {
        if self.q() != other.q() {
            return Err(Error::DimensionMismatch {
                expected: self.q(),
                found: other.q(),
            });
        }
        Ok(())
    }

    /// Componentwise `self <= other`.
    pub fn leq(&self, other: &MultiIndex) -> Result<bool> {
        self.check_dim(other)?;
        Ok(self.0.iter().zip(&other.0).all(|(a, b)| a <= b))
    }

    /// Strict version of [`leq`](Self::leq): `self <= other` and `self != other`.
    pub fn lt(&self, other: &MultiIndex) -> Result<bool> {
        Ok(self.leq(other)? && self != other)
    }

    /// `other - self` when `self <= other`.
    pub fn diff_to(&self, other: &MultiIndex) -> Option<MultiIndex> {
        if self.q() != other.q() {
            return None;
        }
        let mut out = Vec::with_capacity(self.q());
        for (a, b) in self.0.iter().zip(&other.0) {
            out.push(b.checked_sub(*a)?);
        }
        Some(MultiIndex(out))
    }

    pub fn plus(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.q(), other.q());
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn plus_unit(&self, axis: usize) -> MultiIndex {
        let mut c = self.0.clone();
        c[axis] += 1;
        MultiIndex(c)
    }

    /// `Some(r)` when `self == e_{r+1}`.
    pub fn unit_axis(&self) -> Option<usize> {
        let mut axis = None;
        for (r, &c) in self.0.iter().enumerate() {
            match c {
                0 => {}
                1 if axis.is_none() => axis = Some(r),
                _ => return None,
            }
        }
        axis
    }

    /// Basis-vector notation: `0`, `e1`, `2e1`, `e1+e2`, `2e1+3e2`, ...
    pub fn basis_notation(&self) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(r, &c)| {
                if c == 1 {
                    format!("e{}", r + 1)
                } else {
                    format!("{}e{}", c, r + 1)
                }
            })
            .collect();
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join("+")
        }
    }

    /// Compact digit string used in derivative names such as `g101`.
    pub fn digit_string(&self) -> String {
        self.0.iter().map(|c| c.to_string()).collect()
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Accepts `(1,0,2)` or `1,0,2`.
impl FromStr for MultiIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let coords = inner
            .split(',')
            .map(|c| {
                c.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::invalid(format!("bad multi-index `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        if coords.is_empty() {
            return Err(Error::invalid("empty multi-index"));
        }
        Ok(MultiIndex(coords))
    }
}

/// `a <= b` componentwise.
pub fn partial_leq(a: &MultiIndex, b: &MultiIndex) -> Result<bool> {
    a.leq(b)
}

/// A strictly increasing sequence of multi-indices `p0 < p1 < ... < pk`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LatticePath {
    points: Vec<MultiIndex>,
}

impl LatticePath {
    pub fn new(points: Vec<MultiIndex>) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::invalid("a path needs at least one point"));
        };
        for w in points.windows(2) {
            first.check_dim(&w[1])?;
            if !w[0].lt(&w[1])? {
                return Err(Error::NotOrdered {
                    from: w[0].to_string(),
                    to: w[1].to_string(),
                });
            }
        }
        Ok(LatticePath { points })
    }

    pub fn points(&self) -> &[MultiIndex] {
        &self.points
    }

    pub fn first(&self) -> &MultiIndex {
        &self.points[0]
    }

    pub fn last(&self) -> &MultiIndex {
        self.points.last().expect("nonempty path")
    }

    /// Number of steps `k`.
    pub fn steps(&self) -> usize {
        self.points.len() - 1
    }

    /// The `j`-th step `p_j - p_{j-1}` for `1 <= j <= k`.
    pub fn step(&self, j: usize) -> MultiIndex {
        self.points[j - 1]
            .diff_to(&self.points[j])
            .expect("path is increasing")
    }

    pub fn is_unit(&self) -> bool {
        (1..=self.steps()).all(|j| self.step(j).unit_axis().is_some())
    }
}

impl fmt::Display for LatticePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.points.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// Accepts whitespace-separated points, e.g. `(0,0) (1,0) (2,0)`.
impl FromStr for LatticePath {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let points = s
            .split(|c: char| c.is_whitespace() || c == ';')
            .filter(|t| !t.is_empty())
            .map(str::parse)
            .collect::<Result<Vec<MultiIndex>>>()?;
        LatticePath::new(points)
    }
}

/// All paths from `from` to `to` made of standard basis steps, in
/// lexicographic order of their step axes.
pub fn enumerate_unit_paths(from: &MultiIndex, to: &MultiIndex) -> Result<Vec<LatticePath>> {
    let Some(delta) = from.diff_to(to) else {
        from.check_dim(to)?;
        return Err(Error::NotOrdered {
            from: from.to_string(),
            to: to.to_string(),
        });
    };
    let mut out = Vec::new();
    let mut remaining = delta.0.clone();
    let mut points = vec![from.clone()];
    unit_paths_rec(&mut remaining, &mut points, &mut out);
    Ok(out)
}

fn unit_paths_rec(
    remaining: &mut [usize],
    points: &mut Vec<MultiIndex>,
    out: &mut Vec<LatticePath>,
) {
    if remaining.iter().all(|&r| r == 0) {
        out.push(LatticePath {
            points: points.clone(),
        });
        return;
    }
    for axis in 0..remaining.len() {
        if remaining[axis] == 0 {
            continue;
        }
        remaining[axis] -= 1;
        let next = points.last().expect("nonempty").plus_unit(axis);
        points.push(next);
        unit_paths_rec(remaining, points, out);
        points.pop();
        remaining[axis] += 1;
    }
}

/// All strictly increasing sequences `from = i0 < i1 < ... < ik = to`.
pub fn enumerate_increasing_paths(
    from: &MultiIndex,
    to: &MultiIndex,
    k: usize,
) -> Result<Vec<LatticePath>> {
    if !from.lt(to)? {
        return Err(Error::NotOrdered {
            from: from.to_string(),
            to: to.to_string(),
        });
    }
    let total = from.diff_to(to).expect("from < to").order();
    if k == 0 || k > total {
        return Err(Error::invalid(format!(
            "path length k = {k} outside 1..={total}"
        )));
    }
    let mut out = Vec::new();
    let mut points = vec![from.clone()];
    increasing_rec(to, k, &mut points, &mut out);
    Ok(out)
}

fn increasing_rec(
    to: &MultiIndex,
    k: usize,
    points: &mut Vec<MultiIndex>,
    out: &mut Vec<LatticePath>,
) {
    let cur = points.last().expect("nonempty").clone();
    let steps_left = k + 1 - points.len();
    if steps_left == 1 {
        points.push(to.clone());
        out.push(LatticePath {
            points: points.clone(),
        });
        points.pop();
        return;
    }
    // Candidates strictly between cur and to, leaving room for the remaining steps.
    for next in box_points(&cur, to) {
        if next == cur || next == *to {
            continue;
        }
        let rest = next.diff_to(to).expect("inside box").order();
        if rest < steps_left - 1 {
            continue;
        }
        points.push(next);
        increasing_rec(to, k, points, out);
        points.pop();
    }
}

/// Every multi-index `m` with `lo <= m <= hi`, in lexicographic order.
pub fn box_points(lo: &MultiIndex, hi: &MultiIndex) -> Vec<MultiIndex> {
    let q = lo.q();
    let mut out = Vec::new();
    let mut cur = lo.0.clone();
    loop {
        out.push(MultiIndex(cur.clone()));
        let mut axis = q;
        loop {
            if axis == 0 {
                return out;
            }
            axis -= 1;
            if cur[axis] < hi.0[axis] {
                cur[axis] += 1;
                for (c, l) in cur[axis + 1..].iter_mut().zip(&lo.0[axis + 1..]) {
                    *c = *l;
                }
                break;
            }
        }
    }
}

/// A tuple `(s1, ..., sq, t)` splitting a path of length `k = |s| + t` into
/// `s1` steps of `e1`, then `s2` steps of `e2`, ..., then `t` arbitrary steps.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CompatibleTuple {
    pub s: MultiIndex,
    pub t: usize,
}

impl CompatibleTuple {
    /// Number of path steps the tuple covers, `|s| + t`.
    pub fn steps(&self) -> usize {
        self.s.order() + self.t
    }
}

impl fmt::Display for CompatibleTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for c in self.s.coords() {
            write!(f, "{c},")?;
        }
        write!(f, "{})", self.t)
    }
}

/// All tuples compatible with `path`, by decreasing `t`. `(0, k)` is always first.
pub fn compatible_tuples(path: &LatticePath) -> Vec<CompatibleTuple> {
    let q = path.first().q();
    let k = path.steps();
    let axes: Vec<Option<usize>> = (1..=k).map(|j| path.step(j).unit_axis()).collect();
    let mut out = Vec::new();
    let mut s = vec![0usize; q];
    tuples_rec(&axes, 0, 0, &mut s, &mut out);
    out.sort_by_key(|c| std::cmp::Reverse(c.t));
    out
}

fn tuples_rec(
    axes: &[Option<usize>],
    axis: usize,
    pos: usize,
    s: &mut Vec<usize>,
    out: &mut Vec<CompatibleTuple>,
) {
    if axis == s.len() {
        out.push(CompatibleTuple {
            s: MultiIndex(s.clone()),
            t: axes.len() - pos,
        });
        return;
    }
    let run = axes[pos..].iter().take_while(|a| **a == Some(axis)).count();
    for len in 0..=run {
        s[axis] = len;
        tuples_rec(axes, axis + 1, pos + len, s, out);
    }
    s[axis] = 0;
}
