//! Partial derivatives `y_n` of the implicit function from partial derivatives
//! `g_{s,t}` of `g`, through sums over derivative partitions and, for
//! cross-checking, through the coalesced tree expansion.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_rational::Ratio;

use crate::combinat::multinomial;
use crate::ddcore::{coalescence_factor, GProvider};
use crate::error::{Error, Result};
use crate::mindex::{enumerate_unit_paths, MultiIndex};
use crate::polytree::{enumerate_tprime, star_type};

/// Residual above which `(x, y)` is not accepted as a point of `g = 0`.
pub const POINT_TOLERANCE: f64 = 1e-8;

/// One element `(s, t)` of a derivative partition: the order of `g_{s,t}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DerivOrder {
    pub s: MultiIndex,
    pub t: usize,
}

impl DerivOrder {
    pub fn new(s: MultiIndex, t: usize) -> Self {
        DerivOrder { s, t }
    }

    /// `g` followed by the digits of `(s, t)`, e.g. `g101`; comma separated when
    /// some entry has more than one digit.
    pub fn symbol(&self) -> String {
        let mut all: Vec<usize> = self.s.coords().to_vec();
        all.push(self.t);
        if all.iter().all(|&c| c < 10) {
            format!("g{}", all.iter().map(|c| c.to_string()).collect::<String>())
        } else {
            let parts: Vec<String> = all.iter().map(|c| c.to_string()).collect();
            format!("g_{{{}}}", parts.join(","))
        }
    }
}

// Ordered by t, then by s with larger leading coordinates first, so that
// x1-derivatives precede x2-derivatives.
impl Ord for DerivOrder {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.t
            .cmp(&other.t)
            .then_with(|| other.s.coords().cmp(self.s.coords()))
    }
}

impl PartialOrd for DerivOrder {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DerivOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for c in self.s.coords() {
            write!(f, "{c},")?;
        }
        write!(f, "{})", self.t)
    }
}

/// A multiset of derivative orders, stored sorted with repeats.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DerivPartition {
    elements: Vec<DerivOrder>,
}

impl DerivPartition {
    /// Validates `(0,1) ∉ p`, nonzero elements, common `q` and `Σt = |p| - 1`.
    pub fn new(mut elements: Vec<DerivOrder>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::invalid("a derivative partition is nonempty"));
        }
        let q = elements[0].s.q();
        for e in &elements {
            if e.s.q() != q {
                return Err(Error::DimensionMismatch {
                    expected: q,
                    found: e.s.q(),
                });
            }
            if e.s.is_zero() && e.t <= 1 {
                return Err(Error::invalid(format!("element {e} is not allowed")));
            }
        }
        let t_sum: usize = elements.iter().map(|e| e.t).sum();
        if t_sum + 1 != elements.len() {
            return Err(Error::invalid(format!(
                "t entries sum to {t_sum}, expected |p| - 1 = {}",
                elements.len() - 1
            )));
        }
        elements.sort();
        Ok(DerivPartition { elements })
    }

    pub fn elements(&self) -> &[DerivOrder] {
        &self.elements
    }

    /// `|p|`, counting multiplicity.
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Distinct elements with multiplicities, in canonical order.
    pub fn multiplicities(&self) -> Vec<(DerivOrder, usize)> {
        let mut out: Vec<(DerivOrder, usize)> = Vec::new();
        for e in &self.elements {
            match out.last_mut() {
                Some((last, m)) if last == e => *m += 1,
                _ => out.push((e.clone(), 1)),
            }
        }
        out
    }

    /// `Σ s`.
    pub fn order(&self) -> MultiIndex {
        let q = self.elements[0].s.q();
        self.elements
            .iter()
            .fold(MultiIndex::zeros(q), |acc, e| acc.plus(&e.s))
    }
}

impl Ord for DerivPartition {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.elements.cmp(&other.elements))
    }
}

impl PartialOrd for DerivPartition {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DerivPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.elements.iter().map(|e| e.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Every derivative partition of `n`, sorted by `(|p|, elements)`.
pub fn enumerate_deriv_partitions(n: &MultiIndex) -> Result<Vec<DerivPartition>> {
    if n.is_zero() {
        return Err(Error::invalid("n must be nonzero"));
    }
    let max_len = 2 * n.order() - 1;
    let max_t = max_len - 1;
    let zero = MultiIndex::zeros(n.q());
    let mut candidates: Vec<DerivOrder> = Vec::new();
    for s in crate::mindex::box_points(&zero, n) {
        for t in 0..=max_t {
            if s.is_zero() && t <= 1 {
                continue;
            }
            candidates.push(DerivOrder::new(s.clone(), t));
        }
    }
    candidates.sort();

    let mut out = Vec::new();
    let mut current = Vec::new();
    descend(
        &candidates,
        0,
        n.coords().to_vec(),
        0,
        max_len,
        &mut current,
        &mut out,
    );
    out.sort();
    Ok(out)
}

// `excess` is Σ(t - 1) + 1 over the elements chosen so far; a complete
// partition has excess 0 and nothing left of n.
fn descend(
    candidates: &[DerivOrder],
    from: usize,
    remaining: Vec<usize>,
    excess: isize,
    max_len: usize,
    current: &mut Vec<DerivOrder>,
    out: &mut Vec<DerivPartition>,
) {
    let rem_order: usize = remaining.iter().sum();
    if !current.is_empty() && rem_order == 0 && excess == 0 {
        out.push(DerivPartition {
            elements: current.clone(),
        });
    }
    if current.len() == max_len {
        return;
    }
    for (i, c) in candidates.iter().enumerate().skip(from) {
        if c.s.coords().iter().zip(&remaining).any(|(a, b)| a > b) {
            continue;
        }
        let next_excess = excess + if current.is_empty() { 1 } else { 0 } + c.t as isize - 1;
        let next_rem: Vec<usize> = remaining
            .iter()
            .zip(c.s.coords())
            .map(|(r, s)| r - s)
            .collect();
        // Each further element can lower the excess by at most one and must use
        // part of the remaining order (elements with s = 0 raise it).
        if next_excess > next_rem.iter().sum::<usize>() as isize {
            continue;
        }
        current.push(c.clone());
        descend(candidates, i, next_rem, next_excess, max_len, current, out);
        current.pop();
    }
}

/// `(1/|p|) · |p|! / Π μ!`, exactly.
pub fn partition_coefficient(p: &DerivPartition) -> Ratio<u128> {
    let mult: Vec<usize> = p.multiplicities().iter().map(|(_, m)| *m).collect();
    Ratio::new(multinomial(&mult), p.len() as u128)
}

/// Exact rational weight of `p` in `y_n`: `n! · coeff(p) · Π 1/(s! t!)`,
/// without the sign `(-1)^{|p|}`.
fn formula_weight(n: &MultiIndex, p: &DerivPartition) -> Ratio<u128> {
    let mut w = partition_coefficient(p) * Ratio::from_integer(n.factorial());
    for e in p.elements() {
        w /= Ratio::from_integer(coalescence_factor(&e.s, e.t));
    }
    w
}

/// Partial derivatives of `g` at one point, cached, with the checks shared by
/// both derivative formulas.
struct PointPartials<'g> {
    g: &'g dyn GProvider,
    x: Vec<f64>,
    y: f64,
    g01: f64,
    cache: HashMap<DerivOrder, f64>,
}

impl<'g> PointPartials<'g> {
    fn new(g: &'g dyn GProvider, x: &[f64], y: f64, n: &MultiIndex) -> Result<Self> {
        if x.len() != g.q() || n.q() != g.q() {
            return Err(Error::DimensionMismatch {
                expected: g.q(),
                found: if x.len() != g.q() { x.len() } else { n.q() },
            });
        }
        let residual = g.value(x, y)?;
        if residual.is_nan() || residual.abs() > POINT_TOLERANCE {
            return Err(Error::InconsistentPoint {
                residual: residual.abs(),
            });
        }
        let g01 = g.partial(&MultiIndex::zeros(g.q()), 1, x, y)?;
        if g01.is_nan() || g01.abs() < 1e-12 {
            return Err(Error::Singular {
                bracket: "g_{0,1}".into(),
                denominator: g01.abs(),
            });
        }
        Ok(PointPartials {
            g,
            x: x.to_vec(),
            y,
            g01,
            cache: HashMap::new(),
        })
    }

    /// `-g_{s,t} / (s! t! g_{0,1})`.
    fn factor(&mut self, e: &DerivOrder) -> Result<f64> {
        if let Some(v) = self.cache.get(e) {
            return Ok(*v);
        }
        let gst = self.g.partial(&e.s, e.t, &self.x, self.y)?;
        let v = -gst / (coalescence_factor(&e.s, e.t) as f64 * self.g01);
        self.cache.insert(e.clone(), v);
        Ok(v)
    }
}

fn ratio_to_f64(r: &Ratio<u128>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// `y_n(x)` as a sum over derivative partitions of `n`.
pub fn derivative_corollary(g: &dyn GProvider, x: &[f64], y: f64, n: &MultiIndex) -> Result<f64> {
    let mut pp = PointPartials::new(g, x, y, n)?;
    let mut acc = crate::implicit::CompensatedSum::default();
    for p in enumerate_deriv_partitions(n)? {
        let mut term = ratio_to_f64(&partition_coefficient(&p));
        for e in p.elements() {
            term *= pp.factor(e)?;
        }
        acc.add(term);
    }
    Ok(acc.value() * n.factorial() as f64)
}

/// Result of the coalesced tree expansion.
#[derive(Clone, Debug)]
pub struct CoalescedTreeForm {
    /// `y_n / n!`.
    pub value: f64,
    /// Star-type multiset of each (path, tree) term, in enumeration order.
    pub terms: Vec<DerivPartition>,
}

fn star_types_of_terms(n: &MultiIndex) -> Result<Vec<DerivPartition>> {
    let zero = MultiIndex::zeros(n.q());
    let mut out = Vec::new();
    for path in enumerate_unit_paths(&zero, n)? {
        for tree in enumerate_tprime(path.points())? {
            let elements = tree
                .stars()
                .iter()
                .map(|star| {
                    star_type(star)
                        .map(|ty| DerivOrder::new(ty.s, ty.t))
                        .ok_or_else(|| Error::MalformedTree(format!("untyped star in {tree}")))
                })
                .collect::<Result<Vec<_>>>()?;
            out.push(DerivPartition::new(elements)?);
        }
    }
    Ok(out)
}

/// `y_n / n!` as a sum over unit paths and extended trees, one factor
/// `-g_{s,t} / (s! t! g_{0,1})` per star.
pub fn coalesced_tree_form(
    g: &dyn GProvider,
    x: &[f64],
    y: f64,
    n: &MultiIndex,
) -> Result<CoalescedTreeForm> {
    if n.is_zero() {
        return Err(Error::invalid("n must be nonzero"));
    }
    let mut pp = PointPartials::new(g, x, y, n)?;
    let terms = star_types_of_terms(n)?;
    let mut acc = crate::implicit::CompensatedSum::default();
    for p in &terms {
        let mut term = 1.0;
        for e in p.elements() {
            term *= pp.factor(e)?;
        }
        acc.add(term);
    }
    Ok(CoalescedTreeForm {
        value: acc.value(),
        terms,
    })
}

/// Number of (path, tree) terms of the coalesced expansion per star-type multiset.
pub fn star_type_census(n: &MultiIndex) -> Result<BTreeMap<DerivPartition, u128>> {
    if n.is_zero() {
        return Err(Error::invalid("n must be nonzero"));
    }
    let mut census = BTreeMap::new();
    for p in star_types_of_terms(n)? {
        *census.entry(p).or_insert(0) += 1;
    }
    Ok(census)
}

fn render_ratio(r: &Ratio<u128>) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn render_monomial(p: &DerivPartition) -> String {
    let factors: Vec<String> = p
        .multiplicities()
        .iter()
        .map(|(e, m)| {
            if *m == 1 {
                e.symbol()
            } else {
                format!("{}^{m}", e.symbol())
            }
        })
        .collect();
    factors.join(" ")
}

fn render_term(first: bool, negative: bool, weight: &Ratio<u128>, p: &DerivPartition) -> String {
    let q = p.elements()[0].s.q();
    let g01 = DerivOrder::new(MultiIndex::zeros(q), 1).symbol();
    let sign = match (first, negative) {
        (true, true) => "-".to_string(),
        (true, false) => String::new(),
        (false, true) => " - ".to_string(),
        (false, false) => " + ".to_string(),
    };
    let coeff = if weight.numer() == weight.denom() {
        String::new()
    } else {
        format!("{} ", render_ratio(weight))
    };
    let power = if p.len() == 1 {
        String::new()
    } else {
        format!("^{}", p.len())
    };
    format!("{sign}{coeff}{}/{g01}{power}", render_monomial(p))
}

/// The collected formula for `y_n`, e.g.
/// `y20 = -g200/g001 + 2 g100 g101/g001^2 - g100^2 g002/g001^3`.
pub fn derivative_formula(n: &MultiIndex) -> Result<String> {
    let partitions = enumerate_deriv_partitions(n)?;
    let mut out = format!("y{} = ", index_digits(n));
    for (k, p) in partitions.iter().enumerate() {
        let w = formula_weight(n, p);
        out.push_str(&render_term(k == 0, p.len() % 2 == 1, &w, p));
    }
    Ok(out)
}

/// The uncollected coalesced tree expansion of `y_n`, one term per
/// (path, tree), e.g. `-1/2 g100 g010 g002/g001^3`.
pub fn coalesced_terms(n: &MultiIndex) -> Result<Vec<String>> {
    if n.is_zero() {
        return Err(Error::invalid("n must be nonzero"));
    }
    let nf = Ratio::from_integer(n.factorial());
    Ok(star_types_of_terms(n)?
        .iter()
        .map(|p| {
            let mut w = nf;
            for e in p.elements() {
                w /= Ratio::from_integer(coalescence_factor(&e.s, e.t));
            }
            let negative = p.len() % 2 == 1;
            let body = render_term(true, negative, &w, p);
            if negative {
                body
            } else {
                format!("+{body}")
            }
        })
        .collect())
}

fn index_digits(n: &MultiIndex) -> String {
    if n.coords().iter().all(|&c| c < 10) {
        n.digit_string()
    } else {
        format!(
            "_{{{}}}",
            n.coords()
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(",")
        )
    }
}
