//! Symbolic descriptors for divided differences of `g` and products of their
//! quotients.
//!
//! A bracket prints as `[x-part|y-part]g`. The x-part lists, per axis, the grid
//! node indices used on that axis, separated by spaces, with `;` between axes.
//! The y-part lists the multi-indices whose `y` values are the `y` nodes.
//! Example: `[0 1;0|e1]g` uses nodes 0 and 1 on the first axis, node 0 on the
//! second, and the single `y` node `y_{e1}`.

use std::fmt;

use crate::error::{Error, Result};
use crate::mindex::{
    compatible_tuples, enumerate_unit_paths, CompatibleTuple, LatticePath, MultiIndex,
};
use crate::polytree::{enumerate_partitions, enumerate_tprime, star_type};

/// How multi-indices are printed inside brackets.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum IndexStyle {
    /// `0`, `e1`, `2e1+e2`.
    #[default]
    Basis,
    /// `(0,0)`, `(1,0)`, `(2,1)`.
    Tuple,
}

impl IndexStyle {
    pub fn render(self, i: &MultiIndex) -> String {
        match self {
            IndexStyle::Basis => i.basis_notation(),
            IndexStyle::Tuple => i.to_string(),
        }
    }
}

/// `[x-ranges | y-list]g`; `x[j] = (first, last)` is an inclusive node range.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct GBracket {
    pub x: Vec<(usize, usize)>,
    pub y: Vec<MultiIndex>,
}

impl GBracket {
    /// Singleton nodes at `at` and the given `y` list.
    pub fn at_point(at: &MultiIndex, y: Vec<MultiIndex>) -> Self {
        GBracket {
            x: at.coords().iter().map(|&c| (c, c)).collect(),
            y,
        }
    }

    /// Order `(s, t)` of this divided difference.
    pub fn order(&self) -> (MultiIndex, usize) {
        (
            MultiIndex::new(self.x.iter().map(|(a, b)| b - a).collect()),
            self.y.len() - 1,
        )
    }

    pub fn render(&self, style: IndexStyle) -> String {
        let x: Vec<String> = self
            .x
            .iter()
            .map(|&(a, b)| (a..=b).map(|i| i.to_string()).collect::<Vec<_>>().join(" "))
            .collect();
        let y: Vec<String> = self.y.iter().map(|i| style.render(i)).collect();
        format!("[{}|{}]g", x.join(";"), y.join(" "))
    }
}

impl fmt::Display for GBracket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(IndexStyle::Basis))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Quotient {
    pub num: GBracket,
    pub den: GBracket,
}

impl Quotient {
    pub fn render(&self, style: IndexStyle) -> String {
        format!("{}/{}", self.num.render(style), self.den.render(style))
    }
}

/// A signed product of quotients of divided differences of `g`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TermExpr {
    pub negative: bool,
    pub factors: Vec<Quotient>,
}

impl TermExpr {
    /// Each factor in the formulas carries its own minus sign.
    pub fn from_factors(factors: Vec<Quotient>) -> Self {
        TermExpr {
            negative: factors.len() % 2 == 1,
            factors,
        }
    }

    fn product(parts: &[&TermExpr]) -> TermExpr {
        let mut factors = Vec::new();
        let mut negative = false;
        for p in parts {
            negative ^= p.negative;
            factors.extend(p.factors.iter().cloned());
        }
        TermExpr { negative, factors }
    }

    /// Same term with factors sorted, for comparing term multisets.
    pub fn canonical(&self) -> TermExpr {
        let mut factors = self.factors.clone();
        factors.sort();
        TermExpr {
            negative: self.negative,
            factors,
        }
    }

    /// `-A * B` style rendering, one term per line in listings.
    pub fn render(&self, style: IndexStyle) -> String {
        let body: Vec<String> = self.factors.iter().map(|q| q.render(style)).collect();
        format!(
            "{}{}",
            if self.negative { "-" } else { "+" },
            body.join(" * ")
        )
    }
}

impl fmt::Display for TermExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(IndexStyle::Basis))
    }
}

/// The quotient for a tuple `(s, t)` of the path `points`:
/// `[i0 + (0..s) per axis | i_{|s|} .. i_k]g / [i0 | i0, i_k]g` (sign not included).
pub fn main_quotient(points: &[MultiIndex], tuple: &CompatibleTuple) -> Quotient {
    let i0 = &points[0];
    let k = points.len() - 1;
    let prefix = tuple.s.order();
    Quotient {
        num: GBracket {
            x: i0
                .coords()
                .iter()
                .zip(tuple.s.coords())
                .map(|(&a, &s)| (a, a + s))
                .collect(),
            y: points[prefix..].to_vec(),
        },
        den: GBracket::at_point(i0, vec![i0.clone(), points[k].clone()]),
    }
}

/// First-order quotient for the unit step `from -> from + e_r`:
/// `[from with axis r widened | to]g / [from | from, to]g`.
pub fn unit_quotient(from: &MultiIndex, axis: usize) -> Quotient {
    let to = from.plus_unit(axis);
    Quotient {
        num: GBracket {
            x: from
                .coords()
                .iter()
                .enumerate()
                .map(|(j, &c)| if j == axis { (c, c + 1) } else { (c, c) })
                .collect(),
            y: vec![to.clone()],
        },
        den: GBracket::at_point(from, vec![from.clone(), to]),
    }
}

/// The summands of the curly bracket `{i0 ... ik}g`, by decreasing `t`.
///
/// For a single unit step this is the first-order formula itself; a single
/// non-unit step has no expansion and is rejected.
pub fn curly_terms(path: &LatticePath) -> Result<Vec<TermExpr>> {
    let points = path.points();
    if path.steps() == 1 {
        let axis = path.step(1).unit_axis().ok_or_else(|| {
            Error::invalid(format!(
                "curly bracket over the single non-unit step {path} is undefined"
            ))
        })?;
        return Ok(vec![TermExpr::from_factors(vec![unit_quotient(
            &points[0], axis,
        )])]);
    }
    Ok(compatible_tuples(path)
        .iter()
        .map(|tuple| {
            let mut factors = vec![main_quotient(points, tuple)];
            for j in tuple.s.order() + 1..=path.steps() {
                if let Some(axis) = path.step(j).unit_axis() {
                    factors.push(unit_quotient(&points[j - 1], axis));
                }
            }
            TermExpr::from_factors(factors)
        })
        .collect())
}

/// Which expansion of the divided difference of `y` to emit.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Form {
    /// Unit paths × polygon partitions × one summand per face.
    Polygon,
    /// Unit paths × extended trees, one quotient per star.
    Tree,
}

fn check_order(n: &MultiIndex) -> Result<()> {
    if n.is_zero() {
        return Err(Error::invalid("the order n must satisfy |n| >= 1"));
    }
    Ok(())
}

/// All flattened terms of `[x: 0, n]y` in deterministic order: path order, then
/// partition (or tree) order, then summand choices with earlier faces varying
/// slowest. For `|n| = 1` this is the single first-order term.
pub fn emit_terms(n: &MultiIndex, form: Form) -> Result<Vec<TermExpr>> {
    check_order(n)?;
    let zero = MultiIndex::zeros(n.q());
    let mut out = Vec::new();
    for path in enumerate_unit_paths(&zero, n)? {
        match form {
            Form::Polygon => out.extend(polygon_terms(&path)?),
            Form::Tree => out.extend(tree_terms(&path)?),
        }
    }
    Ok(out)
}

fn polygon_terms(path: &LatticePath) -> Result<Vec<TermExpr>> {
    if path.steps() == 1 {
        return curly_terms(path);
    }
    let mut out = Vec::new();
    for partition in enumerate_partitions(path.points())? {
        let per_face = partition
            .face_labels()
            .into_iter()
            .map(|face| curly_terms(&LatticePath::new(face)?))
            .collect::<Result<Vec<_>>>()?;
        let mut combos: Vec<Vec<&TermExpr>> = vec![Vec::new()];
        for options in &per_face {
            combos = combos
                .iter()
                .flat_map(|c| {
                    options.iter().map(move |o| {
                        let mut v = c.clone();
                        v.push(o);
                        v
                    })
                })
                .collect();
        }
        out.extend(combos.iter().map(|c| TermExpr::product(c)));
    }
    Ok(out)
}

fn tree_terms(path: &LatticePath) -> Result<Vec<TermExpr>> {
    enumerate_tprime(path.points())?
        .iter()
        .map(|tree| {
            let factors = tree
                .stars()
                .iter()
                .map(|star| {
                    let ty = star_type(star)
                        .ok_or_else(|| Error::MalformedTree(format!("untyped star in {tree}")))?;
                    Ok(main_quotient(&star.root, &ty))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(TermExpr::from_factors(factors))
        })
        .collect()
}

/// The products of curly brackets in the polygon form, one line per
/// (path, partition), e.g. `{0 2e1 3e1}g {0 e1 2e1}g`.
pub fn emit_curly_products(n: &MultiIndex, style: IndexStyle) -> Result<Vec<String>> {
    check_order(n)?;
    let zero = MultiIndex::zeros(n.q());
    let mut out = Vec::new();
    for path in enumerate_unit_paths(&zero, n)? {
        if path.steps() == 1 {
            out.push(curly_symbol(path.points(), style));
            continue;
        }
        for partition in enumerate_partitions(path.points())? {
            let faces: Vec<String> = partition
                .face_labels()
                .iter()
                .map(|f| curly_symbol(f, style))
                .collect();
            out.push(faces.join(" "));
        }
    }
    Ok(out)
}

pub fn curly_symbol(points: &[MultiIndex], style: IndexStyle) -> String {
    let inner: Vec<String> = points.iter().map(|p| style.render(p)).collect();
    format!("{{{}}}g", inner.join(" "))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(c: &[usize]) -> MultiIndex {
        MultiIndex::new(c.to_vec())
    }

    fn lines(terms: &[TermExpr]) -> Vec<String> {
        terms.iter().map(|t| t.to_string()).collect()
    }

    #[test]
    fn first_order_term() {
        let t = emit_terms(&mi(&[1, 0]), Form::Polygon).unwrap();
        assert_eq!(lines(&t), vec!["-[0 1;0|e1]g/[0;0|0 e1]g"]);
        let t = emit_terms(&mi(&[0, 1]), Form::Tree).unwrap();
        assert_eq!(lines(&t), vec!["-[0;0 1|e2]g/[0;0|0 e2]g"]);
        assert!(emit_terms(&mi(&[0, 0]), Form::Tree).is_err());
    }

    #[test]
    fn curly_over_double_step() {
        let path = LatticePath::new(vec![mi(&[0, 0]), mi(&[1, 0]), mi(&[2, 0])]).unwrap();
        let t = curly_terms(&path).unwrap();
        assert_eq!(
            lines(&t),
            vec![
                "-[0;0|0 e1 2e1]g/[0;0|0 2e1]g * [0 1;0|e1]g/[0;0|0 e1]g * [1 2;0|2e1]g/[1;0|e1 2e1]g",
                "+[0 1;0|e1 2e1]g/[0;0|0 2e1]g * [1 2;0|2e1]g/[1;0|e1 2e1]g",
                "-[0 1 2;0|2e1]g/[0;0|0 2e1]g",
            ]
        );
    }

    #[test]
    fn curly_skips_non_unit_steps() {
        let path = LatticePath::new(vec![mi(&[0, 0]), mi(&[1, 0]), mi(&[2, 1])]).unwrap();
        let t = curly_terms(&path).unwrap();
        assert_eq!(
            lines(&t),
            vec![
                "+[0;0|0 e1 2e1+e2]g/[0;0|0 2e1+e2]g * [0 1;0|e1]g/[0;0|0 e1]g",
                "-[0 1;0|e1 2e1+e2]g/[0;0|0 2e1+e2]g",
            ]
        );
        let single = LatticePath::new(vec![mi(&[0, 0]), mi(&[1, 1])]).unwrap();
        assert!(curly_terms(&single).is_err());
    }

    #[test]
    fn polygon_and_tree_share_terms() {
        for n in [
            mi(&[2, 0]),
            mi(&[1, 1]),
            mi(&[2, 1]),
            mi(&[1, 1, 1]),
            mi(&[3, 1]),
        ] {
            let mut a: Vec<TermExpr> = emit_terms(&n, Form::Polygon)
                .unwrap()
                .iter()
                .map(TermExpr::canonical)
                .collect();
            let mut b: Vec<TermExpr> = emit_terms(&n, Form::Tree)
                .unwrap()
                .iter()
                .map(TermExpr::canonical)
                .collect();
            let key = |t: &TermExpr| (t.negative, t.factors.clone());
            a.sort_by_key(key);
            b.sort_by_key(key);
            assert_eq!(a, b, "n = {n}");
        }
    }

    #[test]
    fn table_of_five_trees() {
        let t = emit_terms(&mi(&[1, 1]), Form::Tree).unwrap();
        assert_eq!(t.len(), 5);
    }

    #[test]
    fn tuple_style() {
        let q = unit_quotient(&mi(&[0, 0]), 0);
        assert_eq!(
            q.render(IndexStyle::Tuple),
            "[0 1;0|(1,0)]g/[0;0|(0,0) (1,0)]g"
        );
    }
}
