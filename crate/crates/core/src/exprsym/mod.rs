//! Closed-form expressions in `x1..xq` and `y`: parsing, symbolic partial
//! derivatives and pointwise evaluation.
//!
//! See `docs/expressions.md` for the accepted grammar.

mod parse;
mod print;

use std::fmt;

use thiserror::Error;

pub use parse::{parse, ParseError, ParseErrorKind};

/// A variable of `g`. `X(0)` is `x1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Var {
    X(usize),
    Y,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::X(i) => write!(f, "x{}", i + 1),
            Var::Y => write!(f, "y"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }
}

#[derive(Clone, PartialEq, Debug)]
pub enum Expr {
    Const(f64),
    Var(Var),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Func(Func, Box<Expr>),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("log of nonpositive value {0}")]
    LogDomain(f64),
    #[error("sqrt of negative value {0}")]
    SqrtDomain(f64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("non-finite result")]
    NonFinite,
    #[error("expression uses {var} but the point has only {coords} coordinates")]
    MissingCoordinate { var: Var, coords: usize },
}

fn as_const(e: &Expr) -> Option<f64> {
    match e {
        Expr::Const(c) => Some(*c),
        _ => None,
    }
}

// Smart constructors: constant folding and the 0/1 identities, nothing more.
#[allow(clippy::should_implement_trait)]
impl Expr {
    pub fn constant(c: f64) -> Expr {
        Expr::Const(c)
    }

    pub fn var(v: Var) -> Expr {
        Expr::Var(v)
    }

    pub fn neg(a: Expr) -> Expr {
        match a {
            Expr::Const(c) => Expr::Const(-c),
            Expr::Neg(inner) => *inner,
            a => Expr::Neg(Box::new(a)),
        }
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        match (as_const(&a), as_const(&b)) {
            (Some(x), Some(y)) => Expr::Const(x + y),
            (Some(0.0), _) => b,
            (_, Some(0.0)) => a,
            _ => match b {
                Expr::Neg(nb) => Expr::Sub(Box::new(a), nb),
                b => Expr::Add(Box::new(a), Box::new(b)),
            },
        }
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        match (as_const(&a), as_const(&b)) {
            (Some(x), Some(y)) => Expr::Const(x - y),
            (Some(0.0), _) => Expr::neg(b),
            (_, Some(0.0)) => a,
            _ => match b {
                Expr::Neg(nb) => Expr::Add(Box::new(a), nb),
                b => Expr::Sub(Box::new(a), Box::new(b)),
            },
        }
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        match (as_const(&a), as_const(&b)) {
            (Some(x), Some(y)) => Expr::Const(x * y),
            (Some(0.0), _) | (_, Some(0.0)) => Expr::Const(0.0),
            (Some(1.0), _) => b,
            (_, Some(1.0)) => a,
            (Some(-1.0), _) => Expr::neg(b),
            (_, Some(-1.0)) => Expr::neg(a),
            (None, Some(_)) => Expr::mul(b, a),
            (Some(x), None) => match b {
                // Keep a single leading constant.
                Expr::Mul(l, r) if as_const(&l).is_some() => {
                    Expr::mul(Expr::Const(x * as_const(&l).unwrap()), *r)
                }
                b => Expr::Mul(Box::new(a), Box::new(b)),
            },
            (None, None) => Expr::Mul(Box::new(a), Box::new(b)),
        }
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        match (as_const(&a), as_const(&b)) {
            (Some(x), Some(y)) if y != 0.0 => Expr::Const(x / y),
            (Some(0.0), _) => Expr::Const(0.0),
            (_, Some(1.0)) => a,
            _ => Expr::Div(Box::new(a), Box::new(b)),
        }
    }

    pub fn pow(a: Expr, k: i32) -> Expr {
        match (k, as_const(&a)) {
            (0, _) => Expr::Const(1.0),
            (1, _) => a,
            (_, Some(c)) if c != 0.0 || k > 0 => Expr::Const(c.powi(k)),
            _ => match a {
                Expr::Pow(base, j) => Expr::pow(*base, j * k),
                a => Expr::Pow(Box::new(a), k),
            },
        }
    }

    pub fn func(f: Func, a: Expr) -> Expr {
        Expr::Func(f, Box::new(a))
    }

    /// Largest `x` index used, as a 1-based count (0 when no `x` appears).
    pub fn x_count(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Var(Var::Y) => 0,
            Expr::Var(Var::X(i)) => i + 1,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Func(_, a) => a.x_count(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.x_count().max(b.x_count())
            }
        }
    }

    /// Exact partial derivative with respect to `v`.
    pub fn diff(&self, v: Var) -> Expr {
        match self {
            Expr::Const(_) => Expr::Const(0.0),
            Expr::Var(w) => Expr::Const(if *w == v { 1.0 } else { 0.0 }),
            Expr::Neg(a) => Expr::neg(a.diff(v)),
            Expr::Add(a, b) => Expr::add(a.diff(v), b.diff(v)),
            Expr::Sub(a, b) => Expr::sub(a.diff(v), b.diff(v)),
            Expr::Mul(a, b) => Expr::add(
                Expr::mul(a.diff(v), (**b).clone()),
                Expr::mul((**a).clone(), b.diff(v)),
            ),
            Expr::Div(a, b) => {
                let da = a.diff(v);
                let db = b.diff(v);
                if as_const(&db) == Some(0.0) {
                    Expr::div(da, (**b).clone())
                } else {
                    Expr::div(
                        Expr::sub(Expr::mul(da, (**b).clone()), Expr::mul((**a).clone(), db)),
                        Expr::pow((**b).clone(), 2),
                    )
                }
            }
            Expr::Pow(a, k) => Expr::mul(
                Expr::mul(Expr::Const(*k as f64), Expr::pow((**a).clone(), k - 1)),
                a.diff(v),
            ),
            Expr::Func(f, a) => {
                let inner = (**a).clone();
                let outer = match f {
                    Func::Sin => Expr::func(Func::Cos, inner),
                    Func::Cos => Expr::neg(Expr::func(Func::Sin, inner)),
                    Func::Exp => Expr::func(Func::Exp, inner),
                    Func::Log => Expr::div(Expr::Const(1.0), inner),
                    Func::Sqrt => Expr::div(Expr::Const(0.5), Expr::func(Func::Sqrt, inner)),
                };
                Expr::mul(outer, a.diff(v))
            }
        }
    }

    /// Mixed partial `∂^{|s|+t} / ∂x^s ∂y^t`.
    pub fn partial(&self, s: &[usize], t: usize) -> Expr {
        let mut e = self.clone();
        for (axis, &k) in s.iter().enumerate() {
            for _ in 0..k {
                e = e.diff(Var::X(axis));
            }
        }
        for _ in 0..t {
            e = e.diff(Var::Y);
        }
        e
    }

    /// Evaluates at `point = (x1, ..., xq, y)`.
    pub fn eval(&self, point: &[f64]) -> Result<f64, EvalError> {
        let v = self.eval_raw(point)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(EvalError::NonFinite)
        }
    }

    fn eval_raw(&self, p: &[f64]) -> Result<f64, EvalError> {
        let q = p.len().saturating_sub(1);
        Ok(match self {
            Expr::Const(c) => *c,
            Expr::Var(Var::X(i)) => {
                if *i >= q {
                    return Err(EvalError::MissingCoordinate {
                        var: Var::X(*i),
                        coords: p.len(),
                    });
                }
                p[*i]
            }
            Expr::Var(Var::Y) => *p.last().ok_or(EvalError::MissingCoordinate {
                var: Var::Y,
                coords: 0,
            })?,
            Expr::Neg(a) => -a.eval_raw(p)?,
            Expr::Add(a, b) => a.eval_raw(p)? + b.eval_raw(p)?,
            Expr::Sub(a, b) => a.eval_raw(p)? - b.eval_raw(p)?,
            Expr::Mul(a, b) => a.eval_raw(p)? * b.eval_raw(p)?,
            Expr::Div(a, b) => {
                let d = b.eval_raw(p)?;
                if d == 0.0 {
                    return Err(EvalError::DivisionByZero);
                }
                a.eval_raw(p)? / d
            }
            Expr::Pow(a, k) => {
                let base = a.eval_raw(p)?;
                if base == 0.0 && *k < 0 {
                    return Err(EvalError::DivisionByZero);
                }
                base.powi(*k)
            }
            Expr::Func(f, a) => {
                let x = a.eval_raw(p)?;
                match f {
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                    Func::Exp => x.exp(),
                    Func::Log if x <= 0.0 => return Err(EvalError::LogDomain(x)),
                    Func::Log => x.ln(),
                    Func::Sqrt if x < 0.0 => return Err(EvalError::SqrtDomain(x)),
                    Func::Sqrt => x.sqrt(),
                }
            }
        })
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        print::write_expr(self, f)
    }
}
