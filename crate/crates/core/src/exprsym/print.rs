use std::fmt;

use super::Expr;

// Binding strength; a child is parenthesized when it binds looser than its slot.
const SUM: u8 = 1;
const PRODUCT: u8 = 2;
const UNARY: u8 = 3;
const POWER: u8 = 4;
const ATOM: u8 = 5;

fn precedence(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => SUM,
        Expr::Mul(..) | Expr::Div(..) => PRODUCT,
        Expr::Neg(_) => UNARY,
        Expr::Pow(..) => POWER,
        Expr::Const(_) | Expr::Var(_) | Expr::Func(..) => ATOM,
    }
}

fn child(e: &Expr, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if precedence(e) < min {
        write!(f, "(")?;
        write_expr(e, f)?;
        write!(f, ")")
    } else {
        write_expr(e, f)
    }
}

/// Prints with the minimum parentheses needed for the parser to rebuild the
/// same tree.
pub(super) fn write_expr(e: &Expr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match e {
        Expr::Const(c) if c.is_sign_negative() => write!(f, "(-{})", -c),
        Expr::Const(c) => write!(f, "{c}"),
        Expr::Var(v) => write!(f, "{v}"),
        Expr::Neg(a) => {
            write!(f, "-")?;
            child(a, UNARY, f)
        }
        Expr::Add(a, b) => {
            child(a, SUM, f)?;
            write!(f, " + ")?;
            child(b, SUM + 1, f)
        }
        Expr::Sub(a, b) => {
            child(a, SUM, f)?;
            write!(f, " - ")?;
            child(b, SUM + 1, f)
        }
        Expr::Mul(a, b) => {
            child(a, PRODUCT, f)?;
            write!(f, "*")?;
            child(b, PRODUCT + 1, f)
        }
        Expr::Div(a, b) => {
            child(a, PRODUCT, f)?;
            write!(f, "/")?;
            child(b, PRODUCT + 1, f)
        }
        Expr::Pow(a, k) => {
            child(a, ATOM, f)?;
            if *k < 0 {
                write!(f, "^({k})")
            } else {
                write!(f, "^{k}")
            }
        }
        Expr::Func(func, a) => {
            write!(f, "{}(", func.name())?;
            write_expr(a, f)?;
            write!(f, ")")
        }
    }
}
