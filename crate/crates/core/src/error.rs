use thiserror::Error;

use crate::exprsym::{EvalError, ParseError};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected q = {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{from} is not below {to} in the componentwise order")]
    NotOrdered { from: String, to: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("coincident nodes on axis {axis}: positions {i} and {j}")]
    CoincidentNodes { axis: usize, i: usize, j: usize },

    #[error("coincident y values at positions {i} and {j} (y = {value})")]
    CoincidentY { i: usize, j: usize, value: f64 },

    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    ShapeMismatch {
        expected: Vec<usize>,
        found: Vec<usize>,
    },

    #[error("singular configuration in {bracket}: |denominator| = {denominator:e}")]
    Singular { bracket: String, denominator: f64 },

    #[error("point is not on the implicit surface: |g(x, y)| = {residual:e}")]
    InconsistentPoint { residual: f64 },

    #[error("could not solve g(x, y) = 0 at x = {x:?}: {reason}")]
    Unsolvable { x: Vec<f64>, reason: String },

    #[error("malformed partition: {0}")]
    MalformedPartition(String),

    #[error("malformed tree: {0}")]
    MalformedTree(String),

    #[error("test case `{0}` has no closed form for y")]
    MissingClosedForm(String),

    #[error("unknown test case `{0}`")]
    UnknownCase(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error(transparent)]
    Eval(#[from] EvalError),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
