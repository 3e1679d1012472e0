//! Problem files: TOML describing `g`, the grid and the `y` samples.
//!
//! ```toml
//! version = 1
//! q = 2
//! g = "x1^2 + x2^2 + y^2 - 1"
//! n = [1, 1]
//!
//! [grid]
//! axes = [[0.1, 0.2], [0.15, 0.3]]
//!
//! [y]
//! mode = "solve"
//! bracket = [0.0, 1.5]
//! ```

use std::path::{Path, PathBuf};

use implicit_dd::oracle::{solve_y, RootStart};
use implicit_dd::{ExprG, Grid, MultiIndex, Tensor};
use serde::Deserialize;

use crate::error::{CliError, CliResult};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub version: u32,
    pub q: usize,
    pub g: String,
    pub n: Option<Vec<usize>>,
    pub grid: GridSpec,
    pub y: YSpec,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub axes: Vec<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase", deny_unknown_fields)]
pub enum YSpec {
    /// Solve `g(x, y) = 0` at every grid point.
    Solve {
        bracket: Option<[f64; 2]>,
        guess: Option<f64>,
    },
    /// Row-major `y` values, last axis fastest.
    Values { values: Vec<f64> },
}

impl YSpec {
    pub fn start(&self) -> CliResult<Option<RootStart>> {
        match self {
            YSpec::Solve {
                bracket: Some(_),
                guess: Some(_),
            } => Err(CliError::Usage(
                "give either `bracket` or `guess`, not both".into(),
            )),
            YSpec::Solve {
                bracket: Some([lo, hi]),
                ..
            } => Ok(Some(RootStart::Bracket(*lo, *hi))),
            YSpec::Solve {
                guess: Some(y0), ..
            } => Ok(Some(RootStart::Guess(*y0))),
            YSpec::Solve { .. } => Err(CliError::Usage(
                "solve mode needs `bracket` or `guess`".into(),
            )),
            YSpec::Values { .. } => Ok(None),
        }
    }
}

/// A validated problem file.
#[derive(Debug)]
pub struct Problem {
    pub g: ExprG,
    pub grid: Grid,
    pub y: Tensor,
    pub n: Option<MultiIndex>,
    pub start: Option<RootStart>,
}

pub fn parse(text: &str, origin: &Path) -> CliResult<Problem> {
    let file: ProblemFile = toml::from_str(text).map_err(|source| CliError::ProblemFile {
        path: origin.to_path_buf(),
        source,
    })?;
    if file.version != FORMAT_VERSION {
        return Err(CliError::Usage(format!(
            "{}: unsupported version {} (expected {FORMAT_VERSION})",
            origin.display(),
            file.version
        )));
    }
    let g = ExprG::parse(&file.g, file.q)?;
    let grid = Grid::new(file.grid.axes)?;
    if grid.q() != file.q {
        return Err(implicit_dd::Error::DimensionMismatch {
            expected: file.q,
            found: grid.q(),
        }
        .into());
    }
    let start = file.y.start()?;
    let y = match (&file.y, start) {
        (YSpec::Values { values }, _) => Tensor::new(grid.shape(), values.clone())?,
        (_, Some(start)) => {
            Tensor::try_from_fn(grid.shape(), |i| solve_y(&g, &grid.point(i), start))?
        }
        (_, None) => unreachable!("solve mode always has a start"),
    };
    let n = file.n.map(MultiIndex::new);
    Ok(Problem {
        g,
        grid,
        y,
        n,
        start,
    })
}

pub fn load(path: &PathBuf) -> CliResult<Problem> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })?;
    parse(&text, path)
}
