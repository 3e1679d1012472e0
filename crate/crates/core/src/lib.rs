//! Divided differences and higher partial derivatives of implicitly defined
//! functions `y(x)` with `g(x, y(x)) = 0`, computed from divided differences and
//! partial derivatives of `g` alone.
//!
//! The crate is organised bottom-up:
//!
//! * [`mindex`]: multi-indices, lattice paths, compatible tuples.
//! * [`polytree`]: polygon partitions, plane trees and the bijection between them.
//! * [`exprsym`]: closed-form expressions with symbolic differentiation.
//! * [`ddcore`]: tensor-grid divided differences and the [`GProvider`] trait.
//! * [`implicit`]: the divided-difference formulas for `y`.
//! * [`hideriv`]: partial derivatives of `y` from partials of `g`.
//! * [`oracle`]: root solving, direct divided differences of `y` and a catalog of
//!   test functions.
//!
//! ```
//! use implicit_dd::implicit::ImplicitProblem;
//! use implicit_dd::{ExprG, Grid, MultiIndex, Tensor};
//!
//! let g = ExprG::parse("x1^2 + x2^2 + y^2 - 1", 2)?;
//! let grid = Grid::new(vec![vec![0.1, 0.3], vec![0.2, 0.35]])?;
//! let y = Tensor::from_fn(grid.shape(), |i| {
//!     let x = grid.point(i);
//!     (1.0 - x[0] * x[0] - x[1] * x[1]).sqrt()
//! });
//! let problem = ImplicitProblem::new(&g, grid, y)?;
//!
//! let n = MultiIndex::new(vec![1, 1]);
//! let tree = problem.main_theorem_tree(&n)?;
//! let direct = problem.direct(&n)?;
//! assert!((tree - direct).abs() < 1e-12);
//! # Ok::<(), implicit_dd::Error>(())
//! ```

mod combinat;
pub mod ddcore;
pub mod error;
pub mod exprsym;
pub mod hideriv;
pub mod implicit;
pub mod mindex;
pub mod oracle;
pub mod polytree;

pub use combinat::{factorial, little_schroeder, multinomial};

pub use ddcore::{ExprG, GProvider, Grid, Tensor};
pub use error::{Error, Result};
pub use mindex::{CompatibleTuple, LatticePath, MultiIndex};
