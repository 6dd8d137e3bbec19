//! The commutative differential ring of operator coefficients, and closed-form
//! expressions for concrete potentials.
//!
//! [`DiffPoly`] is exact and basis-free: symbols stand for arbitrary functions
//! and `D` acts formally. [`ClosedExpr`] is the numeric side, a parsed formula
//! in `x` whose derivatives get sampled on a grid.

mod expr;
mod poly;

pub use expr::{expr_derivative, parse_expr, ClosedExpr, ParseError, ParseErrorKind};
pub use poly::{DiffPoly, Factor, Monomial, Symbol};
pub(crate) use poly::{pretty_magnitude, superscript};
