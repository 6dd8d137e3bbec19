//! Exact algebra of symmetrised differential operators and the symmetric
//! Zassenhaus splittings built on it.
//!
//! The crate is organised bottom-up:
//!
//! - [`coefficients`]: the rational structure constants of the associative,
//!   Lie and Jordan products, with three independent ways of computing them.
//! - [`symfunc`]: the commutative differential ring the operator coefficients
//!   live in, plus a small expression language for concrete potentials.
//! - [`falgebra`]: elements `⟨f⟩ₖ` and their products, commutators and gradings.
//! - [`splitting`]: truncated exponential calculus, symmetric BCH, Zassenhaus
//!   splittings, graded Magnus integrands and the FFT cost model.
//! - [`spectral`]: Fourier pseudospectral discretisation, Krylov and dense
//!   exponentials, time steppers and a finite-dimensional matrix model.
//! - [`verify`]: named verification suites shared by the CLI and the tests.

pub mod coefficients;
mod error;
pub mod falgebra;
pub mod spectral;
pub mod splitting;
pub mod symfunc;
pub mod verify;

pub use coefficients::Rational;
pub use error::{Error, Result};
