//! Logarithmic potential theory, polynomial dynamics and arithmetic
//! heights in the complex plane.
//!
//! * [`polyarith`]: integer/complex polynomials, Aberth root finding, and
//!   the cyclotomic, Chebyshev and runaway families.
//! * [`potential`]: compact set models, Fekete points, capacity,
//!   equilibrium measures and Green functions.
//! * [`dynamics`]: dynamical Green functions, filled Julia sets and
//!   Brolin measures.
//! * [`metric`]: the Klimek metric, polynomial pullbacks and moment
//!   discrepancies.
//! * [`heights`]: Weil, Rumely and canonical heights over ℚ.
//! * [`harness`]: experiment configuration, orchestration and reports.

// `!(x > 0.0)` is used on purpose to reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod error;
pub mod harness;
pub mod heights;
pub mod metric;
pub mod polyarith;
pub mod potential;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use polyarith::{
    BigRational, ComplexPolynomial, FactoredPolynomial, IntPolynomial, RootConfig, RootSet,
};
