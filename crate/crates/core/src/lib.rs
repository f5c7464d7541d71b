//! Exact solution of the stationary Schrödinger equation for the inverse
//! square root potential `V(x) = V0 / sqrt(x)` on the half-line.
//!
//! The crate is organised bottom-up:
//!
//! * [`specfun`] evaluates the Kummer function `1F1(a; b; z)` and the Hermite
//!   function `H_nu(z)` of arbitrary real order, escalating to double-double
//!   arithmetic when the series cancel.
//! * [`closed_form`] maps physical parameters to the special-function
//!   arguments and evaluates the general two-parameter solution together
//!   with the quasi-polynomial family `a = n`.
//! * [`spectrum`] solves the bound-state problem `psi(0) = psi(inf) = 0`.
//! * [`oracle`] and [`heun_check`] verify the closed form independently
//!   (finite-difference residuals, Wronskians, Numerov shooting, and a
//!   direct integration of the tri-confluent Heun equation).

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// reference values in tests keep every digit of their oracle
#![cfg_attr(test, allow(clippy::excessive_precision))]

pub mod closed_form;
pub mod error;
pub mod grid;
pub mod heun_check;
pub mod oracle;
pub mod quadrature;
pub mod specfun;
pub mod spectrum;

pub use closed_form::{PhysicalSystem, SolutionCoefficients, SpectralPoint};
pub use error::{Error, Result};
pub use grid::GridFunction;
pub use spectrum::BoundState;
