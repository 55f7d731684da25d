//! Arithmetic tiers and polynomial root machinery.
//!
//! Three tiers share the [`Scalar`] trait: [`Rational`], the quadratic
//! extension [`QuadExt`] = Q(√3), and `f64` governed by a [`Tolerance`].

mod approx;
pub mod linalg;
mod poly;
mod quadext;
mod rational;
mod scalar;

pub use approx::{ApproxReal, Tolerance, DEFAULT_EPS, TOL_ENV};
pub use poly::{solve_cubic_real, solve_quadratic_real, Deflation, Poly};
pub use quadext::QuadExt;
pub use rational::Rational;
pub use scalar::{Scalar, Sqrt3};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericError {
    #[error("leading coefficient vanishes at working tolerance")]
    DegenerateLeadingCoefficient,
    #[error("value is not a root (remainder {residual:e})")]
    NotARoot { residual: f64 },
    #[error("a real root does not lie in the working field")]
    RootsOutsideField,
    #[error("polynomial degree {0} is not supported")]
    UnsupportedDegree(usize),
    #[error("cannot parse number `{0}`")]
    Parse(String),
}
