//! Plane projective geometry kernel for the equilateral triangles inscribed
//! in the Kiepert hyperbola of a triangle.
//!
//! Coordinates are generic over [`numeric::Scalar`]: exact rationals, exact
//! Q(√3), or tolerance-governed doubles.

pub mod centers;
pub mod cli;
pub mod collineation;
pub mod conics;
mod error;
pub mod figure;
pub mod kiepert;
pub mod numeric;
pub mod oracle;
pub mod projective;
pub mod reconstruct;
pub mod sample;
pub mod scene;

pub use error::{Error, Result};
