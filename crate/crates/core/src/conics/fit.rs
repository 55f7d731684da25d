use crate::numeric::linalg::{null_space, NullSpace};
use crate::numeric::{Scalar, Tolerance};
use crate::projective::Point;
use crate::{Error, Result};

use super::Conic;

/// The conic through five pairwise distinct points.
///
/// Three collinear points still give a unique (degenerate) conic; four or more
/// collinear points leave a pencil and fail with [`Error::NoUniqueConic`].
pub fn fit_five_points<S: Scalar>(points: &[Point<S>; 5], tol: &Tolerance) -> Result<Conic<S>> {
    for i in 0..5 {
        for j in i + 1..5 {
            if points[i].coincides(&points[j], &Tolerance::structural()) {
                return Err(Error::InvalidInput(format!("points {i} and {j} coincide")));
            }
        }
    }
    let rows: Vec<Vec<S>> = points
        .iter()
        .map(|p| {
            let p = p.unit();
            let (x, y, w) = (p.x, p.y, p.w);
            vec![x.square(), x.clone() * y.clone(), y.square(), x * w.clone(), y * w.clone(), w.square()]
        })
        .collect();
    match null_space(&rows, tol) {
        NullSpace::Unique(v) => {
            let coeffs: [S; 6] = v.try_into().expect("six coefficients");
            Ok(Conic::new(coeffs).normalized())
        }
        NullSpace::Dimension(d) => Err(Error::NoUniqueConic(d)),
    }
}
