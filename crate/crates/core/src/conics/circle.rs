use serde::{Deserialize, Serialize};

use crate::numeric::{Scalar, Tolerance};
use crate::projective::{Check, Line, Point};
use crate::{Error, Result};

use super::Conic;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "S: Scalar + Deserialize<'de>"))]
pub struct Circle<S: Scalar> {
    pub center: Point<S>,
    pub radius_sq: S,
}

impl<S: Scalar> Circle<S> {
    pub fn new(center: Point<S>, radius_sq: S) -> Result<Self> {
        center.xy()?;
        if radius_sq.signum() < 0 {
            return Err(Error::InvalidInput("negative squared radius".into()));
        }
        Ok(Circle { center: center.normalized(), radius_sq })
    }

    /// Circle about `center` through `through`.
    pub fn through(center: &Point<S>, through: &Point<S>) -> Result<Self> {
        Circle::new(center.clone(), center.distance_sq(through)?)
    }

    fn center_xy(&self) -> (S, S) {
        self.center.xy().expect("circle center is affine")
    }

    /// Power of a point: `|p − center|² − r²`.
    pub fn power(&self, p: &Point<S>) -> Result<S> {
        Ok(self.center.distance_sq(p)? - self.radius_sq.clone())
    }

    /// Whether `p` lies on the circle: exact power, or power / r² for doubles.
    pub fn incidence(&self, p: &Point<S>, tol: &Tolerance) -> Result<Check<S>> {
        let pw = self.power(p)?;
        let residual = if S::EXACT {
            pw
        } else {
            let r2 = self.radius_sq.to_f64();
            S::from_f64(if r2 == 0.0 { pw.to_f64() } else { pw.to_f64() / r2 })
        };
        Ok(Check::from_residual(residual, tol))
    }

    pub fn to_conic(&self) -> Conic<S> {
        let (cx, cy) = self.center_xy();
        let two = S::from_i64(2);
        Conic::new([
            S::one(),
            S::zero(),
            S::one(),
            -(two.clone() * cx.clone()),
            -(two * cy.clone()),
            cx.square() + cy.square() - self.radius_sq.clone(),
        ])
    }
}

/// The line of equal power with respect to two circles.
pub fn radical_axis<S: Scalar>(c1: &Circle<S>, c2: &Circle<S>) -> Result<Line<S>> {
    let (x1, y1) = c1.center_xy();
    let (x2, y2) = c2.center_xy();
    let (dx, dy) = (x1.clone() - x2.clone(), y1.clone() - y2.clone());
    let concentric = if S::EXACT {
        dx.is_zero() && dy.is_zero()
    } else {
        let s = x1.to_f64().abs().max(y1.to_f64().abs()).max(x2.to_f64().abs()).max(y2.to_f64().abs()).max(1.0);
        dx.to_f64().hypot(dy.to_f64()) <= Tolerance::structural().eps * s
    };
    if concentric {
        return Err(Error::ConcentricCircles);
    }
    let two = S::from_i64(2);
    let k1 = x1.square() + y1.square() - c1.radius_sq.clone();
    let k2 = x2.square() + y2.square() - c2.radius_sq.clone();
    Ok(Line::new(-(two.clone() * dx), -(two * dy), k1 - k2))
}

/// Real intersection points of two circles: zero, one (tangency), or two.
///
/// Exact tiers fail with a numeric error when the points leave the field.
pub fn circle_circle_intersections<S: Scalar>(
    c1: &Circle<S>,
    c2: &Circle<S>,
    tol: &Tolerance,
) -> Result<Vec<Point<S>>> {
    let axis = radical_axis(c1, c2)?;
    let (cx, cy) = c1.center_xy();
    let (a, b, c) = (axis.a.clone(), axis.b.clone(), axis.c.clone());
    let n2 = a.square() + b.square();
    // Foot of the perpendicular from the center onto the axis.
    let t = (a.clone() * cx.clone() + b.clone() * cy.clone() + c) / n2.clone();
    let fx = cx - a.clone() * t.clone();
    let fy = cy - b.clone() * t.clone();
    // Half-chord² / |n|² = (r² − dist²) / |n|².
    let dist_sq = t.square() * n2.clone();
    let h = (c1.radius_sq.clone() - dist_sq) / n2;
    let scale = c1.radius_sq.to_f64().abs().max(f64::MIN_POSITIVE) / (a.to_f64().powi(2) + b.to_f64().powi(2));
    if h.negligible(scale, tol) {
        return Ok(vec![Point::affine(fx, fy)]);
    }
    if h.signum() < 0 {
        return Ok(vec![]);
    }
    let s = h.sqrt().ok_or(crate::numeric::NumericError::RootsOutsideField)?;
    Ok(vec![
        Point::affine(fx.clone() - b.clone() * s.clone(), fy.clone() + a.clone() * s.clone()),
        Point::affine(fx + b * s.clone(), fy - a * s),
    ])
}
