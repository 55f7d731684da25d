//! Conics: representation, five-point fitting, centers and tangents, and the
//! line–conic and circle–conic intersections.

mod circle;
mod fit;
mod intersect;

pub use circle::{circle_circle_intersections, radical_axis, Circle};
pub use fit::fit_five_points;
pub use intersect::{circle_conic_residual_intersections, second_intersection, ChordParam, ResidualIntersections};

use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize};

use crate::numeric::linalg::{norm_f64, proportionality_residual, Mat3};
use crate::numeric::{Scalar, Tolerance};
use crate::projective::{Check, Line, Point};
use crate::{Error, Result};

/// `A x² + B xy + C y² + D xw + E yw + F w² = 0`, up to scale.
#[derive(Clone, Debug, PartialEq)]
pub struct Conic<S> {
    /// `[A, B, C, D, E, F]` in the monomial order x², xy, y², x, y, 1.
    pub coeffs: [S; 6],
}

/// Coarse affine type of a conic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConicKind {
    Degenerate,
    Parabola,
    Ellipse,
    Hyperbola,
}

impl<S: Scalar> Conic<S> {
    pub fn new(coeffs: [S; 6]) -> Self {
        assert!(coeffs.iter().any(|c| !c.is_zero()), "conic coefficients all zero");
        Conic { coeffs }
    }

    pub fn from_i64(c: [i64; 6]) -> Self {
        Conic::new(c.map(S::from_i64))
    }

    /// Builds a conic from a symmetric matrix (only the upper triangle is read).
    pub fn from_matrix(m: &Mat3<S>) -> Self {
        let two = S::from_i64(2);
        Conic::new([
            m.m[0][0].clone(),
            two.clone() * m.m[0][1].clone(),
            m.m[1][1].clone(),
            two.clone() * m.m[0][2].clone(),
            two * m.m[1][2].clone(),
            m.m[2][2].clone(),
        ])
    }

    /// The symmetric coefficient matrix `M` with `Q(p) = pᵀ M p`.
    pub fn matrix(&self) -> Mat3<S> {
        let [a, b, c, d, e, f] = self.coeffs.clone();
        let (b2, d2, e2) = (b.half(), d.half(), e.half());
        Mat3::new([[a, b2.clone(), d2.clone()], [b2, c, e2.clone()], [d2, e2, f]])
    }

    /// Quadratic form at a homogeneous point.
    pub fn eval(&self, p: &Point<S>) -> S {
        let [a, b, c, d, e, f] = self.coeffs.clone();
        let (x, y, w) = (p.x.clone(), p.y.clone(), p.w.clone());
        a * x.square()
            + b * x.clone() * y.clone()
            + c * y.square()
            + d * x * w.clone()
            + e * y * w.clone()
            + f * w.square()
    }

    /// Symmetric bilinear form `pᵀ M q`.
    pub fn bilinear(&self, p: &Point<S>, q: &Point<S>) -> S {
        let mq = self.matrix().apply(&q.coords());
        p.coords().iter().zip(&mq).fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    /// Incidence check: exact value, or `Q(p) / (|coeffs|·|p|²)` for doubles.
    pub fn incidence(&self, p: &Point<S>, tol: &Tolerance) -> Check<S> {
        let v = self.eval(p);
        let residual = if S::EXACT {
            v
        } else {
            let denom = norm_f64(&self.coeffs) * norm_f64(&p.coords()).powi(2);
            S::from_f64(if denom == 0.0 { 0.0 } else { v.to_f64() / denom })
        };
        Check::from_residual(residual, tol)
    }

    pub fn contains(&self, p: &Point<S>, tol: &Tolerance) -> bool {
        self.incidence(p, tol).holds
    }

    /// Scaled so the largest-magnitude coefficient is 1 (doubles) or the
    /// first nonzero coefficient is 1 (exact).
    pub fn normalized(&self) -> Self {
        let pivot = if S::EXACT {
            self.coeffs.iter().find(|c| !c.is_zero()).cloned()
        } else {
            self.coeffs.iter().max_by(|a, b| a.to_f64().abs().total_cmp(&b.to_f64().abs())).cloned()
        };
        let pivot = pivot.expect("nonzero conic");
        Conic { coeffs: self.coeffs.clone().map(|c| c / pivot.clone()) }
    }

    /// Equality up to scale.
    pub fn same_as(&self, other: &Conic<S>, tol: &Tolerance) -> Check<S> {
        Check::from_residual(proportionality_residual(&self.coeffs, &other.coeffs), tol)
    }

    /// Determinant of the coefficient matrix; scale-free for doubles.
    pub fn degeneracy(&self, tol: &Tolerance) -> Check<S> {
        let m = self.matrix();
        let d = m.det();
        let residual = if S::EXACT {
            d
        } else {
            let s = m.max_abs();
            S::from_f64(if s == 0.0 { 0.0 } else { d.to_f64() / s.powi(3) })
        };
        Check::from_residual(residual, tol)
    }

    pub fn is_degenerate(&self, tol: &Tolerance) -> bool {
        self.degeneracy(tol).holds
    }

    /// `A + C = 0`: perpendicular asymptotes.
    pub fn is_rectangular(&self, tol: &Tolerance) -> Check<S> {
        let sum = self.coeffs[0].clone() + self.coeffs[2].clone();
        let residual = if S::EXACT {
            sum
        } else {
            let s = self.coeffs[..3].iter().map(|c| c.to_f64().abs()).fold(0.0, f64::max);
            S::from_f64(if s == 0.0 { 0.0 } else { sum.to_f64() / s })
        };
        Check::from_residual(residual, tol)
    }

    /// `AC − B²/4`, the determinant of the quadratic part.
    fn quadratic_det(&self) -> S {
        self.coeffs[0].clone() * self.coeffs[2].clone() - self.coeffs[1].square() / S::from_i64(4)
    }

    fn quadratic_det_negligible(&self, tol: &Tolerance) -> bool {
        let d = self.quadratic_det();
        if S::EXACT {
            return d.is_zero();
        }
        let s = self.coeffs[..3].iter().map(|c| c.to_f64().abs()).fold(0.0, f64::max);
        d.to_f64().abs() <= tol.eps * s * s
    }

    pub fn kind(&self, tol: &Tolerance) -> ConicKind {
        if self.is_degenerate(tol) {
            ConicKind::Degenerate
        } else if self.quadratic_det_negligible(tol) {
            ConicKind::Parabola
        } else if self.quadratic_det().signum() > 0 {
            ConicKind::Ellipse
        } else {
            ConicKind::Hyperbola
        }
    }

    /// Affine center: the pole of the line at infinity.
    pub fn center(&self, tol: &Tolerance) -> Result<Point<S>> {
        if self.is_degenerate(tol) {
            return Err(Error::DegenerateConic);
        }
        if self.quadratic_det_negligible(tol) {
            return Err(Error::NotCentral);
        }
        let adj = self.matrix().adjugate();
        let p = Point::new(adj.m[0][2].clone(), adj.m[1][2].clone(), adj.m[2][2].clone());
        Ok(p.normalized())
    }

    /// Polar line `M p`.
    pub fn polar(&self, p: &Point<S>) -> Result<Line<S>> {
        let l = Line::from_coords(self.matrix().apply(&p.coords()));
        if l.is_zero_vector() {
            return Err(Error::PoleUndefined);
        }
        Ok(l)
    }

    /// Tangent at a point of the conic (its polar).
    pub fn tangent_at(&self, p: &Point<S>, tol: &Tolerance) -> Result<Line<S>> {
        let inc = self.incidence(p, tol);
        if !inc.holds {
            return Err(Error::PointNotOnConic(inc.residual_f64()));
        }
        let l = self.polar(p)?;
        if !S::EXACT
            && norm_f64(&l.coords()) <= Tolerance::structural().eps * self.matrix().max_abs() * norm_f64(&p.coords())
        {
            return Err(Error::PoleUndefined);
        }
        Ok(l)
    }

    /// Image under the point map `h`: `M' = h⁻ᵀ M h⁻¹` (adjugate used as inverse up to scale).
    pub fn transform(&self, h: &Mat3<S>) -> Conic<S> {
        let inv = h.adjugate();
        Conic::from_matrix(&inv.transpose().mul(&self.matrix()).mul(&inv))
    }

    /// Pullback `hᵀ M h`: the conic whose image under `h` is `self`.
    pub fn pullback(&self, h: &Mat3<S>) -> Conic<S> {
        Conic::from_matrix(&h.transpose().mul(&self.matrix()).mul(h))
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Conic<T> {
        Conic { coeffs: std::array::from_fn(|i| f(&self.coeffs[i])) }
    }

    pub fn to_f64(&self) -> Conic<f64> {
        self.map(|c| c.to_f64())
    }

    /// Largest coefficient magnitude.
    pub fn scale(&self) -> f64 {
        self.coeffs.iter().map(|c| c.to_f64().abs()).fold(0.0, f64::max)
    }
}

impl<S: Scalar> Serialize for Conic<S> {
    fn serialize<Z: serde::Serializer>(&self, serializer: Z) -> std::result::Result<Z::Ok, Z::Error> {
        #[derive(Serialize)]
        struct Repr<'a, T> {
            coeffs: &'a [T; 6],
        }
        Repr { coeffs: &self.coeffs }.serialize(serializer)
    }
}

impl<'de, S: Scalar + Deserialize<'de>> Deserialize<'de> for Conic<S> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr<T> {
            coeffs: [T; 6],
        }
        let r = Repr::<S>::deserialize(deserializer)?;
        if r.coeffs.iter().all(|c| c.is_zero()) {
            return Err(de::Error::custom("conic coefficients cannot all be zero"));
        }
        Ok(Conic { coeffs: r.coeffs })
    }
}
