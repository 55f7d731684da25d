//! The field abstraction shared by the exact and floating-point tiers.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::Serialize;

use super::poly::{solve_cubic_real, solve_quadratic_real};
use super::{NumericError, Poly, QuadExt, Rational, Tolerance};

/// An ordered field element usable as a coordinate.
///
/// `EXACT` tiers decide every predicate without tolerance; the `f64` tier
/// defers to a [`Tolerance`].
pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + Serialize
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(r: &Rational) -> Self;
    /// Embeds a double (exactly, in the exact tiers).
    fn from_f64(x: f64) -> Self;
    fn to_f64(&self) -> f64;
    /// Exactly zero (no tolerance, also for doubles).
    fn is_zero(&self) -> bool;
    /// Sign of the value, exact in the exact tiers.
    fn signum(&self) -> i8;
    /// Square root inside the field, if it has one.
    fn sqrt(&self) -> Option<Self>;

    /// All real roots of a polynomial of degree 1..=3 that lie in this field,
    /// ascending by numeric value, repeated by multiplicity.
    ///
    /// Exact tiers fail with [`NumericError::RootsOutsideField`] if some real
    /// root is not representable.
    fn real_roots(p: &Poly<Self>, tol: &Tolerance) -> Result<Vec<Self>, NumericError>;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(n))
    }

    fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self.clone()
        } else {
            self.clone()
        }
    }

    fn square(&self) -> Self {
        self.clone() * self.clone()
    }

    fn half(&self) -> Self {
        self.clone() / Self::from_i64(2)
    }

    /// Zero test used by verdicts: exact for exact tiers, `|x| ≤ eps·scale` otherwise.
    fn negligible(&self, scale: f64, tol: &Tolerance) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            tol.is_small(self.to_f64(), scale)
        }
    }
}

/// Fields that contain √3 (needed for equilateral constructions).
pub trait Sqrt3: Scalar {
    fn sqrt3() -> Self;
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_rational(r: &Rational) -> Self {
        r.to_f64()
    }
    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn signum(&self) -> i8 {
        if *self > 0.0 {
            1
        } else if *self < 0.0 {
            -1
        } else {
            0
        }
    }
    fn sqrt(&self) -> Option<Self> {
        (*self >= 0.0).then(|| f64::sqrt(*self))
    }

    fn real_roots(p: &Poly<Self>, tol: &Tolerance) -> Result<Vec<Self>, NumericError> {
        let c = p.coeffs();
        match p.degree() {
            1 => Ok(vec![-c[0] / c[1]]),
            2 => Ok(solve_quadratic_real(c[0], c[1], c[2])),
            3 => solve_cubic_real(p, tol),
            d => Err(NumericError::UnsupportedDegree(d)),
        }
    }
}

impl Sqrt3 for f64 {
    fn sqrt3() -> Self {
        3f64.sqrt()
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Rational::zero()
    }
    fn one() -> Self {
        Rational::one()
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn from_f64(x: f64) -> Self {
        Rational::from_f64(x).expect("finite double")
    }
    fn to_f64(&self) -> f64 {
        Rational::to_f64(self)
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
    fn signum(&self) -> i8 {
        Rational::signum(self)
    }
    fn sqrt(&self) -> Option<Self> {
        Rational::sqrt(self)
    }

    fn real_roots(p: &Poly<Self>, tol: &Tolerance) -> Result<Vec<Self>, NumericError> {
        exact_roots(p, tol, close_convergents)
    }
}

impl Scalar for QuadExt {
    const EXACT: bool = true;

    fn zero() -> Self {
        QuadExt::from(0)
    }
    fn one() -> Self {
        QuadExt::from(1)
    }
    fn from_rational(r: &Rational) -> Self {
        QuadExt::rational(r.clone())
    }
    fn from_f64(x: f64) -> Self {
        QuadExt::rational(Rational::from_f64(x).expect("finite double"))
    }
    fn to_f64(&self) -> f64 {
        QuadExt::to_f64(self)
    }
    fn is_zero(&self) -> bool {
        QuadExt::is_zero(self)
    }
    fn signum(&self) -> i8 {
        self.sign()
    }
    fn sqrt(&self) -> Option<Self> {
        QuadExt::sqrt(self)
    }

    fn real_roots(p: &Poly<Self>, tol: &Tolerance) -> Result<Vec<Self>, NumericError> {
        // A root u + v√3 of p pairs with the root u − v√3 of the conjugate
        // polynomial; recover u and v from each numeric pairing and certify.
        let conj = p.map(|c| c.conjugate()).map(|c| c.to_f64());
        let conj_roots = approx_roots(&conj, tol);
        let s3 = 3f64.sqrt();
        exact_roots(p, tol, move |x| {
            let mut out = Vec::new();
            for y in &conj_roots {
                let u = close_convergents((x + y) / 2.0);
                let v = close_convergents((x - y) / (2.0 * s3));
                for cu in &u {
                    for cv in &v {
                        out.push(QuadExt::new(cu.clone(), cv.clone()));
                    }
                }
            }
            out
        })
    }
}

impl Sqrt3 for QuadExt {
    fn sqrt3() -> Self {
        QuadExt::sqrt3()
    }
}

fn approx_roots(p: &Poly<f64>, tol: &Tolerance) -> Vec<f64> {
    match p.degree() {
        0 => vec![],
        _ => f64::real_roots(p, tol).unwrap_or_default(),
    }
}

/// Convergents of `x` that agree with it to about eight significant digits.
fn close_convergents(x: f64) -> Vec<Rational> {
    let near = 1e-8 * x.abs().max(1.0);
    Rational::convergents(x, 1_000_000_000_000).into_iter().filter(|c| (c.to_f64() - x).abs() <= near).take(3).collect()
}

/// Exact roots by guess-and-certify: numeric roots propose candidates, exact
/// evaluation accepts them, and exact deflation reduces the degree.
fn exact_roots<S: Scalar>(
    p: &Poly<S>,
    tol: &Tolerance,
    candidates: impl Fn(f64) -> Vec<S>,
) -> Result<Vec<S>, NumericError> {
    let mut roots = Vec::new();
    let mut rest = p.clone();
    while rest.degree() > 2 {
        let approx = approx_roots(&rest.map(|c| c.to_f64()), tol);
        let found = approx
            .iter()
            .flat_map(|&x| candidates(x))
            .find(|c| rest.eval(c).is_zero())
            .ok_or(NumericError::RootsOutsideField)?;
        rest = rest.divide_by_root(&found).0;
        roots.push(found);
    }
    let c = rest.coeffs().to_vec();
    match rest.degree() {
        0 => {}
        1 => roots.push(-c[0].clone() / c[1].clone()),
        _ => {
            let disc = c[1].square() - S::from_i64(4) * c[0].clone() * c[2].clone();
            match disc.signum() {
                -1 => {}
                _ => {
                    let r = disc.sqrt().ok_or(NumericError::RootsOutsideField)?;
                    let two_a = S::from_i64(2) * c[2].clone();
                    roots.push((-c[1].clone() - r.clone()) / two_a.clone());
                    roots.push((-c[1].clone() + r) / two_a);
                }
            }
        }
    }
    roots.sort_by(|a, b| a.to_f64().total_cmp(&b.to_f64()));
    Ok(roots)
}
