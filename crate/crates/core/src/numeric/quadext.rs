//! Exact arithmetic in the quadratic field Q(√3).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::Rational;

/// The number `a + b·√3` with rational `a`, `b`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadExt {
    pub a: Rational,
    pub b: Rational,
}

impl QuadExt {
    pub fn new(a: Rational, b: Rational) -> Self {
        QuadExt { a, b }
    }

    pub fn rational(a: Rational) -> Self {
        QuadExt { a, b: Rational::zero() }
    }

    pub fn sqrt3() -> Self {
        QuadExt { a: Rational::zero(), b: Rational::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Galois conjugate `a − b·√3`.
    pub fn conjugate(&self) -> Self {
        QuadExt { a: self.a.clone(), b: -self.b.clone() }
    }

    /// Field norm `a² − 3b²`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - Rational::from_integer(3) * (&self.b * &self.b)
    }

    /// Exact sign of `a + b√3`, decided by comparing `a²` with `3b²`.
    pub fn sign(&self) -> i8 {
        let sa = self.a.signum();
        let sb = self.b.signum();
        if sa >= 0 && sb >= 0 {
            return if sa == 0 && sb == 0 { 0 } else { 1 };
        }
        if sa <= 0 && sb <= 0 {
            return -1;
        }
        // Opposite signs: the part with the larger square wins.
        match self.norm().signum() {
            1 => sa,
            -1 => sb,
            _ => 0,
        }
    }

    pub fn recip(&self) -> Self {
        let n = self.norm();
        assert!(!n.is_zero(), "division by zero in Q(√3)");
        QuadExt { a: &self.a / &n, b: -(&self.b / &n) }
    }

    pub fn to_f64(&self) -> f64 {
        // a + b√3 = (a² − 3b²)/(a − b√3) avoids cancellation when the parts nearly cancel.
        let a = self.a.to_f64();
        let b = self.b.to_f64() * 3f64.sqrt();
        if a * b < 0.0 {
            let n = self.norm().to_f64();
            let den = a - b;
            if den != 0.0 {
                return n / den;
            }
        }
        a + b
    }

    /// Exact square root inside Q(√3), when one exists.
    pub fn sqrt(&self) -> Option<Self> {
        if self.sign() < 0 {
            return None;
        }
        if self.is_zero() {
            return Some(self.clone());
        }
        let three = Rational::from_integer(3);
        if self.b.is_zero() {
            if let Some(r) = self.a.sqrt() {
                return Some(QuadExt::rational(r));
            }
            return (&self.a / &three).sqrt().map(|d| QuadExt::new(Rational::zero(), d));
        }
        // (c + d√3)² = c² + 3d² + 2cd√3, so c² = (a ± √N)/2 with N = a² − 3b².
        let root_norm = self.norm().sqrt()?;
        let two = Rational::from_integer(2);
        for c_sq in [(&self.a + &root_norm) / two.clone(), (&self.a - &root_norm) / two.clone()] {
            if let Some(c) = c_sq.sqrt() {
                if c.is_zero() {
                    continue;
                }
                let d = &self.b / &(&two * &c);
                let cand = QuadExt::new(c, d);
                if &cand * &cand == *self {
                    return Some(if cand.sign() < 0 { -cand } else { cand });
                }
            }
        }
        None
    }
}

impl From<Rational> for QuadExt {
    fn from(r: Rational) -> Self {
        QuadExt::rational(r)
    }
}

impl From<i64> for QuadExt {
    fn from(n: i64) -> Self {
        QuadExt::rational(Rational::from_integer(n))
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}√3", self.b),
            (false, false) if self.b.signum() < 0 => write!(f, "{} - {}√3", self.a, self.b.abs()),
            (false, false) => write!(f, "{} + {}√3", self.a, self.b),
        }
    }
}

impl fmt::Debug for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<'a> Add<&'a QuadExt> for &'a QuadExt {
    type Output = QuadExt;
    fn add(self, rhs: &'a QuadExt) -> QuadExt {
        QuadExt { a: &self.a + &rhs.a, b: &self.b + &rhs.b }
    }
}

impl<'a> Sub<&'a QuadExt> for &'a QuadExt {
    type Output = QuadExt;
    fn sub(self, rhs: &'a QuadExt) -> QuadExt {
        QuadExt { a: &self.a - &rhs.a, b: &self.b - &rhs.b }
    }
}

impl<'a> Mul<&'a QuadExt> for &'a QuadExt {
    type Output = QuadExt;
    fn mul(self, rhs: &'a QuadExt) -> QuadExt {
        let three = Rational::from_integer(3);
        QuadExt { a: &self.a * &rhs.a + three * (&self.b * &rhs.b), b: &self.a * &rhs.b + &self.b * &rhs.a }
    }
}

impl<'a> Div<&'a QuadExt> for &'a QuadExt {
    type Output = QuadExt;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &'a QuadExt) -> QuadExt {
        self * &rhs.recip()
    }
}

macro_rules! by_value {
    ($trait:ident, $method:ident) => {
        impl $trait for QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: QuadExt) -> QuadExt {
                $trait::$method(&self, &rhs)
            }
        }
    };
}

by_value!(Add, add);
by_value!(Sub, sub);
by_value!(Mul, mul);
by_value!(Div, div);

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt { a: -self.a, b: -self.b }
    }
}
