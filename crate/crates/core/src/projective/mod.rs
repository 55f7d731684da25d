//! Homogeneous points and lines, incidence predicates, and the similarity
//! frame that normalizes a pair of Fermat points to (∓1, 0).

mod frame;

pub use frame::{normalize_frame, SimilarityFrame};

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::numeric::linalg::{cross, det3, dot, norm_f64, proportionality_residual};
use crate::numeric::{Scalar, Tolerance};
use crate::{Error, Result};

/// A verdict together with the quantity it was decided on.
///
/// Exact tiers carry the raw quantity (zero iff the check holds); the float
/// tier carries a scale-free residual compared against the tolerance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check<S> {
    pub holds: bool,
    pub residual: S,
}

impl<S: Scalar> Check<S> {
    /// Decides a residual: exactly zero for exact tiers, within `tol` otherwise.
    pub fn from_residual(residual: S, tol: &Tolerance) -> Self {
        let holds = if S::EXACT { residual.is_zero() } else { tol.accepts(residual.to_f64()) };
        Check { holds, residual }
    }

    pub fn residual_f64(&self) -> f64 {
        self.residual.to_f64()
    }
}

/// A point of the projective plane, `(x : y : w)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Point<S> {
    pub x: S,
    pub y: S,
    pub w: S,
}

/// A line `a·x + b·y + c·w = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Line<S> {
    pub a: S,
    pub b: S,
    pub c: S,
}

impl<S: Scalar> Point<S> {
    pub fn new(x: S, y: S, w: S) -> Self {
        Point { x, y, w }
    }

    pub fn affine(x: S, y: S) -> Self {
        Point { x, y, w: S::one() }
    }

    pub fn from_coords(c: [S; 3]) -> Self {
        let [x, y, w] = c;
        Point { x, y, w }
    }

    pub fn coords(&self) -> [S; 3] {
        [self.x.clone(), self.y.clone(), self.w.clone()]
    }

    pub fn origin() -> Self {
        Point::affine(S::zero(), S::zero())
    }

    pub fn is_zero_vector(&self) -> bool {
        self.x.is_zero() && self.y.is_zero() && self.w.is_zero()
    }

    /// Whether the point is a finite point. Doubles treat `|w|` below the
    /// structural threshold (relative to `|x|, |y|`) as infinite.
    pub fn is_affine(&self) -> bool {
        if S::EXACT {
            !self.w.is_zero()
        } else {
            let scale = self.x.to_f64().abs().max(self.y.to_f64().abs());
            self.w.to_f64().abs() > Tolerance::structural().eps * scale && !self.w.is_zero()
        }
    }

    /// Affine coordinates `(x/w, y/w)`.
    pub fn xy(&self) -> Result<(S, S)> {
        if !self.is_affine() {
            return Err(Error::NotAffine);
        }
        Ok((self.x.clone() / self.w.clone(), self.y.clone() / self.w.clone()))
    }

    /// Representative with `w = 1`, or with the first nonzero of `x, y` equal to one.
    pub fn normalized(&self) -> Self {
        let pivot = if self.is_affine() {
            self.w.clone()
        } else if !self.x.is_zero() {
            self.x.clone()
        } else {
            self.y.clone()
        };
        if pivot.is_zero() {
            return self.clone();
        }
        let mut p = Point::new(self.x.clone() / pivot.clone(), self.y.clone() / pivot.clone(), self.w.clone() / pivot);
        if !self.is_affine() {
            p.w = S::zero();
        }
        p
    }

    /// Unit-norm representative (float tiers) to keep products well scaled.
    pub fn unit(&self) -> Self {
        if S::EXACT {
            return self.clone();
        }
        let n = norm_f64(&self.coords());
        if n == 0.0 {
            return self.clone();
        }
        let inv = S::from_f64(1.0 / n);
        Point::new(self.x.clone() * inv.clone(), self.y.clone() * inv.clone(), self.w.clone() * inv)
    }

    /// Same projective point, decided by [`proportionality_residual`].
    pub fn coincides(&self, other: &Point<S>, tol: &Tolerance) -> bool {
        Check::from_residual(proportionality_residual(&self.coords(), &other.coords()), tol).holds
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Point<T> {
        Point::new(f(&self.x), f(&self.y), f(&self.w))
    }

    pub fn to_f64(&self) -> Point<f64> {
        self.map(|v| v.to_f64())
    }

    pub fn midpoint(&self, other: &Point<S>) -> Result<Point<S>> {
        let (x1, y1) = self.xy()?;
        let (x2, y2) = other.xy()?;
        Ok(Point::affine((x1 + x2).half(), (y1 + y2).half()))
    }

    pub fn distance_sq(&self, other: &Point<S>) -> Result<S> {
        let (x1, y1) = self.xy()?;
        let (x2, y2) = other.xy()?;
        Ok((x1 - x2).square() + (y1 - y2).square())
    }

    /// Coincidence of affine points: exact squared distance, or distance / `scale` for doubles.
    pub fn distance_check(&self, other: &Point<S>, scale: f64, tol: &Tolerance) -> Result<Check<S>> {
        let d2 = self.distance_sq(other)?;
        let residual = if S::EXACT { d2 } else { S::from_f64(d2.to_f64().sqrt() / scale) };
        Ok(Check::from_residual(residual, tol))
    }

    /// Central reflection `2·center − self`.
    pub fn reflect_through(&self, center: &Point<S>) -> Result<Point<S>> {
        reflect_through(self, center)
    }
}

impl<S: Scalar> Line<S> {
    pub fn new(a: S, b: S, c: S) -> Self {
        Line { a, b, c }
    }

    pub fn from_coords(c: [S; 3]) -> Self {
        let [a, b, c] = c;
        Line { a, b, c }
    }

    pub fn coords(&self) -> [S; 3] {
        [self.a.clone(), self.b.clone(), self.c.clone()]
    }

    pub fn at_infinity() -> Self {
        Line::new(S::zero(), S::zero(), S::one())
    }

    pub fn is_zero_vector(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero()
    }

    /// Raw incidence value `a·x + b·y + c·w`.
    pub fn eval(&self, p: &Point<S>) -> S {
        dot(&self.coords(), &p.coords())
    }

    /// Incidence of a point: exact value, or `l·p / (|l|·|p|)` for doubles.
    pub fn incidence(&self, p: &Point<S>, tol: &Tolerance) -> Check<S> {
        let v = self.eval(p);
        let residual = if S::EXACT {
            v
        } else {
            let denom = norm_f64(&self.coords()) * norm_f64(&p.coords());
            S::from_f64(if denom == 0.0 { 0.0 } else { v.to_f64() / denom })
        };
        Check::from_residual(residual, tol)
    }

    /// Line equality up to scale.
    pub fn same_as(&self, other: &Line<S>, tol: &Tolerance) -> Check<S> {
        Check::from_residual(proportionality_residual(&self.coords(), &other.coords()), tol)
    }

    /// Representative with the first nonzero coefficient equal to one.
    pub fn normalized(&self) -> Self {
        let pivot = [&self.a, &self.b, &self.c].into_iter().find(|v| !v.is_zero()).cloned();
        match pivot {
            Some(p) => Line::new(self.a.clone() / p.clone(), self.b.clone() / p.clone(), self.c.clone() / p),
            None => self.clone(),
        }
    }

    pub fn unit(&self) -> Self {
        Line::from_coords(Point::from_coords(self.coords()).unit().coords())
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Line<T> {
        Line::new(f(&self.a), f(&self.b), f(&self.c))
    }

    pub fn to_f64(&self) -> Line<f64> {
        self.map(|v| v.to_f64())
    }
}

fn vanishes<S: Scalar>(v: &[S; 3], a: &[S; 3], b: &[S; 3]) -> bool {
    if S::EXACT {
        v.iter().all(|x| x.is_zero())
    } else {
        norm_f64(v) <= Tolerance::structural().eps * norm_f64(a) * norm_f64(b)
    }
}

/// The line through two points.
pub fn join<S: Scalar>(p: &Point<S>, q: &Point<S>) -> Result<Line<S>> {
    let (a, b) = (p.unit().coords(), q.unit().coords());
    let l = cross(&a, &b);
    if vanishes(&l, &a, &b) {
        return Err(Error::IdenticalElements);
    }
    Ok(Line::from_coords(l))
}

/// The common point of two lines; parallel affine lines meet at infinity.
pub fn meet<S: Scalar>(l: &Line<S>, m: &Line<S>) -> Result<Point<S>> {
    let (a, b) = (l.unit().coords(), m.unit().coords());
    let p = cross(&a, &b);
    if vanishes(&p, &a, &b) {
        return Err(Error::IdenticalElements);
    }
    let mut pt = Point::from_coords(p);
    if !S::EXACT && !pt.is_affine() {
        pt.w = S::zero();
    }
    Ok(pt)
}

fn det_check<S: Scalar>(rows: [[S; 3]; 3], tol: &Tolerance) -> Check<S> {
    let d = det3(&rows[0], &rows[1], &rows[2]);
    let residual = if S::EXACT {
        d
    } else {
        let denom: f64 = rows.iter().map(|r| norm_f64(r)).product();
        S::from_f64(if denom == 0.0 { 0.0 } else { d.to_f64() / denom })
    };
    Check::from_residual(residual, tol)
}

/// Collinearity of three points by the scaled determinant.
pub fn collinear<S: Scalar>(p1: &Point<S>, p2: &Point<S>, p3: &Point<S>, tol: &Tolerance) -> Check<S> {
    det_check([p1.coords(), p2.coords(), p3.coords()], tol)
}

/// Concurrency of three lines by the scaled determinant.
pub fn concurrent<S: Scalar>(l1: &Line<S>, l2: &Line<S>, l3: &Line<S>, tol: &Tolerance) -> Check<S> {
    det_check([l1.coords(), l2.coords(), l3.coords()], tol)
}

/// `2·center − p`.
pub fn reflect_through<S: Scalar>(p: &Point<S>, center: &Point<S>) -> Result<Point<S>> {
    let (x, y) = p.xy()?;
    let (cx, cy) = center.xy()?;
    let two = S::from_i64(2);
    Ok(Point::affine(two.clone() * cx - x, two * cy - y))
}

/// Line through `p` perpendicular to direction `(dx, dy)`.
pub fn perpendicular_through<S: Scalar>(p: &Point<S>, dx: S, dy: S) -> Result<Line<S>> {
    let (x, y) = p.xy()?;
    let c = -(dx.clone() * x + dy.clone() * y);
    Ok(Line::new(dx, dy, c))
}

impl<S: Scalar> Serialize for Point<S> {
    fn serialize<Z: Serializer>(&self, serializer: Z) -> std::result::Result<Z::Ok, Z::Error> {
        #[derive(Serialize)]
        struct Homog<T> {
            h: [T; 3],
        }
        match self.xy() {
            Ok((x, y)) => [x, y].serialize(serializer),
            Err(_) => Homog { h: self.coords() }.serialize(serializer),
        }
    }
}

impl<'de, S: Scalar + Deserialize<'de>> Deserialize<'de> for Point<S> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr<T> {
            Affine([T; 2]),
            Homog { h: [T; 3] },
        }
        match Repr::<S>::deserialize(deserializer)? {
            Repr::Affine([x, y]) => Ok(Point::affine(x, y)),
            Repr::Homog { h } => {
                let p = Point::from_coords(h);
                if p.is_zero_vector() {
                    return Err(de::Error::custom("homogeneous point cannot be all zero"));
                }
                Ok(p)
            }
        }
    }
}

impl<S: Scalar> Serialize for Line<S> {
    fn serialize<Z: Serializer>(&self, serializer: Z) -> std::result::Result<Z::Ok, Z::Error> {
        #[derive(Serialize)]
        struct Repr<T> {
            l: [T; 3],
        }
        Repr { l: self.coords() }.serialize(serializer)
    }
}

impl<'de, S: Scalar + Deserialize<'de>> Deserialize<'de> for Line<S> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr<T> {
            l: [T; 3],
        }
        let r = Repr::<S>::deserialize(deserializer)?;
        let line = Line::from_coords(r.l);
        if line.is_zero_vector() {
            return Err(de::Error::custom("line cannot be all zero"));
        }
        Ok(line)
    }
}
