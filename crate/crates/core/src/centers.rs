//! Triangles and the centers the Kiepert construction needs: centroid,
//! orthocenter, circumcenter, nine-point circle and both isogonic points.

use serde::{Deserialize, Serialize};

use crate::conics::Circle;
use crate::numeric::{Scalar, Sqrt3, Tolerance};
use crate::projective::{concurrent, join, meet, perpendicular_through, Check, Line, Point};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    Ccw,
    Cw,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Outward,
    Inward,
}

/// Which isogonic center: apexes erected outward (first) or inward (second).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Which {
    First,
    Second,
}

impl Which {
    pub fn side(self) -> Side {
        match self {
            Which::First => Side::Outward,
            Which::Second => Side::Inward,
        }
    }

    pub fn other(self) -> Which {
        match self {
            Which::First => Which::Second,
            Which::Second => Which::First,
        }
    }
}

/// Three affine, non-collinear vertices in the given order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent, bound(deserialize = "S: Scalar + Deserialize<'de>"))]
pub struct Triangle<S: Scalar> {
    pub vertices: [Point<S>; 3],
}

fn twice_area<S: Scalar>(a: &(S, S), b: &(S, S), c: &(S, S)) -> S {
    (b.0.clone() - a.0.clone()) * (c.1.clone() - a.1.clone())
        - (b.1.clone() - a.1.clone()) * (c.0.clone() - a.0.clone())
}

impl<S: Scalar> Triangle<S> {
    pub fn new(a: Point<S>, b: Point<S>, c: Point<S>) -> Result<Self> {
        let pa = a.xy()?;
        let pb = b.xy()?;
        let pc = c.xy()?;
        let area = twice_area(&pa, &pb, &pc);
        let degenerate = if S::EXACT {
            area.is_zero()
        } else {
            let sides = [(&pa, &pb), (&pb, &pc), (&pc, &pa)]
                .map(|(p, q)| (p.0.to_f64() - q.0.to_f64()).hypot(p.1.to_f64() - q.1.to_f64()));
            let longest = sides.iter().cloned().fold(0.0, f64::max);
            longest == 0.0 || area.to_f64().abs() <= Tolerance::structural().eps * longest * longest
        };
        if degenerate {
            return Err(Error::DegenerateTriangle);
        }
        Ok(Triangle { vertices: [a.normalized(), b.normalized(), c.normalized()] })
    }

    pub fn from_xy(v: [(S, S); 3]) -> Result<Self> {
        let [a, b, c] = v.map(|(x, y)| Point::affine(x, y));
        Triangle::new(a, b, c)
    }

    pub fn vertex(&self, i: usize) -> &Point<S> {
        &self.vertices[i % 3]
    }

    fn xy(&self, i: usize) -> (S, S) {
        self.vertex(i).xy().expect("triangle vertices are affine")
    }

    /// Twice the signed area; positive for counterclockwise order.
    pub fn signed_area2(&self) -> S {
        twice_area(&self.xy(0), &self.xy(1), &self.xy(2))
    }

    pub fn orientation(&self) -> Orientation {
        if self.signed_area2().signum() > 0 {
            Orientation::Ccw
        } else {
            Orientation::Cw
        }
    }

    /// Same vertex set in counterclockwise order, keeping the first vertex.
    pub fn ccw(&self) -> Self {
        match self.orientation() {
            Orientation::Ccw => self.clone(),
            Orientation::Cw => self.reversed(),
        }
    }

    /// `(v0, v2, v1)`.
    pub fn reversed(&self) -> Self {
        let [a, b, c] = self.vertices.clone();
        Triangle { vertices: [a, c, b] }
    }

    /// `(v_k, v_{k+1}, v_{k+2})`.
    pub fn rotated(&self, k: usize) -> Self {
        Triangle { vertices: std::array::from_fn(|i| self.vertex(i + k).clone()) }
    }

    /// `[|BC|², |CA|², |AB|²]`.
    pub fn side_lengths_sq(&self) -> [S; 3] {
        std::array::from_fn(|i| self.vertex(i + 1).distance_sq(self.vertex(i + 2)).expect("affine vertices"))
    }

    /// Line through the two vertices other than `i`.
    pub fn side(&self, i: usize) -> Line<S> {
        join(self.vertex(i + 1), self.vertex(i + 2)).expect("distinct vertices")
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Triangle<T> {
        Triangle { vertices: std::array::from_fn(|i| self.vertices[i].map(&f)) }
    }

    /// Applies a point map vertex-wise, keeping the order.
    pub fn map_points(&self, f: impl Fn(&Point<S>) -> Point<S>) -> Triangle<S> {
        Triangle { vertices: std::array::from_fn(|i| f(&self.vertices[i]).normalized()) }
    }

    pub fn to_f64(&self) -> Triangle<f64> {
        self.map(|v| v.to_f64())
    }

    /// Largest absolute coordinate, at least one.
    pub fn scale(&self) -> f64 {
        (0..3)
            .flat_map(|i| {
                let (x, y) = self.xy(i);
                [x.to_f64().abs(), y.to_f64().abs()]
            })
            .fold(1.0, f64::max)
    }

    /// Whether every pair of squared side lengths differs (relative to the longest, for doubles).
    pub fn is_scalene(&self, tol: &Tolerance) -> bool {
        let s = self.side_lengths_sq();
        let longest = s.iter().map(|v| v.to_f64()).fold(0.0, f64::max);
        (0..3).all(|i| {
            let d = s[i].clone() - s[(i + 1) % 3].clone();
            !d.negligible(longest, tol)
        })
    }

    /// Whether the same vertex set, in any order, as `other`.
    pub fn same_vertices(&self, other: &Triangle<S>, tol: &Tolerance) -> bool {
        let mut used = [false; 3];
        self.vertices.iter().all(|p| {
            (0..3).any(|j| {
                if !used[j] && p.coincides(&other.vertices[j], tol) {
                    used[j] = true;
                    true
                } else {
                    false
                }
            })
        })
    }
}

/// Apex of the equilateral triangle on segment `pq`.
///
/// `orientation` is that of the triangle in which `p → q` is a directed edge;
/// outward means the side of `pq` away from the third vertex.
pub fn erected_apex<S: Sqrt3>(p: &Point<S>, q: &Point<S>, side: Side, orientation: Orientation) -> Result<Point<S>> {
    let (px, py) = p.xy()?;
    let (qx, qy) = q.xy()?;
    if px == qx && py == qy {
        return Err(Error::IdenticalElements);
    }
    let (mx, my) = ((px.clone() + qx.clone()).half(), (py.clone() + qy.clone()).half());
    // rot90(q − p) points to the left of the edge, where a ccw triangle lies.
    let (rx, ry) = (-(qy - py), qx - px);
    let k = S::sqrt3().half();
    let inside_left = orientation == Orientation::Ccw;
    let sign = if (side == Side::Inward) == inside_left { k } else { -k };
    Ok(Point::affine(mx + sign.clone() * rx, my + sign * ry))
}

/// A point obtained as the meet of three lines, with their concurrency check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Concurrence<S: Scalar> {
    pub point: Point<S>,
    pub check: Check<S>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FermatPoint<S: Scalar> {
    pub point: Point<S>,
    pub check: Check<S>,
    /// False when some angle is at least 120°, or for the second point.
    pub is_minimizer: bool,
}

/// Meets three lines; fails with [`Error::LinesNotConcurrent`] if they do not concur.
fn concurrence<S: Scalar>(lines: [Line<S>; 3], tol: &Tolerance) -> Result<Concurrence<S>> {
    let check = concurrent(&lines[0], &lines[1], &lines[2], tol);
    if !check.holds {
        return Err(Error::LinesNotConcurrent(check.residual_f64()));
    }
    let point =
        meet(&lines[0], &lines[1]).or_else(|_| meet(&lines[0], &lines[2])).or_else(|_| meet(&lines[1], &lines[2]))?;
    Ok(Concurrence { point: point.normalized(), check })
}

/// Whether the angle at vertex `i` is at least 120°.
fn obtuse_120<S: Scalar>(t: &Triangle<S>, i: usize) -> bool {
    let (ax, ay) = t.xy(i);
    let (bx, by) = t.xy(i + 1);
    let (cx, cy) = t.xy(i + 2);
    let (ux, uy) = (bx - ax.clone(), by - ay.clone());
    let (vx, vy) = (cx - ax, cy - ay);
    let d = ux.clone() * vx.clone() + uy.clone() * vy.clone();
    if d.signum() >= 0 {
        return false;
    }
    // cos ≤ −1/2  ⇔  4·d² ≥ |u|²|v|² with d < 0.
    let lhs = S::from_i64(4) * d.square();
    let rhs = (ux.square() + uy.square()) * (vx.square() + vy.square());
    (lhs - rhs).signum() >= 0
}

/// Isogonic center: the cevians to the apexes erected on the opposite sides concur.
pub fn fermat_point<S: Sqrt3>(t: &Triangle<S>, which: Which, tol: &Tolerance) -> Result<FermatPoint<S>> {
    let o = t.orientation();
    let mut lines = Vec::with_capacity(3);
    for i in 0..3 {
        let apex = erected_apex(t.vertex(i + 1), t.vertex(i + 2), which.side(), o)?;
        lines.push(join(t.vertex(i), &apex)?);
    }
    let lines: [Line<S>; 3] = lines.try_into().expect("three cevians");
    let c = concurrence(lines, tol)?;
    let is_minimizer = which == Which::First && (0..3).all(|i| !obtuse_120(t, i));
    Ok(FermatPoint { point: c.point, check: c.check, is_minimizer })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "S: Scalar + Deserialize<'de>"))]
pub struct FermatPair<S: Scalar> {
    pub f1: Point<S>,
    pub f2: Point<S>,
}

impl<S: Scalar> FermatPair<S> {
    pub fn get(&self, which: Which) -> &Point<S> {
        match which {
            Which::First => &self.f1,
            Which::Second => &self.f2,
        }
    }

    pub fn midpoint(&self) -> Result<Point<S>> {
        self.f1.midpoint(&self.f2)
    }
}

pub fn fermat_pair<S: Sqrt3>(t: &Triangle<S>, tol: &Tolerance) -> Result<FermatPair<S>> {
    Ok(FermatPair { f1: fermat_point(t, Which::First, tol)?.point, f2: fermat_point(t, Which::Second, tol)?.point })
}

pub fn centroid<S: Scalar>(t: &Triangle<S>) -> Point<S> {
    let three = S::from_i64(3);
    let (sx, sy) = (0..3).fold((S::zero(), S::zero()), |(sx, sy), i| {
        let (x, y) = t.xy(i);
        (sx + x, sy + y)
    });
    Point::affine(sx / three.clone(), sy / three)
}

fn altitude<S: Scalar>(t: &Triangle<S>, i: usize) -> Line<S> {
    let (bx, by) = t.xy(i + 1);
    let (cx, cy) = t.xy(i + 2);
    perpendicular_through(t.vertex(i), cx - bx, cy - by).expect("affine vertex")
}

fn bisector<S: Scalar>(t: &Triangle<S>, i: usize) -> Line<S> {
    let (bx, by) = t.xy(i + 1);
    let (cx, cy) = t.xy(i + 2);
    let mid = t.vertex(i + 1).midpoint(t.vertex(i + 2)).expect("affine vertices");
    perpendicular_through(&mid, cx - bx, cy - by).expect("affine midpoint")
}

/// Meet of the altitudes; the check records the third altitude's incidence.
pub fn orthocenter<S: Scalar>(t: &Triangle<S>, tol: &Tolerance) -> Result<Concurrence<S>> {
    concurrence([altitude(t, 0), altitude(t, 1), altitude(t, 2)], tol)
}

pub fn circumcenter<S: Scalar>(t: &Triangle<S>, tol: &Tolerance) -> Result<Concurrence<S>> {
    concurrence([bisector(t, 0), bisector(t, 1), bisector(t, 2)], tol)
}

pub fn circumcircle<S: Scalar>(t: &Triangle<S>, tol: &Tolerance) -> Result<Circle<S>> {
    let c = circumcenter(t, tol)?.point;
    Circle::through(&c, t.vertex(0))
}

pub fn medial_triangle<S: Scalar>(t: &Triangle<S>) -> Triangle<S> {
    Triangle { vertices: std::array::from_fn(|i| t.vertex(i + 1).midpoint(t.vertex(i + 2)).expect("affine vertices")) }
}

pub fn nine_point_circle<S: Scalar>(t: &Triangle<S>, tol: &Tolerance) -> Result<Circle<S>> {
    circumcircle(&medial_triangle(t), tol)
}

/// The nine defining points: side midpoints, altitude feet, and midpoints of
/// vertex-to-orthocenter segments, each with its incidence on `circle`.
pub fn nine_point_incidences<S: Scalar>(
    t: &Triangle<S>,
    circle: &Circle<S>,
    tol: &Tolerance,
) -> Result<Vec<(Point<S>, Check<S>)>> {
    let h = orthocenter(t, tol)?.point;
    let mut pts = medial_triangle(t).vertices.to_vec();
    for i in 0..3 {
        pts.push(meet(&t.side(i), &altitude(t, i))?);
    }
    for i in 0..3 {
        pts.push(t.vertex(i).midpoint(&h)?);
    }
    pts.into_iter()
        .map(|p| {
            let c = circle.incidence(&p, tol)?;
            Ok((p, c))
        })
        .collect()
}
