//! Closed-form scene with Fermat points at `(∓1, 0)`, evaluated exactly in
//! Q(√3).
//!
//! `t` parametrizes the first vertex of the equilateral triangle on the
//! circle about `(−1, 0)` through `(1, 0)`; `y0` picks the point `V = (0, y0)`
//! on the radical axis `x = 0` from which the secondary triangle is cut out.
//! Every closed form is cross-checked against the generic line–conic route
//! before it is returned.

use serde::Serialize;

use crate::centers::{fermat_pair, Triangle};
use crate::conics::{circle_circle_intersections, fit_five_points, second_intersection, Circle, Conic};
use crate::kiepert::perspector;
use crate::kiepert::{kiepert_hyperbola, triple_perspectivity, NamedCheck, Pairing, TriplePerspectivity};
use crate::numeric::{QuadExt, Rational, Scalar, Tolerance};
use crate::projective::{collinear, Check, Line, Point};
use crate::{Error, Result};

fn n(v: i64) -> QuadExt {
    QuadExt::from(v)
}

fn s3() -> QuadExt {
    QuadExt::sqrt3()
}

fn lift(t: &Rational) -> QuadExt {
    QuadExt::rational(t.clone())
}

fn nonzero(v: &QuadExt, what: &str) -> Result<()> {
    if v.is_zero() {
        return Err(Error::DegenerateParameter(format!("{what} vanishes")));
    }
    Ok(())
}

fn check_t(t: &Rational) -> Result<()> {
    if t.is_zero() {
        return Err(Error::DegenerateParameter("t = 0 puts the first vertex on F1".into()));
    }
    Ok(())
}

pub fn fermat_points() -> (Point<QuadExt>, Point<QuadExt>) {
    (Point::affine(n(1), n(0)), Point::affine(n(-1), n(0)))
}

/// The radical axis `x = 0` of the two Fermat circles.
pub fn axis() -> Line<QuadExt> {
    Line::new(n(1), n(0), n(0))
}

/// Equilateral triangle inscribed in the circle about `(−1, 0)` through `(1, 0)`,
/// listed counterclockwise from `P(t)`.
pub fn oracle_pqr(t: &Rational) -> Result<Triangle<QuadExt>> {
    check_t(t)?;
    let t = lift(t);
    let t2 = t.square();
    let d = t2.clone() + n(1);
    let p = Point::affine(n(-1) + n(2) * (n(1) - t2.clone()) / d.clone(), n(4) * t.clone() / d.clone());
    let q = Point::affine(
        -(n(2) * (s3() * t.clone() + n(1))) / d.clone(),
        -(s3() * t2.clone() + n(2) * t.clone() - s3()) / d.clone(),
    );
    let r = Point::affine(n(2) * (s3() * t.clone() - n(1)) / d.clone(), (s3() * t2 - n(2) * t - s3()) / d);
    Triangle::new(p, q, r)
}

/// `(3t²−1)x² + (2t³−6t)xy + (1−3t²)y² + (1−3t²) = 0`.
pub fn oracle_conic(t: &Rational) -> Result<Conic<QuadExt>> {
    check_t(t)?;
    let t = lift(t);
    let a = n(3) * t.square() - n(1);
    let b = n(2) * t.square() * t.clone() - n(6) * t;
    Ok(Conic::new([a.clone(), b, -a.clone(), n(0), n(0), -a]))
}

/// Closed forms of the second intersections of `PV`, `QV`, `RV` with the conic.
fn secondary_closed_form(t: &Rational, y0: &QuadExt) -> Result<[Point<QuadExt>; 3]> {
    let t = lift(t);
    let y = y0.clone();
    let (t2, y2) = (t.square(), y.square());
    let (t3, t4) = (t2.clone() * t.clone(), t2.square());
    let w = t2.clone() + n(1);
    let yy = y2.clone() + n(1);

    let dp = n(2) * t.clone() * y.clone() - y2.clone() + n(1);
    nonzero(&dp, "2t·y0 − y0² + 1")?;
    let p = Point::affine(
        (n(3) * t2.clone() - n(1)) * yy.clone() / (w.clone() * dp.clone()),
        n(2) * (t2.clone() * y.clone() + n(2) * t.clone() - y.clone()) * (t.clone() * y.clone() - n(1))
            / (w.clone() * dp),
    );

    let dq = n(3) * t2.clone() * y2.clone() + n(2) * s3() * t2.clone() * y.clone() - n(3) * t2.clone()
        + n(8) * t.clone() * y.clone()
        - y2.clone()
        + n(2) * s3() * y.clone()
        + n(1);
    nonzero(&dq, "the Q'' denominator")?;
    let qx = -(n(2) * (n(3) * s3() * t3.clone() + n(3) * t2.clone() - s3() * t.clone() - n(1)) * yy.clone())
        / (dq.clone() * w.clone());
    let qy_num = s3() * t4.clone() * y2.clone() + n(6) * t4.clone() * y.clone() - n(2) * t3.clone() * y2.clone()
        + n(3) * s3() * t4.clone()
        - n(8) * s3() * t2.clone() * y2.clone()
        + n(6) * t3.clone()
        + n(4) * t2.clone() * y.clone()
        - n(10) * t.clone() * y2.clone()
        - n(4) * s3() * t2.clone()
        - s3() * y2.clone()
        - n(2) * t.clone()
        - n(2) * y.clone()
        + s3();
    let q = Point::affine(qx, -qy_num / (dq * w.clone()));

    let dr = n(3) * t2.clone() * y2.clone() - n(2) * s3() * t2.clone() * y.clone() - n(3) * t2.clone()
        + n(8) * t.clone() * y.clone()
        - y2.clone()
        - n(2) * s3() * y.clone()
        + n(1);
    nonzero(&dr, "the R'' denominator")?;
    let rx =
        n(2) * (n(3) * s3() * t3.clone() - n(3) * t2.clone() - s3() * t.clone() + n(1)) * yy / (dr.clone() * w.clone());
    let ry_num = s3() * t4.clone() * y2.clone() - n(6) * t4.clone() * y.clone()
        + n(2) * t3.clone() * y2.clone()
        + n(3) * s3() * t4
        - n(8) * s3() * t2.clone() * y2.clone()
        - n(6) * t3
        - n(4) * t2.clone() * y.clone()
        + n(10) * t.clone() * y2.clone()
        - n(4) * s3() * t2
        - s3() * y2
        + n(2) * t
        + n(2) * y
        + s3();
    let r = Point::affine(rx, ry_num / (dr * w));
    Ok([p, q, r])
}

/// The triangle `P″Q″R″` cut from the conic by lines through `V = (0, y0)`.
///
/// Fails if a closed form disagrees with the line–conic intersection.
pub fn oracle_secondary(t: &Rational, y0: &QuadExt) -> Result<Triangle<QuadExt>> {
    let tol = Tolerance::default();
    let pqr = oracle_pqr(t)?;
    let k = oracle_conic(t)?;
    let v = Point::affine(n(0), y0.clone());
    let closed = secondary_closed_form(t, y0)?;
    for (i, c) in closed.iter().enumerate() {
        if c == pqr.vertex(i) {
            return Err(Error::DegenerateParameter(format!("the line from V is tangent at vertex {i}")));
        }
        let route = second_intersection(&k, pqr.vertex(i), &v, &tol)?;
        if !k.eval(c).is_zero() || route.normalized() != *c {
            return Err(Error::DegenerateScene(format!(
                "closed form for secondary vertex {i} disagrees with the line-conic route"
            )));
        }
    }
    let [p, q, r] = closed;
    Triangle::new(p, q, r)
}

/// Perspectors of `PQR` against `P″Q″R″` for the pairings `P↔P″`, `P↔Q″`, `P↔R″`.
///
/// A vanishing denominator puts the perspector at infinity on `x = 0`.
pub fn oracle_perspectors(t: &Rational, y0: &QuadExt) -> Result<[Point<QuadExt>; 3]> {
    check_t(t)?;
    let y = y0.clone();
    let on_axis = |num: QuadExt, den: QuadExt| {
        if den.is_zero() {
            Point::new(n(0), n(1), n(0))
        } else {
            Point::affine(n(0), num / den)
        }
    };
    Ok([
        Point::affine(n(0), y.clone()),
        on_axis(-(s3() * y.clone() + n(3)), n(3) * y.clone() - s3()),
        on_axis(s3() * y.clone() - n(3), n(3) * y + s3()),
    ])
}

/// Intersections of the two Fermat circles, `(0, ±√3)`.
pub fn fermat_circle_meets() -> Result<Vec<Point<QuadExt>>> {
    let (f1, f2) = fermat_points();
    let s1 = Circle::through(&f2, &f1)?;
    let s2 = Circle::through(&f1, &f2)?;
    circle_circle_intersections(&s1, &s2, &Tolerance::default())
}

/// Fermat data of one secondary triangle.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SecondaryFermat {
    pub y0: QuadExt,
    /// `None` when the triangle is equilateral and has no Kiepert conic.
    pub first_fermat: Option<Point<QuadExt>>,
    pub checks: Vec<NamedCheck<QuadExt>>,
}

/// Exact verification of the closed-form scene at one `t` and two heights.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClosedFormReport {
    pub t: Rational,
    pub y0a: QuadExt,
    pub y0b: QuadExt,
    pub checks: Vec<NamedCheck<QuadExt>>,
    pub fermat: Vec<SecondaryFermat>,
    /// Triple perspectivity of the two secondary triangles.
    pub secondary_pair: TriplePerspectivity<QuadExt>,
}

impl ClosedFormReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().chain(self.fermat.iter().flat_map(|f| &f.checks)).all(|c| c.holds)
            && self.secondary_pair.axis.check.holds
    }
}

fn exact(holds: bool) -> Check<QuadExt> {
    Check { holds, residual: if holds { n(0) } else { n(1) } }
}

fn secondary_fermat(t: &Rational, y0: &QuadExt, tri: &Triangle<QuadExt>, tol: &Tolerance) -> Result<SecondaryFermat> {
    let mut checks = Vec::new();
    if !tri.is_scalene(tol) {
        return Ok(SecondaryFermat { y0: y0.clone(), first_fermat: None, checks });
    }
    let (plus, minus) = fermat_points();
    let pair = fermat_pair(tri, tol)?;
    let matches = (pair.f1 == plus && pair.f2 == minus) || (pair.f1 == minus && pair.f2 == plus);
    checks.push(NamedCheck::new("Fermat pair is (1,0), (-1,0)", exact(matches)));
    let scene = kiepert_hyperbola(tri, tol)?;
    checks.push(NamedCheck::new("Kiepert conic equals closed form", scene.conic.same_as(&oracle_conic(t)?, tol)));
    Ok(SecondaryFermat { y0: y0.clone(), first_fermat: Some(pair.f1), checks })
}

/// Checks every closed form at `t` and heights `y0a ≠ y0b`.
pub fn verify_closed_form(t: &Rational, y0a: &QuadExt, y0b: &QuadExt) -> Result<ClosedFormReport> {
    if y0a == y0b {
        return Err(Error::InvalidInput("the two heights must differ".into()));
    }
    let tol = Tolerance::default();
    let mut checks = Vec::new();
    let (f1, f2) = fermat_points();
    let pqr = oracle_pqr(t)?;
    let k = oracle_conic(t)?;
    let s1 = Circle::through(&f2, &f1)?;

    for (i, p) in pqr.vertices.iter().enumerate() {
        checks.push(NamedCheck::new(format!("PQR vertex {i} on circle about F2"), s1.incidence(p, &tol)?));
        checks.push(NamedCheck::new(format!("PQR vertex {i} on conic"), k.incidence(p, &tol)));
        let reflected = p.reflect_through(&Point::origin())?;
        checks.push(NamedCheck::new(format!("reflected vertex {i} on conic"), k.incidence(&reflected, &tol)));
    }
    let sides = pqr.side_lengths_sq();
    checks.push(NamedCheck::new("PQR equilateral", exact(sides[0] == sides[1] && sides[1] == sides[2])));
    checks.push(NamedCheck::new("conic rectangular", k.is_rectangular(&tol)));
    let [p, q, r] = pqr.vertices.clone();
    let fitted = fit_five_points(&[p, q, r, f1.clone(), f2.clone()], &tol)?;
    checks.push(NamedCheck::new("five-point fit equals closed form", fitted.same_as(&k, &tol)));

    let meets = fermat_circle_meets()?;
    let root3 = [Point::affine(n(0), s3()), Point::affine(n(0), -s3())];
    checks.push(NamedCheck::new(
        "Fermat circles meet at (0, ±√3)",
        exact(meets.len() == 2 && root3.iter().all(|p| meets.contains(p))),
    ));

    let mut secondaries = Vec::new();
    let mut fermat = Vec::new();
    for y0 in [y0a, y0b] {
        let sec = oracle_secondary(t, y0)?;
        let v = Point::affine(n(0), y0.clone());
        for i in 0..3 {
            checks.push(NamedCheck::new(
                format!("y0={y0}: secondary vertex {i} on conic"),
                k.incidence(sec.vertex(i), &tol),
            ));
            checks.push(NamedCheck::new(
                format!("y0={y0}: vertex {i}, V, secondary vertex {i} collinear"),
                collinear(pqr.vertex(i), &v, sec.vertex(i), &tol),
            ));
        }
        let expected = oracle_perspectors(t, y0)?;
        for (shift, e) in expected.iter().enumerate() {
            let name = format!("y0={y0}: perspector for shift {shift}");
            match perspector(&pqr, &sec, Pairing { shift, reversed: false }, &tol) {
                Ok(c) => {
                    checks.push(NamedCheck::new(format!("{name} concurrent"), c.check.clone()));
                    checks.push(NamedCheck::new(format!("{name} matches closed form"), exact(c.perspector == *e)));
                }
                Err(_) => checks.push(NamedCheck::new(format!("{name} concurrent"), exact(false))),
            }
            checks.push(NamedCheck::new(format!("{name} on x = 0"), axis().incidence(e, &tol)));
        }
        checks.push(NamedCheck::new(
            format!("y0={y0}: perspectors collinear"),
            collinear(&expected[0], &expected[1], &expected[2], &tol),
        ));
        fermat.push(secondary_fermat(t, y0, &sec, &tol)?);
        secondaries.push(sec);
    }

    let secondary_pair = triple_perspectivity(&secondaries[0], &secondaries[1], &tol)?;
    for (i, c) in secondary_pair.certs.iter().enumerate() {
        checks.push(NamedCheck::new(
            format!("secondary pair perspector {i} on x = 0"),
            axis().incidence(&c.perspector, &tol),
        ));
    }
    Ok(ClosedFormReport { t: t.clone(), y0a: y0a.clone(), y0b: y0b.clone(), checks, fermat, secondary_pair })
}
