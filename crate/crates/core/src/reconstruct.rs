//! Recovering a reference triangle from its Kiepert hyperbola, one Fermat
//! point with its role, and one vertex.

use serde::Serialize;

use crate::centers::{nine_point_circle, FermatPair, Triangle, Which};
use crate::conics::{circle_conic_residual_intersections, radical_axis, second_intersection, Circle, Conic};
use crate::kiepert::kiepert_hyperbola;
use crate::numeric::{Sqrt3, Tolerance};
use crate::projective::{join, meet, normalize_frame, Check, Line, Point};
use crate::{Error, Result};

/// One attempt, pairing the given vertex with a vertex of the equilateral triangle.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound(serialize = "S: Sqrt3"))]
pub struct Attempt<S: Sqrt3> {
    /// Index of the equilateral-triangle vertex joined to the given vertex.
    pub yiu_vertex: usize,
    pub triangle: Option<Triangle<S>>,
    pub fermat_matches: bool,
    /// Input conic versus the candidate's own Kiepert conic, up to scale.
    pub conic_agreement: Option<Check<S>>,
    /// Nine-point circle of the candidate through the conic center.
    pub nine_point_through_center: Option<Check<S>>,
    pub valid: bool,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound(serialize = "S: Sqrt3"))]
pub struct ReconstructionResult<S: Sqrt3> {
    pub center: Point<S>,
    pub fermat: FermatPair<S>,
    /// The equilateral triangle cut by the circle about `F₂` through `F₁`.
    pub yiu: Triangle<S>,
    /// Radical axis of the two Fermat circles.
    pub axis: Line<S>,
    pub attempts: Vec<Attempt<S>>,
    /// Distinct valid triangles.
    pub candidates: Vec<Triangle<S>>,
}

impl<S: Sqrt3> ReconstructionResult<S> {
    /// Number of attempts that produced a valid triangle (before deduplication).
    pub fn valid_attempts(&self) -> usize {
        self.attempts.iter().filter(|a| a.valid).count()
    }
}

struct Search<'a, S: Sqrt3> {
    k: &'a Conic<S>,
    a: &'a Point<S>,
    yiu: &'a Triangle<S>,
    axis: &'a Line<S>,
    fermat: &'a FermatPair<S>,
    which: Which,
    center: &'a Point<S>,
    tol: &'a Tolerance,
}

fn attempt<S: Sqrt3>(ctx: &Search<'_, S>, i: usize) -> Attempt<S> {
    let Search { k, a, yiu, axis, fermat, which, center, tol } = *ctx;
    let mut out = Attempt {
        yiu_vertex: i,
        triangle: None,
        fermat_matches: false,
        conic_agreement: None,
        nine_point_through_center: None,
        valid: false,
        note: None,
    };
    let build = || -> Result<Triangle<S>> {
        let v = meet(&join(yiu.vertex(i), a)?, axis)?;
        let b = second_intersection(k, yiu.vertex(i + 1), &v, tol)?;
        let c = second_intersection(k, yiu.vertex(i + 2), &v, tol)?;
        Triangle::new(a.clone(), b, c)
    };
    let t = match build() {
        Ok(t) => t,
        Err(e) => {
            out.note = Some(e.to_string());
            return out;
        }
    };
    out.triangle = Some(t.clone());
    let scene = match kiepert_hyperbola(&t, tol) {
        Ok(s) => s,
        Err(e) => {
            out.note = Some(e.to_string());
            return out;
        }
    };
    let given = fermat.get(which);
    let other = fermat.get(which.other());
    out.fermat_matches =
        scene.fermat.get(which).coincides(given, tol) && scene.fermat.get(which.other()).coincides(other, tol);
    let agreement = scene.conic.same_as(k, tol);
    let nine = nine_point_circle(&t, tol).and_then(|c| c.incidence(center, tol));
    out.valid = out.fermat_matches && agreement.holds && nine.as_ref().is_ok_and(|c| c.holds);
    out.conic_agreement = Some(agreement);
    out.nine_point_through_center = nine.ok();
    out
}

/// Recovers the triangles through `a` whose Kiepert conic is `k` and whose
/// `which` Fermat point is `f`.
///
/// Each vertex `X` of the equilateral triangle is tried: `V` is where `Xa`
/// meets the radical axis, and the other two vertices are cut from `k` by the
/// lines from `V` through the remaining vertices of the equilateral triangle.
pub fn reconstruct<S: Sqrt3>(
    k: &Conic<S>,
    f: &Point<S>,
    which: Which,
    a: &Point<S>,
    tol: &Tolerance,
) -> Result<ReconstructionResult<S>> {
    if k.is_degenerate(tol) {
        return Err(Error::DegenerateConic);
    }
    if !k.is_rectangular(tol).holds {
        return Err(Error::InvalidInput("conic is not a rectangular hyperbola".into()));
    }
    let on_f = k.incidence(f, tol);
    if !on_f.holds {
        return Err(Error::PointNotOnConic(on_f.residual_f64()));
    }
    let on_a = k.incidence(a, tol);
    if !on_a.holds {
        return Err(Error::VertexNotOnConic(on_a.residual_f64()));
    }
    let center = k.center(tol)?;
    let reflected = f.reflect_through(&center)?;
    let fermat = match which {
        Which::First => FermatPair { f1: f.normalized(), f2: reflected },
        Which::Second => FermatPair { f1: reflected, f2: f.normalized() },
    };
    let frame = normalize_frame(&fermat.f2, &fermat.f1)?;
    let local = k.transform(&frame.matrix());
    let lf1 = Point::affine(S::one(), S::zero());
    let lf2 = Point::affine(-S::one(), S::zero());
    let c1 = Circle::through(&lf2, &lf1)?;
    let c2 = Circle::through(&lf1, &lf2)?;
    let res = circle_conic_residual_intersections(&c1, &local, &lf1, tol).map_err(|e| match e {
        Error::FewerThanThreeRealIntersections(n) => {
            Error::DegenerateScene(format!("{n} residual circle-conic intersections"))
        }
        other => other,
    })?;
    let [p, q, r] = res.points;
    let local_yiu = Triangle::new(p, q, r)?.ccw();
    let yiu = local_yiu.map_points(|p| frame.inverse(p));
    let axis = frame.inverse_line(&radical_axis(&c1, &c2)?).normalized();

    let search = Search { k, a, yiu: &yiu, axis: &axis, fermat: &fermat, which, center: &center, tol };
    let attempts: Vec<Attempt<S>> = (0..3).map(|i| attempt(&search, i)).collect();
    let mut candidates: Vec<Triangle<S>> = Vec::new();
    for t in attempts.iter().filter(|a| a.valid).filter_map(|a| a.triangle.as_ref()) {
        if !candidates.iter().any(|c| c.same_vertices(t, tol)) {
            candidates.push(t.clone());
        }
    }
    if candidates.is_empty() {
        return Err(Error::NoValidCandidate);
    }
    Ok(ReconstructionResult { center, fermat, yiu, axis, attempts, candidates })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{QuadExt, Rational};
    use crate::oracle::{oracle_conic, oracle_secondary};

    #[test]
    fn recovers_the_generic_triangle() {
        let tol = Tolerance::default();
        let t = Triangle::from_xy([(0.0, 0.0), (4.0, 0.0), (1.0, 3.0)]).unwrap();
        let s = kiepert_hyperbola(&t, &tol).unwrap();
        let r = reconstruct(&s.conic, &s.fermat.f1, Which::First, t.vertex(0), &tol).unwrap();
        let close = Tolerance::new(1e-8);
        assert!(r.candidates.iter().any(|c| c.same_vertices(&t, &close)));
        let r2 = reconstruct(&s.conic, &s.fermat.f2, Which::Second, t.vertex(0), &tol).unwrap();
        assert!(r2.candidates.iter().any(|c| c.same_vertices(&t, &close)));
    }

    #[test]
    fn exact_round_trip_from_closed_form() {
        let tol = Tolerance::default();
        let one = Rational::one();
        let t = oracle_secondary(&one, &QuadExt::from(2)).unwrap();
        let k = oracle_conic(&one).unwrap();
        let s = kiepert_hyperbola(&t, &tol).unwrap();
        assert!(s.conic.same_as(&k, &tol).residual.is_zero());
        for i in 0..3 {
            let r = reconstruct(&k, &s.fermat.f1, Which::First, t.vertex(i), &tol).unwrap();
            assert!(r.candidates.iter().any(|c| c.same_vertices(&t, &tol)), "vertex {i}");
            for a in r.attempts.iter().filter(|a| a.valid) {
                assert!(a.conic_agreement.as_ref().unwrap().residual.is_zero());
            }
        }
    }

    #[test]
    fn fermat_point_as_vertex_yields_nothing() {
        let tol = Tolerance::default();
        let t = Triangle::from_xy([(0.0, 0.0), (4.0, 0.0), (1.0, 3.0)]).unwrap();
        let s = kiepert_hyperbola(&t, &tol).unwrap();
        let r = reconstruct(&s.conic, &s.fermat.f1, Which::First, &s.fermat.f1, &tol);
        assert_eq!(r.err(), Some(Error::NoValidCandidate));
    }

    #[test]
    fn vertex_off_the_conic() {
        let tol = Tolerance::default();
        let t = Triangle::from_xy([(0.0, 0.0), (4.0, 0.0), (1.0, 3.0)]).unwrap();
        let s = kiepert_hyperbola(&t, &tol).unwrap();
        let r = reconstruct(&s.conic, &s.fermat.f1, Which::First, &Point::affine(2.0, 2.0), &tol);
        assert!(matches!(r, Err(Error::VertexNotOnConic(_))));
    }
}
