//! The Kiepert hyperbola of a scalene triangle, its two inscribed
//! equilateral triangles, perspectivity certificates, and the Pascal and
//! Hessian lines of conic-inscribed configurations.

use serde::{Deserialize, Serialize};

use crate::centers::{centroid, fermat_pair, FermatPair, Triangle};
use crate::conics::{circle_conic_residual_intersections, fit_five_points, Circle, Conic};
use crate::numeric::linalg::{cross, norm_f64};
use crate::numeric::{Scalar, Sqrt3, Tolerance};
use crate::projective::{collinear, concurrent, join, meet, normalize_frame, Check, Line, Point, SimilarityFrame};
use crate::{Error, Result};

/// A check with a human-readable label.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "S: Scalar", deserialize = "S: Deserialize<'de>"))]
pub struct NamedCheck<S> {
    pub name: String,
    pub holds: bool,
    pub residual: S,
}

impl<S: Scalar> NamedCheck<S> {
    pub fn new(name: impl Into<String>, check: Check<S>) -> Self {
        NamedCheck { name: name.into(), holds: check.holds, residual: check.residual }
    }
}

/// A reference triangle with its fitted Kiepert conic.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound(serialize = "S: Scalar"))]
pub struct KiepertScene<S: Scalar> {
    pub reference: Triangle<S>,
    pub fermat: FermatPair<S>,
    pub centroid: Point<S>,
    pub conic: Conic<S>,
    pub center: Point<S>,
    /// Similarity sending `F₂ ↦ (−1, 0)` and `F₁ ↦ (1, 0)`.
    pub frame: SimilarityFrame<S>,
    /// The conic in the normalized frame, as fitted.
    pub local_conic: Conic<S>,
    pub checks: Vec<NamedCheck<S>>,
}

impl<S: Scalar> KiepertScene<S> {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn scale(&self) -> f64 {
        self.reference.scale()
    }
}

/// Fits the conic through `A, B, C, F₁` and the centroid, working in the
/// frame that normalizes the Fermat points, and records its defining checks.
pub fn kiepert_hyperbola<S: Sqrt3>(t: &Triangle<S>, tol: &Tolerance) -> Result<KiepertScene<S>> {
    if !t.is_scalene(tol) {
        return Err(Error::NotScalene);
    }
    let fermat = fermat_pair(t, tol)?;
    let frame = normalize_frame(&fermat.f2, &fermat.f1)?;
    let m = centroid(t);
    let local = [
        frame.forward(t.vertex(0)),
        frame.forward(t.vertex(1)),
        frame.forward(t.vertex(2)),
        Point::affine(S::one(), S::zero()),
        frame.forward(&m),
    ];
    let local_conic = fit_five_points(&local, tol)?;
    if local_conic.is_degenerate(tol) {
        return Err(Error::DegenerateConic);
    }
    let conic = local_conic.pullback(&frame.matrix()).normalized();
    let center = conic.center(tol)?;

    let mut checks = Vec::new();
    let named = [
        ("A on conic", t.vertex(0)),
        ("B on conic", t.vertex(1)),
        ("C on conic", t.vertex(2)),
        ("F1 on conic", &fermat.f1),
        ("F2 on conic", &fermat.f2),
        ("centroid on conic", &m),
    ];
    for (name, p) in named {
        checks.push(NamedCheck::new(name, conic.incidence(p, tol)));
    }
    checks.push(NamedCheck::new("rectangular", conic.is_rectangular(tol)));
    let mid = fermat.midpoint()?;
    checks.push(NamedCheck::new("center is Fermat midpoint", center.distance_check(&mid, t.scale(), tol)?));
    Ok(KiepertScene { reference: t.clone(), fermat, centroid: m, conic, center, frame, local_conic, checks })
}

/// The two inscribed equilateral triangles, in the scene frame and the normalized one.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound(serialize = "S: Scalar"))]
pub struct YiuTriangles<S: Scalar> {
    /// Residual intersections of the conic with the circle about `F₂` through `F₁`.
    pub pqr: Triangle<S>,
    /// Residual intersections with the circle about `F₁` through `F₂`.
    pub pqr_prime: Triangle<S>,
    #[serde(skip)]
    pub local_pqr: Triangle<S>,
    #[serde(skip)]
    pub local_pqr_prime: Triangle<S>,
}

fn residual_triangle<S: Scalar>(
    k: &Conic<S>,
    center: Point<S>,
    common: Point<S>,
    tol: &Tolerance,
) -> Result<Triangle<S>> {
    let c = Circle::through(&center, &common)?;
    let res = circle_conic_residual_intersections(&c, k, &common, tol)?;
    let [p, q, r] = res.points;
    Ok(Triangle::new(p, q, r)?.ccw())
}

/// Vertices are ordered by chord slope through the common Fermat point, then
/// made counterclockwise keeping the first.
pub fn yiu_triangles<S: Scalar>(scene: &KiepertScene<S>, tol: &Tolerance) -> Result<YiuTriangles<S>> {
    let f1 = Point::affine(S::one(), S::zero());
    let f2 = Point::affine(-S::one(), S::zero());
    let k = &scene.local_conic;
    let local_pqr = residual_triangle(k, f2.clone(), f1.clone(), tol)?;
    let local_pqr_prime = residual_triangle(k, f1, f2, tol)?;
    let back = |t: &Triangle<S>| t.map_points(|p| scene.frame.inverse(p));
    Ok(YiuTriangles { pqr: back(&local_pqr), pqr_prime: back(&local_pqr_prime), local_pqr, local_pqr_prime })
}

/// Equilaterality of a triangle inscribed in a circle, with the midpoint
/// structure behind it: every side midpoint, every midpoint of a
/// center-to-vertex segment, and `o` lie on the circle of half the radius.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound(serialize = "S: Scalar"))]
pub struct EquilateralCertificate<S: Scalar> {
    pub sides_sq: [S; 3],
    pub spread: Check<S>,
    /// `{Dᵢ, Uᵢ₊₁, Uᵢ₊₂, O}` for each side `i`, then `{D₀, D₁, D₂, O}`.
    pub concyclic: [Check<S>; 4],
}

impl<S: Scalar> EquilateralCertificate<S> {
    pub fn all_hold(&self) -> bool {
        self.spread.holds && self.concyclic.iter().all(|c| c.holds)
    }

    pub fn max_concyclic_residual(&self) -> f64 {
        self.concyclic.iter().map(|c| c.residual_f64().abs()).fold(0.0, f64::max)
    }
}

/// Equal values: exact sum of squared differences, or relative max spread for doubles.
fn equal_values<S: Scalar>(v: &[S], tol: &Tolerance) -> Check<S> {
    let residual = if S::EXACT {
        v.iter().skip(1).fold(S::zero(), |acc, x| acc + (x.clone() - v[0].clone()).square())
    } else {
        let f: Vec<f64> = v.iter().map(|x| x.to_f64()).collect();
        let hi = f.iter().cloned().fold(f64::MIN, f64::max);
        let lo = f.iter().cloned().fold(f64::MAX, f64::min);
        let scale = f.iter().map(|x| x.abs()).fold(0.0, f64::max);
        S::from_f64(if scale == 0.0 { 0.0 } else { (hi - lo) / scale })
    };
    Check::from_residual(residual, tol)
}

pub fn equilateral_certificate<S: Scalar>(
    t: &Triangle<S>,
    circumcenter: &Point<S>,
    o: &Point<S>,
    tol: &Tolerance,
) -> Result<EquilateralCertificate<S>> {
    let sides_sq = t.side_lengths_sq();
    let spread = equal_values(&sides_sq, tol);
    let d: Vec<Point<S>> = (0..3).map(|i| t.vertex(i + 1).midpoint(t.vertex(i + 2))).collect::<Result<_>>()?;
    let u: Vec<Point<S>> = (0..3).map(|i| circumcenter.midpoint(t.vertex(i))).collect::<Result<_>>()?;
    let group = |pts: [&Point<S>; 4]| -> Result<Check<S>> {
        let dist: Vec<S> = pts.iter().map(|p| circumcenter.distance_sq(p)).collect::<Result<_>>()?;
        Ok(equal_values(&dist, tol))
    };
    let concyclic = [
        group([&d[0], &u[1], &u[2], o])?,
        group([&d[1], &u[2], &u[0], o])?,
        group([&d[2], &u[0], &u[1], o])?,
        group([&d[0], &d[1], &d[2], o])?,
    ];
    Ok(EquilateralCertificate { sides_sq, spread, concyclic })
}

/// Vertex correspondence `t1[i] ↔ t2'[(i + shift) % 3]`, where `t2'` is `t2`
/// or, when `reversed`, `(t2[0], t2[2], t2[1])`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pairing {
    pub shift: usize,
    pub reversed: bool,
}

impl Pairing {
    pub fn apply<S: Scalar>(&self, t2: &Triangle<S>) -> Triangle<S> {
        let base = if self.reversed { t2.reversed() } else { t2.clone() };
        base.rotated(self.shift)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound(serialize = "S: Scalar"))]
pub struct PerspectivityCertificate<S: Scalar> {
    pub pairing: Pairing,
    /// Possibly at infinity.
    pub perspector: Point<S>,
    pub check: Check<S>,
}

/// Common point of the lines joining paired vertices.
pub fn perspector<S: Scalar>(
    t1: &Triangle<S>,
    t2: &Triangle<S>,
    pairing: Pairing,
    tol: &Tolerance,
) -> Result<PerspectivityCertificate<S>> {
    let t2 = pairing.apply(t2);
    let lines: Vec<Line<S>> = (0..3).map(|i| join(t1.vertex(i), t2.vertex(i))).collect::<Result<_>>()?;
    let check = concurrent(&lines[0], &lines[1], &lines[2], tol);
    if !check.holds {
        return Err(Error::NotPerspective(check.residual_f64()));
    }
    let p =
        meet(&lines[0], &lines[1]).or_else(|_| meet(&lines[0], &lines[2])).or_else(|_| meet(&lines[1], &lines[2]))?;
    Ok(PerspectivityCertificate { pairing, perspector: p.normalized(), check })
}

/// A line fitted through three points, with their collinearity check.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound(serialize = "S: Scalar"))]
pub struct LineThrough<S: Scalar> {
    pub line: Line<S>,
    pub points: [Point<S>; 3],
    pub check: Check<S>,
}

/// Joins the best-separated pair of the three points.
pub fn line_through<S: Scalar>(points: [Point<S>; 3], tol: &Tolerance) -> Result<LineThrough<S>> {
    let points = points.map(|p| p.normalized());
    let pairs = [(0, 1), (1, 2), (0, 2)];
    let best = if S::EXACT {
        pairs.into_iter().find(|&(i, j)| !points[i].coincides(&points[j], tol))
    } else {
        pairs
            .into_iter()
            .map(|(i, j)| {
                let c = cross(&points[i].unit().coords(), &points[j].unit().coords());
                ((i, j), norm_f64(&c))
            })
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(p, _)| p)
    };
    let (i, j) = best.ok_or(Error::IdenticalElements)?;
    let line = join(&points[i], &points[j])?.normalized();
    let check = collinear(&points[0], &points[1], &points[2], tol);
    Ok(LineThrough { line, points, check })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound(serialize = "S: Scalar"))]
pub struct TriplePerspectivity<S: Scalar> {
    pub certs: [PerspectivityCertificate<S>; 3],
    /// Line through the three perspectors.
    pub axis: LineThrough<S>,
}

impl<S: Scalar> TriplePerspectivity<S> {
    pub fn reversed(&self) -> bool {
        self.certs[0].pairing.reversed
    }

    pub fn perspectors(&self) -> [Point<S>; 3] {
        std::array::from_fn(|i| self.certs[i].perspector.clone())
    }
}

/// Tries the three cyclic pairings of `t2`, then those of `t2` reversed.
pub fn triple_perspectivity<S: Scalar>(
    t1: &Triangle<S>,
    t2: &Triangle<S>,
    tol: &Tolerance,
) -> Result<TriplePerspectivity<S>> {
    for reversed in [false, true] {
        let certs: Result<Vec<_>> = (0..3).map(|shift| perspector(t1, t2, Pairing { shift, reversed }, tol)).collect();
        let Ok(certs) = certs else { continue };
        let certs: [PerspectivityCertificate<S>; 3] = certs.try_into().expect("three pairings");
        let pts = std::array::from_fn(|i| certs[i].perspector.clone());
        let axis = line_through(pts, tol).map_err(|_| Error::NotTriplyPerspective)?;
        return Ok(TriplePerspectivity { certs, axis });
    }
    Err(Error::NotTriplyPerspective)
}

fn check_on_conic<S: Scalar>(k: &Conic<S>, p: &Point<S>, tol: &Tolerance) -> Result<()> {
    let inc = k.incidence(p, tol);
    if !inc.holds {
        return Err(Error::PointNotOnConic(inc.residual_f64()));
    }
    Ok(())
}

/// Line through the meets of opposite sides of an inscribed hexagon.
pub fn pascal_line<S: Scalar>(k: &Conic<S>, hexagon: &[Point<S>; 6], tol: &Tolerance) -> Result<LineThrough<S>> {
    for p in hexagon {
        check_on_conic(k, p, tol)?;
    }
    let sides: Vec<Line<S>> = (0..6)
        .map(|i| join(&hexagon[i], &hexagon[(i + 1) % 6]).map_err(|_| Error::DegenerateHexagon))
        .collect::<Result<_>>()?;
    let meets: Vec<Point<S>> =
        (0..3).map(|i| meet(&sides[i], &sides[i + 3]).map_err(|_| Error::DegenerateHexagon)).collect::<Result<_>>()?;
    line_through(meets.try_into().expect("three meets"), tol).map_err(|_| Error::DegenerateHexagon)
}

/// Line through the meets of each vertex tangent with the opposite side.
pub fn hessian_line<S: Scalar>(k: &Conic<S>, t: &Triangle<S>, tol: &Tolerance) -> Result<LineThrough<S>> {
    if k.is_degenerate(tol) {
        return Err(Error::DegenerateConic);
    }
    let meets: Vec<Point<S>> =
        (0..3).map(|i| meet(&k.tangent_at(t.vertex(i), tol)?, &t.side(i))).collect::<Result<_>>()?;
    line_through(meets.try_into().expect("three meets"), tol)
}

/// Everything asserted about a scene's two equilateral triangles.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound(serialize = "S: Scalar"))]
pub struct YiuCertificates<S: Scalar> {
    pub equilateral: EquilateralCertificate<S>,
    pub equilateral_prime: EquilateralCertificate<S>,
    pub perspective: TriplePerspectivity<S>,
    pub perspective_prime: TriplePerspectivity<S>,
    pub hessian: LineThrough<S>,
    /// Perspector axis of `PQR` against the reference equals its Hessian line.
    pub axis_is_hessian: Check<S>,
    /// Both perspector axes are the same line.
    pub axes_agree: Check<S>,
}

impl<S: Scalar> YiuCertificates<S> {
    pub fn all_hold(&self) -> bool {
        self.equilateral.all_hold()
            && self.equilateral_prime.all_hold()
            && self.perspective.axis.check.holds
            && self.perspective_prime.axis.check.holds
            && self.hessian.check.holds
            && self.axis_is_hessian.holds
            && self.axes_agree.holds
    }
}

pub fn certify_yiu<S: Scalar>(
    scene: &KiepertScene<S>,
    yiu: &YiuTriangles<S>,
    tol: &Tolerance,
) -> Result<YiuCertificates<S>> {
    let f = &scene.fermat;
    let equilateral = equilateral_certificate(&yiu.pqr, &f.f2, &scene.center, tol)?;
    let equilateral_prime = equilateral_certificate(&yiu.pqr_prime, &f.f1, &scene.center, tol)?;
    let perspective = triple_perspectivity(&yiu.pqr, &scene.reference, tol)?;
    let perspective_prime = triple_perspectivity(&yiu.pqr_prime, &scene.reference, tol)?;
    let hessian = hessian_line(&scene.conic, &yiu.pqr, tol)?;
    let axis_is_hessian = perspective.axis.line.same_as(&hessian.line, tol);
    let axes_agree = perspective.axis.line.same_as(&perspective_prime.axis.line, tol);
    Ok(YiuCertificates {
        equilateral,
        equilateral_prime,
        perspective,
        perspective_prime,
        hessian,
        axis_is_hessian,
        axes_agree,
    })
}
