//! Projective collineations between conics, and triangles perspective with
//! an inscribed triangle from a point of its Hessian line.

use serde::Serialize;

use crate::centers::Triangle;
use crate::conics::{second_intersection, Conic};
use crate::kiepert::{hessian_line, triple_perspectivity, LineThrough, TriplePerspectivity};
use crate::numeric::linalg::{det3, Mat3};
use crate::numeric::{Scalar, Sqrt3, Tolerance};
use crate::projective::{meet, Check, Line, Point};
use crate::{Error, Result};

/// An invertible projective map, up to scale.
#[derive(Clone, Debug, PartialEq)]
pub struct Homography<S> {
    pub m: Mat3<S>,
}

impl<S: Scalar> Homography<S> {
    pub fn new(m: Mat3<S>) -> Result<Self> {
        let singular = if S::EXACT {
            m.det().is_zero()
        } else {
            let s = m.max_abs();
            s == 0.0 || m.det().to_f64().abs() <= Tolerance::structural().eps * s * s * s
        };
        if singular {
            return Err(Error::DegenerateFrame);
        }
        Ok(Homography { m: normalize(m) })
    }

    pub fn identity() -> Self {
        Homography { m: Mat3::identity() }
    }

    pub fn point(&self, p: &Point<S>) -> Point<S> {
        Point::from_coords(self.m.apply(&p.coords())).normalized()
    }

    /// Lines map by the inverse transpose.
    pub fn line(&self, l: &Line<S>) -> Line<S> {
        Line::from_coords(self.m.adjugate().transpose().apply(&l.coords())).normalized()
    }

    /// The image conic `H⁻ᵀ M H⁻¹`.
    pub fn conic(&self, k: &Conic<S>) -> Conic<S> {
        k.transform(&self.m).normalized()
    }

    pub fn triangle(&self, t: &Triangle<S>) -> Result<Triangle<S>> {
        let [a, b, c] = t.vertices.clone().map(|p| self.point(&p));
        Triangle::new(a, b, c)
    }

    pub fn inverse(&self) -> Self {
        Homography { m: normalize(self.m.adjugate()) }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Homography<S>) -> Self {
        Homography { m: normalize(self.m.mul(&other.m)) }
    }

    pub fn to_f64(&self) -> Homography<f64> {
        Homography { m: self.m.to_f64() }
    }
}

fn normalize<S: Scalar>(m: Mat3<S>) -> Mat3<S> {
    if S::EXACT {
        return m;
    }
    let s = m.max_abs();
    if s == 0.0 {
        m
    } else {
        m.scale(&S::from_f64(1.0 / s))
    }
}

/// The map with basis-and-unit-point images `src[i] ↦ dst[i]`; no three of
/// either quadruple may be collinear.
pub fn from_four_points<S: Scalar>(src: &[Point<S>; 4], dst: &[Point<S>; 4]) -> Result<Homography<S>> {
    let frame = |pts: &[Point<S>; 4]| -> Result<Mat3<S>> {
        let c: Vec<[S; 3]> = pts.iter().map(|p| p.unit().coords()).collect();
        let a = Mat3::from_columns([&c[0], &c[1], &c[2]]);
        if det3(&c[0], &c[1], &c[2]).is_zero() {
            return Err(Error::DegenerateFrame);
        }
        // Columns scaled so they sum to the fourth point.
        let lam = a.adjugate().apply(&c[3]);
        if lam.iter().any(|l| l.is_zero()) {
            return Err(Error::DegenerateFrame);
        }
        Ok(Mat3::from_fn(|i, j| a.m[i][j].clone() * lam[j].clone()))
    };
    let a = frame(src)?;
    let b = frame(dst)?;
    Homography::new(b.mul(&a.adjugate()))
}

/// A collineation carrying one conic onto another, with its pullback check.
#[derive(Clone, Debug, PartialEq)]
pub struct ConicCollineation<S> {
    pub h: Homography<S>,
    /// `Hᵀ M₂ H ∝ M₁`.
    pub pullback: Check<S>,
}

fn on_conic<S: Scalar>(k: &Conic<S>, p: &Point<S>, tol: &Tolerance) -> Result<()> {
    let inc = k.incidence(p, tol);
    if !inc.holds {
        return Err(Error::PointNotOnConic(inc.residual_f64()));
    }
    Ok(())
}

/// The collineation with `p[i] ↦ q[i]` and `k1 ↦ k2`.
///
/// The fourth correspondence is the meet of the tangents at the first two
/// points; if that frame degenerates, the tangents at the last two are used.
pub fn collineation_from_conics<S: Scalar>(
    k1: &Conic<S>,
    p: &[Point<S>; 3],
    k2: &Conic<S>,
    q: &[Point<S>; 3],
    tol: &Tolerance,
) -> Result<ConicCollineation<S>> {
    for k in [k1, k2] {
        if k.is_degenerate(tol) {
            return Err(Error::DegenerateConic);
        }
    }
    for (k, pts) in [(k1, p), (k2, q)] {
        for pt in pts {
            on_conic(k, pt, tol)?;
        }
        Triangle::new(pts[0].clone(), pts[1].clone(), pts[2].clone()).map_err(|_| Error::DegenerateFrame)?;
    }
    let pole = |k: &Conic<S>, a: &Point<S>, b: &Point<S>| -> Result<Point<S>> {
        meet(&k.tangent_at(a, tol)?, &k.tangent_at(b, tol)?)
    };
    let attempt = |i: usize, j: usize, l: usize| -> Result<Homography<S>> {
        let src = [p[i].clone(), p[j].clone(), p[l].clone(), pole(k1, &p[i], &p[j])?];
        let dst = [q[i].clone(), q[j].clone(), q[l].clone(), pole(k2, &q[i], &q[j])?];
        from_four_points(&src, &dst)
    };
    let h = attempt(0, 1, 2).or_else(|_| attempt(1, 2, 0))?;
    let pullback = k2.pullback(&h.m).same_as(k1, tol);
    Ok(ConicCollineation { h, pullback })
}

/// A second inscribed triangle perspective with the first from a point of its Hessian line.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound(serialize = "S: Scalar"))]
pub struct InscribedPerspectivity<S: Scalar> {
    pub second: Triangle<S>,
    pub hessian: LineThrough<S>,
    pub perspectivity: TriplePerspectivity<S>,
    /// Each perspector's incidence with the Hessian line.
    pub on_hessian: [Check<S>; 3],
}

impl<S: Scalar> InscribedPerspectivity<S> {
    pub fn all_hold(&self) -> bool {
        self.hessian.check.holds && self.perspectivity.axis.check.holds && self.on_hessian.iter().all(|c| c.holds)
    }
}

/// Cuts the conic again along the lines from `s` through each vertex and
/// certifies that the result is triply perspective with `t`.
pub fn inscribed_perspectivity<S: Scalar>(
    k: &Conic<S>,
    t: &Triangle<S>,
    s: &Point<S>,
    tol: &Tolerance,
) -> Result<InscribedPerspectivity<S>> {
    let hessian = hessian_line(k, t, tol)?;
    let inc = hessian.line.incidence(s, tol);
    if !inc.holds {
        return Err(Error::NotOnHessianLine(inc.residual_f64()));
    }
    let mut second = Vec::with_capacity(3);
    for v in &t.vertices {
        let other = second_intersection(k, v, s, tol)?;
        if other.coincides(v, tol) {
            return Err(Error::TangentChord);
        }
        second.push(other);
    }
    let [a, b, c]: [Point<S>; 3] = second.try_into().expect("three vertices");
    let second = Triangle::new(a, b, c)?;
    let perspectivity = triple_perspectivity(t, &second, tol)?;
    let on_hessian = std::array::from_fn(|i| hessian.line.incidence(&perspectivity.certs[i].perspector, tol));
    Ok(InscribedPerspectivity { second, hessian, perspectivity, on_hessian })
}

/// The same statement checked through the model: the unit circle with an
/// equilateral triangle, whose Hessian line is the line at infinity.
#[derive(Clone, Debug, PartialEq)]
pub struct TransportCheck<S> {
    pub collineation: ConicCollineation<S>,
    /// The Hessian line maps to the line at infinity.
    pub hessian_to_infinity: Check<S>,
    /// Perspectors computed in the model and mapped back agree with the direct ones.
    pub perspectors_agree: bool,
}

pub fn transport_check<S: Sqrt3>(
    k: &Conic<S>,
    t: &Triangle<S>,
    s: &Point<S>,
    direct: &InscribedPerspectivity<S>,
    tol: &Tolerance,
) -> Result<TransportCheck<S>> {
    let circle = Conic::from_i64([1, 0, 1, 0, 0, -1]);
    let h = S::sqrt3().half();
    let half = S::one().half();
    let model = [Point::affine(S::one(), S::zero()), Point::affine(-half.clone(), h.clone()), Point::affine(-half, -h)];
    let model = if t.orientation() == crate::centers::Orientation::Ccw {
        model
    } else {
        let [a, b, c] = model;
        [a, c, b]
    };
    let collineation = collineation_from_conics(k, &t.vertices, &circle, &model, tol)?;
    let g = &collineation.h;
    let hessian_to_infinity = g.line(&direct.hessian.line).same_as(&Line::at_infinity(), tol);
    let mt = Triangle::new(model[0].clone(), model[1].clone(), model[2].clone())?;
    let in_model = inscribed_perspectivity(&circle, &mt, &g.point(s), tol)?;
    let back = g.inverse();
    let direct_pts = direct.perspectivity.perspectors();
    let perspectors_agree = in_model
        .perspectivity
        .perspectors()
        .iter()
        .map(|p| back.point(p))
        .all(|p| direct_pts.iter().any(|d| d.coincides(&p, tol)));
    Ok(TransportCheck { collineation, hessian_to_infinity, perspectors_agree })
}
