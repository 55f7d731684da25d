use serde::Serialize;

use crate::numeric::linalg::norm_f64;
use crate::numeric::{Poly, Scalar, Tolerance};
use crate::projective::Point;
use crate::{Error, Result};

use super::{Circle, Conic};

/// The other point where the line through `known` and `through` meets `k`.
///
/// Returns `known` itself when the line is tangent there. With
/// `X(λ) = K + λT` and `Q(K) = 0`, the residual root is
/// `Q(T)·K − 2B(K,T)·T`, which needs no division.
pub fn second_intersection<S: Scalar>(
    k: &Conic<S>,
    known: &Point<S>,
    through: &Point<S>,
    tol: &Tolerance,
) -> Result<Point<S>> {
    let inc = k.incidence(known, tol);
    if !inc.holds {
        return Err(Error::PointNotOnConic(inc.residual_f64()));
    }
    if known.coincides(through, &Tolerance::structural()) {
        return Err(Error::IdenticalElements);
    }
    let kp = known.unit();
    let tp = through.unit();
    let qt = k.eval(&tp);
    let b = k.bilinear(&kp, &tp);
    let two = S::from_i64(2);
    let coords: [S; 3] =
        std::array::from_fn(|i| qt.clone() * kp.coords()[i].clone() - two.clone() * b.clone() * tp.coords()[i].clone());
    let p = Point::from_coords(coords);
    let vanished = if S::EXACT {
        p.is_zero_vector()
    } else {
        norm_f64(&p.coords()) <= Tolerance::structural().eps * k.matrix().max_abs()
    };
    if vanished {
        return Err(Error::LineInConic);
    }
    let p = p.normalized();
    if !S::EXACT && !p.is_affine() {
        return Ok(Point::new(p.x, p.y, S::zero()));
    }
    Ok(p)
}

/// Chord of a circle through a fixed base point, by slope.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChordParam<S> {
    Slope(S),
    Vertical,
}

/// The three points other than `common` where a circle meets a conic.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidualIntersections<S> {
    pub points: [Point<S>; 3],
    /// Chord parameters through `common`, ascending with vertical last.
    pub params: [ChordParam<S>; 3],
    /// Eliminated polynomial in the slope before removing the tangent factor.
    pub quartic: Poly<S>,
    /// Remaining cubic whose roots are the three chord slopes.
    pub cubic: Poly<S>,
}

/// Homogeneous second circle point on the chord through `(x0, y0)` with direction `(λ, μ)`.
fn chord_point<S: Scalar>(x0: &S, y0: &S, dx: &S, dy: &S, lam: S, mu: S) -> Point<S> {
    let n = lam.square() + mu.square();
    let lin = dx.clone() * lam.clone() + dy.clone() * mu.clone();
    let two = S::from_i64(2);
    Point::new(x0.clone() * n.clone() - two.clone() * lam * lin.clone(), y0.clone() * n.clone() - two * mu * lin, n)
}

/// Intersects a circle and a conic that share the point `common`.
///
/// Chords of the circle through `common` are parametrized by slope `m`; the
/// second chord point is substituted into the conic, giving a polynomial of
/// degree ≤ 4 in `m`. The tangent direction at `common` contributes the
/// linear factor `dx + dy·m` (`(dx, dy) = common − center`), which is divided
/// out; the remaining cubic's roots are the three residual points. A vanishing
/// cubic leading coefficient means one of them lies on the vertical chord.
pub fn circle_conic_residual_intersections<S: Scalar>(
    c: &Circle<S>,
    k: &Conic<S>,
    common: &Point<S>,
    tol: &Tolerance,
) -> Result<ResidualIntersections<S>> {
    if k.is_degenerate(tol) {
        return Err(Error::DegenerateConic);
    }
    let (cx, cy) = c.center.xy()?;
    let (x0, y0) = common.xy()?;
    let scene = [&cx, &cy, &x0, &y0].iter().map(|v| v.to_f64().abs()).fold(1.0, f64::max);
    let on_circle = c.power(common)?;
    if !on_circle.negligible(scene * scene, tol) {
        return Err(Error::InvalidInput("common point is not on the circle".into()));
    }
    let inc = k.incidence(common, tol);
    if !inc.holds {
        return Err(Error::PointNotOnConic(inc.residual_f64()));
    }
    let (dx, dy) = (x0.clone() - cx, y0.clone() - cy);
    let two = S::from_i64(2);

    // Chord point components as polynomials in m (direction (1, m)).
    let px = Poly::new(vec![x0.clone() - two.clone() * dx.clone(), -(two.clone() * dy.clone()), x0.clone()]);
    let py = Poly::new(vec![y0.clone(), -(two.clone() * dx.clone()), y0.clone() - two.clone() * dy.clone()]);
    let pw = Poly::new(vec![S::one(), S::zero(), S::one()]);
    let [a, b, cc, d, e, f] = k.coeffs.clone();
    let quartic = px
        .mul(&px)
        .scale(&a)
        .add(&px.mul(&py).scale(&b))
        .add(&py.mul(&py).scale(&cc))
        .add(&px.mul(&pw).scale(&d))
        .add(&py.mul(&pw).scale(&e))
        .add(&pw.mul(&pw).scale(&f));

    let (cubic, _rem) = quartic.divide_linear_as(4, &dx, &dy);
    let cubic = if S::EXACT {
        cubic
    } else {
        // Pad to degree 3 so a near-vertical root is visible as a small leading term.
        let mut v = cubic.coeffs().to_vec();
        v.resize(4, S::zero());
        Poly::new(v)
    };

    let mut params: Vec<ChordParam<S>> = Vec::new();
    let finite_part = if cubic.degree() < 3 {
        params.push(ChordParam::Vertical);
        cubic.clone()
    } else {
        let lead = cubic.leading().to_f64().abs();
        if !S::EXACT && lead <= 1e-3 * tol.eps * cubic.coeff_scale() {
            params.push(ChordParam::Vertical);
            Poly::new(cubic.coeffs()[..3].to_vec())
        } else {
            cubic.clone()
        }
    };
    let roots = if finite_part.degree() == 0 { vec![] } else { S::real_roots(&finite_part, tol)? };
    let mut all: Vec<ChordParam<S>> = roots.into_iter().map(ChordParam::Slope).collect();
    all.extend(params);
    if all.len() != 3 {
        return Err(Error::FewerThanThreeRealIntersections(all.len()));
    }

    let points: Vec<Point<S>> = all
        .iter()
        .map(|p| {
            let (lam, mu) = match p {
                ChordParam::Vertical => (S::zero(), S::one()),
                ChordParam::Slope(m) if !S::EXACT && m.to_f64().abs() > 1.0 => (S::one() / m.clone(), S::one()),
                ChordParam::Slope(m) => (S::one(), m.clone()),
            };
            chord_point(&x0, &y0, &dx, &dy, lam, mu).normalized()
        })
        .collect();
    for p in &points {
        let on_k = k.incidence(p, tol);
        if !on_k.holds {
            return Err(Error::FewerThanThreeRealIntersections(0));
        }
    }
    Ok(ResidualIntersections {
        points: points.try_into().expect("three points"),
        params: all.try_into().expect("three params"),
        quartic,
        cubic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{QuadExt, Rational};

    fn q(a: i64, b: i64) -> QuadExt {
        QuadExt::new(Rational::from_integer(a), Rational::from_integer(b))
    }

    fn t1_conic<S: Scalar>() -> Conic<S> {
        Conic::from_i64([1, -2, -1, 0, 0, -1])
    }

    #[test]
    fn second_intersection_examples() {
        let tol = Tolerance::default();
        let k = t1_conic::<Rational>();
        let p =
            second_intersection(&k, &Point::affine((-1).into(), 2.into()), &Point::affine(0.into(), 2.into()), &tol)
                .unwrap();
        assert_eq!(p, Point::affine(5.into(), 2.into()));
        let f2 =
            second_intersection(&k, &Point::affine(1.into(), 0.into()), &Point::affine((-1).into(), 0.into()), &tol)
                .unwrap();
        assert_eq!(f2, Point::affine((-1).into(), 0.into()));
        let unit = Conic::<Rational>::from_i64([1, 0, 1, 0, 0, -1]);
        let same =
            second_intersection(&unit, &Point::affine(1.into(), 0.into()), &Point::affine(1.into(), 5.into()), &tol)
                .unwrap();
        assert_eq!(same, Point::affine(1.into(), 0.into()));
    }

    #[test]
    fn second_intersection_is_involution() {
        let tol = Tolerance::default();
        let k = t1_conic::<Rational>();
        let known = Point::affine((-1).into(), 2.into());
        let v = Point::affine(0.into(), Rational::new(1, 3));
        let other = second_intersection(&k, &known, &v, &tol).unwrap();
        assert_eq!(second_intersection(&k, &other, &v, &tol).unwrap(), known);
    }

    #[test]
    fn line_in_degenerate_conic() {
        let tol = Tolerance::default();
        let pair = Conic::<Rational>::from_i64([0, 1, 0, 0, 0, 0]);
        let r =
            second_intersection(&pair, &Point::affine(0.into(), 0.into()), &Point::affine(3.into(), 0.into()), &tol);
        assert_eq!(r, Err(Error::LineInConic));
    }

    #[test]
    fn t1_scene_exact() {
        let tol = Tolerance::default();
        let c = Circle::new(Point::affine(q(-1, 0), q(0, 0)), q(4, 0)).unwrap();
        let res = circle_conic_residual_intersections(&c, &t1_conic(), &Point::affine(q(1, 0), q(0, 0)), &tol).unwrap();
        let want =
            [Point::affine(q(-1, 0), q(2, 0)), Point::affine(q(-1, -1), q(-1, 0)), Point::affine(q(-1, 1), q(-1, 0))];
        for w in &want {
            assert!(res.points.contains(w), "missing {w:?} in {:?}", res.points);
        }
        // The slope cubic is proportional to m³ − 3m² − 3m + 1.
        let c = res.cubic.coeffs();
        let lead = c[3].clone();
        let monic: Vec<QuadExt> = c.iter().map(|v| v.clone() / lead.clone()).collect();
        assert_eq!(monic, vec![q(1, 0), q(-3, 0), q(-3, 0), q(1, 0)]);
    }

    #[test]
    fn t1_scene_numeric() {
        let tol = Tolerance::default();
        let c = Circle::new(Point::affine(-1.0, 0.0), 4.0).unwrap();
        let res = circle_conic_residual_intersections(&c, &t1_conic(), &Point::affine(1.0, 0.0), &tol).unwrap();
        let s3 = 3f64.sqrt();
        let want = [(-1.0, 2.0), (-s3 - 1.0, -1.0), (s3 - 1.0, -1.0)];
        for (x, y) in want {
            assert!(res.points.iter().any(|p| {
                let (px, py) = p.xy().unwrap();
                (px - x).abs() < 1e-12 && (py - y).abs() < 1e-12
            }));
        }
    }

    #[test]
    fn vertical_chord_root_is_found() {
        // Unit circle + x·(2x − y − 2): meets the circle at (0, ±1), (1, 0), (3/5, −4/5).
        let tol = Tolerance::default();
        let c = Circle::new(Point::affine(Rational::zero(), Rational::zero()), Rational::one()).unwrap();
        let k = Conic::<Rational>::from_i64([3, -1, 1, -2, 0, -1]);
        let res = circle_conic_residual_intersections(&c, &k, &Point::affine(0.into(), 1.into()), &tol).unwrap();
        assert_eq!(res.params[2], ChordParam::Vertical);
        let want = [
            Point::affine(0.into(), (-1).into()),
            Point::affine(1.into(), 0.into()),
            Point::affine(Rational::new(3, 5), Rational::new(-4, 5)),
        ];
        for w in &want {
            assert!(res.points.contains(w), "missing {w:?}");
        }
        let cf = Circle::new(Point::affine(0.0, 0.0), 1.0).unwrap();
        let f = circle_conic_residual_intersections(&cf, &k.to_f64(), &Point::affine(0.0, 1.0), &tol).unwrap();
        assert_eq!(f.params[2], ChordParam::Vertical);
        assert!(f.points.iter().any(|p| p.coincides(&Point::affine(0.0, -1.0), &tol)));
    }

    #[test]
    fn deflating_at_the_tangent_slope() {
        // Generic frame: common point not level with the center, so the
        // tangent slope is finite and plain synthetic division applies.
        let tol = Tolerance::default();
        let c = Circle::new(Point::affine(Rational::zero(), Rational::zero()), Rational::one()).unwrap();
        let k = Conic::<Rational>::from_i64([3, -1, 1, -2, 0, -1]);
        let common = Point::affine(Rational::new(3, 5), Rational::new(-4, 5));
        let res = circle_conic_residual_intersections(&c, &k, &common, &tol).unwrap();
        // dx + dy·m = 3/5 − 4/5·m vanishes at m = 3/4.
        let d = res.quartic.deflate(&Rational::new(3, 4), &tol).unwrap();
        assert!(d.residual.is_zero());
        let ratio = d.quotient.leading().clone() / res.cubic.leading().clone();
        assert_eq!(d.quotient, res.cubic.scale(&ratio));
        for p in &res.points {
            assert!(k.eval(p).is_zero() && c.power(p).unwrap().is_zero());
        }
    }
}
