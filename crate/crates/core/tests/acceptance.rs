//! Acceptance gate. Prints one PASS/FAIL line per criterion, then a few INFO
//! lines, and exits nonzero if any criterion fails.
//!
//! Every derived quantity is recomputed here by an independent route: Fermat
//! points from trigonometric barycentrics, the conic from its barycentric
//! equation, circle centers from explicit formulas, perspectors and Hessian
//! lines from raw cross products.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use kiepert::centers::{fermat_pair, Triangle, Which};
use kiepert::collineation::{inscribed_perspectivity, transport_check};
use kiepert::conics::{fit_five_points, Conic};
use kiepert::kiepert::{certify_yiu, kiepert_hyperbola, triple_perspectivity, yiu_triangles};
use kiepert::numeric::linalg::proportionality_residual;
use kiepert::numeric::{QuadExt, Rational, Scalar, Tolerance};
use kiepert::oracle::{
    fermat_circle_meets, oracle_conic, oracle_perspectors, oracle_pqr, oracle_secondary, verify_closed_form,
};
use kiepert::projective::Point;
use kiepert::reconstruct::reconstruct;
use kiepert::sample::{random_homography, random_inscribed, random_scalene, trial_rng};
use rayon::prelude::*;

const SEED: u64 = 20_240_601;
const HALF_WIDTH: f64 = 10.0;
const SCALENE_MARGIN: f64 = 1e-3;

const EQUILATERAL_SPREAD: f64 = 1e-9;
const RECTANGULARITY: f64 = 1e-12;
const CENTER: f64 = 1e-9;
const NINE_POINT: f64 = 1e-9;
const ORTHOCENTER: f64 = 1e-9;
const FERMAT_AGREEMENT: f64 = 1e-9;
const PERSPECTIVITY: f64 = 1e-9;
const CONCYCLIC: f64 = 1e-10;
const RECOVERY: f64 = 1e-8;
const INSCRIBED: f64 = 1e-9;
const PULLBACK: f64 = 1e-10;
const CONJUGATE_SPREAD: f64 = 0.3;

const LIMIT_CLOSED_FORM: Duration = Duration::from_secs(5);
const LIMIT_SECONDARY: Duration = Duration::from_secs(30);
const LIMIT_RANDOM: Duration = Duration::from_secs(60);

struct Outcome {
    id: u8,
    name: &'static str,
    pass: bool,
    detail: String,
    elapsed: Duration,
}

fn timed(id: u8, name: &'static str, f: impl FnOnce() -> (bool, String)) -> Outcome {
    let start = Instant::now();
    let (pass, detail) = f();
    Outcome { id, name, pass, detail, elapsed: start.elapsed() }
}

// ---------------------------------------------------------------------------
// Independent floating-point geometry.

type V3 = [f64; 3];
type P2 = (f64, f64);

fn cross(a: &V3, b: &V3) -> V3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot(a: &V3, b: &V3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm(a: &V3) -> f64 {
    dot(a, a).sqrt()
}

fn unit(a: &V3) -> V3 {
    let n = norm(a);
    a.map(|x| x / n)
}

fn det(a: &V3, b: &V3, c: &V3) -> f64 {
    dot(a, &cross(b, c))
}

fn lift(p: P2) -> V3 {
    [p.0, p.1, 1.0]
}

fn xy(p: &Point<f64>) -> P2 {
    (p.x / p.w, p.y / p.w)
}

fn dist(a: P2, b: P2) -> f64 {
    (a.0 - b.0).hypot(a.1 - b.1)
}

fn mid(a: P2, b: P2) -> P2 {
    ((a.0 + b.0) / 2.0, (a.1 + b.1) / 2.0)
}

/// Sine of the angle between two homogeneous vectors.
fn projective_gap(a: &V3, b: &V3) -> f64 {
    norm(&cross(&unit(a), &unit(b)))
}

fn area2(a: P2, b: P2, c: P2) -> f64 {
    (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
}

fn vertices(t: &Triangle<f64>) -> [P2; 3] {
    std::array::from_fn(|i| xy(t.vertex(i)))
}

fn longest_side(v: &[P2; 3]) -> f64 {
    (0..3).map(|i| dist(v[i], v[(i + 1) % 3])).fold(0.0, f64::max)
}

fn circumcenter(v: &[P2; 3]) -> P2 {
    let [(ax, ay), (bx, by), (cx, cy)] = *v;
    let d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
    let (a2, b2, c2) = (ax * ax + ay * ay, bx * bx + by * by, cx * cx + cy * cy);
    ((a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / d, (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / d)
}

fn orthocenter(v: &[P2; 3]) -> P2 {
    let o = circumcenter(v);
    (v[0].0 + v[1].0 + v[2].0 - 2.0 * o.0, v[0].1 + v[1].1 + v[2].1 - 2.0 * o.1)
}

/// Isogonic center with barycentrics `a / sin(A ± 60°)`, homogeneous.
fn isogonic(v: &[P2; 3], sign: f64) -> V3 {
    let mut acc = [0.0; 3];
    for i in 0..3 {
        let (p, q, r) = (v[i], v[(i + 1) % 3], v[(i + 2) % 3]);
        let u = (q.0 - p.0, q.1 - p.1);
        let w = (r.0 - p.0, r.1 - p.1);
        let angle = (u.0 * w.1 - u.1 * w.0).abs().atan2(u.0 * w.0 + u.1 * w.1);
        let weight = dist(q, r) / (angle + sign * PI / 3.0).sin();
        acc[0] += weight * p.0;
        acc[1] += weight * p.1;
        acc[2] += weight;
    }
    acc
}

/// Residual of `Σ (b² − c²)·y·z = 0` at `p`, scaled by coefficient and coordinate size.
fn barycentric_kiepert(v: &[P2; 3], p: P2) -> f64 {
    let total = area2(v[0], v[1], v[2]);
    let b = [area2(p, v[1], v[2]) / total, area2(v[0], p, v[2]) / total, area2(v[0], v[1], p) / total];
    let sq: Vec<f64> = (0..3).map(|i| dist(v[(i + 1) % 3], v[(i + 2) % 3]).powi(2)).collect();
    let coef = [sq[1] - sq[2], sq[2] - sq[0], sq[0] - sq[1]];
    let value = coef[0] * b[1] * b[2] + coef[1] * b[2] * b[0] + coef[2] * b[0] * b[1];
    let scale = coef.iter().map(|c| c.abs()).fold(0.0, f64::max) * b.iter().map(|x| x * x).fold(0.0, f64::max);
    value.abs() / scale
}

fn conic_matrix(k: &Conic<f64>) -> [V3; 3] {
    let [a, b, c, d, e, f] = k.coeffs;
    [[a, b / 2.0, d / 2.0], [b / 2.0, c, e / 2.0], [d / 2.0, e / 2.0, f]]
}

fn conic_residual(k: &Conic<f64>, p: P2) -> f64 {
    let m = [p.0 * p.0, p.0 * p.1, p.1 * p.1, p.0, p.1, 1.0];
    let value: f64 = k.coeffs.iter().zip(m).map(|(c, x)| c * x).sum();
    let scale: f64 = k.coeffs.iter().zip(m).map(|(c, x)| (c * x).abs()).sum();
    value.abs() / scale
}

/// Line through the two best separated of three points, with the collinearity residual.
fn line_through(p: &[V3; 3]) -> (V3, f64) {
    let u = p.map(|x| unit(&x));
    let pairs = [(0, 1), (1, 2), (0, 2)];
    let (i, j) = pairs
        .into_iter()
        .max_by(|a, b| norm(&cross(&u[a.0], &u[a.1])).total_cmp(&norm(&cross(&u[b.0], &u[b.1]))))
        .unwrap();
    (cross(&u[i], &u[j]), det(&u[0], &u[1], &u[2]).abs())
}

/// Perspectors of `t1` against `t2` under the better of the two orientations,
/// with the worst concurrency residual and whether `t2` was reversed.
fn perspectors(t1: &[V3; 3], t2: &[V3; 3]) -> ([V3; 3], f64, bool) {
    let mut best: Option<([V3; 3], f64, bool)> = None;
    for reversed in [false, true] {
        let t = if reversed { [t2[0], t2[2], t2[1]] } else { *t2 };
        let mut pts = [[0.0; 3]; 3];
        let mut worst: f64 = 0.0;
        for (shift, slot) in pts.iter_mut().enumerate() {
            let l: Vec<V3> = (0..3).map(|i| unit(&cross(&unit(&t1[i]), &unit(&t[(i + shift) % 3])))).collect();
            worst = worst.max(det(&l[0], &l[1], &l[2]).abs());
            let (a, b) = [(0, 1), (1, 2), (0, 2)]
                .into_iter()
                .max_by(|x, y| norm(&cross(&l[x.0], &l[x.1])).total_cmp(&norm(&cross(&l[y.0], &l[y.1]))))
                .unwrap();
            *slot = cross(&l[a], &l[b]);
        }
        if best.as_ref().is_none_or(|b| worst < b.1) {
            best = Some((pts, worst, reversed));
        }
    }
    best.unwrap()
}

/// Line through the meets of each vertex tangent with the opposite side.
fn hessian(k: &Conic<f64>, t: &[V3; 3]) -> (V3, f64) {
    let m = conic_matrix(k);
    let meets: [V3; 3] = std::array::from_fn(|i| {
        let v = t[i];
        let tangent = [dot(&m[0], &v), dot(&m[1], &v), dot(&m[2], &v)];
        let side = cross(&t[(i + 1) % 3], &t[(i + 2) % 3]);
        cross(&unit(&tangent), &unit(&side))
    });
    line_through(&meets)
}

fn relative_spread(values: &[f64]) -> f64 {
    let hi = values.iter().cloned().fold(f64::MIN, f64::max);
    let lo = values.iter().cloned().fold(f64::MAX, f64::min);
    (hi - lo) / hi.abs()
}

fn squared_sides(v: &[P2; 3]) -> [f64; 3] {
    std::array::from_fn(|i| dist(v[(i + 1) % 3], v[(i + 2) % 3]).powi(2))
}

// ---------------------------------------------------------------------------
// Random scenes shared by the floating-point criteria.

#[derive(Default, Clone, Copy)]
struct SceneMetrics {
    equilateral: f64,
    rectangular: f64,
    center: f64,
    nine_point: f64,
    orthocenter: f64,
    fermat: f64,
    yiu_on_conic: f64,
    concurrency: f64,
    collinearity: f64,
    axis_is_hessian: f64,
    axes_agree: f64,
    concyclic: f64,
    concyclic_library: f64,
    library_holds: bool,
    failed: bool,
}

fn worst(metrics: &[SceneMetrics], f: impl Fn(&SceneMetrics) -> f64) -> f64 {
    metrics.iter().map(f).fold(0.0, |a, b| if b.is_nan() { f64::INFINITY } else { a.max(b) })
}

fn random_triangle(index: usize) -> Triangle<f64> {
    random_scalene(&mut trial_rng(SEED, index as u64), HALF_WIDTH, SCALENE_MARGIN)
}

fn scene_metrics(index: usize) -> SceneMetrics {
    let tol = Tolerance::default();
    let t = random_triangle(index);
    let (Ok(ks), v) = (kiepert_hyperbola(&t, &tol), vertices(&t)) else {
        return SceneMetrics { failed: true, ..Default::default() };
    };
    let Ok(yiu) = yiu_triangles(&ks, &tol) else { return SceneMetrics { failed: true, ..Default::default() } };
    let Ok(certs) = certify_yiu(&ks, &yiu, &tol) else {
        return SceneMetrics { failed: true, ..Default::default() };
    };
    let long = longest_side(&v);
    let f1 = isogonic(&v, 1.0);
    let f2 = isogonic(&v, -1.0);
    let (f1xy, f2xy) = ((f1[0] / f1[2], f1[1] / f1[2]), (f2[0] / f2[2], f2[1] / f2[2]));
    let fermat = projective_gap(&ks.fermat.f1.coords(), &f1).max(projective_gap(&ks.fermat.f2.coords(), &f2));

    let pqr = vertices(&yiu.pqr);
    let pqr_prime = vertices(&yiu.pqr_prime);
    let equilateral = relative_spread(&squared_sides(&pqr)).max(relative_spread(&squared_sides(&pqr_prime)));

    let k = ks.conic.normalized();
    let rectangular = (k.coeffs[0] + k.coeffs[2]).abs();
    let center = dist(xy(&ks.center), mid(f1xy, f2xy)) / long;
    let o = circumcenter(&v);
    let h = orthocenter(&v);
    let nine = (dist(mid(o, h), xy(&ks.center)) - dist(o, v[0]) / 2.0).abs() / long;
    let ortho = conic_residual(&ks.conic, h).max(barycentric_kiepert(&v, h));
    let yiu_on_conic = pqr.iter().chain(&pqr_prime).map(|p| barycentric_kiepert(&v, *p)).fold(0.0, f64::max);

    let abc = v.map(lift);
    let (pts, conc, _) = perspectors(&pqr.map(lift), &abc);
    let (pts_prime, conc_prime, _) = perspectors(&pqr_prime.map(lift), &abc);
    let (axis, coll) = line_through(&pts);
    let (axis_prime, coll_prime) = line_through(&pts_prime);
    let (hl, _) = hessian(&ks.conic, &pqr.map(lift));

    let mut radii = Vec::new();
    for (tri, c) in [(&pqr, f2xy), (&pqr_prime, f1xy)] {
        let r = dist(f1xy, f2xy) / 2.0;
        for i in 0..3 {
            radii.push(dist(mid(tri[(i + 1) % 3], tri[(i + 2) % 3]), c) / r - 1.0);
            radii.push(dist(mid(c, tri[i]), c) / r - 1.0);
        }
        radii.push(dist(mid(f1xy, f2xy), c) / r - 1.0);
    }
    let concyclic = radii.iter().map(|x| x.abs()).fold(0.0, f64::max);

    SceneMetrics {
        equilateral,
        rectangular,
        center,
        nine_point: nine,
        orthocenter: ortho,
        fermat,
        yiu_on_conic,
        concurrency: conc.max(conc_prime),
        collinearity: coll.max(coll_prime),
        axis_is_hessian: projective_gap(&axis, &hl),
        axes_agree: projective_gap(&axis, &axis_prime),
        concyclic,
        concyclic_library: certs
            .equilateral
            .max_concyclic_residual()
            .max(certs.equilateral_prime.max_concyclic_residual()),
        library_holds: ks.all_hold() && certs.all_hold(),
        failed: false,
    }
}

// ---------------------------------------------------------------------------
// Exact closed forms.

fn q(v: i64) -> QuadExt {
    QuadExt::from(v)
}

fn r(p: i64, d: i64) -> Rational {
    Rational::new(p, d)
}

fn s3() -> QuadExt {
    QuadExt::sqrt3()
}

fn exact_xy(p: &Point<QuadExt>) -> (QuadExt, QuadExt) {
    p.xy().expect("affine point")
}

/// `(3t²−1)x² + (2t³−6t)xy + (1−3t²)y² + (1−3t²) = 0`, written out independently.
fn literal_conic(t: &Rational) -> [QuadExt; 6] {
    let t = QuadExt::rational(t.clone());
    let a = q(3) * t.clone() * t.clone() - q(1);
    let b = q(2) * t.clone() * t.clone() * t.clone() - q(6) * t;
    [a.clone(), b, -a.clone(), q(0), q(0), -a]
}

/// `P(t)` on the circle about `(−1, 0)` of radius 2, then rotations by ±120° about that center.
fn rotated_pqr(t: &Rational) -> [(QuadExt, QuadExt); 3] {
    let t = QuadExt::rational(t.clone());
    let d = t.clone() * t.clone() + q(1);
    let px = q(-1) + q(2) * (q(1) - t.clone() * t.clone()) / d.clone();
    let py = q(4) * t / d;
    let (dx, dy) = (px.clone() + q(1), py.clone());
    let half = QuadExt::rational(r(1, 2));
    let rot = |dx: &QuadExt, dy: &QuadExt, sign: i64| {
        let s = q(sign) * s3() * half.clone();
        (-half.clone() * dx.clone() - s.clone() * dy.clone(), s * dx.clone() - half.clone() * dy.clone())
    };
    let (qx, qy) = rot(&dx, &dy, 1);
    let (rx, ry) = rot(&dx, &dy, -1);
    [(px, py), (qx - q(1), qy), (rx - q(1), ry)]
}

fn eval_literal(c: &[QuadExt; 6], p: &(QuadExt, QuadExt)) -> QuadExt {
    let (x, y) = p.clone();
    c[0].clone() * x.clone() * x.clone()
        + c[1].clone() * x.clone() * y.clone()
        + c[2].clone() * y.clone() * y.clone()
        + c[3].clone() * x
        + c[4].clone() * y
        + c[5].clone()
}

/// Second meet of the line from `p` (on the conic) towards `v` with the conic.
fn second_meet(c: &[QuadExt; 6], p: &(QuadExt, QuadExt), v: &(QuadExt, QuadExt)) -> (QuadExt, QuadExt) {
    let (dx, dy) = (v.0.clone() - p.0.clone(), v.1.clone() - p.1.clone());
    let (x, y) = p.clone();
    let quad = c[0].clone() * dx.clone() * dx.clone()
        + c[1].clone() * dx.clone() * dy.clone()
        + c[2].clone() * dy.clone() * dy.clone();
    let lin = q(2) * c[0].clone() * x.clone() * dx.clone()
        + c[1].clone() * (x.clone() * dy.clone() + y.clone() * dx.clone())
        + q(2) * c[2].clone() * y.clone() * dy.clone()
        + c[3].clone() * dx.clone()
        + c[4].clone() * dy.clone();
    let lambda = -lin / quad;
    (x + lambda.clone() * dx, y + lambda * dy)
}

fn same_set(a: &[(QuadExt, QuadExt)], b: &[(QuadExt, QuadExt)]) -> bool {
    a.len() == b.len() && a.iter().all(|p| b.contains(p))
}

fn closed_form_ts() -> Vec<Rational> {
    let base = [(1, 1), (1, 2), (2, 1), (1, 3), (3, 1), (2, 3), (3, 2), (1, 4), (4, 1), (5, 1), (1, 5), (2, 5), (5, 2)];
    let mut ts: Vec<Rational> = base.iter().flat_map(|&(p, d)| [r(p, d), r(-p, d)]).collect();
    ts.push(r(7, 3));
    ts
}

fn criterion_closed_form() -> (bool, String) {
    let tol = Tolerance::default();
    let f1 = Point::affine(q(1), q(0));
    let f2 = Point::affine(q(-1), q(0));
    let mut failures = Vec::new();
    let ts = closed_form_ts();
    for t in &ts {
        let literal = literal_conic(t);
        let pts = rotated_pqr(t);
        let library = oracle_pqr(t).expect("closed-form triangle");
        let library_xy: Vec<_> = library.vertices.iter().map(exact_xy).collect();
        if !same_set(&pts, &library_xy) {
            failures.push(format!("t={t}: triangle differs from rotation"));
        }
        if pts.iter().any(|p| !eval_literal(&literal, p).is_zero()) {
            failures.push(format!("t={t}: vertex off the literal conic"));
        }
        let five = [
            Point::affine(pts[0].0.clone(), pts[0].1.clone()),
            Point::affine(pts[1].0.clone(), pts[1].1.clone()),
            Point::affine(pts[2].0.clone(), pts[2].1.clone()),
            f1.clone(),
            f2.clone(),
        ];
        match fit_five_points(&five, &tol) {
            Ok(k) => {
                if !proportionality_residual(&k.coeffs, &literal).is_zero() {
                    failures.push(format!("t={t}: fitted conic differs from the literal equation"));
                }
                if !proportionality_residual(&k.coeffs, &oracle_conic(t).unwrap().coeffs).is_zero() {
                    failures.push(format!("t={t}: fitted conic differs from the closed form"));
                }
            }
            Err(e) => failures.push(format!("t={t}: fit failed: {e}")),
        }
    }
    (failures.is_empty(), format!("{} parameters, zero residual required; failures: {:?}", ts.len(), failures))
}

fn secondary_cases() -> Vec<(Rational, Rational, Rational)> {
    vec![
        (r(1, 1), r(2, 1), r(1, 2)),
        (r(2, 1), r(1, 1), r(3, 1)),
        (r(-1, 2), r(-1, 1), r(3, 1)),
        (r(1, 3), r(2, 1), r(-2, 1)),
        (r(3, 1), r(1, 1), r(5, 2)),
        (r(-2, 1), r(-1, 2), r(4, 1)),
        (r(2, 3), r(5, 1), r(-1, 1)),
        (r(-3, 2), r(3, 2), r(-5, 1)),
        (r(1, 4), r(-3, 1), r(1, 5)),
        (r(5, 1), r(2, 5), r(-7, 3)),
    ]
}

struct SecondaryStats {
    first_fermat: BTreeMap<String, usize>,
    orientations: BTreeMap<String, usize>,
}

fn criterion_secondary(stats: &mut SecondaryStats) -> (bool, String) {
    let tol = Tolerance::default();
    let mut failures = Vec::new();
    let cases = secondary_cases();
    for (t, ya, yb) in &cases {
        let (ya, yb) = (QuadExt::rational(ya.clone()), QuadExt::rational(yb.clone()));
        let tag = format!("t={t}, y0={ya}/{yb}");
        let report = match verify_closed_form(t, &ya, &yb) {
            Ok(rep) => rep,
            Err(e) => {
                failures.push(format!("{tag}: {e}"));
                continue;
            }
        };
        if !report.all_hold() {
            let bad: Vec<_> = report.checks.iter().filter(|c| !c.holds).map(|c| c.name.clone()).collect();
            failures.push(format!("{tag}: failing checks {bad:?}"));
        }
        if !report.secondary_pair.reversed() {
            failures.push(format!("{tag}: secondary pair perspective without reversal"));
        }
        for f in &report.fermat {
            match &f.first_fermat {
                Some(p) => *stats.first_fermat.entry(format!("{:?}", exact_xy(p))).or_default() += 1,
                None => failures.push(format!("{tag}: secondary at y0={} has no Fermat pair", f.y0)),
            }
        }

        let literal = literal_conic(t);
        let pqr = rotated_pqr(t);
        let pqr_prime: Vec<(QuadExt, QuadExt)> = pqr.iter().map(|(x, y)| (-x.clone(), -y.clone())).collect();
        let pqr_prime = Triangle::new(
            Point::affine(pqr_prime[0].0.clone(), pqr_prime[0].1.clone()),
            Point::affine(pqr_prime[1].0.clone(), pqr_prime[1].1.clone()),
            Point::affine(pqr_prime[2].0.clone(), pqr_prime[2].1.clone()),
        )
        .unwrap();
        for y in [&ya, &yb] {
            let v = (q(0), y.clone());
            let expected: Vec<_> = pqr.iter().map(|p| second_meet(&literal, p, &v)).collect();
            let sec = oracle_secondary(t, y).unwrap();
            let got: Vec<_> = sec.vertices.iter().map(exact_xy).collect();
            if got != expected {
                failures.push(format!("{tag}: secondary vertices differ from line-conic meets at y0={y}"));
            }
            let literal_perspectors = [
                (q(0), y.clone()),
                (q(0), -(s3() * y.clone() + q(3)) / (q(3) * y.clone() - s3())),
                (q(0), (s3() * y.clone() - q(3)) / (q(3) * y.clone() + s3())),
            ];
            let lib: Vec<_> = oracle_perspectors(t, y).unwrap().iter().map(exact_xy).collect();
            if lib != literal_perspectors {
                failures.push(format!("{tag}: perspectors differ from the literal formulas at y0={y}"));
            }
            let from_pqr = triple_perspectivity(&oracle_pqr(t).unwrap(), &sec, &tol);
            let from_prime = triple_perspectivity(&pqr_prime, &sec, &tol);
            match (from_pqr, from_prime) {
                (Ok(a), Ok(b)) => {
                    let key = format!("PQR reversed={}, P'Q'R' reversed={}", a.reversed(), b.reversed());
                    *stats.orientations.entry(key).or_default() += 1;
                    if a.reversed() || !b.reversed() || !a.axis.check.holds || !b.axis.check.holds {
                        failures.push(format!("{tag}: orientation or collinearity mismatch at y0={y}"));
                    }
                }
                _ => failures.push(format!("{tag}: not triply perspective at y0={y}")),
            }
        }
    }
    (failures.is_empty(), format!("{} parameter sets, exact; failures: {:?}", cases.len(), failures))
}

fn criterion_circle_meets() -> (bool, String) {
    let meets: Vec<_> = fermat_circle_meets().unwrap().iter().map(exact_xy).collect();
    let expected = [(q(0), s3()), (q(0), -s3())];
    let mut ok = same_set(&meets, &expected);
    // Both circles have radius 2 about (∓1, 0): x = 0 and y² = 4 − 1.
    let on_both = |(x, y): &(QuadExt, QuadExt)| {
        let a = (x.clone() + q(1)).square() + y.square() - q(4);
        let b = (x.clone() - q(1)).square() + y.square() - q(4);
        a.is_zero() && b.is_zero()
    };
    ok &= expected.iter().all(on_both);
    let stated_off = !on_both(&(q(0), q(2)));
    ok &= stated_off;
    let mut perspector_sets = 0;
    for t in closed_form_ts() {
        let p: Vec<_> = oracle_perspectors(&t, &q(0)).unwrap().iter().map(exact_xy).collect();
        let want = [(q(0), q(0)), (q(0), s3()), (q(0), -s3())];
        if same_set(&p, &want) {
            perspector_sets += 1;
        } else {
            ok = false;
        }
    }
    (
        ok,
        format!(
            "meets {meets:?}; (0, 2) off both circles: {stated_off}; {perspector_sets} perspector sets at y0=0 match"
        ),
    )
}

// ---------------------------------------------------------------------------
// Reconstruction.

struct Multiplicity {
    candidates: BTreeMap<usize, usize>,
    valid_attempts: BTreeMap<usize, usize>,
}

fn criterion_reconstruction(count: usize, stats: &mut Multiplicity) -> (bool, String) {
    let tol = Tolerance::default();
    let runs: Vec<(f64, usize, usize)> = (0..count)
        .into_par_iter()
        .flat_map_iter(|i| {
            let t = random_triangle(i);
            let v = vertices(&t);
            let long = longest_side(&v);
            let ks = kiepert_hyperbola(&t, &tol);
            [Which::First, Which::Second].into_iter().map(move |which| {
                let Ok(ks) = &ks else { return (f64::INFINITY, 0, 0) };
                let Ok(res) = reconstruct(&ks.conic, ks.fermat.get(which), which, t.vertex(0), &tol) else {
                    return (f64::INFINITY, 0, 0);
                };
                let best = res
                    .candidates
                    .iter()
                    .map(|c| {
                        let cv = vertices(c);
                        [v[1], v[2]]
                            .iter()
                            .map(|p| cv.iter().map(|x| dist(*x, *p)).fold(f64::INFINITY, f64::min))
                            .fold(0.0, f64::max)
                            / long
                    })
                    .fold(f64::INFINITY, f64::min);
                (best, res.candidates.len(), res.valid_attempts())
            })
        })
        .collect();
    for (_, c, a) in &runs {
        *stats.candidates.entry(*c).or_default() += 1;
        *stats.valid_attempts.entry(*a).or_default() += 1;
    }
    let worst_recovery = runs.iter().map(|r| r.0).fold(0.0, f64::max);
    let random_ok = worst_recovery < RECOVERY;

    let mut exact_ok = true;
    let mut exact_runs = 0;
    for (t, y) in [(r(1, 1), r(2, 1)), (r(2, 1), r(1, 1)), (r(1, 3), r(2, 1))] {
        let (Ok(sec), Ok(k)) = (oracle_secondary(&t, &QuadExt::rational(y.clone())), oracle_conic(&t)) else {
            exact_ok = false;
            continue;
        };
        let Ok(pair) = fermat_pair(&sec, &tol) else {
            exact_ok = false;
            continue;
        };
        for which in [Which::First, Which::Second] {
            exact_runs += 1;
            let res = reconstruct(&k, pair.get(which), which, sec.vertex(0), &tol);
            let found = res.as_ref().is_ok_and(|res| {
                res.candidates.iter().any(|c| c.same_vertices(&sec, &tol) && sec.same_vertices(c, &tol))
                    && res.attempts.iter().filter(|a| a.valid).all(|a| {
                        a.conic_agreement.as_ref().is_some_and(|c| c.residual.is_zero())
                            && a.nine_point_through_center.as_ref().is_some_and(|c| c.residual.is_zero())
                    })
            });
            exact_ok &= found;
        }
    }
    (
        random_ok && exact_ok,
        format!(
            "{} random runs, worst recovery {:.2e} (< {:.0e} x longest side); {} exact runs with zero residual: {}",
            runs.len(),
            worst_recovery,
            RECOVERY,
            exact_runs,
            exact_ok
        ),
    )
}

// ---------------------------------------------------------------------------
// Inscribed triangles and collineations.

#[derive(Default, Clone, Copy)]
struct InscribedMetrics {
    holds: bool,
    concurrency: f64,
    on_hessian: f64,
    library_residual: f64,
    pullback: f64,
    transported: bool,
    conjugates_agree: usize,
    conjugate_gap: f64,
}

fn inscribed_metrics(index: usize, conjugations: usize) -> InscribedMetrics {
    let tol = Tolerance::default();
    let mut rng = trial_rng(SEED ^ 0x1f, index as u64);
    let inst = random_inscribed(&mut rng, &tol);
    let Ok(direct) = inscribed_perspectivity(&inst.conic, &inst.triangle, &inst.s, &tol) else {
        return InscribedMetrics::default();
    };
    let t1 = inst.triangle.vertices.clone().map(|p| p.coords());
    let t2 = direct.second.vertices.clone().map(|p| p.coords());
    let (pts, conc, _) = perspectors(&t1, &t2);
    let (hl, _) = hessian(&inst.conic, &t1);
    let on_hessian = pts.iter().map(|p| dot(&unit(p), &unit(&hl)).abs()).fold(0.0, f64::max);
    let library_residual = direct
        .on_hessian
        .iter()
        .map(|c| c.residual.abs())
        .chain([direct.perspectivity.axis.check.residual.abs(), direct.hessian.check.residual.abs()])
        .fold(0.0, f64::max);
    let transport = transport_check(&inst.conic, &inst.triangle, &inst.s, &direct, &tol);
    let (pullback, transported) = match &transport {
        Ok(tc) => (tc.collineation.pullback.residual.abs(), tc.hessian_to_infinity.holds && tc.perspectors_agree),
        Err(_) => (f64::INFINITY, false),
    };
    let verdict = direct.all_hold();
    let mut conjugates_agree = 0;
    let mut conjugate_gap: f64 = 0.0;
    for _ in 0..conjugations {
        let g = random_homography(&mut rng, CONJUGATE_SPREAD);
        let Ok(tri) = g.triangle(&inst.triangle) else { continue };
        let res = inscribed_perspectivity(&g.conic(&inst.conic), &tri, &g.point(&inst.s), &tol);
        let v = res.as_ref().is_ok_and(|r| r.all_hold());
        if v == verdict {
            conjugates_agree += 1;
        }
        if let Ok(res) = res {
            let mapped = direct.perspectivity.perspectors().map(|p| g.point(&p).coords());
            for p in res.perspectivity.perspectors() {
                let gap = mapped.iter().map(|m| projective_gap(m, &p.coords())).fold(f64::INFINITY, f64::min);
                conjugate_gap = conjugate_gap.max(gap);
            }
        }
    }
    InscribedMetrics {
        holds: verdict,
        concurrency: conc,
        on_hessian,
        library_residual,
        pullback,
        transported,
        conjugates_agree,
        conjugate_gap,
    }
}

// ---------------------------------------------------------------------------
// Command line.

fn run_cli(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_kiepert")).args(args).output().expect("spawn binary");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into(),
        String::from_utf8_lossy(&out.stderr).into(),
    )
}

fn criterion_cli(dir: &Path) -> (bool, String) {
    let tri = "0,0,4,0,1,3";
    let scene = dir.join("scene.json");
    let svg = dir.join("figure.svg");
    let scene_s = scene.to_str().unwrap();
    let svg_s = svg.to_str().unwrap();
    let missing = dir.join("missing.json");
    let mut results: Vec<(String, bool)> = Vec::new();
    let mut expect = |label: &str, args: &[&str], code: i32| -> String {
        let (got, stdout, _) = run_cli(args);
        results.push((format!("{label}: exit {got}"), got == code));
        stdout
    };
    expect("verify theorem1", &["verify", "theorem1", "--triangle", tri], 0);
    expect("verify theorem2", &["verify", "theorem2", "--t", "1", "--y0", "2"], 0);
    expect("construct yiu", &["construct", "yiu", "--triangle", tri, "--out", scene_s], 0);
    let rec = expect("reconstruct", &["reconstruct", "--scene", scene_s, "--vertex", "0,0", "--fermat", "first"], 0);
    expect("figure", &["figure", "--scene", scene_s, "--out", svg_s], 0);
    expect("failing tolerance", &["--tol", "1e-30", "verify", "theorem1", "--triangle", tri], 1);
    expect("isosceles input", &["verify", "theorem1", "--triangle", "0,0,2,0,1,5"], 2);
    expect("malformed triangle", &["verify", "theorem1", "--triangle", "1,2"], 2);
    expect("missing scene", &["figure", "--scene", missing.to_str().unwrap(), "--out", svg_s], 3);

    let scene_json =
        std::fs::read_to_string(&scene).ok().and_then(|s| serde_json::from_str::<serde_json::Value>(&s).ok());
    results.push(("scene json".into(), scene_json.is_some()));
    let rec_json: Option<serde_json::Value> = serde_json::from_str(&rec).ok();
    let recovered = rec_json.as_ref().is_some_and(|v| v["contains_scene_triangle"] == true);
    results.push(("reconstruct recovers triangle".into(), recovered));
    let svg_text = std::fs::read_to_string(&svg).unwrap_or_default();
    let well_formed = roxmltree::Document::parse(&svg_text).is_ok_and(|d| d.root_element().tag_name().name() == "svg");
    results.push(("svg well-formed".into(), well_formed));

    let pass = results.iter().all(|r| r.1);
    let failed: Vec<_> = results.iter().filter(|r| !r.1).map(|r| r.0.clone()).collect();
    (pass, format!("{} checks; failed: {:?}", results.len(), failed))
}

// ---------------------------------------------------------------------------

fn main() -> ExitCode {
    let mut outcomes = Vec::new();

    outcomes.push(timed(1, "exact five-point fit of the closed-form conic", criterion_closed_form));
    if let Some(o) = outcomes.last_mut() {
        o.pass &= o.elapsed < LIMIT_CLOSED_FORM;
    }

    let mut secondary = SecondaryStats { first_fermat: BTreeMap::new(), orientations: BTreeMap::new() };
    outcomes.push(timed(2, "exact secondary triangles and perspectors", || criterion_secondary(&mut secondary)));
    if let Some(o) = outcomes.last_mut() {
        o.pass &= o.elapsed < LIMIT_SECONDARY;
    }

    let start = Instant::now();
    let scenes: Vec<SceneMetrics> = (0..200).into_par_iter().map(scene_metrics).collect();
    let scene_time = start.elapsed();
    let failed = scenes.iter().filter(|m| m.failed).count();
    let lib_fail = scenes.iter().filter(|m| !m.failed && !m.library_holds).count();
    let c3 = [
        ("equilateral spread", worst(&scenes, |m| m.equilateral), EQUILATERAL_SPREAD),
        ("|A+C|", worst(&scenes, |m| m.rectangular), RECTANGULARITY),
        ("center", worst(&scenes, |m| m.center), CENTER),
        ("nine-point", worst(&scenes, |m| m.nine_point), NINE_POINT),
        ("orthocenter", worst(&scenes, |m| m.orthocenter), ORTHOCENTER),
        ("fermat points", worst(&scenes, |m| m.fermat), FERMAT_AGREEMENT),
        ("equilateral vertices on conic", worst(&scenes, |m| m.yiu_on_conic), ORTHOCENTER),
    ];
    let c3_pass = failed == 0 && lib_fail == 0 && c3.iter().all(|(_, v, lim)| v < lim) && scene_time < LIMIT_RANDOM;
    let describe = |items: &[(&str, f64, f64)]| {
        items.iter().map(|(n, v, l)| format!("{n} {v:.2e}/{l:.0e}")).collect::<Vec<_>>().join(", ")
    };
    outcomes.push(Outcome {
        id: 3,
        name: "random reference triangles",
        pass: c3_pass,
        detail: format!("200 scenes, {failed} errors, {lib_fail} library rejections; {}", describe(&c3)),
        elapsed: scene_time,
    });

    let c4 = [
        ("concurrency", worst(&scenes, |m| m.concurrency), PERSPECTIVITY),
        ("perspector collinearity", worst(&scenes, |m| m.collinearity), PERSPECTIVITY),
        ("axis vs hessian", worst(&scenes, |m| m.axis_is_hessian), PERSPECTIVITY),
        ("primed axis vs axis", worst(&scenes, |m| m.axes_agree), PERSPECTIVITY),
    ];
    outcomes.push(Outcome {
        id: 4,
        name: "triple perspectivity and the hessian axis",
        pass: failed == 0 && c4.iter().all(|(_, v, l)| v < l),
        detail: format!("200 scenes; {}", describe(&c4)),
        elapsed: Duration::ZERO,
    });

    let first50 = &scenes[..50];
    let c5 = [
        ("independent", worst(first50, |m| m.concyclic), CONCYCLIC),
        ("library", worst(first50, |m| m.concyclic_library), CONCYCLIC),
    ];
    outcomes.push(Outcome {
        id: 5,
        name: "midpoint concyclicity about the Fermat points",
        pass: first50.iter().all(|m| !m.failed) && c5.iter().all(|(_, v, l)| v < l),
        detail: format!("50 scenes; {}", describe(&c5)),
        elapsed: Duration::ZERO,
    });

    outcomes.push(timed(6, "Fermat circles meet at (0, ±√3)", criterion_circle_meets));

    let mut multiplicity = Multiplicity { candidates: BTreeMap::new(), valid_attempts: BTreeMap::new() };
    outcomes.push(timed(7, "reconstruction round trip", || criterion_reconstruction(200, &mut multiplicity)));

    let start = Instant::now();
    let inscribed: Vec<InscribedMetrics> = (0..100).into_par_iter().map(|i| inscribed_metrics(i, 20)).collect();
    let c8_time = start.elapsed();
    let c8 = [
        ("concurrency", inscribed.iter().map(|m| m.concurrency).fold(0.0, f64::max), INSCRIBED),
        ("on hessian", inscribed.iter().map(|m| m.on_hessian).fold(0.0, f64::max), INSCRIBED),
        ("library residual", inscribed.iter().map(|m| m.library_residual).fold(0.0, f64::max), INSCRIBED),
        ("pullback", inscribed.iter().map(|m| m.pullback).fold(0.0, f64::max), PULLBACK),
    ];
    let holds = inscribed.iter().filter(|m| m.holds).count();
    let transported = inscribed.iter().filter(|m| m.transported).count();
    let agree: usize = inscribed.iter().map(|m| m.conjugates_agree).sum();
    let gap = inscribed.iter().map(|m| m.conjugate_gap).fold(0.0, f64::max);
    outcomes.push(Outcome {
        id: 8,
        name: "inscribed triangles under collineations",
        pass: holds == 100 && transported == 100 && agree == 2000 && c8.iter().all(|(_, v, l)| v < l),
        detail: format!(
            "{holds}/100 hold, {transported}/100 transported, {agree}/2000 conjugate verdicts agree (perspector gap {gap:.1e}); {}",
            describe(&c8)
        ),
        elapsed: c8_time,
    });

    let dir = tempfile::tempdir().expect("temporary directory");
    outcomes.push(timed(9, "command line smoke", || criterion_cli(dir.path())));

    for o in &outcomes {
        println!(
            "{} [{}] {} ({:.2}s): {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.id,
            o.name,
            o.elapsed.as_secs_f64(),
            o.detail
        );
    }
    println!("INFO first Fermat point of secondary triangles: {:?}", secondary.first_fermat);
    println!("INFO secondary orientations: {:?}", secondary.orientations);
    println!("INFO reconstruction candidates per run: {:?}", multiplicity.candidates);
    println!("INFO valid attempts per run: {:?}", multiplicity.valid_attempts);

    let failures = outcomes.iter().filter(|o| !o.pass).count();
    println!("acceptance: {} passed, {} failed", outcomes.len() - failures, failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
