//! Seeded random instances for randomized verification runs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::centers::Triangle;
use crate::collineation::Homography;
use crate::conics::Conic;
use crate::kiepert::hessian_line;
use crate::numeric::linalg::Mat3;
use crate::numeric::Tolerance;
use crate::projective::Point;

/// Independent generator for trial `index` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Uniform triangle in `[−half, half]²` whose side lengths differ pairwise by
/// at least `margin` relative to the longest side and whose area is at least
/// `margin` times the squared longest side.
pub fn random_scalene<R: Rng>(rng: &mut R, half: f64, margin: f64) -> Triangle<f64> {
    loop {
        let mut v = [(0.0, 0.0); 3];
        for p in &mut v {
            *p = (rng.gen_range(-half..=half), rng.gen_range(-half..=half));
        }
        let Ok(t) = Triangle::from_xy(v) else { continue };
        let l = t.side_lengths_sq().map(f64::sqrt);
        let longest = l.iter().cloned().fold(0.0, f64::max);
        let distinct = (0..3).all(|i| (l[i] - l[(i + 1) % 3]).abs() >= margin * longest);
        let area = 0.5 * t.signed_area2().abs();
        if distinct && area >= margin * longest * longest {
            return t;
        }
    }
}

/// Random invertible homography `I + E`, entries of `E` uniform in
/// `[−spread, spread]`, with `|det| ≥ 0.25`.
pub fn random_homography<R: Rng>(rng: &mut R, spread: f64) -> Homography<f64> {
    loop {
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = rng.gen_range(-spread..=spread) + if i == j { 1.0 } else { 0.0 };
            }
        }
        let m = Mat3 { m };
        if m.det().abs() >= 0.25 {
            if let Ok(h) = Homography::new(m) {
                return h;
            }
        }
    }
}

/// A conic, an inscribed triangle, and a point of its Hessian line.
#[derive(Clone, Debug, PartialEq)]
pub struct InscribedInstance {
    pub conic: Conic<f64>,
    pub triangle: Triangle<f64>,
    pub s: Point<f64>,
}

fn unit(p: &Point<f64>) -> [f64; 3] {
    let c = p.coords();
    let n = (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt();
    c.map(|x| x / n)
}

/// Sine of the angle between two homogeneous vectors.
fn separation(p: &[f64; 3], q: &[f64; 3]) -> f64 {
    let c = [p[1] * q[2] - p[2] * q[1], p[2] * q[0] - p[0] * q[2], p[0] * q[1] - p[1] * q[0]];
    (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt()
}

/// Image of the unit circle and three of its points under a random
/// homography, with `s` drawn on the Hessian line away from the three
/// tangent meets.
///
/// Vertices are at least `0.3` rad apart on the circle and stay affine.
pub fn random_inscribed<R: Rng>(rng: &mut R, tol: &Tolerance) -> InscribedInstance {
    let circle = Conic::<f64>::from_i64([1, 0, 1, 0, 0, -1]);
    loop {
        let h = random_homography(rng, 0.6);
        let mut angles: Vec<f64> = (0..3).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect();
        angles.sort_by(f64::total_cmp);
        let gaps = [angles[1] - angles[0], angles[2] - angles[1], std::f64::consts::TAU + angles[0] - angles[2]];
        if gaps.iter().any(|g| *g < 0.3) {
            continue;
        }
        let pts: Vec<Point<f64>> = angles.iter().map(|a| h.point(&Point::affine(a.cos(), a.sin()))).collect();
        if pts.iter().any(|p| unit(p)[2].abs() < 0.05) {
            continue;
        }
        let pts: Vec<Point<f64>> = pts.iter().map(Point::normalized).collect();
        let Ok(triangle) = Triangle::new(pts[0].clone(), pts[1].clone(), pts[2].clone()) else { continue };
        let conic = h.conic(&circle).normalized();
        let Ok(hessian) = hessian_line(&conic, &triangle, tol) else { continue };
        let meets: Vec<[f64; 3]> = hessian.points.iter().map(unit).collect();
        let phi = rng.gen_range(0.0..std::f64::consts::PI);
        let (c, s) = (phi.cos(), phi.sin());
        let cand = [0, 1, 2].map(|i| c * meets[0][i] + s * meets[1][i]);
        let n = cand.iter().map(|x| x * x).sum::<f64>().sqrt();
        let cand = cand.map(|x| x / n);
        if meets.iter().any(|m| separation(&cand, m) < 0.1) {
            continue;
        }
        let s = Point::from_coords(cand).normalized();
        return InscribedInstance { conic, triangle, s };
    }
}
