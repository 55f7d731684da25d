//! Small dense linear algebra over any [`Scalar`].

use super::{Scalar, Tolerance};

/// A 3×3 matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat3<S> {
    pub m: [[S; 3]; 3],
}

impl<S: Scalar> Mat3<S> {
    pub fn new(m: [[S; 3]; 3]) -> Self {
        Mat3 { m }
    }

    pub fn identity() -> Self {
        Mat3::from_fn(|i, j| if i == j { S::one() } else { S::zero() })
    }

    pub fn from_fn(f: impl Fn(usize, usize) -> S) -> Self {
        Mat3 { m: std::array::from_fn(|i| std::array::from_fn(|j| f(i, j))) }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(c: [&[S; 3]; 3]) -> Self {
        Mat3::from_fn(|i, j| c[j][i].clone())
    }

    pub fn transpose(&self) -> Self {
        Mat3::from_fn(|i, j| self.m[j][i].clone())
    }

    pub fn mul(&self, other: &Mat3<S>) -> Mat3<S> {
        Mat3::from_fn(|i, j| (0..3).fold(S::zero(), |acc, k| acc + self.m[i][k].clone() * other.m[k][j].clone()))
    }

    pub fn apply(&self, v: &[S; 3]) -> [S; 3] {
        std::array::from_fn(|i| (0..3).fold(S::zero(), |acc, k| acc + self.m[i][k].clone() * v[k].clone()))
    }

    pub fn scale(&self, s: &S) -> Mat3<S> {
        Mat3::from_fn(|i, j| self.m[i][j].clone() * s.clone())
    }

    fn minor(&self, r: usize, c: usize) -> S {
        let rows: Vec<usize> = (0..3).filter(|&i| i != r).collect();
        let cols: Vec<usize> = (0..3).filter(|&j| j != c).collect();
        self.m[rows[0]][cols[0]].clone() * self.m[rows[1]][cols[1]].clone()
            - self.m[rows[0]][cols[1]].clone() * self.m[rows[1]][cols[0]].clone()
    }

    pub fn det(&self) -> S {
        (0..3).fold(S::zero(), |acc, j| {
            let term = self.m[0][j].clone() * self.minor(0, j);
            if j == 1 {
                acc - term
            } else {
                acc + term
            }
        })
    }

    /// Adjugate: `adj(M)·M = det(M)·I`. Inverse up to scale.
    pub fn adjugate(&self) -> Mat3<S> {
        Mat3::from_fn(|i, j| {
            let c = self.minor(j, i);
            if (i + j) % 2 == 1 {
                -c
            } else {
                c
            }
        })
    }

    pub fn inverse(&self) -> Option<Mat3<S>> {
        let d = self.det();
        if d.is_zero() {
            return None;
        }
        let inv = S::one() / d;
        Some(self.adjugate().scale(&inv))
    }

    pub fn entries(&self) -> Vec<S> {
        self.m.iter().flat_map(|r| r.iter().cloned()).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.m.iter().flatten().map(|x| x.to_f64().abs()).fold(0.0, f64::max)
    }

    pub fn to_f64(&self) -> Mat3<f64> {
        Mat3::from_fn(|i, j| self.m[i][j].to_f64())
    }
}

pub fn cross<S: Scalar>(a: &[S; 3], b: &[S; 3]) -> [S; 3] {
    [
        a[1].clone() * b[2].clone() - a[2].clone() * b[1].clone(),
        a[2].clone() * b[0].clone() - a[0].clone() * b[2].clone(),
        a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone(),
    ]
}

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter().zip(b).fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn norm_f64<S: Scalar>(a: &[S]) -> f64 {
    a.iter().map(|x| x.to_f64().powi(2)).sum::<f64>().sqrt()
}

pub fn det3<S: Scalar>(a: &[S; 3], b: &[S; 3], c: &[S; 3]) -> S {
    dot(a, &cross(b, c))
}

/// Outcome of a rank computation.
#[derive(Clone, Debug, PartialEq)]
pub enum NullSpace<S> {
    /// Nullity one; the spanning vector.
    Unique(Vec<S>),
    /// The kernel has this dimension (0 or ≥ 2).
    Dimension(usize),
}

/// Kernel of a row-major matrix by Gaussian elimination.
///
/// Pivots are chosen by largest magnitude; in floating point a pivot counts as
/// zero when it is below `tol.eps` relative to its row's initial magnitude.
pub fn null_space<S: Scalar>(rows: &[Vec<S>], tol: &Tolerance) -> NullSpace<S> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut a: Vec<Vec<S>> = rows.to_vec();
    if !S::EXACT {
        // Equilibrate rows so the pivot threshold is scale-free.
        for row in a.iter_mut() {
            let n = norm_f64(row);
            if n > 0.0 {
                let inv = S::from_f64(1.0 / n);
                for x in row.iter_mut() {
                    *x = x.clone() * inv.clone();
                }
            }
        }
    }
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == a.len() {
            break;
        }
        let (best, mag) =
            (r..a.len())
                .map(|i| (i, a[i][c].to_f64().abs()))
                .fold((r, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        let is_zero = if S::EXACT { a[best][c].is_zero() } else { mag <= tol.eps };
        if is_zero {
            continue;
        }
        a.swap(r, best);
        let inv = S::one() / a[r][c].clone();
        for x in a[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let pivot = a[r].clone();
                for (x, p) in a[i].iter_mut().zip(pivot) {
                    *x = x.clone() - f.clone() * p;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivot_cols.contains(c)).collect();
    if free.len() != 1 {
        return NullSpace::Dimension(free.len());
    }
    let f = free[0];
    let mut v = vec![S::zero(); ncols];
    v[f] = S::one();
    for (row, &pc) in pivot_cols.iter().enumerate() {
        v[pc] = -a[row][f].clone();
    }
    NullSpace::Unique(v)
}

/// How far two vectors are from being proportional.
///
/// Exact tiers return the first nonvanishing 2×2 minor (zero iff
/// proportional); doubles return the sine of the angle between them.
pub fn proportionality_residual<S: Scalar>(a: &[S], b: &[S]) -> S {
    if S::EXACT {
        for i in 0..a.len() {
            for j in i + 1..a.len() {
                let minor = a[i].clone() * b[j].clone() - a[j].clone() * b[i].clone();
                if !minor.is_zero() {
                    return minor;
                }
            }
        }
        S::zero()
    } else {
        let na = norm_f64(a);
        let nb = norm_f64(b);
        if na == 0.0 || nb == 0.0 {
            return S::from_f64(1.0);
        }
        let mut s = 0.0;
        for i in 0..a.len() {
            for j in i + 1..a.len() {
                let minor = a[i].to_f64() * b[j].to_f64() - a[j].to_f64() * b[i].to_f64();
                s += minor * minor;
            }
        }
        S::from_f64(s.sqrt() / (na * nb))
    }
}
