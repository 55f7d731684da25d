//! Univariate polynomials of low degree and their real roots.

use super::{NumericError, Scalar, Tolerance};

/// Polynomial with coefficients listed lowest degree first.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> Poly<S> {
    /// Builds a polynomial, dropping exactly-zero leading coefficients.
    pub fn new(mut coeffs: Vec<S>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(S::zero());
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> &S {
        self.coeffs.last().expect("nonempty")
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    pub fn eval(&self, x: &S) -> S {
        self.coeffs.iter().rev().fold(S::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    /// Largest coefficient magnitude, as a double.
    pub fn coeff_scale(&self) -> f64 {
        self.coeffs.iter().map(|c| c.to_f64().abs()).fold(0.0, f64::max)
    }

    pub fn mul(&self, other: &Poly<S>) -> Poly<S> {
        let mut out = vec![S::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Poly<T> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    pub fn add(&self, other: &Poly<S>) -> Poly<S> {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |v: &[S], i: usize| v.get(i).cloned().unwrap_or_else(S::zero);
        Poly::new((0..n).map(|i| get(&self.coeffs, i) + get(&other.coeffs, i)).collect())
    }

    pub fn scale(&self, s: &S) -> Poly<S> {
        Poly::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    /// Division by the linear factor `c0 + c1·x`.
    ///
    /// Runs top-down when `|c1| ≥ |c0|` and bottom-up otherwise, so the
    /// recurrence never amplifies by the larger of the two ratios. This also
    /// covers `c1 = 0` (a root at infinity), where the leading coefficient is
    /// the remainder. Returns quotient and remainder.
    pub fn divide_linear(&self, c0: &S, c1: &S) -> (Poly<S>, S) {
        self.divide_linear_as(self.degree(), c0, c1)
    }

    /// As [`Poly::divide_linear`], treating `self` as having nominal degree
    /// `degree` (missing top coefficients are zero). This matters when `c1`
    /// vanishes: the dropped factor then stands for a root at infinity.
    pub fn divide_linear_as(&self, degree: usize, c0: &S, c1: &S) -> (Poly<S>, S) {
        let n = degree.max(self.degree());
        let mut f = self.coeffs.clone();
        f.resize(n + 1, S::zero());
        if n == 0 {
            return (Poly::new(vec![S::zero()]), f[0].clone());
        }
        let mut g = vec![S::zero(); n];
        if c1.to_f64().abs() >= c0.to_f64().abs() && !c1.is_zero() {
            g[n - 1] = f[n].clone() / c1.clone();
            for k in (1..n).rev() {
                g[k - 1] = (f[k].clone() - c0.clone() * g[k].clone()) / c1.clone();
            }
            let rem = f[0].clone() - c0.clone() * g[0].clone();
            (Poly::new(g), rem)
        } else {
            g[0] = f[0].clone() / c0.clone();
            for k in 1..n {
                g[k] = (f[k].clone() - c1.clone() * g[k - 1].clone()) / c0.clone();
            }
            let rem = f[n].clone() - c1.clone() * g[n - 1].clone();
            (Poly::new(g), rem)
        }
    }

    /// Synthetic division by `(x − root)`; returns quotient and remainder.
    pub fn divide_by_root(&self, root: &S) -> (Poly<S>, S) {
        let n = self.degree();
        if n == 0 {
            return (Poly::new(vec![S::zero()]), self.coeffs[0].clone());
        }
        let mut quot = vec![S::zero(); n];
        let mut carry = S::zero();
        for k in (0..=n).rev() {
            let val = self.coeffs[k].clone() + carry * root.clone();
            if k == 0 {
                return (Poly::new(quot), val);
            }
            quot[k - 1] = val.clone();
            carry = val;
        }
        unreachable!()
    }

    /// Removes a known root. Exact scalars require a zero remainder; doubles
    /// accept a remainder within `tol` relative to the coefficient scale.
    pub fn deflate(&self, root: &S, tol: &Tolerance) -> Result<Deflation<S>, NumericError> {
        let (quotient, remainder) = self.divide_by_root(root);
        let scale = self.coeff_scale() * root.to_f64().abs().max(1.0).powi(self.degree() as i32);
        let ok = if S::EXACT { remainder.is_zero() } else { tol.is_small(remainder.to_f64(), scale) };
        if !ok {
            return Err(NumericError::NotARoot { residual: remainder.to_f64() });
        }
        Ok(Deflation { quotient, residual: remainder })
    }
}

/// Result of [`Poly::deflate`].
#[derive(Clone, Debug)]
pub struct Deflation<S> {
    pub quotient: Poly<S>,
    /// Remainder of the division; zero in the exact tiers.
    pub residual: S,
}

/// Real roots of `a x² + b x + c` in ascending order, repeated for a double root.
pub fn solve_quadratic_real(c: f64, b: f64, a: f64) -> Vec<f64> {
    if a == 0.0 {
        return if b == 0.0 { vec![] } else { vec![-c / b] };
    }
    let disc = b * b - 4.0 * a * c;
    let scale = (b * b).max((4.0 * a * c).abs());
    if disc.abs() <= 1e-14 * scale {
        let r = -b / (2.0 * a);
        return vec![r, r];
    }
    if disc < 0.0 {
        return vec![];
    }
    // Stable form: avoid subtracting nearly equal quantities.
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    let (r1, r2) = if q == 0.0 { (0.0, 0.0) } else { (q / a, c / q) };
    let mut roots = vec![r1, r2];
    roots.sort_by(f64::total_cmp);
    roots
}

/// All real roots of a cubic, ascending, with multiplicity.
///
/// Three distinct real roots use the trigonometric form; one real root uses
/// Cardano's formula. Every root gets one guarded Newton step.
pub fn solve_cubic_real(p: &Poly<f64>, tol: &Tolerance) -> Result<Vec<f64>, NumericError> {
    if p.degree() != 3 {
        return Err(NumericError::DegenerateLeadingCoefficient);
    }
    let c = p.coeffs();
    let scale = p.coeff_scale();
    if c[3].abs() <= tol.eps * scale * 1e-3 {
        return Err(NumericError::DegenerateLeadingCoefficient);
    }
    let (a2, a1, a0) = (c[2] / c[3], c[1] / c[3], c[0] / c[3]);
    // x = y − a2/3 gives y³ + p y + q = 0.
    let shift = a2 / 3.0;
    let pp = a1 - a2 * a2 / 3.0;
    let qq = 2.0 * a2 * a2 * a2 / 27.0 - a2 * a1 / 3.0 + a0;
    let disc = -(4.0 * pp * pp * pp + 27.0 * qq * qq);
    let disc_scale = (4.0 * pp * pp * pp).abs() + 27.0 * qq * qq;

    let mut roots: Vec<f64> = if pp == 0.0 && qq == 0.0 {
        vec![0.0; 3]
    } else if disc.abs() <= 1e-13 * disc_scale {
        // Double root plus a simple one.
        if pp == 0.0 {
            vec![0.0; 3]
        } else {
            let simple = 3.0 * qq / pp;
            let double = -1.5 * qq / pp;
            vec![simple, double, double]
        }
    } else if disc > 0.0 {
        let m = 2.0 * (-pp / 3.0).sqrt();
        let arg = (3.0 * qq / (pp * m)).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        (0..3).map(|k| m * (theta - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos()).collect()
    } else {
        let s = (qq * qq / 4.0 + pp * pp * pp / 27.0).sqrt();
        let u = -(qq.signum()) * (qq.abs() / 2.0 + s).cbrt();
        let v = if u == 0.0 { 0.0 } else { -pp / (3.0 * u) };
        vec![u + v]
    };
    for r in roots.iter_mut() {
        *r = newton_polish(p, *r - shift);
    }
    roots.sort_by(f64::total_cmp);
    Ok(roots)
}

fn newton_polish(p: &Poly<f64>, x: f64) -> f64 {
    let c = p.coeffs();
    let f = ((c[3] * x + c[2]) * x + c[1]) * x + c[0];
    let df = (3.0 * c[3] * x + 2.0 * c[2]) * x + c[1];
    if df == 0.0 || !df.is_finite() {
        return x;
    }
    let next = x - f / df;
    let f_next = ((c[3] * next + c[2]) * next + c[1]) * next + c[0];
    if f_next.abs() < f.abs() {
        next
    } else {
        x
    }
}
