use serde::{Deserialize, Serialize};

use crate::numeric::linalg::Mat3;
use crate::numeric::Scalar;
use crate::{Error, Result};

use super::{Line, Point};

/// A direct similarity `z ↦ α·z + β` of the plane (complex notation), with its inverse.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "S: Scalar", deserialize = "S: Scalar + Deserialize<'de>"))]
pub struct SimilarityFrame<S> {
    /// `α = (re, im)`: rotation and scale.
    pub alpha: (S, S),
    /// `β`: translation.
    pub beta: (S, S),
    pub alpha_inv: (S, S),
    pub beta_inv: (S, S),
}

fn cmul<S: Scalar>(a: &(S, S), b: &(S, S)) -> (S, S) {
    (a.0.clone() * b.0.clone() - a.1.clone() * b.1.clone(), a.0.clone() * b.1.clone() + a.1.clone() * b.0.clone())
}

fn cinv<S: Scalar>(a: &(S, S)) -> (S, S) {
    let n = a.0.square() + a.1.square();
    (a.0.clone() / n.clone(), -a.1.clone() / n)
}

impl<S: Scalar> SimilarityFrame<S> {
    pub fn identity() -> Self {
        SimilarityFrame::new((S::one(), S::zero()), (S::zero(), S::zero()))
    }

    pub fn new(alpha: (S, S), beta: (S, S)) -> Self {
        let alpha_inv = cinv(&alpha);
        let b = cmul(&alpha_inv, &beta);
        let beta_inv = (-b.0, -b.1);
        SimilarityFrame { alpha, beta, alpha_inv, beta_inv }
    }

    fn apply_with(alpha: &(S, S), beta: &(S, S), p: &Point<S>) -> Point<S> {
        let (ar, ai) = alpha;
        let (br, bi) = beta;
        Point::new(
            ar.clone() * p.x.clone() - ai.clone() * p.y.clone() + br.clone() * p.w.clone(),
            ai.clone() * p.x.clone() + ar.clone() * p.y.clone() + bi.clone() * p.w.clone(),
            p.w.clone(),
        )
    }

    pub fn forward(&self, p: &Point<S>) -> Point<S> {
        Self::apply_with(&self.alpha, &self.beta, p)
    }

    pub fn inverse(&self, p: &Point<S>) -> Point<S> {
        Self::apply_with(&self.alpha_inv, &self.beta_inv, p)
    }

    /// `|α|²`: squared lengths scale by this factor under `forward`.
    pub fn scale_sq(&self) -> S {
        self.alpha.0.square() + self.alpha.1.square()
    }

    /// Homogeneous matrix of `forward`.
    pub fn matrix(&self) -> Mat3<S> {
        Self::matrix_of(&self.alpha, &self.beta)
    }

    /// Homogeneous matrix of `inverse`.
    pub fn inverse_matrix(&self) -> Mat3<S> {
        Self::matrix_of(&self.alpha_inv, &self.beta_inv)
    }

    fn matrix_of(alpha: &(S, S), beta: &(S, S)) -> Mat3<S> {
        let (ar, ai) = alpha.clone();
        let (br, bi) = beta.clone();
        Mat3::new([[ar.clone(), -ai.clone(), br], [ai, ar, bi], [S::zero(), S::zero(), S::one()]])
    }

    /// Image of a line under `forward` (lines map by the inverse transpose).
    pub fn forward_line(&self, l: &Line<S>) -> Line<S> {
        Line::from_coords(self.inverse_matrix().transpose().apply(&l.coords()))
    }

    pub fn inverse_line(&self, l: &Line<S>) -> Line<S> {
        Line::from_coords(self.matrix().transpose().apply(&l.coords()))
    }
}

/// The similarity sending `f2 ↦ (−1, 0)` and `f1 ↦ (1, 0)`.
pub fn normalize_frame<S: Scalar>(f2: &Point<S>, f1: &Point<S>) -> Result<SimilarityFrame<S>> {
    let (x2, y2) = f2.xy()?;
    let (x1, y1) = f1.xy()?;
    let d = (x1 - x2.clone(), y1 - y2.clone());
    if d.0.is_zero() && d.1.is_zero() {
        return Err(Error::CoincidentFermatPoints);
    }
    // α = 2/(f1 − f2), β = −1 − α·f2.
    let inv = cinv(&d);
    let two = S::from_i64(2);
    let alpha = (inv.0 * two.clone(), inv.1 * two);
    let af2 = cmul(&alpha, &(x2, y2));
    let beta = (-S::one() - af2.0, -af2.1);
    Ok(SimilarityFrame::new(alpha, beta))
}
