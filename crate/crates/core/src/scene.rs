//! The serializable state of one constructed configuration.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::centers::{nine_point_circle, orthocenter, FermatPair, Triangle};
use crate::conics::Conic;
use crate::kiepert::{certify_yiu, kiepert_hyperbola, yiu_triangles, NamedCheck, YiuCertificates};
use crate::numeric::{Sqrt3, Tolerance};
use crate::projective::{Check, Line, Point, SimilarityFrame};
use crate::Result;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenePair<T> {
    pub pqr: T,
    pub pqr_prime: T,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "S: Sqrt3", deserialize = "S: Sqrt3 + DeserializeOwned"))]
pub struct SceneAxes<S: Sqrt3> {
    pub pqr: Line<S>,
    pub pqr_prime: Line<S>,
    pub hessian: Line<S>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "S: Sqrt3", deserialize = "S: Sqrt3 + DeserializeOwned"))]
pub struct Scene<S: Sqrt3> {
    pub triangle: Triangle<S>,
    pub fermat: FermatPair<S>,
    pub conic: Conic<S>,
    pub center: Point<S>,
    pub yiu: ScenePair<Triangle<S>>,
    pub perspectors: ScenePair<[Point<S>; 3]>,
    pub axes: SceneAxes<S>,
    pub frame: SimilarityFrame<S>,
    pub certificates: Vec<NamedCheck<S>>,
}

fn certificate_list<S: Sqrt3>(c: &YiuCertificates<S>) -> Vec<NamedCheck<S>> {
    let mut out = Vec::new();
    for (tag, e) in [("pqr", &c.equilateral), ("pqr_prime", &c.equilateral_prime)] {
        out.push(NamedCheck::new(format!("{tag} equilateral"), e.spread.clone()));
        for (i, k) in e.concyclic.iter().enumerate() {
            out.push(NamedCheck::new(format!("{tag} midpoint concyclicity {i}"), k.clone()));
        }
    }
    for (tag, p) in [("pqr", &c.perspective), ("pqr_prime", &c.perspective_prime)] {
        for cert in &p.certs {
            out.push(NamedCheck::new(format!("{tag} perspective at shift {}", cert.pairing.shift), cert.check.clone()));
        }
        out.push(NamedCheck::new(format!("{tag} perspectors collinear"), p.axis.check.clone()));
    }
    out.push(NamedCheck::new("hessian meets collinear", c.hessian.check.clone()));
    out.push(NamedCheck::new("perspector axis is the hessian line", c.axis_is_hessian.clone()));
    out.push(NamedCheck::new("perspector axes agree", c.axes_agree.clone()));
    out
}

impl<S: Sqrt3> Scene<S> {
    /// Runs the whole construction on a reference triangle.
    pub fn build(triangle: &Triangle<S>, tol: &Tolerance) -> Result<Self> {
        let ks = kiepert_hyperbola(triangle, tol)?;
        let yiu = yiu_triangles(&ks, tol)?;
        let certs = certify_yiu(&ks, &yiu, tol)?;
        let mut certificates = ks.checks.clone();
        let h = orthocenter(triangle, tol)?;
        certificates.push(NamedCheck::new("orthocenter concurrence", h.check));
        certificates.push(NamedCheck::new("orthocenter on conic", ks.conic.incidence(&h.point, tol)));
        let nine = nine_point_circle(triangle, tol)?.incidence(&ks.center, tol)?;
        certificates.push(NamedCheck::new("nine-point circle through center", nine));
        certificates.extend(certificate_list(&certs));
        Ok(Scene {
            triangle: triangle.clone(),
            fermat: ks.fermat.clone(),
            conic: ks.conic.clone(),
            center: ks.center.clone(),
            yiu: ScenePair { pqr: yiu.pqr.clone(), pqr_prime: yiu.pqr_prime.clone() },
            perspectors: ScenePair {
                pqr: certs.perspective.perspectors(),
                pqr_prime: certs.perspective_prime.perspectors(),
            },
            axes: SceneAxes {
                pqr: certs.perspective.axis.line.clone(),
                pqr_prime: certs.perspective_prime.axis.line.clone(),
                hessian: certs.hessian.line.clone(),
            },
            frame: ks.frame,
            certificates,
        })
    }

    pub fn all_hold(&self) -> bool {
        self.certificates.iter().all(|c| c.holds)
    }

    pub fn scale(&self) -> f64 {
        self.triangle.scale()
    }

    /// Rebuilds the scene from its reference triangle and checks that every
    /// stored element agrees with the rebuilt one.
    ///
    /// Returns the rebuilt scene and the agreement checks.
    pub fn revalidate(&self, tol: &Tolerance) -> Result<(Scene<S>, Vec<NamedCheck<S>>)> {
        let t = Triangle::new(
            self.triangle.vertex(0).clone(),
            self.triangle.vertex(1).clone(),
            self.triangle.vertex(2).clone(),
        )?;
        let fresh = Scene::build(&t, tol)?;
        let flag = |name: &str, ok: bool| NamedCheck::new(name, Check { holds: ok, residual: S::zero() });
        let agreement = vec![
            NamedCheck::new("stored conic", self.conic.same_as(&fresh.conic, tol)),
            flag("stored fermat f1", self.fermat.f1.coincides(&fresh.fermat.f1, tol)),
            flag("stored fermat f2", self.fermat.f2.coincides(&fresh.fermat.f2, tol)),
            flag("stored center", self.center.coincides(&fresh.center, tol)),
            flag("stored pqr", self.yiu.pqr.same_vertices(&fresh.yiu.pqr, tol)),
            flag("stored pqr_prime", self.yiu.pqr_prime.same_vertices(&fresh.yiu.pqr_prime, tol)),
            NamedCheck::new("stored perspector axis", self.axes.pqr.same_as(&fresh.axes.pqr, tol)),
            NamedCheck::new("stored primed perspector axis", self.axes.pqr_prime.same_as(&fresh.axes.pqr_prime, tol)),
            NamedCheck::new("stored hessian line", self.axes.hessian.same_as(&fresh.axes.hessian, tol)),
        ];
        Ok((fresh, agreement))
    }
}
