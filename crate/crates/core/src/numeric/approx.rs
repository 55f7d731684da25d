//! Tolerance policy for the floating-point tier.

use serde::{Serialize, Serializer};

/// Environment variable that overrides the default relative tolerance.
pub const TOL_ENV: &str = "KIEPERT_TOL";

pub const DEFAULT_EPS: f64 = 1e-9;

/// Relative tolerance used for every floating-point verdict.
///
/// Residuals are expected to be scale-free already (divided by the relevant
/// norms); `eps` is compared against them directly, or against `eps * scale`
/// when a raw magnitude is tested.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub eps: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { eps: DEFAULT_EPS }
    }
}

impl Tolerance {
    pub fn new(eps: f64) -> Self {
        assert!(eps.is_finite() && eps > 0.0, "tolerance must be positive");
        Tolerance { eps }
    }

    /// Default tolerance, overridden by `KIEPERT_TOL` when it parses as a positive number.
    pub fn from_env() -> Self {
        std::env::var(TOL_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<f64>().ok())
            .filter(|e| e.is_finite() && *e > 0.0)
            .map(Tolerance::new)
            .unwrap_or_default()
    }

    /// Threshold for structural degeneracy (coincident points, parallel
    /// lines) rather than geometric verdicts.
    pub fn structural() -> Self {
        Tolerance { eps: 1e-12 }
    }

    pub fn accepts(&self, scaled_residual: f64) -> bool {
        scaled_residual.abs() <= self.eps
    }

    pub fn is_small(&self, value: f64, scale: f64) -> bool {
        value.abs() <= self.eps * scale.abs().max(f64::MIN_POSITIVE)
    }
}

/// A double together with the geometric extent of the scene it lives in.
///
/// Two values are equal when they differ by at most `eps · scale`.
#[derive(Clone, Copy, Debug)]
pub struct ApproxReal {
    pub value: f64,
    pub scale: f64,
}

impl ApproxReal {
    pub fn new(value: f64, scale: f64) -> Self {
        ApproxReal { value, scale: scale.abs() }
    }

    pub fn approx_eq(&self, other: &ApproxReal, tol: &Tolerance) -> bool {
        let scale = self.scale.max(other.scale).max(f64::MIN_POSITIVE);
        tol.is_small(self.value - other.value, scale)
    }

    pub fn is_zero(&self, tol: &Tolerance) -> bool {
        tol.is_small(self.value, self.scale)
    }
}

impl Serialize for ApproxReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_f64(self.value)
    }
}
