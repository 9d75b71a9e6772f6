use serde::{Deserialize, Serialize};

use crate::element::{jb_norm, JordanElement};
use crate::error::{JordanError, Result};
use crate::spectral::min_eigenvalue;

/// Outcome of a Löwner comparison `a <= b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrderCertificate {
    /// `min Sp(b - a)`.
    pub margin: f64,
    /// `1 + max(‖a‖, ‖b‖)`.
    pub scale: f64,
    pub tol: f64,
    pub verdict: bool,
}

impl OrderCertificate {
    pub fn new(margin: f64, scale: f64, tol: f64) -> Self {
        Self {
            margin,
            scale,
            tol,
            verdict: margin >= -tol * scale,
        }
    }

    /// `margin / scale`, the quantity reports aggregate.
    pub fn normalized(&self) -> f64 {
        self.margin / self.scale
    }
}

/// Certifies `a <= b`. A failed comparison is a verdict, not an error; the
/// only error is an algebra mismatch.
pub fn loewner_leq(a: &JordanElement, b: &JordanElement, tol: f64) -> Result<OrderCertificate> {
    if !(tol >= 0.0) {
        return Err(JordanError::Parameter(format!("tolerance must be >= 0, got {tol}")));
    }
    let diff = b.sub(a)?;
    // non-finite coordinates: report as a failure
    let margin = min_eigenvalue(&diff).unwrap_or(f64::NEG_INFINITY);
    let scale = 1.0 + jb_norm(a).max(jb_norm(b));
    Ok(OrderCertificate::new(margin, scale, tol))
}
