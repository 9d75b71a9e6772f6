use std::fmt;
use std::sync::Arc;

use crate::error::{JordanError, Result};

/// Relative slack used by open-interval guards: an eigenvalue `l` of an
/// element with norm `s` is accepted by `(0, inf)` only if `l > GUARD * s`.
pub const DOMAIN_GUARD: f64 = 1e-12;

/// Where a [`ScalarFunction`] may be evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    /// The whole real line.
    Real,
    /// `(0, inf)`, guarded with relative slack.
    Positive,
    /// `R \ {0}`, guarded with relative slack.
    NonZero,
    /// The closed interval `[lo, hi]`.
    Closed { lo: f64, hi: f64 },
}

impl Domain {
    /// Checks an eigenvalue of an element whose spectral norm is `scale`.
    pub fn check(&self, value: f64, scale: f64, label: &str) -> Result<()> {
        let slack = DOMAIN_GUARD * scale.max(f64::MIN_POSITIVE);
        let ok = value.is_finite()
            && match *self {
                Domain::Real => true,
                Domain::Positive => value > slack,
                Domain::NonZero => value.abs() > slack,
                Domain::Closed { lo, hi } => value >= lo && value <= hi,
            };
        if ok {
            Ok(())
        } else {
            Err(JordanError::Domain {
                function: label.to_string(),
                eigenvalue: value,
                bound: self.to_string(),
            })
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Domain::Real => write!(f, "(-inf, inf)"),
            Domain::Positive => write!(f, "(0, inf) with relative guard {DOMAIN_GUARD:e}"),
            Domain::NonZero => write!(f, "|x| > 0 with relative guard {DOMAIN_GUARD:e}"),
            Domain::Closed { lo, hi } => write!(f, "[{lo}, {hi}]"),
        }
    }
}

/// A real function together with the interval on which functional calculus
/// may apply it.
#[derive(Clone)]
pub struct ScalarFunction {
    label: String,
    domain: Domain,
    eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl fmt::Debug for ScalarFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarFunction")
            .field("label", &self.label)
            .field("domain", &self.domain)
            .finish()
    }
}

impl ScalarFunction {
    pub fn new(
        label: impl Into<String>,
        domain: Domain,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            label: label.into(),
            domain,
            eval: Arc::new(eval),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    pub fn identity() -> Self {
        Self::new("id", Domain::Real, |x| x)
    }

    pub fn constant(c: f64) -> Self {
        Self::new(format!("const({c})"), Domain::Real, move |_| c)
    }

    pub fn square() -> Self {
        Self::new("square", Domain::Real, |x| x * x)
    }

    pub fn sqrt() -> Self {
        Self::new("sqrt", Domain::Closed { lo: 0.0, hi: f64::INFINITY }, f64::sqrt)
    }

    pub fn log() -> Self {
        Self::new("log", Domain::Positive, f64::ln)
    }

    pub fn exp() -> Self {
        Self::new("exp", Domain::Real, f64::exp)
    }

    pub fn reciprocal() -> Self {
        Self::new("inv", Domain::NonZero, |x| 1.0 / x)
    }

    /// `t -> t^p`. Non-negative integer exponents are defined everywhere;
    /// any other exponent requires a positive argument.
    pub fn power(p: f64) -> Self {
        if p >= 0.0 && p.fract() == 0.0 && p <= i32::MAX as f64 {
            let k = p as i32;
            Self::new(format!("pow({p})"), Domain::Real, move |x| x.powi(k))
        } else {
            Self::new(format!("pow({p})"), Domain::Positive, move |x| x.powf(p))
        }
    }

    /// `t -> -t log t`.
    pub fn neg_xlogx() -> Self {
        Self::new("-xlogx", Domain::Positive, |x| -x * x.ln())
    }

    /// Deformed logarithm `t -> (t^lam - 1)/lam`.
    pub fn ln_lambda(lam: f64) -> Result<Self> {
        if lam == 0.0 || !lam.is_finite() {
            return Err(JordanError::Parameter(format!(
                "ln_lambda needs a finite nonzero lambda, got {lam}"
            )));
        }
        Ok(Self::new(format!("ln_{lam}"), Domain::Positive, move |x| {
            crate::means::ln_lambda_unchecked(x, lam)
        }))
    }
}
