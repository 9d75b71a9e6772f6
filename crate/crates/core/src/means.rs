//! Operator means, relative and Tsallis operator entropies, and the bound
//! expressions that sandwich the `(α, β)`-entropy.
//!
//! Every expression is assembled inside the algebra from the quadratic map,
//! functional calculus and Jordan products, exactly as written; nothing is
//! simplified with associative identities, so the same code runs unchanged
//! on the exceptional Albert backend.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::backend::Decomposition;
use crate::element::{affine, jordan_product, quad_map, JordanElement};
use crate::error::{JordanError, Result};
use crate::function::ScalarFunction;
use crate::spectral::{
    apply_decomposed, decompose, func_calculus, inverse, require_positive_invertible,
};

/// Parameters of the entropy family. Each operation reads only the fields it
/// needs and reports a parameter error when one is missing or out of range.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct EntropyParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
}

impl EntropyParams {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = Some(alpha);
        self
    }

    pub fn with_beta(mut self, beta: f64) -> Self {
        self.beta = Some(beta);
        self
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = Some(lambda);
        self
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = Some(delta);
        self
    }

    fn get(v: Option<f64>, name: &str) -> Result<f64> {
        match v {
            Some(x) if x.is_finite() => Ok(x),
            Some(x) => Err(JordanError::Parameter(format!("{name} must be finite, got {x}"))),
            None => Err(JordanError::Parameter(format!("missing parameter {name}"))),
        }
    }

    /// `α >= 0`.
    pub fn alpha(&self) -> Result<f64> {
        let a = Self::get(self.alpha, "alpha")?;
        if a < 0.0 {
            return Err(JordanError::Parameter(format!("alpha must be >= 0, got {a}")));
        }
        Ok(a)
    }

    /// `β > 0`.
    pub fn beta(&self) -> Result<f64> {
        let b = Self::get(self.beta, "beta")?;
        check_beta(b)?;
        Ok(b)
    }

    /// `λ ∈ (0, 1]`.
    pub fn lambda(&self) -> Result<f64> {
        let l = Self::get(self.lambda, "lambda")?;
        if !(l > 0.0 && l <= 1.0) {
            return Err(JordanError::Parameter(format!("lambda must lie in (0, 1], got {l}")));
        }
        Ok(l)
    }

    /// `δ > 0`.
    pub fn delta(&self) -> Result<f64> {
        let d = Self::get(self.delta, "delta")?;
        if d <= 0.0 {
            return Err(JordanError::Parameter(format!("delta must be > 0, got {d}")));
        }
        Ok(d)
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta.is_finite() {
        Ok(())
    } else {
        Err(JordanError::Parameter(format!("beta must be > 0, got {beta}")))
    }
}

/// The named bound expressions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundKind {
    I,
    II,
    III,
    IV,
    V,
    /// `I'`
    IDelta,
    /// `II'`
    IIDelta,
    /// `III'`
    IIIDelta,
    /// `V'`
    VDelta,
}

impl BoundKind {
    pub const ALL: [BoundKind; 9] = [
        BoundKind::I,
        BoundKind::II,
        BoundKind::III,
        BoundKind::IV,
        BoundKind::V,
        BoundKind::IDelta,
        BoundKind::IIDelta,
        BoundKind::IIIDelta,
        BoundKind::VDelta,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundKind::I => "I",
            BoundKind::II => "II",
            BoundKind::III => "III",
            BoundKind::IV => "IV",
            BoundKind::V => "V",
            BoundKind::IDelta => "Id",
            BoundKind::IIDelta => "IId",
            BoundKind::IIIDelta => "IIId",
            BoundKind::VDelta => "Vd",
        }
    }

    pub fn needs_delta(self) -> bool {
        matches!(
            self,
            BoundKind::IDelta | BoundKind::IIDelta | BoundKind::IIIDelta | BoundKind::VDelta
        )
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BoundKind {
    type Err = JordanError;

    fn from_str(s: &str) -> Result<Self> {
        BoundKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| JordanError::UnknownId(format!("bound:{s}")))
    }
}

/// `A^{β/2}`, `X = {A^{-β/2} B A^{-β/2}}` and the spectral data of `X`: the
/// common skeleton of every `(α, β)` expression.
struct Sandwich {
    outer: JordanElement,
    inner: JordanElement,
    inner_spectral: Decomposition,
}

impl Sandwich {
    fn new(a: &JordanElement, b: &JordanElement, beta: f64) -> Result<Self> {
        check_beta(beta)?;
        let da = require_positive_invertible(a, "A")?;
        require_positive_invertible(b, "B")?;
        if a.algebra() != b.algebra() {
            return Err(JordanError::IncompatibleAlgebras {
                left: *a.algebra(),
                right: *b.algebra(),
            });
        }
        let outer = apply_decomposed(a, &da, &ScalarFunction::power(beta / 2.0))?;
        let outer_inv = apply_decomposed(a, &da, &ScalarFunction::power(-beta / 2.0))?;
        let inner = quad_map(&outer_inv, b)?;
        let inner_spectral = decompose(&inner)?;
        Ok(Self {
            outer,
            inner,
            inner_spectral,
        })
    }

    /// `f(X)`.
    fn inner_fn(&self, f: &ScalarFunction) -> Result<JordanElement> {
        apply_decomposed(&self.inner, &self.inner_spectral, f)
    }

    /// `{A^{β/2} y A^{β/2}}`.
    fn wrap(&self, y: &JordanElement) -> Result<JordanElement> {
        quad_map(&self.outer, y)
    }
}

/// Nonassociative perspective
/// `{h(b)^{1/2} f({h(b)^{-1/2} a h(b)^{-1/2}}) h(b)^{1/2}}`.
pub fn perspective(
    f: &ScalarFunction,
    h: &ScalarFunction,
    a: &JordanElement,
    b: &JordanElement,
) -> Result<JordanElement> {
    let hb = func_calculus(b, h)?;
    let d = require_positive_invertible(&hb, "h(B)")?;
    let half = apply_decomposed(&hb, &d, &ScalarFunction::power(0.5))?;
    let half_inv = apply_decomposed(&hb, &d, &ScalarFunction::power(-0.5))?;
    let inner = quad_map(&half_inv, a)?;
    let fi = func_calculus(&inner, f)?;
    quad_map(&half, &fi)
}

/// Weighted harmonic mean `((1-t) a⁻¹ + t b⁻¹)⁻¹`, `t ∈ [0, 1]`.
pub fn harmonic_mean(a: &JordanElement, b: &JordanElement, t: f64) -> Result<JordanElement> {
    if !(0.0..=1.0).contains(&t) {
        return Err(JordanError::Parameter(format!("harmonic mean weight must lie in [0, 1], got {t}")));
    }
    require_positive_invertible(a, "A")?;
    require_positive_invertible(b, "B")?;
    let mix = affine(&inverse(a)?, &inverse(b)?, 1.0 - t, t)?;
    inverse(&mix)
}

/// Weighted geometric mean `{a^{1/2} ({a^{-1/2} b a^{-1/2}})^λ a^{1/2}}`,
/// `λ ∈ [-1, 2]`.
pub fn geometric_mean(a: &JordanElement, b: &JordanElement, lam: f64) -> Result<JordanElement> {
    if !(-1.0..=2.0).contains(&lam) {
        return Err(JordanError::Parameter(format!("geometric mean weight must lie in [-1, 2], got {lam}")));
    }
    ab_geometric_mean(a, b, lam, 1.0)
}

/// `(α, β)`-geometric mean `{a^{β/2} ({a^{-β/2} b a^{-β/2}})^α a^{β/2}}`.
/// Any real `α` is accepted; the bound expressions need `α - 1 < 0`.
pub fn ab_geometric_mean(
    a: &JordanElement,
    b: &JordanElement,
    alpha: f64,
    beta: f64,
) -> Result<JordanElement> {
    if !alpha.is_finite() {
        return Err(JordanError::Parameter(format!("alpha must be finite, got {alpha}")));
    }
    let s = Sandwich::new(a, b, beta)?;
    s.wrap(&s.inner_fn(&ScalarFunction::power(alpha))?)
}

/// Relative operator entropy `{a^{1/2} log({a^{-1/2} b a^{-1/2}}) a^{1/2}}`.
pub fn rel_entropy(a: &JordanElement, b: &JordanElement) -> Result<JordanElement> {
    let s = Sandwich::new(a, b, 1.0)?;
    s.wrap(&s.inner_fn(&ScalarFunction::log())?)
}

/// The same entropy written through the second operand:
/// `{b^{1/2} [-Y ∘ log Y] b^{1/2}}` with `Y = {b^{-1/2} a b^{-1/2}}`.
pub fn rel_entropy_xlogx(a: &JordanElement, b: &JordanElement) -> Result<JordanElement> {
    let s = Sandwich::new(b, a, 1.0)?;
    let y = &s.inner;
    let log_y = s.inner_fn(&ScalarFunction::log())?;
    let e = jordan_product(y, &log_y)?.scale(-1.0);
    s.wrap(&e)
}

/// Tsallis relative operator entropy `(a #_λ b - a)/λ`.
pub fn tsallis(a: &JordanElement, b: &JordanElement, lam: f64) -> Result<JordanElement> {
    if lam == 0.0 {
        return Err(JordanError::Parameter(
            "lambda = 0 is the relative operator entropy; use rel_entropy".into(),
        ));
    }
    let g = geometric_mean(a, b, lam)?;
    affine(&g, a, 1.0 / lam, -1.0 / lam)
}

/// `(α, β)`-entropy `{a^{β/2} [X^α ∘ log X] a^{β/2}}`, `X = {a^{-β/2} b a^{-β/2}}`.
pub fn rel_entropy_ab(
    a: &JordanElement,
    b: &JordanElement,
    alpha: f64,
    beta: f64,
) -> Result<JordanElement> {
    if !alpha.is_finite() {
        return Err(JordanError::Parameter(format!("alpha must be finite, got {alpha}")));
    }
    let s = Sandwich::new(a, b, beta)?;
    let xa = s.inner_fn(&ScalarFunction::power(alpha))?;
    let lx = s.inner_fn(&ScalarFunction::log())?;
    s.wrap(&jordan_product(&xa, &lx)?)
}

/// Tsallis `(λ, β)`-entropy `{a^{β/2} ln_λ(X) a^{β/2}}`; `λ ≠ 0`, any sign.
pub fn tsallis_lb(
    a: &JordanElement,
    b: &JordanElement,
    lam: f64,
    beta: f64,
) -> Result<JordanElement> {
    let f = ScalarFunction::ln_lambda(lam)?;
    let s = Sandwich::new(a, b, beta)?;
    s.wrap(&s.inner_fn(&f)?)
}

/// Deformed logarithm `(x^λ - 1)/λ`.
pub fn ln_lambda(x: f64, lam: f64) -> Result<f64> {
    if lam == 0.0 || !lam.is_finite() {
        return Err(JordanError::Parameter(format!("ln_lambda needs lambda != 0, got {lam}")));
    }
    if !(x > 0.0) {
        return Err(JordanError::Domain {
            function: format!("ln_{lam}"),
            eigenvalue: x,
            bound: "(0, inf)".into(),
        });
    }
    Ok(ln_lambda_unchecked(x, lam))
}

#[inline]
pub(crate) fn ln_lambda_unchecked(x: f64, lam: f64) -> f64 {
    // expm1 keeps (x^λ - 1)/λ accurate for small λ.
    (lam * x.ln()).exp_m1() / lam
}

/// Evaluates a bound expression as written.
pub fn bound_expr(
    kind: BoundKind,
    a: &JordanElement,
    b: &JordanElement,
    params: &EntropyParams,
) -> Result<JordanElement> {
    let beta = params.beta()?;
    let delta = if kind.needs_delta() { Some(params.delta()?) } else { None };
    if kind == BoundKind::IV {
        let lam = params.lambda()?;
        // ½(A#_(λ,β)B - A#_(λ-1,β)B + A#_(1,β)B - A#_(0,β)B)
        let g_l = ab_geometric_mean(a, b, lam, beta)?;
        let g_lm1 = ab_geometric_mean(a, b, lam - 1.0, beta)?;
        let g_1 = ab_geometric_mean(a, b, 1.0, beta)?;
        let g_0 = ab_geometric_mean(a, b, 0.0, beta)?;
        let left = affine(&g_l, &g_lm1, 0.5, -0.5)?;
        let right = affine(&g_1, &g_0, 0.5, -0.5)?;
        return left.add(&right);
    }
    let alpha = params.alpha()?;
    let geo = |exp: f64| ab_geometric_mean(a, b, exp, beta);

    match kind {
        BoundKind::I => {
            // 2{A^{β/2}[(1 - 2(1 + X)⁻¹) ∘ X^α]A^{β/2}}
            let s = Sandwich::new(a, b, beta)?;
            let x = &s.inner;
            let one = JordanElement::identity(*x.algebra());
            let inv = inverse(&one.add(x)?)?;
            let factor = affine(&one, &inv, 1.0, -2.0)?;
            let xa = s.inner_fn(&ScalarFunction::power(alpha))?;
            Ok(s.wrap(&jordan_product(&factor, &xa)?)?.scale(2.0))
        }
        BoundKind::II => {
            // 4 A#_(α,β)B - 8{A^{β/2}[X^α ∘ (X^{1/2} + 1)⁻¹]A^{β/2}}
            let s = Sandwich::new(a, b, beta)?;
            let xa = s.inner_fn(&ScalarFunction::power(alpha))?;
            let root = s.inner_fn(&ScalarFunction::power(0.5))?;
            let inv = inverse(&root.shift(1.0))?;
            let tail = s.wrap(&jordan_product(&xa, &inv)?)?;
            affine(&geo(alpha)?, &tail, 4.0, -8.0)
        }
        BoundKind::III => affine(&geo(alpha + 0.5)?, &geo(alpha - 0.5)?, 1.0, -1.0),
        BoundKind::V => affine(&geo(alpha + 1.0)?, &geo(alpha - 1.0)?, 0.5, -0.5),
        BoundKind::IDelta => {
            // (ln δ + 2) A#_(α,β)B - 4δ{A^{β/2}[(X + δ)⁻¹ ∘ X^α]A^{β/2}}
            let delta = delta.unwrap();
            let s = Sandwich::new(a, b, beta)?;
            let inv = inverse(&s.inner.shift(delta))?;
            let xa = s.inner_fn(&ScalarFunction::power(alpha))?;
            let tail = s.wrap(&jordan_product(&inv, &xa)?)?;
            affine(&geo(alpha)?, &tail, delta.ln() + 2.0, -4.0 * delta)
        }
        BoundKind::IIDelta => {
            // (ln δ + 4) A#_(α,β)B - 8√δ{A^{β/2}[(X^{1/2} + √δ)⁻¹ ∘ X^α]A^{β/2}}
            let delta = delta.unwrap();
            let sd = delta.sqrt();
            let s = Sandwich::new(a, b, beta)?;
            let root = s.inner_fn(&ScalarFunction::power(0.5))?;
            let inv = inverse(&root.shift(sd))?;
            let xa = s.inner_fn(&ScalarFunction::power(alpha))?;
            let tail = s.wrap(&jordan_product(&inv, &xa)?)?;
            affine(&geo(alpha)?, &tail, delta.ln() + 4.0, -8.0 * sd)
        }
        BoundKind::IIIDelta => {
            // (δ^{-1/2} A#_(α+½,β)B - δ^{1/2} A#_(α-½,β)B) + ln δ A#_(α,β)B
            let delta = delta.unwrap();
            let sd = delta.sqrt();
            let diff = affine(&geo(alpha + 0.5)?, &geo(alpha - 0.5)?, 1.0 / sd, -sd)?;
            affine(&diff, &geo(alpha)?, 1.0, delta.ln())
        }
        BoundKind::VDelta => {
            // ½(δ⁻¹ A#_(α+1,β)B - δ A#_(α-1,β)B) + ln δ A#_(α,β)B
            let delta = delta.unwrap();
            let diff = affine(&geo(alpha + 1.0)?, &geo(alpha - 1.0)?, 0.5 / delta, -0.5 * delta)?;
            affine(&diff, &geo(alpha)?, 1.0, delta.ln())
        }
        BoundKind::IV => unreachable!(),
    }
}

/// Expression names understood by [`evaluate_named`].
pub const EXPRESSION_NAMES: [&str; 16] = [
    "S", "T", "S_ab", "T_lb", "geo", "ab_geo", "harm", "bound:I", "bound:II", "bound:III",
    "bound:IV", "bound:V", "bound:Id", "bound:IId", "bound:IIId", "bound:Vd",
];

/// Evaluates an expression by name. `geo`, `T` and `T_lb` read `lambda`;
/// `harm` reads its weight `t` from `lambda` as well.
pub fn evaluate_named(
    name: &str,
    a: &JordanElement,
    b: &JordanElement,
    params: &EntropyParams,
) -> Result<JordanElement> {
    let lambda_any = || EntropyParams::get(params.lambda, "lambda");
    match name {
        "S" => rel_entropy(a, b),
        "T" => tsallis(a, b, lambda_any()?),
        "S_ab" => rel_entropy_ab(a, b, params.alpha()?, params.beta()?),
        "T_lb" => tsallis_lb(a, b, lambda_any()?, params.beta()?),
        "geo" => geometric_mean(a, b, lambda_any()?),
        "ab_geo" => ab_geometric_mean(a, b, EntropyParams::get(params.alpha, "alpha")?, params.beta()?),
        "harm" => harmonic_mean(a, b, lambda_any()?),
        other => match other.strip_prefix("bound:") {
            Some(kind) => bound_expr(kind.parse()?, a, b, params),
            None => Err(JordanError::UnknownId(other.to_string())),
        },
    }
}
