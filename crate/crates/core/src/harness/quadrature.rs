//! Gauss quadrature for the integral representations of the entropies and
//! the weighted geometric mean.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::backend::sym::jacobi_dense;
use crate::element::{affine, JordanElement};
use crate::error::{JordanError, Result};
use crate::means::harmonic_mean;

pub const MIN_NODES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum QuadratureRule {
    /// Plain Legendre nodes; any endpoint weight stays in the integrand.
    GaussLegendre,
    /// The weight `t^{λ-1}(1-t)^{-λ}` is absorbed into the rule.
    GaussJacobi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub nodes: usize,
    pub rule: QuadratureRule,
}

impl QuadratureConfig {
    pub fn new(nodes: usize, rule: QuadratureRule) -> Result<Self> {
        if nodes < MIN_NODES {
            return Err(JordanError::Parameter(format!(
                "quadrature needs at least {MIN_NODES} nodes, got {nodes}"
            )));
        }
        Ok(Self { nodes, rule })
    }

    pub fn jacobi(nodes: usize) -> Result<Self> {
        Self::new(nodes, QuadratureRule::GaussJacobi)
    }

    pub fn legendre(nodes: usize) -> Result<Self> {
        Self::new(nodes, QuadratureRule::GaussLegendre)
    }
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            nodes: 128,
            rule: QuadratureRule::GaussJacobi,
        }
    }
}

/// Nodes and weights on `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

type Key = (usize, u64, u64);

fn cache() -> &'static Mutex<HashMap<Key, Arc<Rule>>> {
    static CACHE: OnceLock<Mutex<HashMap<Key, Arc<Rule>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Gauss rule for `∫₀¹ t^b (1-t)^a g(t) dt`, `a, b > -1`.
pub fn gauss_jacobi(n: usize, a: f64, b: f64) -> Result<Arc<Rule>> {
    if n == 0 || !(a > -1.0 && b > -1.0) {
        return Err(JordanError::Parameter(format!(
            "Gauss-Jacobi needs n >= 1 and exponents > -1, got n={n}, a={a}, b={b}"
        )));
    }
    let key = (n, a.to_bits(), b.to_bits());
    if let Some(r) = cache().lock().unwrap().get(&key) {
        return Ok(r.clone());
    }
    let rule = Arc::new(golub_welsch(n, a, b)?);
    cache().lock().unwrap().insert(key, rule.clone());
    Ok(rule)
}

pub fn gauss_legendre(n: usize) -> Result<Arc<Rule>> {
    gauss_jacobi(n, 0.0, 0.0)
}

/// Eigen-decomposition of the Jacobi matrix of the monic polynomials
/// orthogonal for `(1-u)^a (1+u)^b` on `[-1, 1]`, mapped to `[0, 1]`.
fn golub_welsch(n: usize, a: f64, b: f64) -> Result<Rule> {
    let ab = a + b;
    let diag: Vec<f64> = (0..n)
        .map(|k| {
            if k == 0 {
                (b - a) / (ab + 2.0)
            } else {
                let s = 2.0 * k as f64 + ab;
                (b * b - a * a) / (s * (s + 2.0))
            }
        })
        .collect();
    let off: Vec<f64> = (1..n)
        .map(|k| {
            let beta = if k == 1 {
                4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab).powi(2) * (3.0 + ab))
            } else {
                let k = k as f64;
                let s = 2.0 * k + ab;
                4.0 * k * (k + a) * (k + b) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0))
            };
            beta.sqrt()
        })
        .collect();

    let mut m = vec![0.0; n * n];
    for i in 0..n {
        m[i * n + i] = diag[i];
        if i + 1 < n {
            m[i * n + i + 1] = off[i];
            m[(i + 1) * n + i] = off[i];
        }
    }
    let (values, frame) = jacobi_dense(n, &mut m)?;

    // ∫ (1-u)^a (1+u)^b du over [-1, 1]
    let ln_mu0 = (ab + 1.0) * 2f64.ln() + ln_gamma(a + 1.0) + ln_gamma(b + 1.0) - ln_gamma(ab + 2.0);
    // t = (1+u)/2 contributes 2^{-(a+b+1)}
    let mu = (ln_mu0 - (ab + 1.0) * 2f64.ln()).exp();
    let nodes = values.iter().map(|u| 0.5 * (1.0 + u)).collect();
    let weights = (0..n).map(|k| mu * frame[k] * frame[k]).collect();
    Ok(Rule { nodes, weights })
}

fn check_lambda(lam: f64) -> Result<()> {
    if lam > 0.0 && lam < 1.0 {
        Ok(())
    } else {
        Err(JordanError::Parameter(format!("lambda must lie in (0, 1), got {lam}")))
    }
}

/// `∫₀¹ t^{λ-1}(1-t)^{-λ} g(t) dt` for the chosen rule.
fn weighted_sum(
    lam: f64,
    q: &QuadratureConfig,
    mut g: impl FnMut(f64) -> Result<JordanElement>,
) -> Result<JordanElement> {
    let (rule, fold_weight) = match q.rule {
        QuadratureRule::GaussJacobi => (gauss_jacobi(q.nodes, -lam, lam - 1.0)?, false),
        QuadratureRule::GaussLegendre => (gauss_legendre(q.nodes)?, true),
    };
    let mut acc: Option<JordanElement> = None;
    for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
        let w = if fold_weight {
            w * t.powf(lam - 1.0) * (1.0 - t).powf(-lam)
        } else {
            w
        };
        let term = g(t)?;
        acc = Some(match acc {
            None => term.scale(w),
            Some(s) => affine(&s, &term, 1.0, w)?,
        });
    }
    Ok(acc.expect("at least one node"))
}

/// Weight-only integral `∫₀¹ t^{λ-1}(1-t)^{-λ} dt`, which equals `π / sin(λπ)`.
pub fn weight_integral(lam: f64, q: &QuadratureConfig) -> Result<f64> {
    check_lambda(lam)?;
    let rule = match q.rule {
        QuadratureRule::GaussJacobi => gauss_jacobi(q.nodes, -lam, lam - 1.0)?,
        QuadratureRule::GaussLegendre => {
            let r = gauss_legendre(q.nodes)?;
            return Ok(r
                .nodes
                .iter()
                .zip(&r.weights)
                .map(|(t, w)| w * t.powf(lam - 1.0) * (1.0 - t).powf(-lam))
                .sum());
        }
    };
    Ok(rule.weights.iter().sum())
}

/// `S(A|B) = ∫₀¹ (A !_t B - A)/t dt` by Gauss–Legendre. The weight is
/// trivial, so the rule field does not matter here.
pub fn quad_integral_s(a: &JordanElement, b: &JordanElement, q: &QuadratureConfig) -> Result<JordanElement> {
    let rule = gauss_legendre(q.nodes)?;
    let mut acc = JordanElement::zero(*a.algebra());
    for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
        let h = harmonic_mean(a, b, t)?;
        acc = affine(&acc, &h.sub(a)?, 1.0, w / t)?;
    }
    Ok(acc)
}

/// `T_λ(A|B) = sin(λπ)/(λπ) ∫₀¹ t^{λ-1}(1-t)^{-λ} (A !_t B - A) dt`.
pub fn quad_integral_t(
    a: &JordanElement,
    b: &JordanElement,
    lam: f64,
    q: &QuadratureConfig,
) -> Result<JordanElement> {
    check_lambda(lam)?;
    let sum = weighted_sum(lam, q, |t| harmonic_mean(a, b, t)?.sub(a))?;
    Ok(sum.scale((lam * PI).sin() / (lam * PI)))
}

/// `A #_λ B = sin(λπ)/π ∫₀¹ t^{λ-1}(1-t)^{-λ} A !_t B dt`.
pub fn quad_integral_geo(
    a: &JordanElement,
    b: &JordanElement,
    lam: f64,
    q: &QuadratureConfig,
) -> Result<JordanElement> {
    check_lambda(lam)?;
    let sum = weighted_sum(lam, q, |t| harmonic_mean(a, b, t))?;
    Ok(sum.scale((lam * PI).sin() / PI))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar(v: f64) -> JordanElement {
        JordanElement::sym_diag(&[v]).unwrap()
    }

    #[test]
    fn legendre_integrates_polynomials() {
        let r = gauss_legendre(8).unwrap();
        for p in 0..16 {
            let s: f64 = r.nodes.iter().zip(&r.weights).map(|(t, w)| w * t.powi(p)).sum();
            assert!((s - 1.0 / (p as f64 + 1.0)).abs() < 1e-14, "degree {p}: {s}");
        }
    }

    #[test]
    fn jacobi_moments() {
        // ∫₀¹ t^b (1-t)^a t dt = B(b+2, a+1)
        let (a, b) = (-0.3, -0.7);
        let r = gauss_jacobi(16, a, b).unwrap();
        let s: f64 = r.nodes.iter().zip(&r.weights).map(|(t, w)| w * t).sum();
        let exact = (ln_gamma(b + 2.0) + ln_gamma(a + 1.0) - ln_gamma(a + b + 3.0)).exp();
        assert!((s - exact).abs() < 1e-13, "{s} vs {exact}");
        assert!(r.nodes.iter().all(|&t| t > 0.0 && t < 1.0));
    }

    #[test]
    fn weight_only_integral() {
        let q = QuadratureConfig::default();
        for lam in [0.1, 0.5, 0.9] {
            let w = weight_integral(lam, &q).unwrap();
            let exact = PI / (lam * PI).sin();
            assert!((w - exact).abs() <= 1e-8 * exact, "lambda {lam}: {w} vs {exact}");
        }
        assert!((weight_integral(0.5, &q).unwrap() - PI).abs() < 1e-8);
    }

    #[test]
    fn scalar_examples() {
        let q64 = QuadratureConfig::legendre(64).unwrap();
        let s = quad_integral_s(&scalar(1.0), &scalar(2.0), &q64).unwrap();
        assert!((s.coords()[0] - 2f64.ln()).abs() < 1e-6);
        let q = QuadratureConfig::default();
        let t = quad_integral_t(&scalar(1.0), &scalar(4.0), 0.5, &q).unwrap();
        assert!((t.coords()[0] - 2.0).abs() < 1e-6);
        let g = quad_integral_geo(&scalar(1.0), &scalar(9.0), 0.5, &q).unwrap();
        assert!((g.coords()[0] - 3.0).abs() < 1e-6);
    }

    #[test]
    fn equal_operands() {
        let a = JordanElement::sym_from_rows(&[vec![2.0, 0.5], vec![0.5, 1.0]]).unwrap();
        let q = QuadratureConfig::default();
        let zero = JordanElement::zero(*a.algebra());
        assert!(quad_integral_s(&a, &a, &q).unwrap().approx_eq(&zero, 1e-14));
        assert!(quad_integral_t(&a, &a, 0.3, &q).unwrap().approx_eq(&zero, 1e-14));
        assert!(quad_integral_geo(&a, &a, 0.3, &q).unwrap().approx_eq(&a, 1e-8));
    }

    #[test]
    fn parameter_errors() {
        assert!(QuadratureConfig::new(4, QuadratureRule::GaussLegendre).is_err());
        let q = QuadratureConfig::default();
        let one = scalar(1.0);
        assert!(quad_integral_t(&one, &one, 1.0, &q).is_err());
        assert!(quad_integral_geo(&one, &one, 0.0, &q).is_err());
    }
}
