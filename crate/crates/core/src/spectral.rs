//! Backend-dispatched spectral operations shared by every entropy formula.

use serde::{Deserialize, Serialize};

use crate::backend::Decomposition;
use crate::element::JordanElement;
use crate::error::{JordanError, Result};
use crate::function::{ScalarFunction, DOMAIN_GUARD};

/// Distinct eigenvalues (strictly increasing) with multiplicities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    values: Vec<f64>,
    multiplicities: Vec<usize>,
}

impl Spectrum {
    pub fn new(values: Vec<f64>, multiplicities: Vec<usize>) -> Self {
        assert_eq!(values.len(), multiplicities.len());
        debug_assert!(values.windows(2).all(|w| w[0] < w[1]));
        Self { values, multiplicities }
    }

    /// Groups an ascending list: consecutive values within `tol` of the
    /// cluster's first member merge and are replaced by their mean.
    pub fn from_sorted(sorted: &[f64], tol: f64) -> Self {
        let mut values: Vec<f64> = Vec::new();
        let mut multiplicities: Vec<usize> = Vec::new();
        let mut start = 0;
        while start < sorted.len() {
            let mut end = start + 1;
            while end < sorted.len() && sorted[end] - sorted[start] <= tol {
                end += 1;
            }
            let mean = sorted[start..end].iter().sum::<f64>() / (end - start) as f64;
            match values.last() {
                Some(&prev) if mean <= prev => {
                    // Degenerate rounding; fold into the previous cluster.
                    *multiplicities.last_mut().unwrap() += end - start;
                }
                _ => {
                    values.push(mean);
                    multiplicities.push(end - start);
                }
            }
            start = end;
        }
        Self { values, multiplicities }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        *self.values.last().unwrap()
    }

    /// Largest absolute eigenvalue.
    pub fn norm(&self) -> f64 {
        self.min().abs().max(self.max().abs())
    }

    /// Eigenvalues repeated according to multiplicity.
    pub fn expanded(&self) -> Vec<f64> {
        self.values
            .iter()
            .zip(&self.multiplicities)
            .flat_map(|(&v, &m)| std::iter::repeat_n(v, m))
            .collect()
    }
}

pub fn decompose(x: &JordanElement) -> Result<Decomposition> {
    Decomposition::compute(x.algebra(), x.coords())
}

pub fn spectrum(x: &JordanElement) -> Result<Spectrum> {
    Ok(decompose(x)?.spectrum())
}

pub fn min_eigenvalue(x: &JordanElement) -> Result<f64> {
    Ok(decompose(x)?.min_eigenvalue())
}

/// `f(x)` by functional calculus.
pub fn func_calculus(x: &JordanElement, f: &ScalarFunction) -> Result<JordanElement> {
    apply_decomposed(x, &decompose(x)?, f)
}

/// Functional calculus reusing a precomputed decomposition of `x`.
pub fn apply_decomposed(
    x: &JordanElement,
    d: &Decomposition,
    f: &ScalarFunction,
) -> Result<JordanElement> {
    let coords = d.apply(f)?;
    JordanElement::new(*x.algebra(), coords)
}

/// `x^p`. Fractional and negative powers require a positive invertible `x`.
pub fn power(x: &JordanElement, p: f64) -> Result<JordanElement> {
    if p == 0.0 {
        return Ok(JordanElement::identity(*x.algebra()));
    }
    if p == 1.0 {
        return Ok(x.clone());
    }
    func_calculus(x, &ScalarFunction::power(p))
}

/// Jordan inverse.
pub fn inverse(x: &JordanElement) -> Result<JordanElement> {
    let d = decompose(x)?;
    let sp = d.spectrum();
    let min_abs = sp.values().iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
    if !(min_abs > DOMAIN_GUARD * d.norm()) {
        return Err(JordanError::Singular {
            min_abs_eigenvalue: min_abs,
        });
    }
    apply_decomposed(x, &d, &ScalarFunction::reciprocal())
}

/// `min Sp(x) >= -tol (1 + ‖x‖)`.
pub fn is_positive(x: &JordanElement, tol: f64) -> bool {
    match decompose(x) {
        Ok(d) => d.min_eigenvalue() >= -tol * (1.0 + d.norm()),
        Err(_) => false,
    }
}

/// Positive and invertible: the smallest eigenvalue clears the relative guard.
pub fn require_positive_invertible(x: &JordanElement, operand: &str) -> Result<Decomposition> {
    let d = decompose(x)?;
    let min = d.min_eigenvalue();
    if min > DOMAIN_GUARD * d.norm() {
        Ok(d)
    } else {
        Err(JordanError::NotPositive {
            operand: operand.to_string(),
            min_eigenvalue: min,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::{jordan_product, AlgebraDescriptor};

    fn d(v: &[f64]) -> JordanElement {
        JordanElement::sym_diag(v).unwrap()
    }

    #[test]
    fn clustering() {
        let s = Spectrum::from_sorted(&[1.0, 1.0 + 1e-14, 2.0], 1e-12);
        assert_eq!(s.multiplicities(), &[2, 1]);
        assert_eq!(s.expanded().len(), 3);
    }

    #[test]
    fn spectrum_examples() {
        for alg in [AlgebraDescriptor::sym(3), AlgebraDescriptor::spin(2), AlgebraDescriptor::albert()] {
            let sp = spectrum(&JordanElement::identity(alg)).unwrap();
            assert_eq!(sp.values(), &[1.0]);
            assert_eq!(sp.multiplicities().iter().sum::<usize>(), alg.degree());
        }
        assert_eq!(spectrum(&d(&[1.0, 2.0])).unwrap().values(), &[1.0, 2.0]);
        let s = JordanElement::spin(2.0, &[1.0, 0.0]).unwrap();
        assert_eq!(spectrum(&s).unwrap().values(), &[1.0, 3.0]);
    }

    #[test]
    fn calculus_examples() {
        let r = func_calculus(&d(&[4.0, 9.0]), &ScalarFunction::sqrt()).unwrap();
        assert!(r.approx_eq(&d(&[2.0, 3.0]), 1e-15));
        let e = std::f64::consts::E;
        let r = func_calculus(&d(&[e, e]), &ScalarFunction::log()).unwrap();
        assert!(r.approx_eq(&d(&[1.0, 1.0]), 1e-15));
        let m = JordanElement::sym_from_rows(&[vec![2.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let inv = JordanElement::sym_from_rows(&[vec![1.0, -1.0], vec![-1.0, 2.0]]).unwrap();
        assert!(func_calculus(&m, &ScalarFunction::reciprocal()).unwrap().approx_eq(&inv, 1e-13));
        assert!(power(&m, -1.0).unwrap().approx_eq(&inv, 1e-13));
        assert!(inverse(&m).unwrap().approx_eq(&inv, 1e-13));
        let one = func_calculus(&m, &ScalarFunction::constant(1.0)).unwrap();
        assert!(one.approx_eq(&JordanElement::identity(*m.algebra()), 1e-15));
    }

    #[test]
    fn domain_errors_name_the_eigenvalue() {
        let err = func_calculus(&d(&[-1.0, 2.0]), &ScalarFunction::log()).unwrap_err();
        match err {
            JordanError::Domain { function, eigenvalue, .. } => {
                assert_eq!(function, "log");
                assert_eq!(eigenvalue, -1.0);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(power(&d(&[0.0, 1.0]), 0.5).is_err());
        // integer powers are fine on any element
        assert!(power(&d(&[-2.0, 1.0]), 2.0).unwrap().approx_eq(&d(&[4.0, 1.0]), 0.0));
    }

    #[test]
    fn inverse_examples() {
        let i = JordanElement::identity(AlgebraDescriptor::sym(2));
        assert_eq!(inverse(&i).unwrap(), i);
        assert!(inverse(&d(&[2.0, 4.0])).unwrap().approx_eq(&d(&[0.5, 0.25]), 0.0));
        assert!(matches!(
            inverse(&d(&[0.0, 1.0])),
            Err(JordanError::Singular { .. })
        ));
        let x = d(&[3.0, -0.5]);
        let xi = inverse(&x).unwrap();
        assert!(jordan_product(&x, &xi).unwrap().approx_eq(&i, 1e-15));
    }

    #[test]
    fn positivity() {
        assert!(is_positive(&JordanElement::identity(AlgebraDescriptor::albert()), 0.0));
        assert!(!is_positive(&d(&[1.0, -1.0]), 1e-12));
        let g = JordanElement::sym_from_rows(&[vec![0.3, -2.0], vec![-2.0, 0.1]]).unwrap();
        assert!(is_positive(&g.square(), 1e-12));
    }
}
