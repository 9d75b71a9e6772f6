//! The spin factor `R ⊕ R^n` with `(s,v) ∘ (t,w) = (st + <v,w>, s w + t v)`.
//!
//! Every element has the two-point spectrum `s ± |v|`, so functional calculus
//! is closed form.

use crate::spectral::Spectrum;

/// Below this `|v|` the vector part is treated as zero.
pub const ZERO_VECTOR: f64 = 1e-300;

pub(crate) fn identity(n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n + 1];
    out[0] = 1.0;
    out
}

pub(crate) fn product(x: &[f64], y: &[f64]) -> Vec<f64> {
    let (s, v) = (x[0], &x[1..]);
    let (t, w) = (y[0], &y[1..]);
    let dot: f64 = v.iter().zip(w).map(|(a, b)| a * b).sum();
    let mut out = Vec::with_capacity(x.len());
    out.push(s * t + dot);
    out.extend(v.iter().zip(w).map(|(vi, wi)| s * wi + t * vi));
    out
}

/// Euclidean norm via a scaled second pass with compensated summation, so
/// that `s - |v|` stays accurate for nearly singular elements.
pub fn vector_norm(v: &[f64]) -> f64 {
    let m = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if m == 0.0 || !m.is_finite() {
        return m;
    }
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for x in v {
        let term = (x / m) * (x / m);
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
    }
    m * (sum + comp).sqrt()
}

/// Spectral data `(s, v, |v|)` of a spin element.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinSpectral {
    pub s: f64,
    pub v: Vec<f64>,
    pub norm_v: f64,
}

impl SpinSpectral {
    pub fn new(x: &[f64]) -> Self {
        let v = x[1..].to_vec();
        let norm_v = vector_norm(&v);
        Self { s: x[0], v, norm_v }
    }

    fn is_scalar(&self) -> bool {
        self.norm_v <= ZERO_VECTOR
    }

    pub fn lower(&self) -> f64 {
        if self.is_scalar() {
            self.s
        } else {
            self.s - self.norm_v
        }
    }

    pub fn upper(&self) -> f64 {
        if self.is_scalar() {
            self.s
        } else {
            self.s + self.norm_v
        }
    }

    pub fn spectrum(&self) -> Spectrum {
        if self.is_scalar() || self.lower() == self.upper() {
            Spectrum::new(vec![self.s], vec![2])
        } else {
            Spectrum::new(vec![self.lower(), self.upper()], vec![1, 1])
        }
    }

    /// `((f(λ+) + f(λ-))/2, (f(λ+) - f(λ-))/(2|v|) v)`, or `(f(s), 0)` when `v = 0`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.v.len() + 1);
        if self.is_scalar() {
            out.push(f(self.s));
            out.extend(std::iter::repeat_n(0.0, self.v.len()));
            return out;
        }
        let hi = f(self.upper());
        let lo = f(self.lower());
        out.push(0.5 * (hi + lo));
        let k = (hi - lo) / (2.0 * self.norm_v);
        out.extend(self.v.iter().map(|vi| k * vi));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_examples() {
        assert_eq!(product(&[1.0, 0.0, 0.0], &[2.5, -1.0, 3.0]), vec![2.5, -1.0, 3.0]);
        assert_eq!(product(&[0.0, 1.0, 0.0], &[0.0, 1.0, 0.0]), vec![1.0, 0.0, 0.0]);
        assert_eq!(product(&[2.0, 1.0, 0.0], &[3.0, 0.0, 1.0]), vec![6.0, 3.0, 2.0]);
    }

    #[test]
    fn spectra() {
        let s = SpinSpectral::new(&[2.0, 1.0, 0.0, 0.0]).spectrum();
        assert_eq!(s.values(), &[1.0, 3.0]);
        let s = SpinSpectral::new(&[5.0, 0.0]).spectrum();
        assert_eq!(s.values(), &[5.0]);
        assert_eq!(s.multiplicities(), &[2]);
        let s = SpinSpectral::new(&[0.0, 3.0, 4.0]).spectrum();
        assert_eq!(s.values(), &[-5.0, 5.0]);
    }

    #[test]
    fn apply_examples() {
        let x = SpinSpectral::new(&[2.0, 1.0, 0.0]);
        assert_eq!(x.apply(|l| l), vec![2.0, 1.0, 0.0]);
        let e1 = SpinSpectral::new(&[0.0, 1.0]);
        assert_eq!(e1.apply(|l| l * l), vec![1.0, 0.0]);
    }

    #[test]
    fn log_with_endpoints_one_and_e_squared() {
        // λ- = 1, λ+ = e²: s = (1 + e²)/2, |v| = (e² - 1)/2.
        let e2 = std::f64::consts::E.powi(2);
        let (s, r) = (0.5 * (1.0 + e2), 0.5 * (e2 - 1.0));
        let v = [0.6 * r, 0.8 * r];
        let x = SpinSpectral::new(&[s, v[0], v[1]]);
        let out = x.apply(f64::ln);
        assert!((out[0] - 1.0).abs() < 1e-14);
        assert!((out[1] - 0.6).abs() < 1e-14);
        assert!((out[2] - 0.8).abs() < 1e-14);
    }

    #[test]
    fn compensated_norm() {
        assert_eq!(vector_norm(&[3.0, 4.0]), 5.0);
        assert_eq!(vector_norm(&[0.0, 0.0]), 0.0);
        let tiny = vector_norm(&[3e-200, 4e-200]);
        assert!((tiny - 5e-200).abs() < 1e-214);
        let huge = vector_norm(&[3e200, 4e200]);
        assert!((huge / 5e200 - 1.0).abs() < 1e-15);
    }
}
