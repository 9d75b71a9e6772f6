//! Concrete Jordan algebras behind [`JordanElement`](crate::element::JordanElement).
//!
//! Each backend supplies the unit, the Jordan product on canonical coordinates
//! and a spectral decomposition able to evaluate functional calculus.

pub mod albert;
pub mod octonion;
pub mod spin;
pub mod sym;

use crate::element::{AlgebraDescriptor, AlgebraKind};
use crate::error::Result;
use crate::function::ScalarFunction;
use crate::spectral::Spectrum;

pub(crate) fn identity_coords(alg: &AlgebraDescriptor) -> Vec<f64> {
    match alg.kind {
        AlgebraKind::SymMatrix => sym::identity(alg.dim),
        AlgebraKind::SpinFactor => spin::identity(alg.dim),
        AlgebraKind::Albert => albert::identity(),
    }
}

pub(crate) fn product(alg: &AlgebraDescriptor, x: &[f64], y: &[f64]) -> Vec<f64> {
    match alg.kind {
        AlgebraKind::SymMatrix => sym::product(alg.dim, x, y),
        AlgebraKind::SpinFactor => spin::product(x, y),
        AlgebraKind::Albert => albert::product(x, y),
    }
}

/// A cheap upper bound on the spectral norm (Frobenius-type norm).
pub(crate) fn frobenius_bound(alg: &AlgebraDescriptor, x: &[f64]) -> f64 {
    match alg.kind {
        AlgebraKind::SymMatrix => {
            let d = sym::unpack(alg.dim, x);
            d.iter().map(|v| v * v).sum::<f64>().sqrt()
        }
        AlgebraKind::SpinFactor => x[0].abs() + spin::vector_norm(&x[1..]),
        AlgebraKind::Albert => albert::trace_form(x).sqrt(),
    }
}

/// Spectral data of one element, reusable for several functions.
#[derive(Debug, Clone)]
pub enum Decomposition {
    Sym(sym::EigenFrame),
    Spin(spin::SpinSpectral),
    Albert(albert::AlbertSpectral),
}

impl Decomposition {
    pub fn compute(alg: &AlgebraDescriptor, x: &[f64]) -> Result<Self> {
        Ok(match alg.kind {
            AlgebraKind::SymMatrix => Decomposition::Sym(sym::eigen(alg.dim, x)?),
            AlgebraKind::SpinFactor => Decomposition::Spin(spin::SpinSpectral::new(x)),
            AlgebraKind::Albert => Decomposition::Albert(albert::AlbertSpectral::new(x)?),
        })
    }

    pub fn spectrum(&self) -> Spectrum {
        match self {
            Decomposition::Sym(frame) => frame.spectrum(),
            Decomposition::Spin(s) => s.spectrum(),
            Decomposition::Albert(a) => a.spectrum().clone(),
        }
    }

    /// Smallest eigenvalue before any clustering.
    pub fn min_eigenvalue(&self) -> f64 {
        match self {
            Decomposition::Sym(frame) => frame.eigenvalues[0],
            Decomposition::Spin(s) => s.lower(),
            Decomposition::Albert(a) => a.spectrum().min(),
        }
    }

    /// Largest absolute eigenvalue.
    pub fn norm(&self) -> f64 {
        match self {
            Decomposition::Sym(frame) => frame
                .eigenvalues
                .iter()
                .fold(0.0f64, |m, v| m.max(v.abs())),
            Decomposition::Spin(s) => s.lower().abs().max(s.upper().abs()),
            Decomposition::Albert(a) => a.spectrum().norm(),
        }
    }

    /// Functional calculus; checks every eigenvalue against `f`'s domain.
    pub fn apply(&self, f: &ScalarFunction) -> Result<Vec<f64>> {
        let scale = self.norm();
        match self {
            Decomposition::Sym(frame) => {
                for &l in &frame.eigenvalues {
                    f.domain().check(l, scale, f.label())?;
                }
                Ok(frame.apply(|l| f.eval(l)))
            }
            Decomposition::Spin(s) => {
                f.domain().check(s.lower(), scale, f.label())?;
                f.domain().check(s.upper(), scale, f.label())?;
                Ok(s.apply(|l| f.eval(l)))
            }
            Decomposition::Albert(a) => {
                for &l in a.spectrum().values() {
                    f.domain().check(l, scale, f.label())?;
                }
                a.apply(|l| f.eval(l))
            }
        }
    }
}
