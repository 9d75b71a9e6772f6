//! Elements of the concrete Jordan algebras and the algebra-agnostic
//! operations on them.
//!
//! Coordinate conventions (the canonical order used everywhere, including the
//! JSON encoding):
//!
//! * `sym`: upper triangle of the symmetric `n x n` matrix, row-major, i.e.
//!   `x00, x01, .., x0(n-1), x11, x12, .., x(n-1)(n-1)`; `n(n+1)/2` values.
//! * `spin`: `[s, v1, .., vn]` for the element `s + v` of `R + R^n`.
//! * `albert`: `[a, b, c, x1(8), x2(8), x3(8)]` for the Hermitian octonion
//!   matrix `[[a, x3, ~x2], [~x3, b, x1], [x2, ~x1, c]]` (`~` is conjugation).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::backend;
use crate::error::{JordanError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AlgebraKind {
    #[serde(rename = "sym")]
    SymMatrix,
    #[serde(rename = "spin")]
    SpinFactor,
    #[serde(rename = "albert")]
    Albert,
}

impl AlgebraKind {
    pub fn name(self) -> &'static str {
        match self {
            AlgebraKind::SymMatrix => "sym",
            AlgebraKind::SpinFactor => "spin",
            AlgebraKind::Albert => "albert",
        }
    }

    /// Whether the algebra is special (embeds in an associative algebra).
    pub fn is_special(self) -> bool {
        !matches!(self, AlgebraKind::Albert)
    }
}

impl std::str::FromStr for AlgebraKind {
    type Err = JordanError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sym" => Ok(AlgebraKind::SymMatrix),
            "spin" => Ok(AlgebraKind::SpinFactor),
            "albert" => Ok(AlgebraKind::Albert),
            other => Err(JordanError::Parse(format!("unknown algebra `{other}`"))),
        }
    }
}

/// Number of real coordinates of an Albert element.
pub const ALBERT_DIM: usize = 27;

/// Which algebra an element lives in. `dim` is the matrix side for `sym`, the
/// vector length for `spin` and always 27 for `albert`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AlgebraDescriptor {
    #[serde(rename = "algebra")]
    pub kind: AlgebraKind,
    pub dim: usize,
}

impl AlgebraDescriptor {
    pub fn new(kind: AlgebraKind, dim: usize) -> Result<Self> {
        let ok = match kind {
            AlgebraKind::Albert => dim == ALBERT_DIM,
            _ => dim >= 1,
        };
        if ok {
            Ok(Self { kind, dim })
        } else {
            Err(JordanError::InvalidElement(format!(
                "bad dimension {dim} for {} algebra",
                kind.name()
            )))
        }
    }

    pub fn sym(n: usize) -> Self {
        assert!(n >= 1, "matrix side must be positive");
        Self { kind: AlgebraKind::SymMatrix, dim: n }
    }

    pub fn spin(n: usize) -> Self {
        assert!(n >= 1, "spin factor needs a nonempty vector part");
        Self { kind: AlgebraKind::SpinFactor, dim: n }
    }

    pub fn albert() -> Self {
        Self { kind: AlgebraKind::Albert, dim: ALBERT_DIM }
    }

    pub fn coord_len(&self) -> usize {
        match self.kind {
            AlgebraKind::SymMatrix => self.dim * (self.dim + 1) / 2,
            AlgebraKind::SpinFactor => self.dim + 1,
            AlgebraKind::Albert => ALBERT_DIM,
        }
    }

    /// Rank of the algebra: the number of eigenvalues counted with multiplicity.
    pub fn degree(&self) -> usize {
        match self.kind {
            AlgebraKind::SymMatrix => self.dim,
            AlgebraKind::SpinFactor => 2,
            AlgebraKind::Albert => 3,
        }
    }

    /// Short label such as `sym4`, `spin2` or `albert`.
    pub fn label(&self) -> String {
        match self.kind {
            AlgebraKind::Albert => "albert".to_string(),
            kind => format!("{}{}", kind.name(), self.dim),
        }
    }
}

impl fmt::Display for AlgebraDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// A value in one of the concrete Jordan algebras.
#[derive(Debug, Clone, PartialEq)]
pub struct JordanElement {
    algebra: AlgebraDescriptor,
    coords: Vec<f64>,
}

impl JordanElement {
    pub fn new(algebra: AlgebraDescriptor, coords: Vec<f64>) -> Result<Self> {
        if coords.len() != algebra.coord_len() {
            return Err(JordanError::InvalidElement(format!(
                "{} expects {} coordinates, got {}",
                algebra,
                algebra.coord_len(),
                coords.len()
            )));
        }
        if let Some(i) = coords.iter().position(|c| !c.is_finite()) {
            return Err(JordanError::InvalidElement(format!(
                "coordinate {i} is not finite ({})",
                coords[i]
            )));
        }
        Ok(Self { algebra, coords })
    }

    /// Builds an element from coordinates known to be valid (produced by a
    /// backend). Finiteness is still checked in debug builds.
    pub(crate) fn from_parts(algebra: AlgebraDescriptor, coords: Vec<f64>) -> Self {
        debug_assert_eq!(coords.len(), algebra.coord_len());
        Self { algebra, coords }
    }

    pub fn zero(algebra: AlgebraDescriptor) -> Self {
        Self::from_parts(algebra, vec![0.0; algebra.coord_len()])
    }

    pub fn identity(algebra: AlgebraDescriptor) -> Self {
        Self::from_parts(algebra, backend::identity_coords(&algebra))
    }

    /// `c * I`.
    pub fn scalar(algebra: AlgebraDescriptor, c: f64) -> Self {
        Self::identity(algebra).scale(c)
    }

    /// Diagonal symmetric matrix.
    pub fn sym_diag(diag: &[f64]) -> Result<Self> {
        let n = diag.len();
        let alg = AlgebraDescriptor::new(AlgebraKind::SymMatrix, n)?;
        let mut dense = vec![0.0; n * n];
        for (i, d) in diag.iter().enumerate() {
            dense[i * n + i] = *d;
        }
        Self::new(alg, crate::backend::sym::pack(n, &dense))
    }

    /// Symmetric matrix from dense row-major rows; rejects asymmetry beyond
    /// `1e-12` relative to the largest entry.
    pub fn sym_from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        crate::backend::sym::from_rows(rows)
    }

    /// Spin element `s + v`.
    pub fn spin(s: f64, v: &[f64]) -> Result<Self> {
        let alg = AlgebraDescriptor::new(AlgebraKind::SpinFactor, v.len())?;
        let mut coords = Vec::with_capacity(v.len() + 1);
        coords.push(s);
        coords.extend_from_slice(v);
        Self::new(alg, coords)
    }

    pub fn algebra(&self) -> &AlgebraDescriptor {
        &self.algebra
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::from_parts(self.algebra, self.coords.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        affine(self, other, 1.0, 1.0)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        affine(self, other, 1.0, -1.0)
    }

    /// `self + c I`.
    pub fn shift(&self, c: f64) -> Self {
        let id = backend::identity_coords(&self.algebra);
        Self::from_parts(
            self.algebra,
            self.coords.iter().zip(id).map(|(x, e)| x + c * e).collect(),
        )
    }

    pub fn square(&self) -> Self {
        jordan_product(self, self).expect("an element is compatible with itself")
    }

    /// Coordinatewise comparison with relative tolerance; test helper, never
    /// used by the algorithms.
    pub fn approx_eq(&self, other: &Self, rel: f64) -> bool {
        if self.algebra != other.algebra {
            return false;
        }
        let scale = self
            .coords
            .iter()
            .chain(other.coords.iter())
            .fold(0.0f64, |m, c| m.max(c.abs()))
            .max(1.0);
        self.coords
            .iter()
            .zip(&other.coords)
            .all(|(a, b)| (a - b).abs() <= rel * scale)
    }

    /// Largest coordinate difference; test helper.
    pub fn max_coord_diff(&self, other: &Self) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
    }
}

fn check_same(x: &JordanElement, y: &JordanElement) -> Result<()> {
    if x.algebra == y.algebra {
        Ok(())
    } else {
        Err(JordanError::IncompatibleAlgebras {
            left: x.algebra,
            right: y.algebra,
        })
    }
}

/// The Jordan product `x ∘ y`.
pub fn jordan_product(x: &JordanElement, y: &JordanElement) -> Result<JordanElement> {
    check_same(x, y)?;
    let coords = backend::product(&x.algebra, &x.coords, &y.coords);
    Ok(JordanElement::from_parts(x.algebra, coords))
}

/// The quadratic map `U_a(b) = {a b a} = 2 (a ∘ b) ∘ a - a² ∘ b`.
pub fn quad_map(a: &JordanElement, b: &JordanElement) -> Result<JordanElement> {
    check_same(a, b)?;
    let alg = &a.algebra;
    let ab = backend::product(alg, &a.coords, &b.coords);
    let ab_a = backend::product(alg, &ab, &a.coords);
    let aa = backend::product(alg, &a.coords, &a.coords);
    let aa_b = backend::product(alg, &aa, &b.coords);
    let coords = ab_a.iter().zip(&aa_b).map(|(p, q)| 2.0 * p - q).collect();
    Ok(JordanElement::from_parts(*alg, coords))
}

/// `s x + t y`.
pub fn affine(x: &JordanElement, y: &JordanElement, s: f64, t: f64) -> Result<JordanElement> {
    check_same(x, y)?;
    if !s.is_finite() || !t.is_finite() {
        return Err(JordanError::Parameter(format!(
            "affine combination needs finite scalars, got {s} and {t}"
        )));
    }
    let coords = x
        .coords
        .iter()
        .zip(&y.coords)
        .map(|(a, b)| s * a + t * b)
        .collect();
    Ok(JordanElement::from_parts(x.algebra, coords))
}

/// The JB norm: largest absolute eigenvalue.
pub fn jb_norm(x: &JordanElement) -> f64 {
    match crate::spectral::spectrum(x) {
        Ok(sp) => sp.values().iter().fold(0.0f64, |m, v| m.max(v.abs())),
        // The only failure is an internal consistency error on the Albert
        // backend; fall back to the Frobenius-type bound.
        Err(_) => backend::frobenius_bound(&x.algebra, &x.coords),
    }
}

/// JSON encoding `{"algebra": "sym"|"spin"|"albert", "dim": n, "coords": [...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ElementJson {
    pub algebra: AlgebraKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    pub coords: Vec<f64>,
}

impl From<&JordanElement> for ElementJson {
    fn from(x: &JordanElement) -> Self {
        ElementJson {
            algebra: x.algebra.kind,
            dim: match x.algebra.kind {
                AlgebraKind::Albert => None,
                _ => Some(x.algebra.dim),
            },
            coords: x.coords.clone(),
        }
    }
}

impl TryFrom<ElementJson> for JordanElement {
    type Error = JordanError;

    fn try_from(j: ElementJson) -> Result<Self> {
        let dim = match j.algebra {
            AlgebraKind::Albert => j.dim.unwrap_or(ALBERT_DIM),
            _ => j
                .dim
                .ok_or_else(|| JordanError::Parse("missing `dim`".into()))?,
        };
        JordanElement::new(AlgebraDescriptor::new(j.algebra, dim)?, j.coords)
    }
}

impl Serialize for JordanElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ElementJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for JordanElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = ElementJson::deserialize(d)?;
        JordanElement::try_from(j).map_err(serde::de::Error::custom)
    }
}

/// Parses either the element encoding or a dense `{"matrix": [[..], ..]}`.
pub fn parse_element_json(text: &str) -> Result<JordanElement> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| JordanError::Parse(e.to_string()))?;
    if let Some(rows) = value.get("matrix") {
        let rows: Vec<Vec<f64>> = serde_json::from_value(rows.clone())
            .map_err(|e| JordanError::Parse(format!("`matrix`: {e}")))?;
        return JordanElement::sym_from_rows(&rows);
    }
    let j: ElementJson =
        serde_json::from_value(value).map_err(|e| JordanError::Parse(e.to_string()))?;
    JordanElement::try_from(j)
}
