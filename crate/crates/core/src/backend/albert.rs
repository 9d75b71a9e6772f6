//! The exceptional Jordan algebra `H₃(O)` of 3x3 Hermitian octonion matrices.
//!
//! An element `[a, b, c, x1, x2, x3]` stands for
//!
//! ```text
//! [[ a,   x3,  ~x2 ],
//!  [ ~x3, b,   x1  ],
//!  [ x2,  ~x1, c   ]]
//! ```
//!
//! The product is the symmetrized formal matrix product. Spectral theory is
//! degree three: eigenvalues are the roots of the generic minimal polynomial
//! `λ³ - Tλ² + Sλ - N`, and `f(x)` is the interpolation polynomial of `f` on
//! the distinct eigenvalues evaluated with Jordan powers.

use super::octonion::Octonion;
use crate::error::{JordanError, Result};
use crate::spectral::Spectrum;

/// Relative Cayley–Hamilton residual accepted by [`char_cubic`].
pub const CAYLEY_HAMILTON_TOL: f64 = 1e-9;
/// Eigenvalues closer than this (times `1 + ‖x‖`) collapse to one node.
pub const CLUSTER_TOL: f64 = 1e-8;
/// Accepted deviation of `Sp(f(x))` from `f(Sp(x))`, relative to `1 + max|f|`.
pub const APPLY_CONSISTENCY_TOL: f64 = 1e-7;
/// Normalized discriminant slack: `cos 3φ` may exceed one by this much.
const DISCRIMINANT_SLACK: f64 = 1e-9;

type Mat = [[Octonion; 3]; 3];

pub(crate) fn identity() -> Vec<f64> {
    let mut out = vec![0.0; 27];
    out[..3].fill(1.0);
    out
}

fn off(x: &[f64], k: usize) -> Octonion {
    Octonion::from_slice(&x[3 + 8 * k..3 + 8 * (k + 1)])
}

pub(crate) fn to_matrix(x: &[f64]) -> Mat {
    let (x1, x2, x3) = (off(x, 0), off(x, 1), off(x, 2));
    [
        [Octonion::real(x[0]), x3, x2.conj()],
        [x3.conj(), Octonion::real(x[1]), x1],
        [x2, x1.conj(), Octonion::real(x[2])],
    ]
}

fn matmul(x: &Mat, y: &Mat) -> Mat {
    let mut out = [[Octonion::ZERO; 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            *entry = x[i][0] * y[0][j] + x[i][1] * y[1][j] + x[i][2] * y[2][j];
        }
    }
    out
}

/// `XY + YX` as a full octonion matrix.
pub(crate) fn symmetrized(x: &[f64], y: &[f64]) -> Mat {
    let (mx, my) = (to_matrix(x), to_matrix(y));
    let xy = matmul(&mx, &my);
    let yx = matmul(&my, &mx);
    let mut out = [[Octonion::ZERO; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = xy[i][j] + yx[i][j];
        }
    }
    out
}

/// Largest violation of the Hermitian pattern (real diagonal, conjugate
/// symmetric off-diagonal).
pub(crate) fn hermitian_defect(m: &Mat) -> f64 {
    let mut defect = 0.0f64;
    for i in 0..3 {
        for k in 1..8 {
            defect = defect.max(m[i][i].0[k].abs());
        }
        for j in (i + 1)..3 {
            let d = m[i][j] - m[j][i].conj();
            defect = defect.max(d.0.iter().fold(0.0f64, |a, v| a.max(v.abs())));
        }
    }
    defect
}

pub(crate) fn product(x: &[f64], y: &[f64]) -> Vec<f64> {
    let m = symmetrized(x, y);
    debug_assert!(
        hermitian_defect(&m)
            <= 1e-12 * (1.0 + trace_form(x).sqrt()) * (1.0 + trace_form(y).sqrt()),
        "Albert product left the Hermitian pattern"
    );
    let mut out = Vec::with_capacity(27);
    out.push(0.5 * m[0][0].re());
    out.push(0.5 * m[1][1].re());
    out.push(0.5 * m[2][2].re());
    for o in [m[1][2], m[2][0], m[0][1]] {
        out.extend(o.0.iter().map(|v| 0.5 * v));
    }
    out
}

/// `tr(x ∘ x) = a² + b² + c² + 2(n(x1) + n(x2) + n(x3))`.
pub(crate) fn trace_form(x: &[f64]) -> f64 {
    let diag = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    let offd: f64 = x[3..].iter().map(|v| v * v).sum();
    diag + 2.0 * offd
}

/// Freudenthal determinant
/// `abc - a n(x1) - b n(x2) - c n(x3) + 2 Re(x1 x2 x3)`.
pub fn determinant(x: &[f64]) -> f64 {
    let (a, b, c) = (x[0], x[1], x[2]);
    let (x1, x2, x3) = (off(x, 0), off(x, 1), off(x, 2));
    a * b * c - a * x1.norm_sq() - b * x2.norm_sq() - c * x3.norm_sq()
        + 2.0 * ((x1 * x2) * x3).re()
}

/// Coefficients of the generic minimal polynomial `λ³ - Tλ² + Sλ - N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharCubic {
    pub trace: f64,
    pub quadratic: f64,
    pub determinant: f64,
}

fn combine(terms: &[(f64, &[f64])]) -> Vec<f64> {
    let mut out = vec![0.0; 27];
    for (s, v) in terms {
        for (o, x) in out.iter_mut().zip(v.iter()) {
            *o += s * x;
        }
    }
    out
}

/// Largest coordinate of `x³ - T x² + S x - N I` (Jordan powers).
pub fn cayley_hamilton_residual(x: &[f64], cubic: &CharCubic) -> f64 {
    let x2 = product(x, x);
    let x3 = product(&x2, x);
    let id = identity();
    let r = combine(&[
        (1.0, &x3),
        (-cubic.trace, &x2),
        (cubic.quadratic, x),
        (-cubic.determinant, &id),
    ]);
    r.iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

/// `(T, S, N)` with the Cayley–Hamilton identity verified.
pub fn char_cubic(x: &[f64]) -> Result<CharCubic> {
    let trace = x[0] + x[1] + x[2];
    let quadratic = 0.5 * (trace * trace - trace_form(x));
    let cubic = CharCubic {
        trace,
        quadratic,
        determinant: determinant(x),
    };
    let scale = 1.0 + trace_form(x).sqrt();
    let residual = cayley_hamilton_residual(x, &cubic);
    if residual > CAYLEY_HAMILTON_TOL * scale.powi(3) {
        return Err(JordanError::Consistency(format!(
            "Cayley-Hamilton residual {residual:e} exceeds {:e}",
            CAYLEY_HAMILTON_TOL * scale.powi(3)
        )));
    }
    Ok(cubic)
}

/// The three real roots (ascending) of the characteristic cubic, computed
/// from the traceless part so that clustered roots keep their accuracy.
pub fn roots(x: &[f64]) -> Result<[f64; 3]> {
    char_cubic(x)?;
    let mut shift = 0.0;
    let mut x0 = x.to_vec();
    // Re-center until the rounding left in the trace is negligible.
    for _ in 0..3 {
        let s = (x0[0] + x0[1] + x0[2]) / 3.0;
        if s == 0.0 {
            break;
        }
        shift += s;
        for d in &mut x0[..3] {
            *d -= s;
        }
    }
    // Traceless part: t³ + p t + q with p = -tr(x0²)/2 <= 0, q = -N(x0).
    let p = -0.5 * trace_form(&x0);
    let q = -determinant(&x0);
    if p == 0.0 {
        return Ok([shift; 3]);
    }
    let r = (-p / 3.0).sqrt();
    let mut cos3 = -q / (2.0 * r * r * r);
    if !cos3.is_finite() {
        return Ok([shift; 3]);
    }
    // A spread below the resolution of the shift carries no discriminant information.
    let resolved = r > 1e-12 * shift.abs();
    if resolved && cos3.abs() > 1.0 + DISCRIMINANT_SLACK {
        return Err(JordanError::Consistency(format!(
            "characteristic cubic has complex roots (cos 3φ = {cos3})"
        )));
    }
    cos3 = cos3.clamp(-1.0, 1.0);
    let phi = cos3.acos() / 3.0;
    let tau = 2.0 * std::f64::consts::PI / 3.0;
    let mut t = [
        2.0 * r * (phi - 2.0 * tau).cos(),
        2.0 * r * (phi - tau).cos(),
        2.0 * r * phi.cos(),
    ];
    // One or two Newton polishing steps, kept only if they reduce |f|.
    let f = |t: f64| (t * t + p) * t + q;
    for ti in &mut t {
        for _ in 0..2 {
            let d = 3.0 * *ti * *ti + p;
            if d == 0.0 {
                break;
            }
            let next = *ti - f(*ti) / d;
            if f(next).abs() < f(*ti).abs() {
                *ti = next;
            } else {
                break;
            }
        }
    }
    let mut out = t.map(|ti| ti + shift);
    out.sort_by(f64::total_cmp);
    Ok(out)
}

/// Spectral data of an Albert element.
#[derive(Debug, Clone)]
pub struct AlbertSpectral {
    x: Vec<f64>,
    roots: [f64; 3],
    spectrum: Spectrum,
}

impl AlbertSpectral {
    pub fn new(x: &[f64]) -> Result<Self> {
        let roots = roots(x)?;
        let norm = roots[0].abs().max(roots[2].abs());
        let spectrum = Spectrum::from_sorted(&roots, CLUSTER_TOL * (1.0 + norm));
        Ok(Self {
            x: x.to_vec(),
            roots,
            spectrum,
        })
    }

    pub fn roots(&self) -> [f64; 3] {
        self.roots
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    /// `p(x)` where `p` is the Newton-form interpolant of `f` on the distinct
    /// eigenvalues. The result's spectrum is checked against `f(Sp(x))`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> Result<Vec<f64>> {
        let nodes = self.spectrum.values();
        let fv: Vec<f64> = nodes.iter().map(|&l| f(l)).collect();
        let id = identity();
        let out = match nodes.len() {
            1 => combine(&[(fv[0], &id)]),
            2 => {
                let d01 = (fv[1] - fv[0]) / (nodes[1] - nodes[0]);
                let y0 = combine(&[(1.0, &self.x), (-nodes[0], &id)]);
                combine(&[(fv[0], &id), (d01, &y0)])
            }
            3 => {
                let d01 = (fv[1] - fv[0]) / (nodes[1] - nodes[0]);
                let d12 = (fv[2] - fv[1]) / (nodes[2] - nodes[1]);
                let d012 = (d12 - d01) / (nodes[2] - nodes[0]);
                let y0 = combine(&[(1.0, &self.x), (-nodes[0], &id)]);
                let y1 = combine(&[(1.0, &self.x), (-nodes[1], &id)]);
                let y01 = product(&y0, &y1);
                combine(&[(fv[0], &id), (d01, &y0), (d012, &y01)])
            }
            _ => unreachable!("an Albert element has at most three eigenvalues"),
        };
        if let Some(bad) = out.iter().find(|v| !v.is_finite()) {
            return Err(JordanError::Consistency(format!(
                "functional calculus produced a non-finite coordinate ({bad})"
            )));
        }
        self.check_image(&out, &fv)?;
        Ok(out)
    }

    fn check_image(&self, image: &[f64], fv: &[f64]) -> Result<()> {
        let mut expected: Vec<f64> = fv
            .iter()
            .zip(self.spectrum.multiplicities())
            .flat_map(|(&v, &m)| std::iter::repeat_n(v, m))
            .collect();
        expected.sort_by(f64::total_cmp);
        let got = roots(image)?;
        let scale = 1.0 + expected.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let dev = got
            .iter()
            .zip(&expected)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        if dev > APPLY_CONSISTENCY_TOL * scale {
            return Err(JordanError::Consistency(format!(
                "spectrum of f(x) deviates from f(spectrum) by {dev:e}"
            )));
        }
        Ok(())
    }
}
