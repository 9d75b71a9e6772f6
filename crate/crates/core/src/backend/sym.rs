//! Real symmetric matrices with `X ∘ Y = (XY + YX)/2`.
//!
//! Elements are stored packed (upper triangle, row-major). The eigensolver is
//! a cyclic Jacobi iteration; it is deterministic for a fixed input and
//! accurate for the small sizes used here.

use crate::element::{AlgebraDescriptor, JordanElement};
use crate::error::{JordanError, Result};
use crate::spectral::Spectrum;

/// Off-diagonal Frobenius mass (relative to the whole matrix) at which the
/// Jacobi sweeps stop.
pub const JACOBI_TOL: f64 = 1e-14;
const MAX_SWEEPS: usize = 64;
/// Relative tolerance for accepting dense input as symmetric.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Packs the upper triangle of a dense row-major matrix.
pub fn pack(n: usize, dense: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in i..n {
            out.push(dense[i * n + j]);
        }
    }
    out
}

/// Expands packed storage to a dense row-major matrix.
pub fn unpack(n: usize, packed: &[f64]) -> Vec<f64> {
    let mut dense = vec![0.0; n * n];
    let mut k = 0;
    for i in 0..n {
        for j in i..n {
            dense[i * n + j] = packed[k];
            dense[j * n + i] = packed[k];
            k += 1;
        }
    }
    dense
}

pub(crate) fn from_rows(rows: &[Vec<f64>]) -> Result<JordanElement> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(JordanError::Parse("matrix must be square and nonempty".into()));
    }
    let scale = rows
        .iter()
        .flatten()
        .fold(0.0f64, |m, v| m.max(v.abs()));
    let mut packed = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in i..n {
            let (a, b) = (rows[i][j], rows[j][i]);
            if (a - b).abs() > SYMMETRY_TOL * scale {
                return Err(JordanError::Parse(format!(
                    "matrix is not symmetric at ({i},{j}): {a} vs {b}"
                )));
            }
            packed.push(0.5 * (a + b));
        }
    }
    JordanElement::new(AlgebraDescriptor::sym(n), packed)
}

pub(crate) fn identity(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in i..n {
            out.push(if i == j { 1.0 } else { 0.0 });
        }
    }
    out
}

/// `(XY + YX)/2` on packed operands.
pub(crate) fn product(n: usize, x: &[f64], y: &[f64]) -> Vec<f64> {
    let xd = unpack(n, x);
    let yd = unpack(n, y);
    let mut out = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in i..n {
            // (XY)_ij + (XY)_ji; the sum is symmetric in X and Y term by term,
            // so the product is exactly commutative.
            let mut xy_ij = 0.0;
            let mut xy_ji = 0.0;
            for k in 0..n {
                xy_ij += xd[i * n + k] * yd[k * n + j];
                xy_ji += xd[j * n + k] * yd[k * n + i];
            }
            out.push(0.5 * (xy_ij + xy_ji));
        }
    }
    out
}

/// Full spectral decomposition `x = frame · diag(eigenvalues) · frameᵀ`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenFrame {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// `n x n`, row-major; column `k` is the eigenvector of `eigenvalues[k]`.
    pub frame: Vec<f64>,
}

impl EigenFrame {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `frame · diag(f(λ)) · frameᵀ`, packed.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        let n = self.dim();
        let fl: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let v = &self.frame;
        let mut out = Vec::with_capacity(n * (n + 1) / 2);
        for i in 0..n {
            for j in i..n {
                let mut acc = 0.0;
                for k in 0..n {
                    acc += v[i * n + k] * fl[k] * v[j * n + k];
                }
                out.push(acc);
            }
        }
        out
    }

    pub fn spectrum(&self) -> Spectrum {
        let scale = self.eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        Spectrum::from_sorted(&self.eigenvalues, 1e-12 * (1.0 + scale))
    }
}

/// Cyclic Jacobi eigendecomposition of a packed symmetric matrix.
pub fn eigen(n: usize, packed: &[f64]) -> Result<EigenFrame> {
    if let Some(bad) = packed.iter().find(|v| !v.is_finite()) {
        return Err(JordanError::InvalidElement(format!(
            "non-finite coordinate {bad} passed to the eigensolver"
        )));
    }
    let mut a = unpack(n, packed);
    let (values, frame) = jacobi_dense(n, &mut a)?;
    Ok(EigenFrame { eigenvalues: values, frame })
}

/// Jacobi iteration on a dense symmetric matrix (destroyed). Returns
/// ascending eigenvalues and the matching eigenvector frame.
pub fn jacobi_dense(n: usize, a: &mut [f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let total: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let target = JACOBI_TOL * total;

    let mut converged = false;
    for _sweep in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += 2.0 * a[i * n + j] * a[i * n + j];
            }
        }
        if off.sqrt() <= target || off == 0.0 {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                // Negligible against both diagonal entries: drop it.
                if apq.abs() <= f64::EPSILON * 0.5 * (app.abs() * aqq.abs()).sqrt() {
                    a[p * n + q] = 0.0;
                    a[q * n + p] = 0.0;
                    continue;
                }
                let tau = (aqq - app) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + tau.hypot(1.0))
                } else {
                    -1.0 / (-tau + tau.hypot(1.0))
                };
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;

                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    let new_kp = c * akp - s * akq;
                    let new_kq = s * akp + c * akq;
                    a[k * n + p] = new_kp;
                    a[p * n + k] = new_kp;
                    a[k * n + q] = new_kq;
                    a[q * n + k] = new_kq;
                }
                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;

                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged {
        return Err(JordanError::Consistency(format!(
            "Jacobi iteration did not converge in {MAX_SWEEPS} sweeps (n = {n})"
        )));
    }

    // Stable sort: ties keep the Jacobi order.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]));
    let values = order.iter().map(|&k| a[k * n + k]).collect();
    let mut frame = vec![0.0; n * n];
    for (col, &k) in order.iter().enumerate() {
        for r in 0..n {
            frame[r * n + col] = v[r * n + k];
        }
    }
    Ok((values, frame))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pack_unpack() {
        let dense = vec![1.0, 2.0, 3.0, 2.0, 4.0, 5.0, 3.0, 5.0, 6.0];
        let p = pack(3, &dense);
        assert_eq!(p, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        assert_eq!(unpack(3, &p), dense);
    }

    #[test]
    fn diagonal_is_sorted_with_permutation_frame() {
        let e = eigen(2, &[2.0, 0.0, 1.0]).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, 2.0]);
        assert_eq!(e.frame, vec![0.0, 1.0, 1.0, 0.0]);
    }

    #[test]
    fn two_by_two_closed_form() {
        let e = eigen(2, &[2.0, 1.0, 2.0]).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((e.eigenvalues[0] - 1.0).abs() < 1e-15);
        assert!((e.eigenvalues[1] - 3.0).abs() < 1e-15);
        // columns (1,-1)/√2 and (1,1)/√2
        let expect = [r, r, -r, r];
        for (a, b) in e.frame.iter().zip(expect) {
            assert!((a - b).abs() < 1e-15, "{:?}", e.frame);
        }
    }

    fn reconstruct(e: &EigenFrame) -> Vec<f64> {
        e.apply(|l| l)
    }

    #[test]
    fn random_reconstruction_and_orthogonality() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [1usize, 2, 3, 6, 9] {
            let g: Vec<f64> = (0..n * n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let mut dense = vec![0.0; n * n];
            for i in 0..n {
                for j in 0..n {
                    dense[i * n + j] = g[i * n + j] + g[j * n + i];
                }
            }
            let packed = pack(n, &dense);
            let e = eigen(n, &packed).unwrap();
            let back = reconstruct(&e);
            let scale = packed.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            for (a, b) in back.iter().zip(&packed) {
                assert!((a - b).abs() <= 1e-10 * scale, "n = {n}");
            }
            for i in 0..n {
                for j in 0..n {
                    let dot: f64 = (0..n).map(|k| e.frame[k * n + i] * e.frame[k * n + j]).sum();
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((dot - want).abs() < 1e-10);
                }
            }
            assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn deterministic() {
        let packed = [0.3, -1.2, 0.7, 2.0, 0.1, -0.4];
        assert_eq!(eigen(3, &packed).unwrap(), eigen(3, &packed).unwrap());
    }

    #[test]
    fn rejects_non_finite() {
        assert!(eigen(2, &[1.0, f64::NAN, 1.0]).is_err());
    }
}
