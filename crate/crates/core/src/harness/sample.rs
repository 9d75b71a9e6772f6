//! Deterministic random elements and hypothesis-conforming operand pairs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::backend::albert;
use crate::backend::sym;
use crate::element::{quad_map, AlgebraDescriptor, AlgebraKind, JordanElement};
use crate::error::{JordanError, Result};
use crate::function::ScalarFunction;
use crate::spectral::{
    apply_decomposed, decompose, func_calculus, inverse, power, require_positive_invertible,
};

pub type TrialRng = ChaCha8Rng;

const SAMPLER_RETRIES: usize = 16;

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// FNV-1a, stable across platforms and toolchains.
pub fn stable_hash(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

/// The random stream of one trial, a function of `(seed, tag, trial)` only.
pub fn trial_rng(seed: u64, tag: &str, trial: u64) -> TrialRng {
    let s = mix64(mix64(seed ^ stable_hash(tag)) ^ trial);
    TrialRng::seed_from_u64(s)
}

fn gaussian(rng: &mut TrialRng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
}

fn log_uniform(rng: &mut TrialRng, lo: f64, hi: f64) -> f64 {
    (lo.ln() + rng.random::<f64>() * (hi.ln() - lo.ln())).exp()
}

/// An element with independent standard normal coordinates.
pub fn random_element_with(rng: &mut TrialRng, alg: AlgebraDescriptor) -> JordanElement {
    JordanElement::from_parts(alg, gaussian(rng, alg.coord_len()))
}

/// Positive invertible element with condition number at most `cond`.
pub fn random_positive_with(
    rng: &mut TrialRng,
    alg: AlgebraDescriptor,
    cond: f64,
) -> Result<JordanElement> {
    if !(cond >= 1.0 && cond.is_finite()) {
        return Err(JordanError::Parameter(format!("cond must be a finite value >= 1, got {cond}")));
    }
    let c0 = log_uniform(rng, 0.5, 2.0);
    match alg.kind {
        AlgebraKind::SymMatrix => {
            let n = alg.dim;
            let g = random_element_with(rng, alg);
            let frame = sym::eigen(n, g.coords())?;
            let eig: Vec<f64> = (0..n)
                .map(|_| c0 * cond.powf(rng.random::<f64>()))
                .collect();
            let mut coords = Vec::with_capacity(alg.coord_len());
            let v = &frame.frame;
            for i in 0..n {
                for j in i..n {
                    coords.push((0..n).map(|k| v[i * n + k] * eig[k] * v[j * n + k]).sum());
                }
            }
            JordanElement::new(alg, coords)
        }
        AlgebraKind::SpinFactor => {
            let dir = gaussian(rng, alg.dim);
            let norm = crate::backend::spin::vector_norm(&dir);
            let len = c0 * rng.random::<f64>() * (cond - 1.0) / (cond + 1.0);
            let v: Vec<f64> = if norm > 0.0 {
                dir.iter().map(|x| x / norm * len).collect()
            } else {
                vec![0.0; alg.dim]
            };
            JordanElement::spin(c0, &v)
        }
        AlgebraKind::Albert => {
            let y = random_element_with(rng, alg);
            let [r1, _, r3] = albert::roots(y.coords())?;
            let kappa = cond.powf(rng.random::<f64>());
            let spread = r3 - r1;
            if kappa == 1.0 || !(spread > 1e-12 * (1.0 + r3.abs())) {
                return Ok(JordanElement::scalar(alg, c0));
            }
            // affine map sending r1 -> c0, r3 -> c0 kappa
            let p = c0 * (kappa - 1.0) / spread;
            let q = c0 - p * r1;
            let x = y.scale(p).shift(q);
            require_positive_invertible(&x, "sample")?;
            Ok(x)
        }
    }
}

/// Seeded form of [`random_positive_with`].
pub fn random_positive(alg: AlgebraDescriptor, cond: f64, seed: u64) -> Result<JordanElement> {
    random_positive_with(&mut trial_rng(seed, "positive", 0), alg, cond)
}

/// `G²` for a random `G`; positive semidefinite in every Jordan algebra.
pub fn random_square_with(rng: &mut TrialRng, alg: AlgebraDescriptor) -> JordanElement {
    random_element_with(rng, alg).square()
}

pub fn random_square(alg: AlgebraDescriptor, seed: u64) -> JordanElement {
    random_square_with(&mut trial_rng(seed, "square", 0), alg)
}

/// `G²/‖G²‖`, or zero when `G` vanishes.
fn unit_square(rng: &mut TrialRng, alg: AlgebraDescriptor) -> JordanElement {
    let g2 = random_square_with(rng, alg);
    let n = crate::element::jb_norm(&g2);
    if n > 0.0 {
        g2.scale(1.0 / n)
    } else {
        g2
    }
}

/// Invertible element with eigenvalues of both signs and condition number
/// at most 3.
pub fn random_invertible_with(rng: &mut TrialRng, alg: AlgebraDescriptor) -> Result<JordanElement> {
    let y = random_element_with(rng, alg);
    let d = decompose(&y)?;
    let norm = d.norm().max(f64::MIN_POSITIVE);
    let f = ScalarFunction::new("signed-stretch", crate::function::Domain::Real, move |l: f64| {
        let s = if l < 0.0 { -1.0 } else { 1.0 };
        s * (1.0 + 2.0 * l.abs() / norm)
    });
    apply_decomposed(&y, &d, &f)
}

/// Which side of `δ A^β` the second operand is drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Hypothesis {
    /// No relation between the operands.
    Free,
    /// `δ A^β <= B`.
    Above,
    /// `B <= δ A^β`.
    Below,
}

impl Hypothesis {
    pub fn flipped(self) -> Self {
        match self {
            Hypothesis::Free => Hypothesis::Free,
            Hypothesis::Above => Hypothesis::Below,
            Hypothesis::Below => Hypothesis::Above,
        }
    }
}

/// Draws `(A, B)` satisfying `hyp` with the given `β` and `δ`.
///
/// With `X = {A^{-β/2} B A^{-β/2}}`, the `Above` sampler sets
/// `B = δ A^β + ρ m G²` (`m = min Sp(A^β)`, `‖G²‖ = 1`) so that
/// `δ <= Sp(X) <= δ + ρ`; the `Below` sampler sets
/// `B = {A^{β/2} δ(1 + ρ G²)⁻¹ A^{β/2}}` so that `δ/(1 + ρ) <= Sp(X) <= δ`.
/// `ρ` is log-uniform on `[1e-3, 1e2]`, and zero in one draw out of eight
/// (the equality case `B = δ A^β`).
pub fn sample_pair(
    rng: &mut TrialRng,
    alg: AlgebraDescriptor,
    cond: f64,
    hyp: Hypothesis,
    beta: f64,
    delta: f64,
) -> Result<(JordanElement, JordanElement)> {
    let mut last_err = None;
    for _ in 0..SAMPLER_RETRIES {
        let attempt = (|| -> Result<(JordanElement, JordanElement)> {
            let a = random_positive_with(rng, alg, cond)?;
            let b = match hyp {
                Hypothesis::Free => random_positive_with(rng, alg, cond)?,
                Hypothesis::Above | Hypothesis::Below => {
                    let rho = if rng.random_range(0..8) == 0 {
                        0.0
                    } else {
                        log_uniform(rng, 1e-3, 1e2)
                    };
                    let g2 = unit_square(rng, alg);
                    if hyp == Hypothesis::Above {
                        let ab = power(&a, beta)?;
                        let m = crate::spectral::min_eigenvalue(&ab)?;
                        crate::element::affine(&ab, &g2, delta, rho * m)?
                    } else {
                        let half = power(&a, beta / 2.0)?;
                        let inner = inverse(&g2.scale(rho).shift(1.0))?.scale(delta);
                        quad_map(&half, &inner)?
                    }
                }
            };
            require_positive_invertible(&b, "B")?;
            Ok((a, b))
        })();
        match attempt {
            Ok(pair) => return Ok(pair),
            Err(e) => last_err = Some(e),
        }
    }
    Err(JordanError::Sampler(format!(
        "no admissible pair for {hyp:?} on {alg} after {SAMPLER_RETRIES} attempts: {}",
        last_err.map(|e| e.to_string()).unwrap_or_default()
    )))
}

/// `B = A^β`, the equality case.
pub fn equal_pair(
    rng: &mut TrialRng,
    alg: AlgebraDescriptor,
    cond: f64,
    beta: f64,
) -> Result<(JordanElement, JordanElement)> {
    let a = random_positive_with(rng, alg, cond)?;
    let b = func_calculus(&a, &ScalarFunction::power(beta))?;
    Ok((a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::order::loewner_leq;
    use crate::spectral::spectrum;

    fn algebras() -> Vec<AlgebraDescriptor> {
        vec![
            AlgebraDescriptor::sym(1),
            AlgebraDescriptor::sym(4),
            AlgebraDescriptor::spin(1),
            AlgebraDescriptor::spin(5),
            AlgebraDescriptor::albert(),
        ]
    }

    #[test]
    fn positive_samples_respect_cond() {
        for alg in algebras() {
            for seed in 0..40 {
                let x = random_positive(alg, 50.0, seed).unwrap();
                let sp = spectrum(&x).unwrap();
                assert!(sp.min() > 0.0, "{alg} seed {seed}");
                assert!(sp.max() / sp.min() <= 50.0 * (1.0 + 1e-9), "{alg} seed {seed}");
            }
        }
    }

    #[test]
    fn cond_one_is_scalar() {
        for alg in algebras() {
            let x = random_positive(alg, 1.0, 3).unwrap();
            let sp = spectrum(&x).unwrap();
            assert_eq!(sp.values().len(), 1, "{alg}");
            let c = sp.min();
            assert!(x.approx_eq(&JordanElement::scalar(alg, c), 1e-13));
        }
    }

    #[test]
    fn deterministic() {
        for alg in algebras() {
            assert_eq!(random_positive(alg, 10.0, 11).unwrap(), random_positive(alg, 10.0, 11).unwrap());
            assert_eq!(random_square(alg, 2), random_square(alg, 2));
        }
        assert_ne!(
            random_positive(AlgebraDescriptor::sym(3), 10.0, 1).unwrap(),
            random_positive(AlgebraDescriptor::sym(3), 10.0, 2).unwrap()
        );
    }

    #[test]
    fn squares_are_positive() {
        for alg in algebras() {
            for seed in 0..20 {
                let g2 = random_square(alg, seed);
                let sp = spectrum(&g2).unwrap();
                assert!(sp.min() >= -1e-10 * (1.0 + sp.norm()), "{alg}");
            }
            assert_eq!(JordanElement::zero(alg).square(), JordanElement::zero(alg));
            assert_eq!(JordanElement::identity(alg).square(), JordanElement::identity(alg));
        }
    }

    #[test]
    fn invertible_samples() {
        for alg in algebras() {
            let mut rng = trial_rng(5, "inv", 0);
            for _ in 0..20 {
                let c = random_invertible_with(&mut rng, alg).unwrap();
                let sp = spectrum(&c).unwrap();
                let abs: Vec<f64> = sp.values().iter().map(|v| v.abs()).collect();
                let lo = abs.iter().cloned().fold(f64::INFINITY, f64::min);
                let hi = abs.iter().cloned().fold(0.0, f64::max);
                assert!(lo >= 1.0 - 1e-12 && hi <= 3.0 + 1e-12);
            }
        }
    }

    #[test]
    fn pairs_satisfy_hypotheses() {
        for alg in algebras() {
            let mut rng = trial_rng(9, "pairs", 0);
            for &(beta, delta) in &[(1.0, 1.0), (0.5, 2.0), (2.0, 0.5)] {
                for _ in 0..20 {
                    let (a, b) = sample_pair(&mut rng, alg, 100.0, Hypothesis::Above, beta, delta).unwrap();
                    let lower = power(&a, beta).unwrap().scale(delta);
                    assert!(loewner_leq(&lower, &b, 1e-10).unwrap().verdict, "{alg}");
                    let (a, b) = sample_pair(&mut rng, alg, 100.0, Hypothesis::Below, beta, delta).unwrap();
                    let upper = power(&a, beta).unwrap().scale(delta);
                    assert!(loewner_leq(&b, &upper, 1e-10).unwrap().verdict, "{alg}");
                }
            }
        }
    }
}
