use jordan_entropy::element::{affine, jb_norm, jordan_product, quad_map, AlgebraDescriptor, JordanElement};
use jordan_entropy::function::ScalarFunction;
use jordan_entropy::harness::order::loewner_leq;
use jordan_entropy::harness::sample::{random_element_with, random_positive_with, trial_rng};
use jordan_entropy::means::{geometric_mean, harmonic_mean, rel_entropy, tsallis};
use jordan_entropy::spectral::{func_calculus, inverse, power, spectrum};
use proptest::prelude::*;
use rand::Rng;

fn backends() -> Vec<AlgebraDescriptor> {
    vec![
        AlgebraDescriptor::sym(1),
        AlgebraDescriptor::sym(2),
        AlgebraDescriptor::sym(4),
        AlgebraDescriptor::spin(1),
        AlgebraDescriptor::spin(3),
        AlgebraDescriptor::albert(),
    ]
}

fn backend() -> impl Strategy<Value = AlgebraDescriptor> {
    prop::sample::select(backends())
}

fn elements(alg: AlgebraDescriptor, seed: u64, k: usize) -> Vec<JordanElement> {
    let mut rng = trial_rng(seed, "props", 0);
    (0..k).map(|_| random_element_with(&mut rng, alg)).collect()
}

fn positives(alg: AlgebraDescriptor, seed: u64, k: usize) -> Vec<JordanElement> {
    let mut rng = trial_rng(seed, "props-positive", 0);
    (0..k).map(|_| random_positive_with(&mut rng, alg, 50.0).unwrap()).collect()
}

fn dist(x: &JordanElement, y: &JordanElement) -> f64 {
    jb_norm(&x.sub(y).unwrap())
}

fn rows_product(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

fn symmetric_rows(n: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = trial_rng(seed, "rows", 0);
    let mut rows = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i..n {
            let v = rng.random_range(-2.0..2.0);
            rows[i][j] = v;
            rows[j][i] = v;
        }
    }
    rows
}

/// `(s, (a, b))` maps to `s I + a σ_z + b σ_x` in 2×2 symmetric matrices.
fn embed_spin2(x: &JordanElement) -> JordanElement {
    let c = x.coords();
    JordanElement::sym_from_rows(&[vec![c[0] + c[1], c[2]], vec![c[2], c[0] - c[1]]]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_is_commutative(alg in backend(), seed in any::<u64>()) {
        let v = elements(alg, seed, 2);
        let scale = 1.0 + jb_norm(&v[0]) * jb_norm(&v[1]);
        let d = dist(&jordan_product(&v[0], &v[1]).unwrap(), &jordan_product(&v[1], &v[0]).unwrap());
        prop_assert!(d <= 1e-13 * scale);
    }

    #[test]
    fn jordan_identity(alg in backend(), seed in any::<u64>()) {
        let v = elements(alg, seed, 2);
        let (a, b) = (&v[0], &v[1]);
        let a2 = a.square();
        let lhs = jordan_product(&jordan_product(&a2, b).unwrap(), a).unwrap();
        let rhs = jordan_product(&a2, &jordan_product(b, a).unwrap()).unwrap();
        let scale = 1.0 + jb_norm(a).powi(3) * jb_norm(b);
        prop_assert!(dist(&lhs, &rhs) <= 1e-12 * scale);
    }

    #[test]
    fn quad_map_is_linear(alg in backend(), seed in any::<u64>(), s in -3.0f64..3.0, t in -3.0f64..3.0) {
        let v = elements(alg, seed, 3);
        let (a, b, c) = (&v[0], &v[1], &v[2]);
        let lhs = quad_map(a, &affine(b, c, s, t).unwrap()).unwrap();
        let rhs = affine(&quad_map(a, b).unwrap(), &quad_map(a, c).unwrap(), s, t).unwrap();
        let scale = 1.0 + jb_norm(a).powi(2) * (jb_norm(b) + jb_norm(c)) * 3.0;
        prop_assert!(dist(&lhs, &rhs) <= 1e-12 * scale);
    }

    #[test]
    fn quad_map_matches_matrix_sandwich(n in 1usize..5, seed in any::<u64>()) {
        let ar = symmetric_rows(n, seed);
        let br = symmetric_rows(n, seed ^ 1);
        let a = JordanElement::sym_from_rows(&ar).unwrap();
        let b = JordanElement::sym_from_rows(&br).unwrap();
        let aba = JordanElement::sym_from_rows(&rows_product(&rows_product(&ar, &br), &ar)).unwrap();
        let scale = 1.0 + jb_norm(&a).powi(2) * jb_norm(&b);
        prop_assert!(dist(&quad_map(&a, &b).unwrap(), &aba) <= 1e-12 * scale);
    }

    #[test]
    fn jb_norm_axioms(alg in backend(), seed in any::<u64>()) {
        let v = elements(alg, seed, 2);
        let (a, b) = (&v[0], &v[1]);
        let (na, nb) = (jb_norm(a), jb_norm(b));
        let scale = 1.0 + (na + nb).powi(2);
        prop_assert!(jb_norm(&jordan_product(a, b).unwrap()) <= na * nb + 1e-12 * scale);
        prop_assert!((jb_norm(&a.square()) - na * na).abs() <= 1e-12 * scale);
        prop_assert!(jb_norm(&a.square()) <= jb_norm(&a.square().add(&b.square()).unwrap()) + 1e-12 * scale);
    }

    #[test]
    fn spin_factor_matches_pauli_embedding(seed in any::<u64>()) {
        let v = elements(AlgebraDescriptor::spin(2), seed, 2);
        let p = jordan_product(&v[0], &v[1]).unwrap();
        let q = jordan_product(&embed_spin2(&v[0]), &embed_spin2(&v[1])).unwrap();
        prop_assert!(embed_spin2(&p).approx_eq(&q, 1e-13));
        let sp = spectrum(&v[0]).unwrap().expanded();
        let sq = spectrum(&embed_spin2(&v[0])).unwrap().expanded();
        for (x, y) in sp.iter().zip(&sq) {
            prop_assert!((x - y).abs() <= 1e-12 * (1.0 + x.abs()));
        }
    }

    #[test]
    fn powers_add(alg in backend(), seed in any::<u64>(), p in -1.5f64..1.5, q in -1.5f64..1.5) {
        let x = positives(alg, seed, 1).remove(0);
        let lhs = jordan_product(&power(&x, p).unwrap(), &power(&x, q).unwrap()).unwrap();
        let rhs = power(&x, p + q).unwrap();
        prop_assert!(lhs.approx_eq(&rhs, 1e-10), "{}", lhs.max_coord_diff(&rhs));
    }

    #[test]
    fn spectral_mapping(alg in backend(), seed in any::<u64>()) {
        let x = elements(alg, seed, 1).remove(0);
        let fx = func_calculus(&x, &ScalarFunction::exp()).unwrap();
        let mut mapped: Vec<f64> = spectrum(&x).unwrap().values().iter().map(|v| v.exp()).collect();
        mapped.sort_by(f64::total_cmp);
        let got = spectrum(&fx).unwrap();
        let (lo, hi) = (mapped[0], *mapped.last().unwrap());
        prop_assert!((got.min() - lo).abs() <= 1e-10 * hi);
        prop_assert!((got.max() - hi).abs() <= 1e-10 * hi);
    }

    #[test]
    fn exp_log_roundtrip(alg in backend(), seed in any::<u64>()) {
        let x = positives(alg, seed, 1).remove(0);
        let back = func_calculus(&func_calculus(&x, &ScalarFunction::log()).unwrap(), &ScalarFunction::exp()).unwrap();
        prop_assert!(back.approx_eq(&x, 1e-9));
        let root = power(&x, 0.5).unwrap();
        prop_assert!(root.square().approx_eq(&x, 1e-10));
    }

    #[test]
    fn inverse_axioms(alg in backend(), seed in any::<u64>()) {
        let x = positives(alg, seed, 1).remove(0);
        let xi = inverse(&x).unwrap();
        let id = JordanElement::identity(alg);
        prop_assert!(jordan_product(&x, &xi).unwrap().approx_eq(&id, 1e-10));
        prop_assert!(quad_map(&x, &xi).unwrap().approx_eq(&x, 1e-10));
        prop_assert!(inverse(&xi).unwrap().approx_eq(&x, 1e-10));
    }

    #[test]
    fn means_on_equal_operands(alg in backend(), seed in any::<u64>(), lam in 0.05f64..1.0) {
        let a = positives(alg, seed, 1).remove(0);
        let zero = JordanElement::zero(alg);
        let scale = 1.0 + jb_norm(&a);
        prop_assert!(dist(&rel_entropy(&a, &a).unwrap(), &zero) <= 1e-12 * scale);
        prop_assert!(dist(&tsallis(&a, &a, lam).unwrap(), &zero) <= 1e-11 * scale);
        prop_assert!(dist(&geometric_mean(&a, &a, lam).unwrap(), &a) <= 1e-12 * scale);
    }

    #[test]
    fn symmetric_means(alg in backend(), seed in any::<u64>()) {
        let v = positives(alg, seed, 2);
        let (a, b) = (&v[0], &v[1]);
        let scale = 1.0 + jb_norm(a) + jb_norm(b);
        let g = dist(&geometric_mean(a, b, 0.5).unwrap(), &geometric_mean(b, a, 0.5).unwrap());
        prop_assert!(g <= 1e-10 * scale);
        let h = dist(&harmonic_mean(a, b, 0.5).unwrap(), &harmonic_mean(b, a, 0.5).unwrap());
        prop_assert!(h <= 1e-10 * scale);
        prop_assert!(dist(&geometric_mean(a, b, 1.0).unwrap(), b) <= 1e-10 * scale);
    }

    #[test]
    fn harmonic_below_geometric(alg in backend(), seed in any::<u64>(), lam in 0.0f64..1.0) {
        let v = positives(alg, seed, 2);
        let h = harmonic_mean(&v[0], &v[1], lam).unwrap();
        let g = geometric_mean(&v[0], &v[1], lam).unwrap();
        let cert = loewner_leq(&h, &g, 1e-10).unwrap();
        prop_assert!(cert.verdict, "{:?}", cert);
    }
}
