//! Registry of Löwner-order chains and the campaign that certifies them.
//!
//! A chain evaluates a list of expressions per trial; every consecutive pair
//! `lhs <= rhs` is a link whose normalized margin `min Sp(rhs - lhs) / scale`
//! is tracked across trials.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use rand::Rng;

use crate::element::{affine, jb_norm, quad_map, AlgebraDescriptor, JordanElement};
use crate::error::{JordanError, Result};
use crate::function::ScalarFunction;
use crate::means::{
    ab_geometric_mean, bound_expr, geometric_mean, rel_entropy, rel_entropy_ab, tsallis,
    tsallis_lb, BoundKind, EntropyParams,
};
use crate::spectral::{func_calculus, inverse, min_eigenvalue};

use super::order::loewner_leq;
use super::report::{
    ChainReport, LinkSummary, Mode, ParamGrid, ReportKind, Violation, MAX_RECORDED_VIOLATIONS,
};
use super::sample::{
    equal_pair, random_element_with, random_positive_with, sample_pair, trial_rng, Hypothesis,
    TrialRng,
};
use super::scalar::{scalar_bound_eval, ScalarBoundFamily};
use super::{
    run_trials, CampaignConfig, ALPHA_GRID, BETA_GRID, DEFAULT_TOL, DELTA_HIGH, DELTA_LOW,
    LAMBDA_GRID,
};

/// Forward tolerance of the `T = 0 iff A^β = B` check.
pub const EQUALITY_TOL: f64 = 1e-6;
/// `‖T‖` below this (relative) counts as zero for the converse direction.
pub const ZERO_DETECT_TOL: f64 = 1e-10;

/// Weights used by the sampled concavity checks, cycled by trial.
pub const CONCAVITY_WEIGHTS: [f64; 3] = [0.25, 0.5, 0.75];

type Segment = Vec<(&'static str, JordanElement)>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaUse {
    None,
    /// `(0, 1]`
    Full,
    /// `(0, 1)`: excludes the degenerate `λ = 1`.
    Open,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaUse {
    None,
    /// `δ >= 1`
    High,
    /// `δ <= 1`
    Low,
}

/// A registry entry.
pub struct ChainSpec {
    pub id: &'static str,
    pub description: &'static str,
    pub hypothesis: Hypothesis,
    pub uses_alpha: bool,
    pub uses_beta: bool,
    pub lambda: LambdaUse,
    pub delta: DeltaUse,
    /// `(α, β)` pinned by the statement.
    pub fixed: Option<(f64, f64)>,
    /// Whether a hypothesis-violating control run exists.
    pub control: bool,
    /// Stated for special algebras only: non-gating on the Albert backend.
    pub special_only: bool,
    /// Pointwise scalar chain; always evaluated as `1 x 1` elements.
    pub scalar: bool,
    eval: Eval,
}

#[derive(Clone, Copy)]
enum Eval {
    /// Needs only the hypothesis-conforming pair `(A, B)`.
    Pair(fn(&Ops) -> Result<Vec<Segment>>),
    /// Draws its own operands.
    Custom(fn(&mut TrialCtx) -> Result<Vec<Segment>>),
}

/// Per-trial state handed to a chain's evaluator.
pub struct TrialCtx {
    pub trial: u64,
    pub rng: TrialRng,
    pub alg: AlgebraDescriptor,
    pub cond: f64,
    pub params: EntropyParams,
    pub hypothesis: Hypothesis,
    pub elements: BTreeMap<String, JordanElement>,
    pub scalars: BTreeMap<String, f64>,
}

impl TrialCtx {
    fn alpha(&self) -> f64 {
        self.params.alpha.unwrap_or(0.0)
    }

    fn beta(&self) -> f64 {
        self.params.beta.unwrap_or(1.0)
    }

    fn lambda(&self) -> f64 {
        self.params.lambda.unwrap_or(1.0)
    }

    fn delta(&self) -> f64 {
        self.params.delta.unwrap_or(1.0)
    }

    fn record(&mut self, name: &str, x: &JordanElement) {
        self.elements.insert(name.to_string(), x.clone());
    }

    /// The `(A, B)` pair for the chain's hypothesis.
    fn pair(&mut self) -> Result<Ops> {
        let (beta, delta) = (self.beta(), self.delta());
        let (a, b) = sample_pair(&mut self.rng, self.alg, self.cond, self.hypothesis, beta, delta)?;
        self.record("A", &a);
        self.record("B", &b);
        Ok(Ops::new(a, b, self.params))
    }

    fn positive(&mut self, name: &str) -> Result<JordanElement> {
        let x = random_positive_with(&mut self.rng, self.alg, self.cond)?;
        self.record(name, &x);
        Ok(x)
    }

    fn weight(&mut self) -> f64 {
        let t = CONCAVITY_WEIGHTS[(self.trial % 3) as usize];
        self.scalars.insert("t".into(), t);
        t
    }

    /// A grid point on the side of `δ` selected by the hypothesis.
    fn scalar_x(&mut self) -> f64 {
        let frac = (self.trial as f64 * 0.618_033_988_749_894_9).fract();
        let span = 1000f64.powf(frac);
        let x = match self.hypothesis {
            Hypothesis::Below => self.delta() / span,
            _ => self.delta() * span,
        };
        self.scalars.insert("x".into(), x);
        x
    }
}

/// Expressions over one operand pair, with the geometric means memoized.
struct Ops {
    a: JordanElement,
    b: JordanElement,
    p: EntropyParams,
    geo_cache: RefCell<HashMap<u64, JordanElement>>,
}

impl Ops {
    fn new(a: JordanElement, b: JordanElement, p: EntropyParams) -> Self {
        Self {
            a,
            b,
            p,
            geo_cache: RefCell::new(HashMap::new()),
        }
    }

    fn alpha(&self) -> f64 {
        self.p.alpha.unwrap_or(0.0)
    }

    fn beta(&self) -> f64 {
        self.p.beta.unwrap_or(1.0)
    }

    fn lambda(&self) -> f64 {
        self.p.lambda.unwrap_or(1.0)
    }

    fn delta(&self) -> f64 {
        self.p.delta.unwrap_or(1.0)
    }

    /// `A #_(e, β) B`
    fn geo(&self, e: f64) -> Result<JordanElement> {
        if let Some(g) = self.geo_cache.borrow().get(&e.to_bits()) {
            return Ok(g.clone());
        }
        let g = ab_geometric_mean(&self.a, &self.b, e, self.beta())?;
        self.geo_cache.borrow_mut().insert(e.to_bits(), g.clone());
        Ok(g)
    }

    /// `A #_(hi, β) B - A #_(lo, β) B`
    fn geo_diff(&self, hi: f64, lo: f64) -> Result<JordanElement> {
        self.geo(hi)?.sub(&self.geo(lo)?)
    }

    fn bound(&self, k: BoundKind) -> Result<JordanElement> {
        bound_expr(k, &self.a, &self.b, &self.p)
    }

    fn s_ab(&self) -> Result<JordanElement> {
        rel_entropy_ab(&self.a, &self.b, self.alpha(), self.beta())
    }

    fn t_lb(&self, lam: f64) -> Result<JordanElement> {
        tsallis_lb(&self.a, &self.b, lam, self.beta())
    }

    fn s(&self) -> Result<JordanElement> {
        rel_entropy(&self.a, &self.b)
    }

    /// `{A B⁻¹ A}`
    fn a_binv_a(&self) -> Result<JordanElement> {
        quad_map(&self.a, &inverse(&self.b)?)
    }

    /// `A - {A B⁻¹ A}`
    fn lower(&self) -> Result<JordanElement> {
        self.a.sub(&self.a_binv_a()?)
    }

    /// `B - A`
    fn upper(&self) -> Result<JordanElement> {
        self.b.sub(&self.a)
    }

    /// `2(A - 2{A(A+B)⁻¹A})`
    fn closed_i(&self) -> Result<JordanElement> {
        let inner = quad_map(&self.a, &inverse(&self.a.add(&self.b)?)?)?;
        affine(&self.a, &inner, 2.0, -4.0)
    }

    /// `4A - 8{A(A#½B + A)⁻¹A}`
    fn closed_ii(&self) -> Result<JordanElement> {
        let g = geometric_mean(&self.a, &self.b, 0.5)?;
        let inner = quad_map(&self.a, &inverse(&g.add(&self.a)?)?)?;
        affine(&self.a, &inner, 4.0, -8.0)
    }

    /// `A#½B - A#₋½B`
    fn closed_iii(&self) -> Result<JordanElement> {
        geometric_mean(&self.a, &self.b, 0.5)?.sub(&geometric_mean(&self.a, &self.b, -0.5)?)
    }

    /// `½(B - {AB⁻¹A})`
    fn closed_v(&self) -> Result<JordanElement> {
        affine(&self.b, &self.a_binv_a()?, 0.5, -0.5)
    }

    /// `ln δ A + 2[A - 2δ{A(δA+B)⁻¹A}]`
    fn closed_i_delta(&self) -> Result<JordanElement> {
        let d = self.delta();
        let inner = quad_map(&self.a, &inverse(&affine(&self.a, &self.b, d, 1.0)?)?)?;
        affine(&self.a, &inner, d.ln() + 2.0, -4.0 * d)
    }

    /// `(ln δ + 4)A - 8√δ{A(A#½B + √δA)⁻¹A}`
    fn closed_ii_delta(&self) -> Result<JordanElement> {
        let d = self.delta();
        let sd = d.sqrt();
        let g = geometric_mean(&self.a, &self.b, 0.5)?;
        let inner = quad_map(&self.a, &inverse(&affine(&g, &self.a, 1.0, sd)?)?)?;
        affine(&self.a, &inner, d.ln() + 4.0, -8.0 * sd)
    }

    /// `(A#½B/√δ - √δ A#₋½B) + ln δ A`
    fn closed_iii_delta(&self) -> Result<JordanElement> {
        let d = self.delta();
        let sd = d.sqrt();
        let g = geometric_mean(&self.a, &self.b, 0.5)?;
        let h = geometric_mean(&self.a, &self.b, -0.5)?;
        affine(&affine(&g, &h, 1.0 / sd, -sd)?, &self.a, 1.0, d.ln())
    }

    /// `½(B/δ - δ{AB⁻¹A}) + ln δ A`
    fn closed_v_delta(&self) -> Result<JordanElement> {
        let d = self.delta();
        let half = affine(&self.b, &self.a_binv_a()?, 0.5 / d, -0.5 * d)?;
        affine(&half, &self.a, 1.0, d.ln())
    }
}

fn chain(items: Vec<(&'static str, Result<JordanElement>)>) -> Result<Vec<Segment>> {
    let seg = items
        .into_iter()
        .map(|(l, x)| x.map(|x| (l, x)))
        .collect::<Result<Segment>>()?;
    Ok(vec![seg])
}

fn scalar_el(v: f64) -> JordanElement {
    JordanElement::from_parts(AlgebraDescriptor::sym(1), vec![v])
}

// ---------------------------------------------------------------------------
// evaluators

fn prop43_i(o: &Ops) -> Result<Vec<Segment>> {
    let al = o.alpha();
    chain(vec![
        ("G(a)-G(a-1)", o.geo_diff(al, al - 1.0)),
        ("I", o.bound(BoundKind::I)),
        ("G(a+1)-G(a)", o.geo_diff(al + 1.0, al)),
    ])
}

fn prop43_ii(o: &Ops) -> Result<Vec<Segment>> {
    let al = o.alpha();
    chain(vec![
        ("G(a)-G(a-1)", o.geo_diff(al, al - 1.0)),
        ("V", o.bound(BoundKind::V)),
        ("G(a+1)-G(a)", o.geo_diff(al + 1.0, al)),
    ])
}

fn prop43_iii(o: &Ops) -> Result<Vec<Segment>> {
    let al = o.alpha();
    chain(vec![
        ("G(0)-G(-1)", o.geo_diff(0.0, -1.0)),
        ("G(a)-G(a-1)", o.geo_diff(al, al - 1.0)),
    ])
}

fn thm46_i(o: &Ops) -> Result<Vec<Segment>> {
    chain(vec![
        ("I", o.bound(BoundKind::I)),
        ("II", o.bound(BoundKind::II)),
        ("S_ab", o.s_ab()),
        ("III", o.bound(BoundKind::III)),
        ("V", o.bound(BoundKind::V)),
    ])
}

fn thm46_ii(o: &Ops) -> Result<Vec<Segment>> {
    chain(vec![
        ("V", o.bound(BoundKind::V)),
        ("III", o.bound(BoundKind::III)),
        ("S_ab", o.s_ab()),
        ("II", o.bound(BoundKind::II)),
        ("I", o.bound(BoundKind::I)),
    ])
}

fn cor47_i(o: &Ops) -> Result<Vec<Segment>> {
    let al = o.alpha();
    chain(vec![
        ("G(a)-G(a-1)", o.geo_diff(al, al - 1.0)),
        ("I", o.bound(BoundKind::I)),
        ("II", o.bound(BoundKind::II)),
        ("S_ab", o.s_ab()),
        ("III", o.bound(BoundKind::III)),
        ("V", o.bound(BoundKind::V)),
        ("G(a+1)-G(a)", o.geo_diff(al + 1.0, al)),
    ])
}

fn cor47_ii(o: &Ops) -> Result<Vec<Segment>> {
    let al = o.alpha();
    chain(vec![
        ("G(a)-G(a-1)", o.geo_diff(al, al - 1.0)),
        ("V", o.bound(BoundKind::V)),
        ("III", o.bound(BoundKind::III)),
        ("S_ab", o.s_ab()),
        ("II", o.bound(BoundKind::II)),
        ("I", o.bound(BoundKind::I)),
        ("G(a+1)-G(a)", o.geo_diff(al + 1.0, al)),
    ])
}

fn cor48_i(o: &Ops) -> Result<Vec<Segment>> {
    chain(vec![
        ("A-{AB^-1A}", o.lower()),
        ("I", o.closed_i()),
        ("II", o.closed_ii()),
        ("S", o.s()),
        ("III", o.closed_iii()),
        ("V", o.closed_v()),
        ("B-A", o.upper()),
    ])
}

fn cor48_ii(o: &Ops) -> Result<Vec<Segment>> {
    chain(vec![
        ("A-{AB^-1A}", o.lower()),
        ("V", o.closed_v()),
        ("III", o.closed_iii()),
        ("S", o.s()),
        ("II", o.closed_ii()),
        ("I", o.closed_i()),
        ("B-A", o.upper()),
    ])
}

fn thm49_i(o: &Ops) -> Result<Vec<Segment>> {
    chain(vec![
        ("Id", o.bound(BoundKind::IDelta)),
        ("IId", o.bound(BoundKind::IIDelta)),
        ("S_ab", o.s_ab()),
        ("IIId", o.bound(BoundKind::IIIDelta)),
        ("Vd", o.bound(BoundKind::VDelta)),
    ])
}

fn thm49_ii(o: &Ops) -> Result<Vec<Segment>> {
    Ok(vec![
        vec![("II", o.bound(BoundKind::II)?), ("IId", o.bound(BoundKind::IIDelta)?)],
        vec![("IIId", o.bound(BoundKind::IIIDelta)?), ("III", o.bound(BoundKind::III)?)],
    ])
}

fn thm49_iii(o: &Ops) -> Result<Vec<Segment>> {
    chain(vec![
        ("Vd", o.bound(BoundKind::VDelta)),
        ("IIId", o.bound(BoundKind::IIIDelta)),
        ("S_ab", o.s_ab()),
        ("IId", o.bound(BoundKind::IIDelta)),
        ("Id", o.bound(BoundKind::IDelta)),
    ])
}

fn thm49_iv(o: &Ops) -> Result<Vec<Segment>> {
    Ok(vec![
        vec![("IId", o.bound(BoundKind::IIDelta)?), ("II", o.bound(BoundKind::II)?)],
        vec![("III", o.bound(BoundKind::III)?), ("IIId", o.bound(BoundKind::IIIDelta)?)],
    ])
}

fn cor410_i(o: &Ops) -> Result<Vec<Segment>> {
    chain(vec![
        ("A-{AB^-1A}", o.lower()),
        ("I", o.closed_i()),
        ("Id", o.closed_i_delta()),
        ("IId", o.closed_ii_delta()),
        ("S", o.s()),
        ("IIId", o.closed_iii_delta()),
        ("Vd", o.closed_v_delta()),
        ("V", o.closed_v()),
        ("B-A", o.upper()),
    ])
}

fn cor410_ii(o: &Ops) -> Result<Vec<Segment>> {
    chain(vec![
        ("A-{AB^-1A}", o.lower()),
        ("V", o.closed_v()),
        ("Vd", o.closed_v_delta()),
        ("IIId", o.closed_iii_delta()),
        ("S", o.s()),
        ("IId", o.closed_ii_delta()),
        ("Id", o.closed_i_delta()),
        ("I", o.closed_i()),
        ("B-A", o.upper()),
    ])
}

fn tsallis_order(o: &Ops) -> Result<Vec<Segment>> {
    let lam = o.lambda();
    chain(vec![
        ("T(-l,b)", o.t_lb(-lam)),
        ("S(0,b)", rel_entropy_ab(&o.a, &o.b, 0.0, o.beta())),
        ("T(l,b)", o.t_lb(lam)),
    ])
}

/// `[-εs, x, εs]` as a two-link band.
fn band(label: &'static str, x: JordanElement, eps: f64) -> Segment {
    let alg = *x.algebra();
    vec![
        ("-eps", JordanElement::scalar(alg, -eps)),
        (label, x),
        ("+eps", JordanElement::scalar(alg, eps)),
    ]
}

fn tsallis_bounds(c: &mut TrialCtx) -> Result<Vec<Segment>> {
    let o = c.pair()?;
    let lam = o.lambda();
    let beta = o.beta();
    let mut segs = chain(vec![
        ("G(0)-G(-1)", o.geo_diff(0.0, -1.0)),
        ("T(l,b)", o.t_lb(lam)),
        ("G(1)-G(0)", o.geo_diff(1.0, 0.0)),
    ])?;

    // B = A^β forces T = 0.
    let (a, ab) = equal_pair(&mut c.rng, c.alg, c.cond, beta)?;
    c.record("A_eq", &a);
    let t = tsallis_lb(&a, &ab, lam, beta)?;
    let scale = 1.0 + jb_norm(&ab);
    segs.push(band("T(A|A^b)", t, EQUALITY_TOL * scale));

    // T = 0 (numerically) forces A^β = B: perturb A^β by η m H.
    let eta = 10f64.powf(-14.0 + 13.0 * c.rng.random::<f64>());
    let h = random_element_with(&mut c.rng, c.alg);
    let hn = jb_norm(&h).max(f64::MIN_POSITIVE);
    let m = min_eigenvalue(&ab)?;
    let b = affine(&ab, &h, 1.0, eta * m / hn)?;
    c.record("B_near", &b);
    c.scalars.insert("eta".into(), eta);
    let t = tsallis_lb(&a, &b, lam, beta)?;
    let scale = 1.0 + jb_norm(&ab).max(jb_norm(&b));
    if jb_norm(&t) <= ZERO_DETECT_TOL * scale {
        segs.push(band("B-A^b", b.sub(&ab)?, EQUALITY_TOL * scale));
    }
    Ok(segs)
}

fn prop_iv_i(o: &Ops) -> Result<Vec<Segment>> {
    let lam = o.lambda();
    chain(vec![
        ("G(0)-G(-1)", o.geo_diff(0.0, -1.0)),
        ("G(l)-G(l-1)", o.geo_diff(lam, lam - 1.0)),
        ("T(l,b)", o.t_lb(lam)),
        ("IV", o.bound(BoundKind::IV)),
        ("G(1)-G(0)", o.geo_diff(1.0, 0.0)),
    ])
}

fn prop_iv_ii(o: &Ops) -> Result<Vec<Segment>> {
    let lam = o.lambda();
    chain(vec![
        ("G(0)-G(-1)", o.geo_diff(0.0, -1.0)),
        ("G(l)-G(l-1)", o.geo_diff(lam, lam - 1.0)),
        ("IV", o.bound(BoundKind::IV)),
        ("T(l,b)", o.t_lb(lam)),
        ("G(1)-G(0)", o.geo_diff(1.0, 0.0)),
    ])
}

fn remark_chain(o: &Ops) -> Result<Vec<Segment>> {
    chain(vec![
        ("A-{AB^-1A}", o.lower()),
        ("T(l)", tsallis(&o.a, &o.b, o.lambda())),
        ("B-A", o.upper()),
    ])
}

fn family_chain(
    c: &mut TrialCtx,
    items: &[(&'static str, ScalarBoundFamily, bool)],
) -> Segment {
    let x = c.scalar_x();
    let (alpha, delta) = (c.alpha(), c.delta());
    items
        .iter()
        .map(|&(l, f, unit_delta)| {
            let d = if unit_delta { 1.0 } else { delta };
            (l, scalar_el(scalar_bound_eval(f, x, alpha, d)))
        })
        .collect()
}

use ScalarBoundFamily::{JDelta, KDelta, Q, RDelta, SDelta};

fn prop45_a(c: &mut TrialCtx) -> Result<Vec<Segment>> {
    Ok(vec![family_chain(
        c,
        &[("r_d", RDelta, false), ("s_d", SDelta, false), ("q", Q, false), ("j_d", JDelta, false), ("k_d", KDelta, false)],
    )])
}

fn prop45_b(c: &mut TrialCtx) -> Result<Vec<Segment>> {
    let seg = family_chain(
        c,
        &[("s_1", SDelta, true), ("s_d", SDelta, false), ("j_d", JDelta, false), ("j_1", JDelta, true)],
    );
    let (first, second) = seg.split_at(2);
    Ok(vec![first.to_vec(), second.to_vec()])
}

fn prop45_c(c: &mut TrialCtx) -> Result<Vec<Segment>> {
    Ok(vec![family_chain(
        c,
        &[("k_d", KDelta, false), ("j_d", JDelta, false), ("q", Q, false), ("s_d", SDelta, false), ("r_d", RDelta, false)],
    )])
}

fn prop45_d(c: &mut TrialCtx) -> Result<Vec<Segment>> {
    let seg = family_chain(
        c,
        &[("s_d", SDelta, false), ("s_1", SDelta, true), ("j_1", JDelta, true), ("j_d", JDelta, false)],
    );
    let (first, second) = seg.split_at(2);
    Ok(vec![first.to_vec(), second.to_vec()])
}

/// `t f(x) + (1-t) f(y) <= f(t x + (1-t) y)`.
fn concavity_segment(
    t: f64,
    f: impl Fn(&JordanElement) -> Result<JordanElement>,
    x: &JordanElement,
    y: &JordanElement,
) -> Result<Segment> {
    let avg_of_f = affine(&f(x)?, &f(y)?, t, 1.0 - t)?;
    let f_of_avg = f(&affine(x, y, t, 1.0 - t)?)?;
    Ok(vec![("mean of values", avg_of_f), ("value at mean", f_of_avg)])
}

fn slot_concavity(
    c: &mut TrialCtx,
    second_slot: bool,
    f: fn(&JordanElement, &JordanElement, f64) -> Result<JordanElement>,
) -> Result<Vec<Segment>> {
    let t = c.weight();
    let lam = c.lambda();
    let fixed = c.positive("A")?;
    let x = c.positive("X1")?;
    let y = c.positive("X2")?;
    let seg = if second_slot {
        concavity_segment(t, |z| f(&fixed, z, lam), &x, &y)?
    } else {
        concavity_segment(t, |z| f(z, &fixed, lam), &x, &y)?
    };
    Ok(vec![seg])
}

fn s_fn(a: &JordanElement, b: &JordanElement, _: f64) -> Result<JordanElement> {
    rel_entropy(a, b)
}

fn t_fn(a: &JordanElement, b: &JordanElement, lam: f64) -> Result<JordanElement> {
    tsallis(a, b, lam)
}

fn concave_s_b(c: &mut TrialCtx) -> Result<Vec<Segment>> {
    slot_concavity(c, true, s_fn)
}

fn concave_s_a(c: &mut TrialCtx) -> Result<Vec<Segment>> {
    slot_concavity(c, false, s_fn)
}

fn concave_t_b(c: &mut TrialCtx) -> Result<Vec<Segment>> {
    slot_concavity(c, true, t_fn)
}

fn concave_t_a(c: &mut TrialCtx) -> Result<Vec<Segment>> {
    slot_concavity(c, false, t_fn)
}

fn joint(
    c: &mut TrialCtx,
    f: fn(&JordanElement, &JordanElement, f64) -> Result<JordanElement>,
) -> Result<Vec<Segment>> {
    let t = c.weight();
    let lam = c.lambda();
    let a1 = c.positive("A1")?;
    let a2 = c.positive("A2")?;
    let b1 = c.positive("B1")?;
    let b2 = c.positive("B2")?;
    let lhs = affine(&f(&a1, &b1, lam)?, &f(&a2, &b2, lam)?, t, 1.0 - t)?;
    let rhs = f(&affine(&a1, &a2, t, 1.0 - t)?, &affine(&b1, &b2, t, 1.0 - t)?, lam)?;
    Ok(vec![vec![("mean of values", lhs), ("value at mean", rhs)]])
}

fn joint_s(c: &mut TrialCtx) -> Result<Vec<Segment>> {
    joint(c, s_fn)
}

fn joint_t(c: &mut TrialCtx) -> Result<Vec<Segment>> {
    joint(c, t_fn)
}

fn xlogx_concave(c: &mut TrialCtx) -> Result<Vec<Segment>> {
    let t = c.weight();
    let x = c.positive("X")?;
    let y = c.positive("Y")?;
    let f = ScalarFunction::neg_xlogx();
    Ok(vec![concavity_segment(t, |z| func_calculus(z, &f), &x, &y)?])
}

fn monotone(
    c: &mut TrialCtx,
    f: fn(&JordanElement, &JordanElement, f64) -> Result<JordanElement>,
) -> Result<Vec<Segment>> {
    let lam = c.lambda();
    let a = c.positive("A")?;
    let b = c.positive("B")?;
    // C = B + ρ m G² with ‖G²‖ = 1 and m = min Sp(B)
    let g = random_element_with(&mut c.rng, c.alg).square();
    let gn = jb_norm(&g).max(f64::MIN_POSITIVE);
    let rho = 10f64.powf(-3.0 + 5.0 * c.rng.random::<f64>());
    let bigger = affine(&b, &g, 1.0, rho * min_eigenvalue(&b)? / gn)?;
    c.record("C", &bigger);
    chain(vec![("f(A|B)", f(&a, &b, lam)), ("f(A|C)", f(&a, &bigger, lam))])
}

fn monotone_s(c: &mut TrialCtx) -> Result<Vec<Segment>> {
    monotone(c, s_fn)
}

fn monotone_t(c: &mut TrialCtx) -> Result<Vec<Segment>> {
    monotone(c, t_fn)
}

// ---------------------------------------------------------------------------
// the table

const fn entry(
    id: &'static str,
    description: &'static str,
    hypothesis: Hypothesis,
    eval: Eval,
) -> ChainSpec {
    ChainSpec {
        id,
        description,
        hypothesis,
        uses_alpha: false,
        uses_beta: false,
        lambda: LambdaUse::None,
        delta: DeltaUse::None,
        fixed: None,
        control: false,
        special_only: false,
        scalar: false,
        eval,
    }
}

const fn ab(mut s: ChainSpec) -> ChainSpec {
    s.uses_alpha = true;
    s.uses_beta = true;
    s
}

const fn beta_only(mut s: ChainSpec) -> ChainSpec {
    s.uses_beta = true;
    s
}

const fn with_lambda(mut s: ChainSpec, l: LambdaUse) -> ChainSpec {
    s.lambda = l;
    s
}

const fn with_delta(mut s: ChainSpec, d: DeltaUse) -> ChainSpec {
    s.delta = d;
    s
}

const fn fixed(mut s: ChainSpec, alpha: f64, beta: f64) -> ChainSpec {
    s.fixed = Some((alpha, beta));
    s.uses_alpha = true;
    s.uses_beta = true;
    s
}

const fn control(mut s: ChainSpec) -> ChainSpec {
    s.control = true;
    s
}

const fn special(mut s: ChainSpec) -> ChainSpec {
    s.special_only = true;
    s
}

const fn scalar(mut s: ChainSpec) -> ChainSpec {
    s.scalar = true;
    s.uses_alpha = true;
    s
}

use Hypothesis::{Above, Below, Free};

pub static REGISTRY: &[ChainSpec] = &[
    ab(entry("prop4.3i", "G(a)-G(a-1) <= I <= G(a+1)-G(a)", Free, Eval::Pair(prop43_i))),
    ab(entry("prop4.3ii", "G(a)-G(a-1) <= V <= G(a+1)-G(a)", Free, Eval::Pair(prop43_ii))),
    ab(entry("prop4.3iii", "G(0)-G(-1) <= G(a)-G(a-1)", Free, Eval::Pair(prop43_iii))),
    control(ab(entry("thm4.6i", "A^b <= B: I <= II <= S_ab <= III <= V", Above, Eval::Pair(thm46_i)))),
    control(ab(entry("thm4.6ii", "A^b >= B: V <= III <= S_ab <= II <= I", Below, Eval::Pair(thm46_ii)))),
    control(ab(entry("cor4.7i", "A^b <= B: G(a)-G(a-1) <= I <= II <= S_ab <= III <= V <= G(a+1)-G(a)", Above, Eval::Pair(cor47_i)))),
    control(ab(entry("cor4.7ii", "A^b >= B: G(a)-G(a-1) <= V <= III <= S_ab <= II <= I <= G(a+1)-G(a)", Below, Eval::Pair(cor47_ii)))),
    control(fixed(entry("cor4.8i", "A <= B: closed-form bounds around S", Above, Eval::Pair(cor48_i)), 0.0, 1.0)),
    control(fixed(entry("cor4.8ii", "A >= B: closed-form bounds around S", Below, Eval::Pair(cor48_ii)), 0.0, 1.0)),
    control(with_delta(ab(entry("thm4.9i", "d >= 1, dA^b <= B: Id <= IId <= S_ab <= IIId <= Vd", Above, Eval::Pair(thm49_i))), DeltaUse::High)),
    with_delta(ab(entry("thm4.9ii", "d >= 1, dA^b <= B: II <= IId, IIId <= III", Above, Eval::Pair(thm49_ii))), DeltaUse::High),
    control(with_delta(ab(entry("thm4.9iii", "d <= 1, dA^b >= B: Vd <= IIId <= S_ab <= IId <= Id", Below, Eval::Pair(thm49_iii))), DeltaUse::Low)),
    with_delta(ab(entry("thm4.9iv", "d <= 1, dA^b >= B: IId <= II, III <= IIId", Below, Eval::Pair(thm49_iv))), DeltaUse::Low),
    control(with_delta(fixed(entry("cor4.10i", "d >= 1, dA <= B: closed-form delta bounds around S", Above, Eval::Pair(cor410_i)), 0.0, 1.0), DeltaUse::High)),
    control(with_delta(fixed(entry("cor4.10ii", "d <= 1, dA >= B: closed-form delta bounds around S", Below, Eval::Pair(cor410_ii)), 0.0, 1.0), DeltaUse::Low)),
    with_lambda(beta_only(entry("tsallis-order", "T(-l,b) <= S(0,b) <= T(l,b)", Free, Eval::Pair(tsallis_order))), LambdaUse::Full),
    with_lambda(beta_only(entry("tsallis-bounds", "G(0)-G(-1) <= T(l,b) <= G(1)-G(0); T = 0 iff A^b = B", Free, Eval::Custom(tsallis_bounds))), LambdaUse::Full),
    control(with_lambda(beta_only(entry("prop-iv-i", "A^b <= B: ... <= T(l,b) <= IV <= G(1)-G(0)", Above, Eval::Pair(prop_iv_i))), LambdaUse::Full)),
    control(with_lambda(beta_only(entry("prop-iv-ii", "B <= A^b: ... <= IV <= T(l,b) <= G(1)-G(0)", Below, Eval::Pair(prop_iv_ii))), LambdaUse::Full)),
    with_lambda(fixed(entry("remark4.15", "A-{AB^-1A} <= T(l) <= B-A", Free, Eval::Pair(remark_chain)), 0.0, 1.0), LambdaUse::Full),
    control(with_delta(scalar(entry("prop4.5a", "x >= d >= 1: r_d <= s_d <= q <= j_d <= k_d", Above, Eval::Custom(prop45_a))), DeltaUse::High)),
    with_delta(scalar(entry("prop4.5b", "x >= d >= 1: s_1 <= s_d, j_d <= j_1", Above, Eval::Custom(prop45_b))), DeltaUse::High),
    control(with_delta(scalar(entry("prop4.5c", "x <= d <= 1: k_d <= j_d <= q <= s_d <= r_d", Below, Eval::Custom(prop45_c))), DeltaUse::Low)),
    with_delta(scalar(entry("prop4.5d", "x <= d <= 1: s_d <= s_1, j_1 <= j_d", Below, Eval::Custom(prop45_d))), DeltaUse::Low),
    entry("concave-S-B", "S(A|.) is concave", Free, Eval::Custom(concave_s_b)),
    entry("concave-S-A", "S(.|B) is concave", Free, Eval::Custom(concave_s_a)),
    with_lambda(entry("concave-T-B", "T_l(A|.) is concave", Free, Eval::Custom(concave_t_b)), LambdaUse::Full),
    with_lambda(entry("concave-T-A", "T_l(.|B) is concave", Free, Eval::Custom(concave_t_a)), LambdaUse::Full),
    special(entry("joint-S", "S is jointly concave", Free, Eval::Custom(joint_s))),
    special(with_lambda(entry("joint-T", "T_l is jointly concave", Free, Eval::Custom(joint_t)), LambdaUse::Full)),
    entry("xlogx-concave", "-x log x is operator concave", Free, Eval::Custom(xlogx_concave)),
    entry("monotone-S", "B <= C implies S(A|B) <= S(A|C)", Free, Eval::Custom(monotone_s)),
    with_lambda(entry("monotone-T", "B <= C implies T_l(A|B) <= T_l(A|C)", Free, Eval::Custom(monotone_t)), LambdaUse::Full),
];

pub fn find(id: &str) -> Option<&'static ChainSpec> {
    REGISTRY.iter().find(|s| s.id == id)
}

pub fn chain_ids() -> Vec<&'static str> {
    REGISTRY.iter().map(|s| s.id).collect()
}

/// Ids with a negative control run.
pub fn control_ids() -> Vec<&'static str> {
    REGISTRY.iter().filter(|s| s.control).map(|s| s.id).collect()
}

impl ChainSpec {
    fn lambda_grid(&self, mode: Mode) -> &'static [f64] {
        match (self.lambda, mode) {
            (LambdaUse::None, _) => &[],
            // λ = 1 collapses IV onto T; a control needs the strict case
            (_, Mode::Control) | (LambdaUse::Open, _) => &LAMBDA_GRID[..3],
            (LambdaUse::Full, _) => &LAMBDA_GRID,
        }
    }

    fn delta_grid(&self) -> &'static [f64] {
        match self.delta {
            DeltaUse::None => &[],
            DeltaUse::High => &DELTA_HIGH,
            DeltaUse::Low => &DELTA_LOW,
        }
    }

    /// The parameter values cycled through, with overrides applied.
    pub fn param_grid(&self, overrides: &EntropyParams, mode: Mode) -> ParamGrid {
        let pick = |used: bool, fixed: Option<f64>, over: Option<f64>, grid: &[f64]| -> Vec<f64> {
            if !used {
                return vec![];
            }
            match (fixed, over) {
                (Some(f), _) => vec![f],
                (None, Some(o)) => vec![o],
                (None, None) => grid.to_vec(),
            }
        };
        ParamGrid {
            alpha: pick(self.uses_alpha, self.fixed.map(|f| f.0), overrides.alpha, &ALPHA_GRID),
            beta: pick(
                self.uses_beta && !self.scalar,
                self.fixed.map(|f| f.1),
                overrides.beta,
                &BETA_GRID,
            ),
            lambda: pick(self.lambda != LambdaUse::None, None, overrides.lambda, self.lambda_grid(mode)),
            delta: pick(self.delta != DeltaUse::None, None, overrides.delta, self.delta_grid()),
        }
    }

    /// Parameters of trial `i`: the grids are cycled with periods 1, 4, 12
    /// and 48 so that 500 trials cover every combination.
    pub fn trial_params(&self, grid: &ParamGrid, i: u64) -> EntropyParams {
        let at = |v: &[f64], period: u64| -> Option<f64> {
            if v.is_empty() {
                None
            } else {
                Some(v[((i / period) % v.len() as u64) as usize])
            }
        };
        EntropyParams {
            alpha: at(&grid.alpha, 1),
            beta: at(&grid.beta, 4),
            lambda: at(&grid.lambda, 12),
            delta: at(&grid.delta, 48),
        }
    }
}

fn clamp_margin(m: f64) -> f64 {
    if m.is_finite() {
        m
    } else {
        -f64::MAX
    }
}

struct TrialOutcome {
    margins: Vec<(String, f64)>,
    violations: Vec<Violation>,
}

fn run_one(
    spec: &ChainSpec,
    config: &CampaignConfig,
    backend: AlgebraDescriptor,
    grid: &ParamGrid,
    tol: f64,
    i: u64,
) -> Result<TrialOutcome> {
    let hypothesis = match config.mode {
        Mode::Standard => spec.hypothesis,
        Mode::Control => spec.hypothesis.flipped(),
    };
    let params = spec.trial_params(grid, i);
    let mut ctx = TrialCtx {
        trial: i,
        rng: trial_rng(config.seed, spec.id, i),
        alg: backend,
        cond: config.cond,
        params,
        hypothesis,
        elements: BTreeMap::new(),
        scalars: BTreeMap::new(),
    };
    let segments = match spec.eval {
        Eval::Pair(f) => f(&ctx.pair()?)?,
        Eval::Custom(f) => f(&mut ctx)?,
    };
    let mut margins = Vec::new();
    let mut violations = Vec::new();
    for seg in &segments {
        for w in seg.windows(2) {
            let label = format!("{} <= {}", w[0].0, w[1].0);
            let cert = loewner_leq(&w[0].1, &w[1].1, tol)?;
            let m = clamp_margin(cert.normalized());
            if !(m >= -tol) {
                violations.push(Violation {
                    trial: i,
                    link: label.clone(),
                    margin: m,
                    params,
                    elements: ctx.elements.clone(),
                    scalars: ctx.scalars.clone(),
                });
            }
            margins.push((label, m));
        }
    }
    Ok(TrialOutcome { margins, violations })
}

/// Runs the campaign for a registry chain on one backend.
pub fn verify_chain(id: &str, config: &CampaignConfig) -> Result<ChainReport> {
    config.validate()?;
    let spec = find(id).ok_or_else(|| JordanError::UnknownId(id.to_string()))?;
    if config.mode == Mode::Control && !spec.control {
        return Err(JordanError::Parameter(format!("`{id}` has no negative control")));
    }
    let backend = if spec.scalar { AlgebraDescriptor::sym(1) } else { config.backend };
    let tol = config.tol.unwrap_or(DEFAULT_TOL);
    let grid = spec.param_grid(&config.params, config.mode);
    check_overrides(spec, &grid)?;

    let outcomes = run_trials(config.trials, config.threads, |i| {
        run_one(spec, config, backend, &grid, tol, i)
    })?;

    let mut links: Vec<LinkSummary> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut violations = Vec::new();
    let mut violation_count = 0u64;
    for (i, out) in outcomes.into_iter().enumerate() {
        for (label, m) in out.margins {
            let k = *index.entry(label.clone()).or_insert_with(|| {
                links.push(LinkSummary {
                    label,
                    worst_margin: m,
                    argmin_trial: i as u64,
                });
                links.len() - 1
            });
            if m < links[k].worst_margin {
                links[k].worst_margin = m;
                links[k].argmin_trial = i as u64;
            }
        }
        violation_count += out.violations.len() as u64;
        for v in out.violations {
            if violations.len() < MAX_RECORDED_VIOLATIONS {
                violations.push(v);
            }
        }
    }

    let gating = config.mode == Mode::Standard && !(spec.special_only && !backend.kind.is_special());
    Ok(ChainReport {
        theorem_id: id.to_string(),
        kind: ReportKind::Chain,
        mode: config.mode,
        backend,
        trials: config.trials,
        tol,
        cond: config.cond,
        seed: config.seed,
        params: grid,
        gating,
        links,
        violation_count,
        violations,
        max_deviation: None,
        passed: violation_count == 0,
    })
}

fn check_overrides(spec: &ChainSpec, grid: &ParamGrid) -> Result<()> {
    let probe = EntropyParams {
        alpha: grid.alpha.first().copied().or(Some(0.0)),
        beta: grid.beta.first().copied().or(Some(1.0)),
        lambda: grid.lambda.first().copied().or(Some(1.0)),
        delta: grid.delta.first().copied().or(Some(1.0)),
    };
    probe.alpha()?;
    probe.beta()?;
    probe.lambda()?;
    let d = probe.delta()?;
    match spec.delta {
        DeltaUse::High if d < 1.0 => Err(JordanError::Parameter(format!("`{}` needs delta >= 1, got {d}", spec.id))),
        DeltaUse::Low if d > 1.0 => Err(JordanError::Parameter(format!("`{}` needs delta <= 1, got {d}", spec.id))),
        _ => Ok(()),
    }
}

/// Evaluates one chain on a caller-supplied pair (no sampling); returns the
/// labelled links with their normalized margins.
pub fn evaluate_chain_on(
    id: &str,
    a: &JordanElement,
    b: &JordanElement,
    params: &EntropyParams,
    tol: f64,
) -> Result<Vec<(String, f64)>> {
    let spec = find(id).ok_or_else(|| JordanError::UnknownId(id.to_string()))?;
    let Eval::Pair(f) = spec.eval else {
        return Err(JordanError::Parameter(format!("`{id}` draws its own operands")));
    };
    let segments = f(&Ops::new(a.clone(), b.clone(), fill(spec, params)))?;
    let mut out = Vec::new();
    for seg in &segments {
        for w in seg.windows(2) {
            let cert = loewner_leq(&w[0].1, &w[1].1, tol)?;
            out.push((format!("{} <= {}", w[0].0, w[1].0), cert.normalized()));
        }
    }
    Ok(out)
}

fn fill(spec: &ChainSpec, p: &EntropyParams) -> EntropyParams {
    let (fa, fb) = spec.fixed.map(|(a, b)| (Some(a), Some(b))).unwrap_or((None, None));
    EntropyParams {
        alpha: fa.or(p.alpha).or(Some(0.0)),
        beta: fb.or(p.beta).or(Some(1.0)),
        lambda: p.lambda.or(Some(1.0)),
        delta: p.delta.or(Some(1.0)),
    }
}
