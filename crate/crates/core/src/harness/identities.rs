//! Registry of identities checked by relative deviation.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rand::Rng;

use crate::element::{jb_norm, quad_map, AlgebraDescriptor, JordanElement};
use crate::error::{JordanError, Result};
use crate::means::{
    geometric_mean, harmonic_mean, rel_entropy, rel_entropy_ab, rel_entropy_xlogx, tsallis,
    tsallis_lb, EntropyParams,
};

use super::quadrature::{
    quad_integral_geo, quad_integral_s, quad_integral_t, weight_integral, QuadratureConfig,
};
use super::report::{
    ChainReport, LinkSummary, Mode, ParamGrid, ReportKind, Violation, MAX_RECORDED_VIOLATIONS,
};
use super::sample::{random_invertible_with, random_positive_with, trial_rng, TrialRng};
use super::{run_trials, CampaignConfig, DEFAULT_TOL, LAMBDA_GRID};

/// Integral representations are compared at this relative tolerance.
pub const QUADRATURE_TOL: f64 = 1e-6;
/// Condition number cap for the quadrature identities.
pub const QUADRATURE_COND: f64 = 100.0;
/// Steps of the `λ -> 0` limit check.
pub const LIMIT_STEPS: [f64; 3] = [1e-2, 1e-3, 1e-4];
/// Accepted range of successive deviation ratios in the limit check.
pub const LIMIT_RATIO: (f64, f64) = (5.0, 20.0);

/// `‖x - y‖ / max(‖x‖, ‖y‖)`; zero when both vanish.
pub fn relative_deviation(x: &JordanElement, y: &JordanElement) -> Result<f64> {
    let num = jb_norm(&x.sub(y)?);
    let den = jb_norm(x).max(jb_norm(y)).max(f64::MIN_POSITIVE);
    Ok(if num == 0.0 { 0.0 } else { num / den })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum LambdaRange {
    None,
    /// `(0, 1]`
    Full,
    /// `(0, 1)`, as the integral representations require.
    Open,
}

pub struct IdentitySpec {
    pub id: &'static str,
    pub description: &'static str,
    pub default_tol: f64,
    cond_cap: Option<f64>,
    lambda: LambdaRange,
    eval: fn(&mut IdentityCtx) -> Result<f64>,
}

struct IdentityCtx {
    trial: u64,
    rng: TrialRng,
    alg: AlgebraDescriptor,
    cond: f64,
    lambda: f64,
    quadrature: QuadratureConfig,
    elements: BTreeMap<String, JordanElement>,
    scalars: BTreeMap<String, f64>,
}

impl IdentityCtx {
    fn positive(&mut self, name: &str) -> Result<JordanElement> {
        let x = random_positive_with(&mut self.rng, self.alg, self.cond)?;
        self.elements.insert(name.to_string(), x.clone());
        Ok(x)
    }

    fn pair(&mut self) -> Result<(JordanElement, JordanElement)> {
        Ok((self.positive("A")?, self.positive("B")?))
    }

    fn invertible(&mut self) -> Result<JordanElement> {
        let c = random_invertible_with(&mut self.rng, self.alg)?;
        self.elements.insert("C".into(), c.clone());
        Ok(c)
    }

    fn factor(&mut self) -> f64 {
        let c = 10f64.powf(self.rng.random_range(-1.0..1.0));
        self.scalars.insert("c".into(), c);
        c
    }

    fn weight(&mut self) -> f64 {
        let t = [0.25, 0.5, 0.75][(self.trial % 3) as usize];
        self.scalars.insert("t".into(), t);
        t
    }
}

fn integral_s(c: &mut IdentityCtx) -> Result<f64> {
    let (a, b) = c.pair()?;
    relative_deviation(&quad_integral_s(&a, &b, &c.quadrature)?, &rel_entropy(&a, &b)?)
}

fn integral_t(c: &mut IdentityCtx) -> Result<f64> {
    let (a, b) = c.pair()?;
    let lam = c.lambda;
    relative_deviation(&quad_integral_t(&a, &b, lam, &c.quadrature)?, &tsallis(&a, &b, lam)?)
}

fn integral_geo(c: &mut IdentityCtx) -> Result<f64> {
    let (a, b) = c.pair()?;
    let lam = c.lambda;
    relative_deviation(
        &quad_integral_geo(&a, &b, lam, &c.quadrature)?,
        &geometric_mean(&a, &b, lam)?,
    )
}

fn integral_weight(c: &mut IdentityCtx) -> Result<f64> {
    let exact = PI / (c.lambda * PI).sin();
    Ok((weight_integral(c.lambda, &c.quadrature)? - exact).abs() / exact)
}

fn xlogx_form(c: &mut IdentityCtx) -> Result<f64> {
    let (a, b) = c.pair()?;
    relative_deviation(&rel_entropy_xlogx(&a, &b)?, &rel_entropy(&a, &b)?)
}

fn homogeneity_s(c: &mut IdentityCtx) -> Result<f64> {
    let (a, b) = c.pair()?;
    let k = c.factor();
    relative_deviation(&rel_entropy(&a.scale(k), &b.scale(k))?, &rel_entropy(&a, &b)?.scale(k))
}

fn homogeneity_t(c: &mut IdentityCtx) -> Result<f64> {
    let (a, b) = c.pair()?;
    let k = c.factor();
    let lam = c.lambda;
    relative_deviation(
        &tsallis(&a.scale(k), &b.scale(k), lam)?,
        &tsallis(&a, &b, lam)?.scale(k),
    )
}

fn congruence_s(c: &mut IdentityCtx) -> Result<f64> {
    let (a, b) = c.pair()?;
    let m = c.invertible()?;
    relative_deviation(
        &rel_entropy(&quad_map(&m, &a)?, &quad_map(&m, &b)?)?,
        &quad_map(&m, &rel_entropy(&a, &b)?)?,
    )
}

fn congruence_t(c: &mut IdentityCtx) -> Result<f64> {
    let (a, b) = c.pair()?;
    let m = c.invertible()?;
    let lam = c.lambda;
    relative_deviation(
        &tsallis(&quad_map(&m, &a)?, &quad_map(&m, &b)?, lam)?,
        &quad_map(&m, &tsallis(&a, &b, lam)?)?,
    )
}

fn congruence_harm(c: &mut IdentityCtx) -> Result<f64> {
    let (a, b) = c.pair()?;
    let m = c.invertible()?;
    let t = c.weight();
    relative_deviation(
        &harmonic_mean(&quad_map(&m, &a)?, &quad_map(&m, &b)?, t)?,
        &quad_map(&m, &harmonic_mean(&a, &b, t)?)?,
    )
}

fn s01(c: &mut IdentityCtx) -> Result<f64> {
    let (a, b) = c.pair()?;
    relative_deviation(&rel_entropy_ab(&a, &b, 0.0, 1.0)?, &rel_entropy(&a, &b)?)
}

fn t1(c: &mut IdentityCtx) -> Result<f64> {
    let (a, b) = c.pair()?;
    let lam = c.lambda;
    relative_deviation(&tsallis_lb(&a, &b, lam, 1.0)?, &tsallis(&a, &b, lam)?)
}

/// Ratios `‖T_λ - S‖` at successive steps of [`LIMIT_STEPS`].
pub fn limit_ratios(a: &JordanElement, b: &JordanElement) -> Result<[f64; 2]> {
    let s = rel_entropy(a, b)?;
    let mut d = [0.0; 3];
    for (k, &lam) in LIMIT_STEPS.iter().enumerate() {
        d[k] = jb_norm(&tsallis(a, b, lam)?.sub(&s)?);
    }
    Ok([d[0] / d[1], d[1] / d[2]])
}

/// Distance of the ratios from the accepted range (zero inside it).
fn limit_t(c: &mut IdentityCtx) -> Result<f64> {
    let (a, b) = c.pair()?;
    let r = limit_ratios(&a, &b)?;
    c.scalars.insert("ratio_1".into(), r[0]);
    c.scalars.insert("ratio_2".into(), r[1]);
    let (lo, hi) = LIMIT_RATIO;
    Ok(r.iter()
        .map(|&x| if x.is_finite() { (lo - x).max(x - hi).max(0.0) } else { f64::MAX })
        .fold(0.0, f64::max))
}

pub static IDENTITIES: &[IdentitySpec] = &[
    IdentitySpec { id: "integral-S", description: "S(A|B) equals its harmonic-mean integral", default_tol: QUADRATURE_TOL, cond_cap: Some(QUADRATURE_COND), lambda: LambdaRange::None, eval: integral_s },
    IdentitySpec { id: "integral-T", description: "T_l(A|B) equals its weighted harmonic-mean integral", default_tol: QUADRATURE_TOL, cond_cap: Some(QUADRATURE_COND), lambda: LambdaRange::Open, eval: integral_t },
    IdentitySpec { id: "integral-geo", description: "A #_l B equals its weighted harmonic-mean integral", default_tol: QUADRATURE_TOL, cond_cap: Some(QUADRATURE_COND), lambda: LambdaRange::Open, eval: integral_geo },
    IdentitySpec { id: "integral-weight", description: "the weight integrates to pi / sin(l pi)", default_tol: DEFAULT_TOL, cond_cap: None, lambda: LambdaRange::Open, eval: integral_weight },
    IdentitySpec { id: "xlogx-form", description: "S(A|B) via -X log X in the second operand", default_tol: DEFAULT_TOL, cond_cap: None, lambda: LambdaRange::None, eval: xlogx_form },
    IdentitySpec { id: "homogeneity-S", description: "S(cA|cB) = c S(A|B)", default_tol: DEFAULT_TOL, cond_cap: None, lambda: LambdaRange::None, eval: homogeneity_s },
    IdentitySpec { id: "homogeneity-T", description: "T_l(cA|cB) = c T_l(A|B)", default_tol: DEFAULT_TOL, cond_cap: None, lambda: LambdaRange::Full, eval: homogeneity_t },
    IdentitySpec { id: "congruence-S", description: "S({CAC}|{CBC}) = {C S(A|B) C}", default_tol: DEFAULT_TOL, cond_cap: None, lambda: LambdaRange::None, eval: congruence_s },
    IdentitySpec { id: "congruence-T", description: "T_l({CAC}|{CBC}) = {C T_l(A|B) C}", default_tol: DEFAULT_TOL, cond_cap: None, lambda: LambdaRange::Full, eval: congruence_t },
    IdentitySpec { id: "congruence-harm", description: "{CAC} !_t {CBC} = {C (A !_t B) C}", default_tol: DEFAULT_TOL, cond_cap: None, lambda: LambdaRange::None, eval: congruence_harm },
    IdentitySpec { id: "S01", description: "S_(0,1) = S", default_tol: DEFAULT_TOL, cond_cap: None, lambda: LambdaRange::None, eval: s01 },
    IdentitySpec { id: "T1", description: "T_(l,1) = T_l", default_tol: DEFAULT_TOL, cond_cap: None, lambda: LambdaRange::Full, eval: t1 },
    IdentitySpec { id: "limit-T", description: "|T_l - S| shrinks linearly as l -> 0", default_tol: DEFAULT_TOL, cond_cap: None, lambda: LambdaRange::None, eval: limit_t },
];

pub fn find(id: &str) -> Option<&'static IdentitySpec> {
    IDENTITIES.iter().find(|s| s.id == id)
}

pub fn identity_ids() -> Vec<&'static str> {
    IDENTITIES.iter().map(|s| s.id).collect()
}

struct Outcome {
    deviation: f64,
    violation: Option<Violation>,
}

/// Runs the campaign for an identity on one backend.
pub fn verify_identity(id: &str, config: &CampaignConfig) -> Result<ChainReport> {
    config.validate()?;
    let spec = find(id).ok_or_else(|| JordanError::UnknownId(id.to_string()))?;
    if config.mode == Mode::Control {
        return Err(JordanError::Parameter(format!("identity `{id}` has no negative control")));
    }
    let tol = config.tol.unwrap_or(spec.default_tol);
    let cond = spec.cond_cap.map_or(config.cond, |c| c.min(config.cond));
    let quadrature = QuadratureConfig::jacobi(config.nodes)?;
    let lambdas: Vec<f64> = match (spec.lambda, config.params.lambda) {
        (LambdaRange::None, _) => vec![],
        (_, Some(l)) => vec![l],
        (LambdaRange::Full, None) => LAMBDA_GRID.to_vec(),
        (LambdaRange::Open, None) => LAMBDA_GRID[..3].to_vec(),
    };
    for &l in &lambdas {
        let ok = match spec.lambda {
            LambdaRange::Open => l > 0.0 && l < 1.0,
            _ => l > 0.0 && l <= 1.0,
        };
        if !ok {
            return Err(JordanError::Parameter(format!("`{id}` cannot use lambda = {l}")));
        }
    }

    let outcomes = run_trials(config.trials, config.threads, |i| {
        let lambda = if lambdas.is_empty() { 1.0 } else { lambdas[(i % lambdas.len() as u64) as usize] };
        let mut ctx = IdentityCtx {
            trial: i,
            rng: trial_rng(config.seed, spec.id, i),
            alg: config.backend,
            cond,
            lambda,
            quadrature,
            elements: BTreeMap::new(),
            scalars: BTreeMap::new(),
        };
        let dev = (spec.eval)(&mut ctx)?;
        let dev = if dev.is_nan() { f64::MAX } else { dev.min(f64::MAX) };
        let violation = (dev > tol).then(|| Violation {
            trial: i,
            link: spec.id.to_string(),
            margin: -dev,
            params: EntropyParams {
                lambda: (!lambdas.is_empty()).then_some(lambda),
                ..EntropyParams::default()
            },
            elements: ctx.elements,
            scalars: ctx.scalars,
        });
        Ok(Outcome { deviation: dev, violation })
    })?;

    let mut worst = 0.0f64;
    let mut argmax = 0u64;
    let mut violations = Vec::new();
    let mut violation_count = 0u64;
    for (i, o) in outcomes.into_iter().enumerate() {
        if o.deviation > worst {
            worst = o.deviation;
            argmax = i as u64;
        }
        if let Some(v) = o.violation {
            violation_count += 1;
            if violations.len() < MAX_RECORDED_VIOLATIONS {
                violations.push(v);
            }
        }
    }
    Ok(ChainReport {
        theorem_id: id.to_string(),
        kind: ReportKind::Identity,
        mode: Mode::Standard,
        backend: config.backend,
        trials: config.trials,
        tol,
        cond,
        seed: config.seed,
        params: ParamGrid {
            lambda: lambdas,
            ..ParamGrid::default()
        },
        gating: true,
        links: vec![LinkSummary {
            label: id.to_string(),
            worst_margin: -worst,
            argmin_trial: argmax,
        }],
        violation_count,
        violations,
        max_deviation: Some(worst),
        passed: violation_count == 0,
    })
}
