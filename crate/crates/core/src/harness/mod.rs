//! Verification harness: Löwner certificates, samplers, quadrature and the
//! registry of inequalities and identities checked by random campaigns.

pub mod identities;
pub mod order;
pub mod quadrature;
pub mod registry;
pub mod report;
pub mod sample;
pub mod scalar;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::element::AlgebraDescriptor;
use crate::error::{JordanError, Result};
use crate::means::EntropyParams;
use report::{ChainReport, Mode};

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_TRIALS: u64 = 500;
pub const DEFAULT_COND: f64 = 100.0;
pub const DEFAULT_NODES: usize = 128;

pub const ALPHA_GRID: [f64; 4] = [0.0, 0.5, 1.0, 2.0];
pub const BETA_GRID: [f64; 3] = [0.5, 1.0, 2.0];
pub const LAMBDA_GRID: [f64; 4] = [0.1, 0.5, 0.9, 1.0];
pub const DELTA_HIGH: [f64; 3] = [1.0, 2.0, 5.0];
pub const DELTA_LOW: [f64; 3] = [0.2, 0.5, 1.0];

/// The backends a full campaign covers.
pub fn default_backends() -> Vec<AlgebraDescriptor> {
    let mut v: Vec<AlgebraDescriptor> = [2, 3, 4, 6, 8].into_iter().map(AlgebraDescriptor::sym).collect();
    v.extend([1, 2, 4, 8].into_iter().map(AlgebraDescriptor::spin));
    v.push(AlgebraDescriptor::albert());
    v
}

/// Settings shared by chain and identity campaigns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub backend: AlgebraDescriptor,
    pub trials: u64,
    pub cond: f64,
    pub seed: u64,
    /// `None` uses the entry's own default.
    pub tol: Option<f64>,
    /// Fixed values replace the corresponding grid.
    pub params: EntropyParams,
    pub nodes: usize,
    pub mode: Mode,
    /// Worker threads; `Some(0)` runs serially, `None` reads `JE_THREADS`.
    pub threads: Option<usize>,
}

impl CampaignConfig {
    pub fn new(backend: AlgebraDescriptor) -> Self {
        Self {
            backend,
            trials: DEFAULT_TRIALS,
            cond: DEFAULT_COND,
            seed: 0,
            tol: None,
            params: EntropyParams::default(),
            nodes: DEFAULT_NODES,
            mode: Mode::Standard,
            threads: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(JordanError::Parameter("trials must be positive".into()));
        }
        if !(self.cond >= 1.0 && self.cond.is_finite()) {
            return Err(JordanError::Parameter(format!("cond must be >= 1, got {}", self.cond)));
        }
        let p = &self.params;
        if p.alpha.is_some() {
            p.alpha()?;
        }
        if p.beta.is_some() {
            p.beta()?;
        }
        if p.lambda.is_some() {
            p.lambda()?;
        }
        if p.delta.is_some() {
            p.delta()?;
        }
        if let Some(t) = self.tol {
            if !(t >= 0.0) {
                return Err(JordanError::Parameter(format!("tol must be >= 0, got {t}")));
            }
        }
        Ok(())
    }
}

/// Thread count from `JE_THREADS`; `None` when unset or unparsable.
pub fn env_threads() -> Option<usize> {
    std::env::var("JE_THREADS").ok()?.trim().parse().ok()
}

/// Runs `f` for every trial index and returns the outcomes in index order,
/// so serial and parallel runs agree exactly. The first error by index wins.
pub fn run_trials<T, F>(trials: u64, threads: Option<usize>, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
{
    let threads = threads.or_else(env_threads);
    let outcomes: Vec<Result<T>> = match threads {
        Some(0) | Some(1) => (0..trials).map(&f).collect(),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| JordanError::Parameter(format!("thread pool: {e}")))?;
            pool.install(|| (0..trials).into_par_iter().map(&f).collect())
        }
        None => (0..trials).into_par_iter().map(&f).collect(),
    };
    outcomes.into_iter().collect()
}

/// Every chain and identity id.
pub fn all_ids() -> Vec<&'static str> {
    registry::chain_ids()
        .into_iter()
        .chain(identities::identity_ids())
        .collect()
}

/// Runs a chain or identity campaign by id.
pub fn verify(id: &str, config: &CampaignConfig) -> Result<ChainReport> {
    if registry::find(id).is_some() {
        registry::verify_chain(id, config)
    } else if identities::find(id).is_some() {
        identities::verify_identity(id, config)
    } else {
        Err(JordanError::UnknownId(id.to_string()))
    }
}
