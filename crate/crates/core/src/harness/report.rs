use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::element::{AlgebraDescriptor, JordanElement};
use crate::error::{JordanError, Result};
use crate::means::EntropyParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportKind {
    Chain,
    Identity,
}

/// `Standard` samples the stated hypothesis; `Control` samples its negation
/// and is expected to produce violations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Standard,
    Control,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkSummary {
    pub label: String,
    /// Worst `margin / scale` over all trials.
    pub worst_margin: f64,
    pub argmin_trial: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub trial: u64,
    pub link: String,
    pub margin: f64,
    pub params: EntropyParams,
    pub elements: BTreeMap<String, JordanElement>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub scalars: BTreeMap<String, f64>,
}

/// Parameter values cycled through by the campaign.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ParamGrid {
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub alpha: Vec<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub beta: Vec<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub lambda: Vec<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub delta: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainReport {
    pub theorem_id: String,
    pub kind: ReportKind,
    pub mode: Mode,
    pub backend: AlgebraDescriptor,
    pub trials: u64,
    pub tol: f64,
    pub cond: f64,
    pub seed: u64,
    pub params: ParamGrid,
    /// Whether the report takes part in the pass/fail verdict.
    pub gating: bool,
    pub links: Vec<LinkSummary>,
    pub violation_count: u64,
    /// The first violations in trial order.
    pub violations: Vec<Violation>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub max_deviation: Option<f64>,
    pub passed: bool,
}

pub const MAX_RECORDED_VIOLATIONS: usize = 16;

impl ChainReport {
    /// Links whose worst margin falls below `-tol`.
    pub fn failing_links(&self) -> usize {
        self.links.iter().filter(|l| !(l.worst_margin >= -self.tol)).count()
    }

    pub fn worst_margin(&self) -> f64 {
        self.links
            .iter()
            .map(|l| l.worst_margin)
            .fold(f64::INFINITY, |m, v| if v.is_nan() { f64::NAN } else { m.min(v) })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| JordanError::Parse(e.to_string()))
    }
}

/// One row of the summary table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub theorem_id: String,
    pub backend: String,
    pub dim: usize,
    pub trials: u64,
    pub worst_margin: f64,
    pub verdict: String,
}

impl SummaryRow {
    pub fn from_report(r: &ChainReport) -> Self {
        let verdict = match (r.mode, r.gating, r.passed) {
            (Mode::Control, _, false) => "control-detected",
            (Mode::Control, _, true) => "control-silent",
            (_, false, true) => "pass-exploratory",
            (_, false, false) => "fail-exploratory",
            (_, true, true) => "pass",
            (_, true, false) => "fail",
        };
        Self {
            theorem_id: r.theorem_id.clone(),
            backend: r.backend.kind.name().to_string(),
            dim: r.backend.dim,
            trials: r.trials,
            worst_margin: r.worst_margin(),
            verdict: verdict.to_string(),
        }
    }
}

pub const CSV_HEADER: &str = "theorem_id,backend,dim,trials,worst_margin,verdict";

pub fn summary_csv(rows: &[SummaryRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.theorem_id, r.backend, r.dim, r.trials, r.worst_margin, r.verdict
        ));
    }
    out
}

/// Failing gating links across reports: the verification exit criterion.
pub fn failing_link_count(reports: &[ChainReport]) -> usize {
    reports
        .iter()
        .filter(|r| r.gating && r.mode == Mode::Standard)
        .map(|r| r.failing_links())
        .sum()
}
