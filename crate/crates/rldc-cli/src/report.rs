//! Campaign reports: JSON as the canonical form, CSV as a flat projection.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use rldc_core::analysis::{DangerSurvey, IndexStats, NonsimilarityReport};
use rldc_core::inner::CodebookReport;

use crate::config::ExperimentConfig;

/// Derived constants of a campaign, computed by the library.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DerivedParams {
    pub k: usize,
    pub m: usize,
    pub d: usize,
    pub q: usize,
    pub delta: f64,
    pub delta_in_achieved: f64,
    pub eps_out: f64,
    pub rate: f64,
    pub edit_budget: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifierOutcomes {
    pub codebook: CodebookReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub danger: Option<DangerSurvey>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nonsimilarity: Option<NonsimilarityReport>,
}

/// The full campaign report. `wall_clock_ms` is the only field excluded
/// from determinism comparisons.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub config: ExperimentConfig,
    pub derived: DerivedParams,
    pub results: Vec<IndexStats>,
    pub verifiers: VerifierOutcomes,
    pub all_invariants_pass: bool,
    pub wall_clock_ms: u128,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Fixed column order: index, trials, success, correct, bot, ci_low, ci_high.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,trials,success,correct,bot,ci_low,ci_high\n");
        for r in &self.results {
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.index,
                r.stats.trials,
                r.stats.successes,
                r.stats.correct,
                r.stats.bot,
                r.ci_low,
                r.ci_high
            )
            .unwrap();
        }
        out
    }
}
