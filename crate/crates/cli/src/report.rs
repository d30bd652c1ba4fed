//! The report tree shared by every output format.

use std::collections::BTreeMap;

use reprokit::{CutoffCurve, EffectPoint, PairingReport, RboSummary, TestResult};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Evaluate,
    Reproduce,
    Replicate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub measures: Vec<String>,
    pub cutoffs: Vec<usize>,
    pub rbo_p: Option<f64>,
    pub welch: Option<bool>,
    pub depth: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunInfo {
    pub role: String,
    pub tag: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArpRow {
    pub run: String,
    pub measure: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicScores {
    pub run: String,
    pub measure: String,
    pub scores: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelityRow {
    pub measure: String,
    pub arp_orig: f64,
    pub arp_rep: f64,
    /// `arp_rep - arp_orig`
    pub arp_delta: f64,
    pub rmse: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectRow {
    pub run_pair: String,
    #[serde(flatten)]
    pub point: EffectPoint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedTest {
    pub measure: String,
    /// `"<first> vs <second>"`; the statistic is first minus second.
    pub comparison: String,
    #[serde(flatten)]
    pub result: TestResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedTopics {
    pub run: String,
    pub measure: String,
    pub topics: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub skipped: Vec<SkippedTopics>,
    pub truncated: BTreeMap<String, usize>,
    pub pairing: Option<PairingReport>,
    pub warnings: Vec<String>,
}

impl Diagnostics {
    pub fn is_empty(&self) -> bool {
        self.skipped.is_empty()
            && self.truncated.values().all(|&n| n == 0)
            && self.warnings.is_empty()
            && self.pairing.as_ref().is_none_or(PairingReport::is_identical)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReproReport {
    pub mode: Mode,
    pub params: Params,
    pub runs: Vec<RunInfo>,
    pub arp_table: Vec<ArpRow>,
    pub per_topic: Vec<TopicScores>,
    #[serde(default)]
    pub fidelity: Vec<FidelityRow>,
    #[serde(default)]
    pub curves: Vec<CutoffCurve>,
    #[serde(default)]
    pub rbo: Option<RboSummary>,
    #[serde(default)]
    pub effect_points: Vec<EffectRow>,
    /// Sign convention for `delta_ri` in `effect_points`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_ri_orientation: Option<String>,
    #[serde(default)]
    pub tests: Vec<NamedTest>,
    pub diagnostics: Diagnostics,
}

impl ReproReport {
    pub fn new(mode: Mode, params: Params) -> Self {
        ReproReport {
            mode,
            params,
            runs: Vec::new(),
            arp_table: Vec::new(),
            per_topic: Vec::new(),
            fidelity: Vec::new(),
            curves: Vec::new(),
            rbo: None,
            effect_points: Vec::new(),
            delta_ri_orientation: None,
            tests: Vec::new(),
            diagnostics: Diagnostics::default(),
        }
    }
}
