//! Typed shapes of the JSON each command prints; parsing output back into
//! these is the schema check.

use ordered_turan::appendix::LemmaCheckReport;
use ordered_turan::hostgen::HostReport;
use ordered_turan::pattern::Vanishing;
use ordered_turan::richness::{AuxFailure, EmbedReport, ExtractionTrace, RichnessCertificate};
use ordered_turan::tiling::{EmbeddingSample, TilingConfig, TilingReport};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HostOutput {
    pub kind: String,
    pub vertices: usize,
    pub edges: usize,
    pub level_counts: Vec<u64>,
    pub file: Option<String>,
    pub report: Option<HostReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifyOutput {
    pub vertices: usize,
    pub edges: usize,
    pub has_monotone_p3: bool,
    pub monotone_path: Option<[usize; 3]>,
    pub chi_interval: usize,
    /// Null for edgeless patterns.
    pub pi: Option<f64>,
    pub classification: Vanishing,
    /// `[i, b]` for `(i, b)` in `H_k`, `i` 1-based.
    pub hk_embedding: Option<Vec<[usize; 2]>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveOutput {
    pub method: String,
    pub best_edges: usize,
    pub total: usize,
    pub ratio: f64,
    pub exact: bool,
    pub nodes_explored: u64,
    pub certificate: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StripSummary {
    /// Per level: vertices whose top forward level it is.
    pub vertices_at: Vec<u64>,
    pub removed: Vec<u64>,
    pub within_slot_bound: Vec<bool>,
    pub within_proportion_bound: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtractionOutput {
    pub epsilon: f64,
    pub trace: Option<ExtractionTrace>,
    pub failure: Option<AuxFailure>,
    pub verified: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RichnessOutput {
    pub dim: u32,
    pub certificate: Option<RichnessCertificate>,
    /// Mean of `e_ℓ / (2^(d-1) m²)` for blocked hosts.
    pub blocked_average: Option<f64>,
    pub strip: Option<StripSummary>,
    pub extraction: Option<ExtractionOutput>,
}

pub type EmbedOutput = EmbedReport;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TileSampleOutput {
    pub config: TilingConfig,
    pub seed: u64,
    pub n_samples: u64,
    pub invalid_samples: u64,
    /// `level_histogram[t][p]`: samples with `ℓ_(t+1)` the `(p+1)`-th chosen level.
    pub level_histogram: Vec<Vec<u64>>,
    pub samples: Vec<EmbeddingSample>,
}

pub type TileVerifyOutput = TilingReport;

pub type AppendixOutput = LemmaCheckReport;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportOutput {
    pub rows: usize,
    pub failed_rows: usize,
    pub columns: Vec<String>,
}
