//! Rich levels, top-forward stripping and the recursive `H_k` extraction.

mod embed;
mod extract;

use serde::{Deserialize, Serialize};

use crate::hostgen::BlockedGraph;
use crate::ordered::{HypercubeGraph, OrderedGraph};

pub use embed::{embed_hk_rich, EmbedFailure, EmbedReport};
pub use extract::{vanishing_aux, verify_extraction, AuxFailure, ExtractionResult, ExtractionTrace, Preset, Stage, Thresholds};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RichnessCertificate {
    pub alpha: f64,
    pub levels: Vec<u32>,
    /// `(1/d) Σ_ℓ e_ℓ / τ_{ℓ,d}`.
    pub average: f64,
    pub ratios: Vec<f64>,
}

pub fn rich_levels(g: &HypercubeGraph, alpha: f64) -> RichnessCertificate {
    let profile = g.level_profile();
    let levels = (1..=g.dim()).filter(|&l| profile.count(l) as f64 >= alpha * profile.capacity(l) as f64).collect();
    let ratios = profile.ratios();
    let average = ratios.iter().sum::<f64>() / g.dim() as f64;
    RichnessCertificate { alpha, levels, average, ratios }
}

/// `(1/d) Σ_ℓ e_ℓ / (2^(d-1) m^2)` for a subgraph of `R(m, d)`.
pub fn subgraph_average_richness(g: &BlockedGraph) -> f64 {
    let target = g.level_target();
    g.level_counts().iter().map(|&e| e as f64 / target).sum::<f64>() / g.dim() as f64
}

/// Range of vertex labels at level `level` on the other side of `x`.
pub(crate) fn sibling_range(dim: u32, x: usize, level: u32) -> std::ops::Range<usize> {
    let shift = dim - level;
    let lo = ((x >> shift) ^ 1) << shift;
    lo..lo + (1 << shift)
}

pub(crate) fn bit(dim: u32, x: usize, level: u32) -> usize {
    (x >> (dim - level)) & 1
}

#[derive(Clone, Debug, PartialEq)]
pub struct Stripped {
    pub graph: HypercubeGraph,
    /// `top_level[x] = ℓ_x`, 0 for vertices without forward edges.
    pub top_level: Vec<u32>,
    /// `removed[ℓ-1]`: edges removed at level `ℓ`.
    pub removed: Vec<u64>,
    /// `vertices_at[ℓ-1]`: vertices with `ℓ_x = ℓ`.
    pub vertices_at: Vec<u64>,
}

impl Stripped {
    /// The removal count at level `ℓ` against `p_ℓ τ_{ℓ,d}`.
    pub fn within_proportion_bound(&self, level: u32) -> bool {
        let d = self.graph.dim();
        let i = level as usize - 1;
        (self.removed[i] as u128) << (level + 1) <= (self.vertices_at[i] as u128) << d
    }

    /// The removal count at level `ℓ` against `#{x : ℓ_x = ℓ} · 2^(d-ℓ)`,
    /// the number of forward level-`ℓ` slots those vertices have.
    pub fn within_slot_bound(&self, level: u32) -> bool {
        let d = self.graph.dim();
        let i = level as usize - 1;
        self.removed[i] as u128 <= (self.vertices_at[i] as u128) << (d - level)
    }
}

/// Removes, for every `x`, all forward edges of `x` at `ℓ_x`, the largest
/// level among its forward edges. All `ℓ_x` are read off the input.
pub fn strip_top_forward(g: &HypercubeGraph) -> HypercubeGraph {
    strip_top_forward_traced(g).graph
}

pub fn strip_top_forward_traced(g: &HypercubeGraph) -> Stripped {
    let d = g.dim();
    let src = g.graph();
    let n = src.vertex_count();
    let mut top_level = vec![0u32; n];
    let mut out = OrderedGraph::new(n);
    let mut removed = vec![0u64; d as usize];
    let mut vertices_at = vec![0u64; d as usize];
    for x in 0..n {
        // The nearest forward neighbour sits at the largest level.
        let Some(first) = src.forward(x).ones().next() else { continue };
        let lx = g.level_of(x, first);
        top_level[x] = lx;
        vertices_at[lx as usize - 1] += 1;
        let cut = sibling_range(d, x, lx);
        for y in src.forward(x).ones() {
            if cut.contains(&y) {
                removed[lx as usize - 1] += 1;
            } else {
                out.add_edge(x, y).expect("in range");
            }
        }
    }
    let stripped = Stripped { graph: HypercubeGraph::from_graph(d, out).expect("same vertex set"), top_level, removed, vertices_at };
    for l in 1..=d {
        assert!(stripped.within_slot_bound(l), "level {l} removal exceeds available slots");
    }
    stripped
}
