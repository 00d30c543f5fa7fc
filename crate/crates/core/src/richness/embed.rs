use serde::{Deserialize, Serialize};

use super::extract::{vanishing_aux, AuxFailure, ExtractionTrace, Preset};
use super::strip_top_forward_traced;
use crate::ordered::HypercubeGraph;
use crate::pattern::{build_hk, validate_witness, EmbeddingWitness};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbedFailure {
    /// 1 for the outermost call.
    pub depth: usize,
    pub k: usize,
    pub reason: String,
    pub aux: Option<AuxFailure>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbedReport {
    pub k: usize,
    pub epsilon: f64,
    pub preset: Preset,
    pub witness: Option<EmbeddingWitness>,
    /// One extraction per recursion step, outermost first.
    pub traces: Vec<ExtractionTrace>,
    pub failure: Option<EmbedFailure>,
}

fn recurse(g: &HypercubeGraph, k: usize, eps: f64, preset: Preset, depth: usize, traces: &mut Vec<ExtractionTrace>) -> Result<Vec<usize>, EmbedFailure> {
    let failure = |reason: &str, aux| EmbedFailure { depth, k, reason: reason.into(), aux };
    if k == 1 {
        return g.graph().edges().next().map(|(u, v)| vec![u, v]).ok_or_else(|| failure("no edge", None));
    }
    let stripped = strip_top_forward_traced(g);
    let half = eps / 2.0;
    let ext = vanishing_aux(&stripped.graph, half, &preset.thresholds(half)).map_err(|e| failure("extraction failed", Some(e)))?;
    traces.push(ext.trace.clone());
    let inner = recurse(&ext.sub, k - 1, ext.eta(), preset, depth + 1, traces)?;

    let x = ext.trace.x;
    let lx = stripped.top_level[x];
    // x kept a level-ℓ* edge, so ℓ_x > ℓ*; its nearest forward neighbour
    // agrees with x past bit ℓ* and lies in lhs(I).
    let y = g.graph().forward(x).ones().next().ok_or_else(|| failure("x has no forward edge", None))?;
    debug_assert_eq!(g.level_of(x, y), lx);
    let mut map = vec![x, y];
    map.extend(inner.into_iter().map(|s| ext.lift(s)));
    Ok(map)
}

/// Embeds `H_k` in `g` by repeated stripping and extraction, each step
/// running at half the current richness and recursing at the certified `η`.
pub fn embed_hk_rich(g: &HypercubeGraph, k: usize, eps: f64, preset: Preset) -> EmbedReport {
    let mut traces = Vec::new();
    let mut report = EmbedReport { k, epsilon: eps, preset, witness: None, traces: Vec::new(), failure: None };
    if k == 0 {
        report.failure = Some(EmbedFailure { depth: 1, k, reason: "k must be at least 1".into(), aux: None });
        return report;
    }
    match recurse(g, k, eps, preset, 1, &mut traces) {
        Ok(map) => {
            let witness = EmbeddingWitness { map };
            let hk = build_hk(k).expect("k >= 1");
            match validate_witness(&hk, g.graph(), &witness) {
                Ok(()) => report.witness = Some(witness),
                Err(e) => report.failure = Some(EmbedFailure { depth: 1, k, reason: format!("assembled map invalid: {e}"), aux: None }),
            }
        }
        Err(f) => report.failure = Some(f),
    }
    report.traces = traces;
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hostgen::complete_hypercube;
    use crate::ordered::OrderedGraph;
    use crate::pattern::contains_ordered;
    use crate::rng::stream;
    use rand::Rng;

    #[test]
    fn base_case_picks_an_edge() {
        let g = HypercubeGraph::from_graph(3, OrderedGraph::from_edges(8, [(2, 6), (3, 4)]).unwrap()).unwrap();
        let r = embed_hk_rich(&g, 1, 0.5, Preset::Desk);
        assert_eq!(r.witness.unwrap().map, [2, 6]);
        assert!(embed_hk_rich(&HypercubeGraph::new(3).unwrap(), 1, 0.5, Preset::Desk).failure.is_some());
    }

    #[test]
    fn h2_in_complete_cube() {
        let g = complete_hypercube(12, 1 << 12).unwrap();
        let r = embed_hk_rich(&g, 2, 1.0, Preset::Desk);
        let w = r.witness.expect("embedding");
        let h2 = build_hk(2).unwrap();
        assert!(validate_witness(&h2, g.graph(), &w).is_ok());
        assert!(contains_ordered(&h2, g.graph()).is_some());
        assert_eq!(r.traces.len(), 1);
        let i = r.traces[0].i;
        let lhs = i.lhs().unwrap().range();
        assert!(lhs.contains(&(w.map[1] as u64)));
        assert!((w.map[1] as u64) < i.rhs().unwrap().range().start);
    }

    #[test]
    fn deeper_recursion_validates() {
        let g = complete_hypercube(10, 1 << 12).unwrap();
        for k in 1..=4 {
            let r = embed_hk_rich(&g, k, 1.0, Preset::Desk);
            if let Some(w) = &r.witness {
                assert!(validate_witness(&build_hk(k).unwrap(), g.graph(), w).is_ok());
            }
        }
        assert!(embed_hk_rich(&g, 3, 1.0, Preset::Desk).witness.is_some());
    }

    #[test]
    fn random_dense_successes_validate() {
        let mut rng = stream(21, 0);
        for _ in 0..6 {
            let d = rng.gen_range(5..=8);
            let n = 1usize << d;
            let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|_| rng.gen_bool(0.7)).collect();
            let g = HypercubeGraph::from_graph(d, OrderedGraph::from_edges(n, edges).unwrap()).unwrap();
            let r = embed_hk_rich(&g, 2, 0.7, Preset::Desk);
            if let Some(w) = r.witness {
                assert!(validate_witness(&build_hk(2).unwrap(), g.graph(), &w).is_ok());
            }
        }
    }
}
