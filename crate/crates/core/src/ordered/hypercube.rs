use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::bitstring::{delta_raw, BitString, MAX_DIM};
use super::graph::OrderedGraph;
use crate::error::{invalid, Error, Result};

/// Largest dimension for which a hypercube graph is materialised.
pub const MAX_HYPERCUBE_DIM: u32 = 16;

/// `τ_{ℓ,d} = 2^(2d-ℓ-1)`, the number of pairs of `{0,1}^d` at level `ℓ`.
pub fn tau_level(dim: u32, level: u32) -> u128 {
    assert!(level >= 1 && level <= dim && dim <= 64);
    1u128 << (2 * dim - level - 1)
}

/// An ordered graph on `{0,1}^d`, vertices labelled by integer value.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HypercubeGraph {
    dim: u32,
    graph: OrderedGraph,
}

impl HypercubeGraph {
    pub fn new(dim: u32) -> Result<Self> {
        if dim == 0 || dim > MAX_HYPERCUBE_DIM {
            return Err(Error::Budget {
                what: "hypercube dimension",
                requested: dim.into(),
                budget: MAX_HYPERCUBE_DIM.into(),
            });
        }
        Ok(Self { dim, graph: OrderedGraph::new(1 << dim) })
    }

    /// Wraps an ordered graph on `2^d` vertices.
    pub fn from_graph(dim: u32, graph: OrderedGraph) -> Result<Self> {
        let g = Self::new(dim)?;
        if graph.vertex_count() != g.graph.vertex_count() {
            return invalid(format!(
                "graph has {} vertices, expected 2^{dim}",
                graph.vertex_count()
            ));
        }
        Ok(Self { dim, graph })
    }

    pub fn from_pairs<I>(dim: u32, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (BitString, BitString)>,
    {
        let mut g = Self::new(dim)?;
        for (x, y) in pairs {
            if !g.add_edge(x, y)? {
                return invalid(format!("duplicate edge {x} {y}"));
            }
        }
        Ok(g)
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn graph(&self) -> &OrderedGraph {
        &self.graph
    }

    pub fn into_graph(self) -> OrderedGraph {
        self.graph
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn vertex(&self, v: usize) -> BitString {
        BitString::from_raw(self.dim, v as u64)
    }

    pub fn add_edge(&mut self, x: BitString, y: BitString) -> Result<bool> {
        if x.len() != self.dim || y.len() != self.dim {
            return invalid(format!("edge {x} {y} not in {{0,1}}^{}", self.dim));
        }
        self.graph.add_edge(x.value() as usize, y.value() as usize)
    }

    pub fn has_edge(&self, x: BitString, y: BitString) -> bool {
        x.len() == self.dim && y.len() == self.dim && self.graph.has_edge(x.value() as usize, y.value() as usize)
    }

    /// `δ` of two distinct vertex labels.
    pub fn level_of(&self, u: usize, v: usize) -> u32 {
        delta_raw(self.dim, u as u64, v as u64)
    }

    pub fn edge_strings(&self) -> impl Iterator<Item = (BitString, BitString)> + '_ {
        self.graph.edges().map(|(u, v)| (self.vertex(u), self.vertex(v)))
    }

    pub fn level_profile(&self) -> LevelProfile {
        let mut counts = vec![0u64; self.dim as usize];
        for (u, v) in self.graph.edges() {
            counts[self.level_of(u, v) as usize - 1] += 1;
        }
        LevelProfile::for_cube(self.dim, counts)
    }
}

/// Per-level edge counts `e_ℓ` with the capacities they are measured against.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelProfile {
    pub dim: u32,
    /// `counts[ℓ-1] = e_ℓ`.
    pub counts: Vec<u64>,
    /// `capacities[ℓ-1] = τ_ℓ`.
    pub capacities: Vec<u128>,
}

impl LevelProfile {
    pub fn for_cube(dim: u32, counts: Vec<u64>) -> Self {
        let capacities = (1..=dim).map(|l| tau_level(dim, l)).collect();
        Self { dim, counts, capacities }
    }

    pub fn count(&self, level: u32) -> u64 {
        self.counts[level as usize - 1]
    }

    pub fn capacity(&self, level: u32) -> u128 {
        self.capacities[level as usize - 1]
    }

    pub fn ratio(&self, level: u32) -> f64 {
        self.count(level) as f64 / self.capacity(level) as f64
    }

    pub fn ratios(&self) -> Vec<f64> {
        (1..=self.dim).map(|l| self.ratio(l)).collect()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// `τ_ℓ(A)`: pairs `u < v` in `A` with `δ(u, v) = ℓ`.
pub fn tau_of_set(set: &[BitString], level: u32) -> Result<u128> {
    let Some(first) = set.first() else { return Ok(0) };
    let dim = first.len();
    if set.iter().any(|x| x.len() != dim) {
        return invalid("strings of different lengths");
    }
    if level == 0 || level > dim || dim > MAX_DIM {
        return invalid(format!("level {level} outside 1..={dim}"));
    }
    let mut values: Vec<u64> = set.iter().map(BitString::value).collect();
    values.sort_unstable();
    values.dedup();
    // Pairs at level ℓ share the first ℓ-1 bits and split on bit ℓ.
    let mut halves: HashMap<u64, (u128, u128)> = HashMap::new();
    for v in values {
        let entry = halves.entry(v >> (dim - level + 1)).or_default();
        if (v >> (dim - level)) & 1 == 0 {
            entry.0 += 1;
        } else {
            entry.1 += 1;
        }
    }
    Ok(halves.values().map(|(a, b)| a * b).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    fn complete(d: u32) -> HypercubeGraph {
        let n = 1usize << d;
        let g = OrderedGraph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap();
        HypercubeGraph::from_graph(d, g).unwrap()
    }

    #[test]
    fn profile_of_complete_square() {
        let p = complete(2).level_profile();
        assert_eq!(p.counts, [4, 2]);
        assert_eq!(p.capacities, [4, 2]);
        assert_eq!(p.total(), 6);
    }

    #[test]
    fn profile_of_empty_graph() {
        let p = HypercubeGraph::new(5).unwrap().level_profile();
        assert!(p.counts.iter().all(|&c| c == 0));
    }

    #[test]
    fn brute_force_profile_matches() {
        let g = HypercubeGraph::from_pairs(3, [(bs("000"), bs("111")), (bs("010"), bs("011")), (bs("100"), bs("110"))]).unwrap();
        assert_eq!(g.level_profile().counts, [1, 1, 1]);
    }

    #[test]
    fn tau_examples() {
        assert_eq!(tau_of_set(&[bs("0"), bs("1")], 1).unwrap(), 1);
        assert_eq!(tau_of_set(&[bs("00"), bs("01"), bs("10")], 1).unwrap(), 2);
        let cube: Vec<_> = (0..32).map(|v| BitString::new(5, v).unwrap()).collect();
        assert_eq!(tau_of_set(&cube, 3).unwrap(), 64);
        assert_eq!(tau_level(5, 3), 64);
        assert_eq!(tau_level(2, 1), 4);
        assert_eq!(tau_level(2, 2), 2);
    }

    #[test]
    fn tau_matches_pair_enumeration() {
        let set: Vec<_> = [3u64, 7, 8, 9, 12, 13, 14, 1, 0].iter().map(|&v| BitString::new(4, v).unwrap()).collect();
        for level in 1..=4 {
            let mut brute = 0u128;
            for a in &set {
                for b in &set {
                    if a.value() < b.value() && super::super::delta(*a, *b).unwrap() == level {
                        brute += 1;
                    }
                }
            }
            assert_eq!(tau_of_set(&set, level).unwrap(), brute);
        }
    }

    #[test]
    fn taus_sum_to_all_pairs() {
        for d in 1..=10u32 {
            let cube: Vec<_> = (0..1u64 << d).map(|v| BitString::new(d, v).unwrap()).collect();
            let total: u128 = (1..=d).map(|l| tau_of_set(&cube, l).unwrap()).sum();
            let n = 1u128 << d;
            assert_eq!(total, n * (n - 1) / 2);
            for l in 1..=d {
                assert_eq!(tau_of_set(&cube, l).unwrap(), tau_level(d, l));
            }
        }
    }
}
