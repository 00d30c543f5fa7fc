use fixedbitset::FixedBitSet;

use crate::error::{invalid, Result};

/// A simple graph on `0..n`, ordered by label.
///
/// Every vertex carries a forward row (neighbours above it) and a backward
/// row (neighbours below it). The sorted edge list is derived from the
/// forward rows, so iteration order is canonical.
#[derive(Clone, PartialEq, Eq)]
pub struct OrderedGraph {
    n: usize,
    forward: Vec<FixedBitSet>,
    backward: Vec<FixedBitSet>,
    edges: usize,
}

impl OrderedGraph {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            forward: vec![FixedBitSet::with_capacity(n); n],
            backward: vec![FixedBitSet::with_capacity(n); n],
            edges: 0,
        }
    }

    /// Builds a graph from pairs `(u, v)`; each pair is normalised so `u < v`.
    /// Self-loops, out-of-range labels and duplicates are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Self::new(n);
        for (u, v) in edges {
            if !g.add_edge(u, v)? {
                return invalid(format!("duplicate edge {{{u},{v}}}"));
            }
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    /// Inserts `{u, v}`, returning whether it was new.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        let (u, v) = self.check_pair(u, v)?;
        if self.forward[u].contains(v) {
            return Ok(false);
        }
        self.forward[u].insert(v);
        self.backward[v].insert(u);
        self.edges += 1;
        Ok(true)
    }

    /// Deletes `{u, v}`, returning whether it was present.
    pub fn remove_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        let (u, v) = self.check_pair(u, v)?;
        if !self.forward[u].contains(v) {
            return Ok(false);
        }
        self.forward[u].set(v, false);
        self.backward[v].set(u, false);
        self.edges -= 1;
        Ok(true)
    }

    fn check_pair(&self, u: usize, v: usize) -> Result<(usize, usize)> {
        if u == v {
            return invalid(format!("self-loop at {u}"));
        }
        if u >= self.n || v >= self.n {
            return invalid(format!("edge {{{u},{v}}} outside 0..{}", self.n));
        }
        Ok((u.min(v), u.max(v)))
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && u < self.n && v < self.n && self.forward[u.min(v)].contains(u.max(v))
    }

    pub fn forward(&self, u: usize) -> &FixedBitSet {
        &self.forward[u]
    }

    pub fn backward(&self, u: usize) -> &FixedBitSet {
        &self.backward[u]
    }

    pub fn forward_degree(&self, u: usize) -> usize {
        self.forward[u].count_ones(..)
    }

    pub fn backward_degree(&self, u: usize) -> usize {
        self.backward[u].count_ones(..)
    }

    pub fn degree(&self, u: usize) -> usize {
        self.forward_degree(u) + self.backward_degree(u)
    }

    /// Edges `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.forward.iter().enumerate().flat_map(|(u, row)| row.ones().map(move |v| (u, v)))
    }

    pub fn edge_vec(&self) -> Vec<(usize, usize)> {
        self.edges().collect()
    }

    /// Same vertex set, only the given edges (which must be edges of `self`).
    pub fn edge_subgraph<I>(&self, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Self::new(self.n);
        for (u, v) in edges {
            if !self.has_edge(u, v) {
                return invalid(format!("{{{u},{v}}} is not an edge of the host"));
            }
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn is_subgraph_of(&self, other: &Self) -> bool {
        self.n <= other.n && self.edges().all(|(u, v)| other.has_edge(u, v))
    }
}

impl std::fmt::Debug for OrderedGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("OrderedGraph")
            .field("n", &self.n)
            .field("edges", &self.edge_vec())
            .finish()
    }
}
