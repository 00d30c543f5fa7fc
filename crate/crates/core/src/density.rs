//! Largest F-free subgraphs of ordered hosts.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ordered::OrderedGraph;
use crate::pattern::{contains_ordered, contains_ordered_through, embeddings_through, has_monotone_p3};
use crate::rng::stream;

pub const EXHAUSTIVE_EDGE_CAP: usize = 20;
pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;
const COPY_CAP: usize = 64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityResult {
    pub best_edge_count: usize,
    pub total_edges: usize,
    pub ratio: f64,
    pub certificate: Vec<(usize, usize)>,
    pub exact: bool,
    pub nodes_explored: u64,
}

impl DensityResult {
    fn new(total: usize, mut certificate: Vec<(usize, usize)>, exact: bool, nodes: u64) -> Self {
        certificate.sort_unstable();
        let best = certificate.len();
        Self {
            best_edge_count: best,
            total_edges: total,
            ratio: if total == 0 { 1.0 } else { best as f64 / total as f64 },
            certificate,
            exact,
            nodes_explored: nodes,
        }
    }

    pub fn certificate_graph(&self, n: usize) -> Result<OrderedGraph> {
        OrderedGraph::from_edges(n, self.certificate.iter().copied())
    }

    /// Re-checks that the certificate is an F-free subgraph of `host`.
    pub fn verify(&self, pattern: &OrderedGraph, host: &OrderedGraph) -> bool {
        let Ok(cert) = self.certificate_graph(host.vertex_count()) else {
            return false;
        };
        cert.is_subgraph_of(host) && contains_ordered(pattern, &cert).is_none()
    }
}

/// Instances that need no search.
fn settle(pattern: &OrderedGraph, host: &OrderedGraph) -> Result<Option<DensityResult>> {
    let whole = || Some(DensityResult::new(host.edge_count(), host.edge_vec(), true, 0));
    if pattern.edge_count() == 0 {
        if pattern.vertex_count() <= host.vertex_count() {
            return Err(Error::UndefinedDensity("every subgraph of the host contains the edgeless pattern".into()));
        }
        return Ok(whole());
    }
    if host.edge_count() == 0 || contains_ordered(pattern, host).is_none() {
        return Ok(whole());
    }
    Ok(None)
}

/// Include-first depth-first search over an edge order. Only strict
/// improvements replace the incumbent, so under the canonical order the
/// incumbent is the lexicographically least optimum.
struct Search<'a> {
    pattern: &'a OrderedGraph,
    order: Vec<(usize, usize)>,
    current: OrderedGraph,
    kept: Vec<usize>,
    best: Vec<usize>,
    best_len: usize,
    bound: bool,
    target: Option<usize>,
    nodes: u64,
    budget: u64,
    exhausted: bool,
}

impl<'a> Search<'a> {
    fn new(pattern: &'a OrderedGraph, n: usize, order: Vec<(usize, usize)>, budget: u64) -> Self {
        Self {
            pattern,
            order,
            current: OrderedGraph::new(n),
            kept: Vec::new(),
            best: Vec::new(),
            best_len: 0,
            bound: false,
            target: None,
            nodes: 0,
            budget,
            exhausted: false,
        }
    }

    /// Returns true to stop the whole search.
    fn dfs(&mut self, idx: usize) -> bool {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return true;
        }
        if idx == self.order.len() {
            if self.kept.len() > self.best_len || (self.best.is_empty() && self.target.is_none()) {
                self.best_len = self.kept.len();
                self.best = self.kept.clone();
            }
            return self.target == Some(self.kept.len());
        }
        if self.bound && self.kept.len() + (self.order.len() - idx) <= self.best_len {
            return false;
        }
        let (u, v) = self.order[idx];
        self.current.add_edge(u, v).expect("edge in range");
        if contains_ordered_through(self.pattern, &self.current, (u, v)).is_none() {
            self.kept.push(idx);
            if self.dfs(idx + 1) {
                return true;
            }
            self.kept.pop();
        }
        self.current.remove_edge(u, v).expect("edge in range");
        self.dfs(idx + 1)
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.best.iter().map(|&i| self.order[i]).collect()
    }
}

/// Enumerates every F-free edge subset; supersets of F-containing sets are
/// skipped.
pub fn rho_exhaustive(pattern: &OrderedGraph, host: &OrderedGraph, cap: usize) -> Result<DensityResult> {
    if host.edge_count() > cap {
        return Err(Error::Budget { what: "exhaustive search (use the exact solver)", requested: host.edge_count() as u128, budget: cap as u128 });
    }
    if let Some(r) = settle(pattern, host)? {
        return Ok(r);
    }
    let mut s = Search::new(pattern, host.vertex_count(), host.edge_vec(), u64::MAX);
    s.dfs(0);
    Ok(DensityResult::new(host.edge_count(), s.edges(), true, s.nodes))
}

/// Branch and bound with the bound `kept + remaining`, branching on edges
/// in descending order of F-copies through them.
pub fn rho_exact(pattern: &OrderedGraph, host: &OrderedGraph, budget: u64) -> Result<DensityResult> {
    if let Some(r) = settle(pattern, host)? {
        return Ok(r);
    }
    let canonical = host.edge_vec();
    let mut keyed: Vec<(usize, (usize, usize))> = canonical
        .iter()
        .map(|&e| {
            let copies = embeddings_through(pattern, host, e, 10_000).map_or(10_001, |c| c.len());
            (copies, e)
        })
        .collect();
    keyed.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let order = keyed.into_iter().map(|(_, e)| e).collect();

    let mut first = Search::new(pattern, host.vertex_count(), order, budget);
    first.bound = true;
    first.dfs(0);
    if first.exhausted {
        return Ok(DensityResult::new(host.edge_count(), first.edges(), false, first.nodes));
    }
    let opt = first.best_len;
    if opt == 0 {
        return Ok(DensityResult::new(host.edge_count(), Vec::new(), true, first.nodes));
    }

    let mut canon = Search::new(pattern, host.vertex_count(), canonical, budget.saturating_sub(first.nodes));
    canon.bound = true;
    canon.best_len = opt - 1;
    canon.target = Some(opt);
    canon.dfs(0);
    let nodes = first.nodes + canon.nodes;
    let cert = if canon.best_len == opt { canon.edges() } else { first.edges() };
    Ok(DensityResult::new(host.edge_count(), cert, true, nodes))
}

/// Labels vertices left to right, keeping `u < v` exactly when `u` is
/// forward-labelled and `v` backward-labelled. Each choice maximises the
/// conditional expectation of kept edges when the rest are labelled by fair
/// coins, which starts at `e/4`.
pub fn quarter_free_subgraph(host: &OrderedGraph) -> OrderedGraph {
    let n = host.vertex_count();
    let mut fwd = vec![false; n];
    for v in 0..n {
        let back_fwd = host.backward(v).ones().filter(|&u| fwd[u]).count();
        fwd[v] = host.forward_degree(v) > 2 * back_fwd;
    }
    let kept = host.edges().filter(|&(u, v)| fwd[u] && !fwd[v]);
    OrderedGraph::from_edges(n, kept).expect("subgraph of a valid graph")
}

/// Seeded hill climbing: add a random absent edge, then delete the fewest
/// other edges meeting every new F-copy. One deletion keeps the size and is
/// always taken; two deletions are taken occasionally to escape plateaus.
pub fn rho_local_search(pattern: &OrderedGraph, host: &OrderedGraph, steps: u64, seed: u64) -> Result<DensityResult> {
    if let Some(r) = settle(pattern, host)? {
        return Ok(r);
    }
    let n = host.vertex_count();
    let all = host.edge_vec();
    let mut current = if has_monotone_p3(pattern) { quarter_free_subgraph(host) } else { OrderedGraph::new(n) };
    let mut best = current.edge_vec();
    let mut rng = stream(seed, 0x10ca1);

    for _ in 0..steps {
        let absent: Vec<(usize, usize)> = all.iter().copied().filter(|&(u, v)| !current.has_edge(u, v)).collect();
        let Some(&(u, v)) = absent.choose(&mut rng) else { break };
        current.add_edge(u, v)?;
        let accepted = match embeddings_through(pattern, &current, (u, v), COPY_CAP) {
            None => false,
            Some(copies) if copies.is_empty() => true,
            Some(copies) => {
                let hits: Vec<Vec<(usize, usize)>> = copies
                    .iter()
                    .map(|w| {
                        let mut es: Vec<_> = pattern.edges().map(|(a, b)| (w.map[a], w.map[b])).filter(|&e| e != (u, v)).collect();
                        es.sort_unstable();
                        es
                    })
                    .collect();
                let mut pool: Vec<(usize, usize)> = hits.iter().flatten().copied().collect();
                pool.sort_unstable();
                pool.dedup();
                pool.shuffle(&mut rng);
                let covers = |del: &[(usize, usize)]| hits.iter().all(|h| del.iter().any(|e| h.binary_search(e).is_ok()));
                let single = pool.iter().find(|&&e| covers(&[e])).map(|&e| vec![e]);
                let chosen = single.or_else(|| {
                    if !rng.gen_bool(0.05) {
                        return None;
                    }
                    pool.iter().enumerate().find_map(|(i, &a)| pool[i + 1..].iter().find(|&&b| covers(&[a, b])).map(|&b| vec![a, b]))
                });
                match chosen {
                    Some(del) => {
                        for (a, b) in del {
                            current.remove_edge(a, b)?;
                        }
                        true
                    }
                    None => false,
                }
            }
        };
        if !accepted {
            current.remove_edge(u, v)?;
        } else if current.edge_count() > best.len() {
            best = current.edge_vec();
        }
    }
    let result = DensityResult::new(host.edge_count(), best, false, steps);
    debug_assert!(result.verify(pattern, host));
    Ok(result)
}
