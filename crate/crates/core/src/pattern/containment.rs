use std::collections::HashSet;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::ordered::OrderedGraph;

/// An order-preserving map from pattern vertices to host vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EmbeddingWitness {
    pub map: Vec<usize>,
}

/// Checks that `witness` is a strictly increasing map sending every edge of
/// `pattern` to an edge of `host`.
pub fn validate_witness(pattern: &OrderedGraph, host: &OrderedGraph, witness: &EmbeddingWitness) -> Result<(), String> {
    let map = &witness.map;
    if map.len() != pattern.vertex_count() {
        return Err(format!("map has {} entries for {} pattern vertices", map.len(), pattern.vertex_count()));
    }
    if let Some(&v) = map.iter().find(|&&v| v >= host.vertex_count()) {
        return Err(format!("image {v} outside host"));
    }
    if let Some(w) = map.windows(2).find(|w| w[0] >= w[1]) {
        return Err(format!("map not strictly increasing at {} -> {}", w[0], w[1]));
    }
    match pattern.edges().find(|&(a, b)| !host.has_edge(map[a], map[b])) {
        Some((a, b)) => Err(format!("pattern edge {a}-{b} maps to non-edge {}-{}", map[a], map[b])),
        None => Ok(()),
    }
}

/// Left-to-right backtracking: pattern vertex `i` goes strictly above the
/// image of `i-1`, low enough to leave room for the rest, and inside the
/// forward rows of the images of its backward neighbours.
struct Matcher<'a> {
    pattern: &'a OrderedGraph,
    host: &'a OrderedGraph,
    back: Vec<Vec<usize>>,
    fdeg: Vec<usize>,
    bdeg: Vec<usize>,
    pins: Vec<Option<usize>>,
    upper: Vec<usize>,
    phi: Vec<usize>,
}

impl<'a> Matcher<'a> {
    fn new(pattern: &'a OrderedGraph, host: &'a OrderedGraph, pins: Vec<Option<usize>>) -> Option<Self> {
        let h = pattern.vertex_count();
        let n = host.vertex_count();
        if h > n {
            return None;
        }
        let mut upper = vec![0usize; h];
        for i in (0..h).rev() {
            let mut up = n - h + i;
            if i + 1 < h {
                up = up.min(upper[i + 1].checked_sub(1)?);
            }
            if let Some(p) = pins[i] {
                if p > up {
                    return None;
                }
                up = p;
            }
            upper[i] = up;
        }
        Some(Self {
            pattern,
            host,
            back: (0..h).map(|i| pattern.backward(i).ones().collect()).collect(),
            fdeg: (0..h).map(|i| pattern.forward_degree(i)).collect(),
            bdeg: (0..h).map(|i| pattern.backward_degree(i)).collect(),
            pins,
            upper,
            phi: vec![0; h],
        })
    }

    fn fits(&self, i: usize, c: usize) -> bool {
        self.back[i].iter().all(|&j| self.host.forward(self.phi[j]).contains(c))
            && (self.fdeg[i] == 0 || self.host.forward_degree(c) >= self.fdeg[i])
            && (self.bdeg[i] <= 1 || self.host.backward_degree(c) >= self.bdeg[i])
    }

    fn run<F>(&mut self, i: usize, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        if i == self.pattern.vertex_count() {
            return visit(&self.phi);
        }
        let lo = if i == 0 { 0 } else { self.phi[i - 1] + 1 };
        let hi = self.upper[i];
        if lo > hi {
            return ControlFlow::Continue(());
        }
        let candidates: Vec<usize> = if let Some(p) = self.pins[i] {
            vec![p]
        } else if let Some(&j) = self.back[i].first() {
            let row = self.host.forward(self.phi[j]);
            row.ones().skip_while(|&c| c < lo).take_while(|&c| c <= hi).collect()
        } else {
            (lo..=hi).collect()
        };
        for c in candidates {
            if c < lo || c > hi || !self.fits(i, c) {
                continue;
            }
            self.phi[i] = c;
            self.run(i + 1, visit)?;
        }
        ControlFlow::Continue(())
    }
}

fn search<F>(pattern: &OrderedGraph, host: &OrderedGraph, pins: Vec<Option<usize>>, mut visit: F) -> ControlFlow<()>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    match Matcher::new(pattern, host, pins) {
        Some(mut m) => m.run(0, &mut visit),
        None => ControlFlow::Continue(()),
    }
}

fn first(pattern: &OrderedGraph, host: &OrderedGraph, pins: Vec<Option<usize>>) -> Option<EmbeddingWitness> {
    let mut found = None;
    let _ = search(pattern, host, pins, |phi| {
        found = Some(EmbeddingWitness { map: phi.to_vec() });
        ControlFlow::Break(())
    });
    found
}

/// An ordered copy of `pattern` in `host`, if one exists.
pub fn contains_ordered(pattern: &OrderedGraph, host: &OrderedGraph) -> Option<EmbeddingWitness> {
    first(pattern, host, vec![None; pattern.vertex_count()])
}

/// An ordered copy of `pattern` in `host` that uses the host edge `{u, v}`.
pub fn contains_ordered_through(pattern: &OrderedGraph, host: &OrderedGraph, edge: (usize, usize)) -> Option<EmbeddingWitness> {
    let (u, v) = (edge.0.min(edge.1), edge.0.max(edge.1));
    if !host.has_edge(u, v) {
        return None;
    }
    pattern.edges().find_map(|(a, b)| {
        let mut pins = vec![None; pattern.vertex_count()];
        pins[a] = Some(u);
        pins[b] = Some(v);
        first(pattern, host, pins)
    })
}

/// Calls `visit` on every embedding, in increasing lexicographic order of maps.
pub fn for_each_embedding<F>(pattern: &OrderedGraph, host: &OrderedGraph, visit: F) -> ControlFlow<()>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    search(pattern, host, vec![None; pattern.vertex_count()], visit)
}

/// Distinct embeddings using the host edge `{u, v}`, at most `limit` of them.
/// Returns `None` when more than `limit` exist.
pub fn embeddings_through(
    pattern: &OrderedGraph,
    host: &OrderedGraph,
    edge: (usize, usize),
    limit: usize,
) -> Option<Vec<EmbeddingWitness>> {
    let (u, v) = (edge.0.min(edge.1), edge.0.max(edge.1));
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut out = Vec::new();
    if !host.has_edge(u, v) {
        return Some(out);
    }
    for (a, b) in pattern.edges() {
        let mut pins = vec![None; pattern.vertex_count()];
        pins[a] = Some(u);
        pins[b] = Some(v);
        let flow = search(pattern, host, pins, |phi| {
            if seen.insert(phi.to_vec()) {
                out.push(EmbeddingWitness { map: phi.to_vec() });
                if out.len() > limit {
                    return ControlFlow::Break(());
                }
            }
            ControlFlow::Continue(())
        });
        if flow.is_break() {
            return None;
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, e: &[(usize, usize)]) -> OrderedGraph {
        OrderedGraph::from_edges(n, e.iter().copied()).unwrap()
    }

    #[test]
    fn single_edge_in_nonempty_host() {
        let f = g(2, &[(0, 1)]);
        let host = g(5, &[(2, 4)]);
        let w = contains_ordered(&f, &host).unwrap();
        assert_eq!(w.map, [2, 4]);
        assert!(validate_witness(&f, &host, &w).is_ok());
        assert!(contains_ordered(&f, &g(5, &[])).is_none());
    }

    #[test]
    fn monotone_path_not_in_star() {
        let p3 = g(3, &[(0, 1), (1, 2)]);
        let star = g(3, &[(0, 1), (0, 2)]);
        assert!(contains_ordered(&p3, &star).is_none());
        let path = g(4, &[(0, 2), (2, 3)]);
        assert_eq!(contains_ordered(&p3, &path).unwrap().map, [0, 2, 3]);
    }

    #[test]
    fn order_matters() {
        // 0-2, 1-2 is a "wedge" into 2; it is not a monotone path.
        let wedge = g(3, &[(0, 2), (1, 2)]);
        let p3 = g(3, &[(0, 1), (1, 2)]);
        assert!(contains_ordered(&p3, &wedge).is_none());
        assert!(contains_ordered(&wedge, &wedge).is_some());
    }

    #[test]
    fn through_edge_pins_the_copy() {
        let e = g(2, &[(0, 1)]);
        let host = g(4, &[(0, 1), (2, 3)]);
        assert_eq!(contains_ordered_through(&e, &host, (3, 2)).unwrap().map, [2, 3]);
        assert!(contains_ordered_through(&e, &host, (1, 2)).is_none());
        let p3 = g(3, &[(0, 1), (1, 2)]);
        let path = g(4, &[(0, 1), (1, 2), (2, 3)]);
        let through = embeddings_through(&p3, &path, (1, 2), 10).unwrap();
        let maps: Vec<_> = through.iter().map(|w| w.map.clone()).collect();
        assert_eq!(maps.len(), 2);
        assert!(maps.contains(&vec![0, 1, 2]) && maps.contains(&vec![1, 2, 3]));
        assert!(embeddings_through(&p3, &path, (1, 2), 1).is_none());
    }

    #[test]
    fn validator_rejects_bad_maps() {
        let f = g(2, &[(0, 1)]);
        let host = g(3, &[(0, 2)]);
        assert!(validate_witness(&f, &host, &EmbeddingWitness { map: vec![2, 0] }).is_err());
        assert!(validate_witness(&f, &host, &EmbeddingWitness { map: vec![0, 1] }).is_err());
        assert!(validate_witness(&f, &host, &EmbeddingWitness { map: vec![0] }).is_err());
        assert!(validate_witness(&f, &host, &EmbeddingWitness { map: vec![0, 3] }).is_err());
        assert!(validate_witness(&f, &host, &EmbeddingWitness { map: vec![0, 2] }).is_ok());
    }

    #[test]
    fn enumeration_is_complete_on_k4() {
        let e = g(2, &[(0, 1)]);
        let k4 = g(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let mut count = 0;
        let _ = for_each_embedding(&e, &k4, |_| {
            count += 1;
            ControlFlow::Continue(())
        });
        assert_eq!(count, 6);
    }
}
