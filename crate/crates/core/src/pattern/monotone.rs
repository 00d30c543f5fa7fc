use serde::{Deserialize, Serialize};

use crate::ordered::OrderedGraph;

/// `lengths[v]`: edges in the longest increasing path ending at `v`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonotoneProfile {
    pub lengths: Vec<usize>,
}

impl MonotoneProfile {
    pub fn max(&self) -> usize {
        self.lengths.iter().copied().max().unwrap_or(0)
    }
}

pub fn monotone_profile(f: &OrderedGraph) -> MonotoneProfile {
    let mut lengths = vec![0usize; f.vertex_count()];
    for v in 0..f.vertex_count() {
        lengths[v] = f.backward(v).ones().map(|u| lengths[u] + 1).max().unwrap_or(0);
    }
    MonotoneProfile { lengths }
}

pub fn has_monotone_p3(f: &OrderedGraph) -> bool {
    monotone_profile(f).max() >= 2
}

/// Some `u < v < w` with edges `uv` and `vw`.
pub fn find_monotone_p3(f: &OrderedGraph) -> Option<[usize; 3]> {
    (0..f.vertex_count()).find_map(|v| {
        let u = f.backward(v).ones().next()?;
        let w = f.forward(v).ones().next()?;
        Some([u, v, w])
    })
}

/// Fewest order-intervals covering the vertices with no edge inside one.
///
/// Greedy: extend the current interval until the next vertex has a
/// backward neighbour inside it.
pub fn interval_chromatic(f: &OrderedGraph) -> usize {
    let n = f.vertex_count();
    if n == 0 {
        return 0;
    }
    let mut count = 1;
    let mut start = 0;
    for v in 1..n {
        if f.backward(v).ones().any(|u| u >= start) {
            count += 1;
            start = v;
        }
    }
    count
}
