use serde::{Deserialize, Serialize};

use super::containment::EmbeddingWitness;
use super::monotone::{find_monotone_p3, interval_chromatic, monotone_profile};
use crate::error::{invalid, Error, Result};
use crate::ordered::OrderedGraph;

/// Index of `(x, b)` in `H_k`, with `x` 1-based and `b ∈ {0, 1}`.
pub fn hk_vertex(x: usize, b: usize) -> usize {
    2 * (x - 1) + b
}

/// Inverse of [`hk_vertex`].
pub fn hk_label(v: usize) -> (usize, usize) {
    (v / 2 + 1, v % 2)
}

/// `H_k`: vertices `(1,0) < (1,1) < … < (k,0) < (k,1)` and edges
/// `(x,0)(y,1)` for `x ≤ y`.
pub fn build_hk(k: usize) -> Result<OrderedGraph> {
    if k == 0 {
        return invalid("H_k needs k >= 1");
    }
    let edges = (1..=k).flat_map(|x| (x..=k).map(move |y| (hk_vertex(x, 0), hk_vertex(y, 1))));
    OrderedGraph::from_edges(2 * k, edges)
}

/// The map `v_i ↦ (i, ℓ(v_i))` into `H_k` for `k = |V(F)|`.
pub fn embed_into_hk(f: &OrderedGraph) -> Result<EmbeddingWitness> {
    if let Some(path) = find_monotone_p3(f) {
        return Err(Error::MonotonePath(path));
    }
    let profile = monotone_profile(f);
    let map = profile.lengths.iter().enumerate().map(|(i, &l)| hk_vertex(i + 1, l)).collect();
    Ok(EmbeddingWitness { map })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Vanishing {
    Zero,
    AtLeastQuarter,
}

pub fn classify_vanishing(f: &OrderedGraph) -> Vanishing {
    if find_monotone_p3(f).is_some() {
        Vanishing::AtLeastQuarter
    } else {
        Vanishing::Zero
    }
}

/// `1 - 1/(χ_< - 1)`.
pub fn pi_ordered(f: &OrderedGraph) -> Result<f64> {
    if f.edge_count() == 0 {
        return Err(Error::UndefinedDensity("pattern has no edges".into()));
    }
    let chi = interval_chromatic(f) as f64;
    Ok(1.0 - 1.0 / (chi - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::{contains_ordered, has_monotone_p3, validate_witness};

    #[test]
    fn hk_shape() {
        let h1 = build_hk(1).unwrap();
        assert_eq!(h1.edge_vec(), [(0, 1)]);
        let h4 = build_hk(4).unwrap();
        assert_eq!(h4.edge_count(), 10);
        assert_eq!(interval_chromatic(&h4), 5);
        assert!(build_hk(0).is_err());
        for k in 1..=8 {
            let h = build_hk(k).unwrap();
            assert_eq!(h.edge_count(), k * (k + 1) / 2);
            assert!(!has_monotone_p3(&h));
            assert_eq!(classify_vanishing(&h), Vanishing::Zero);
            assert!((pi_ordered(&h).unwrap() - (1.0 - 1.0 / k as f64)).abs() < 1e-12);
        }
    }

    #[test]
    fn h2_profile() {
        assert_eq!(monotone_profile(&build_hk(2).unwrap()).lengths, [0, 1, 0, 1]);
    }

    #[test]
    fn embeddings() {
        let h2 = build_hk(2).unwrap();
        let w = embed_into_hk(&h2).unwrap();
        let h4 = build_hk(4).unwrap();
        assert!(validate_witness(&h2, &h4, &w).is_ok());

        let edge = OrderedGraph::from_edges(2, [(0, 1)]).unwrap();
        let w = embed_into_hk(&edge).unwrap();
        assert_eq!(w.map.iter().map(|&v| hk_label(v)).collect::<Vec<_>>(), [(1, 0), (2, 1)]);

        let empty = OrderedGraph::new(3);
        let w = embed_into_hk(&empty).unwrap();
        assert_eq!(w.map, [hk_vertex(1, 0), hk_vertex(2, 0), hk_vertex(3, 0)]);

        let p3 = OrderedGraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(embed_into_hk(&p3), Err(Error::MonotonePath([0, 1, 2])));
        assert_eq!(classify_vanishing(&p3), Vanishing::AtLeastQuarter);
        assert!(contains_ordered(&p3, &build_hk(3).unwrap()).is_none());
    }

    #[test]
    fn pi_values() {
        let edge = OrderedGraph::from_edges(2, [(0, 1)]).unwrap();
        assert_eq!(pi_ordered(&edge).unwrap(), 0.0);
        assert!(matches!(pi_ordered(&OrderedGraph::new(3)), Err(Error::UndefinedDensity(_))));
        for k in 1..=6 {
            let path = OrderedGraph::from_edges(k + 1, (0..k).map(|i| (i, i + 1))).unwrap();
            assert!((pi_ordered(&path).unwrap() - (1.0 - 1.0 / k as f64)).abs() < 1e-12);
        }
    }

    #[test]
    fn classification_serializes_upper_case() {
        assert_eq!(serde_json::to_string(&Vanishing::Zero).unwrap(), "\"ZERO\"");
        assert_eq!(serde_json::to_string(&Vanishing::AtLeastQuarter).unwrap(), "\"AT_LEAST_QUARTER\"");
    }
}
