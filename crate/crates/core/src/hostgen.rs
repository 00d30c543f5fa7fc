//! Random hosts `R(m, d)` on `{0,1}^d × [m]` and complete hosts.
//!
//! A cross-block pair `(x,i)(y,j)` is an edge with probability
//! `2^(-d+δ(x,y))`. Each pair draws from a [`CounterRng`] at its own pair
//! index, so the edge set depends only on `(m, d, seed)`. Pairs inside a
//! block are never edges.

use std::fmt::Write as _;

use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::ordered::{delta_raw, BitString, HypercubeGraph, OrderedGraph};
use crate::rng::{stream, CounterRng};

pub const DEFAULT_VERTEX_BUDGET: usize = 1 << 14;

fn check_budget(what: &'static str, requested: u128, budget: usize) -> Result<()> {
    if requested > budget as u128 {
        return Err(Error::Budget { what, requested, budget: budget as u128 });
    }
    Ok(())
}

/// An ordered graph on `{0,1}^d × [m]`; vertex `(x, i)` has label `x·m + i`,
/// which realises the lexicographic order on pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockedGraph {
    dim: u32,
    m: usize,
    seed: u64,
    graph: OrderedGraph,
}

impl BlockedGraph {
    /// Wraps an arbitrary graph on `2^d·m` vertices (e.g. a subgraph of a host).
    pub fn from_graph(dim: u32, m: usize, seed: u64, graph: OrderedGraph) -> Result<Self> {
        if dim == 0 || dim > 30 || m == 0 {
            return invalid(format!("need d in 1..=30 and m >= 1, got d={dim} m={m}"));
        }
        if graph.vertex_count() != (1usize << dim) * m {
            return invalid(format!("graph has {} vertices, expected 2^{dim}·{m}", graph.vertex_count()));
        }
        Ok(Self { dim, m, seed, graph })
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn graph(&self) -> &OrderedGraph {
        &self.graph
    }

    pub fn index(&self, block: u64, i: usize) -> usize {
        block as usize * self.m + i
    }

    pub fn block_of(&self, v: usize) -> u64 {
        (v / self.m) as u64
    }

    /// Level of a cross-block pair; `None` inside a block.
    pub fn level_of(&self, u: usize, v: usize) -> Option<u32> {
        let (x, y) = (self.block_of(u), self.block_of(v));
        (x != y).then(|| delta_raw(self.dim, x, y))
    }

    /// `e_ℓ` for `ℓ = 1..=d`.
    pub fn level_counts(&self) -> Vec<u64> {
        let mut counts = vec![0u64; self.dim as usize];
        for (u, v) in self.graph.edges() {
            if let Some(l) = self.level_of(u, v) {
                counts[l as usize - 1] += 1;
            }
        }
        counts
    }

    /// `2^(d-1)·m²`, the expected number of edges of `R(m, d)` per level.
    pub fn level_target(&self) -> f64 {
        2f64.powi(self.dim as i32 - 1) * (self.m as f64).powi(2)
    }

    pub fn with_edges<I>(&self, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Ok(Self { graph: self.graph.edge_subgraph(edges)?, ..self.clone() })
    }

    /// `d m seed` header, then one `x i y j` line per edge.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.dim, self.m, self.seed);
        for (u, v) in self.graph.edges() {
            let x = BitString::from_raw(self.dim, self.block_of(u));
            let y = BitString::from_raw(self.dim, self.block_of(v));
            writeln!(out, "{x} {} {y} {}", u % self.m, v % self.m).unwrap();
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let perr = |line: usize, msg: String| Error::Parse { line, msg };
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l)).filter(|(_, l)| !l.trim().is_empty());
        let (hl, header) = lines.next().ok_or_else(|| perr(1, "missing header".into()))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        if h.len() != 3 {
            return Err(perr(hl, "header wants `d m seed`".into()));
        }
        let dim: u32 = h[0].parse().map_err(|_| perr(hl, format!("bad d {:?}", h[0])))?;
        let m: usize = h[1].parse().map_err(|_| perr(hl, format!("bad m {:?}", h[1])))?;
        let seed: u64 = h[2].parse().map_err(|_| perr(hl, format!("bad seed {:?}", h[2])))?;
        if dim == 0 || dim > 30 || m == 0 {
            return Err(perr(hl, format!("need d in 1..=30 and m >= 1, got d={dim} m={m}")));
        }
        check_budget("blocked graph vertices", ((1u128) << dim) * m as u128, DEFAULT_VERTEX_BUDGET)
            .map_err(|e| perr(hl, e.to_string()))?;
        let mut g = OrderedGraph::new((1usize << dim) * m);
        for (line, l) in lines {
            let f: Vec<&str> = l.split_whitespace().collect();
            if f.len() != 4 {
                return Err(perr(line, "edge line wants `x i y j`".into()));
            }
            let x: BitString = f[0].parse().map_err(|e: Error| perr(line, e.to_string()))?;
            let y: BitString = f[2].parse().map_err(|e: Error| perr(line, e.to_string()))?;
            let i: usize = f[1].parse().map_err(|_| perr(line, format!("bad index {:?}", f[1])))?;
            let j: usize = f[3].parse().map_err(|_| perr(line, format!("bad index {:?}", f[3])))?;
            if x.len() != dim || y.len() != dim || i >= m || j >= m {
                return Err(perr(line, "vertex outside {0,1}^d × [m]".into()));
            }
            let (u, v) = (x.value() as usize * m + i, y.value() as usize * m + j);
            if u >= v {
                return Err(perr(line, "endpoints must be increasing".into()));
            }
            if !g.add_edge(u, v).map_err(|e| perr(line, e.to_string()))? {
                return Err(perr(line, "duplicate edge".into()));
            }
        }
        Ok(Self { dim, m, seed, graph: g })
    }
}

/// Samples `R(m, d)` under `seed`.
pub fn generate_r(m: usize, dim: u32, seed: u64, vertex_budget: usize) -> Result<BlockedGraph> {
    if m == 0 || dim == 0 || dim > 30 {
        return invalid(format!("need m >= 1 and d in 1..=30, got m={m} d={dim}"));
    }
    check_budget("R(m,d) vertices", (1u128 << dim) * m as u128, vertex_budget)?;
    let n = (1usize << dim) * m;
    let rng = CounterRng::new(seed);
    let rows: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .map(|u| {
            let x = (u / m) as u64;
            let first = (x as usize + 1) * m;
            (first..n)
                .filter(|&v| {
                    let level = delta_raw(dim, x, (v / m) as u64);
                    rng.coin_pow2((u * n + v) as u64, dim - level)
                })
                .collect()
        })
        .collect();
    let mut g = OrderedGraph::new(n);
    for (u, row) in rows.into_iter().enumerate() {
        for v in row {
            g.add_edge(u, v)?;
        }
    }
    Ok(BlockedGraph { dim, m, seed, graph: g })
}

pub fn complete_ordered(n: usize, vertex_budget: usize) -> Result<OrderedGraph> {
    if n == 0 {
        return invalid("complete graph needs n >= 1");
    }
    check_budget("complete graph vertices", n as u128, vertex_budget)?;
    OrderedGraph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
}

pub fn complete_hypercube(dim: u32, vertex_budget: usize) -> Result<HypercubeGraph> {
    if dim == 0 || dim > 30 {
        return invalid(format!("dimension {dim} outside 1..=30"));
    }
    check_budget("hypercube vertices", 1u128 << dim, vertex_budget)?;
    HypercubeGraph::from_graph(dim, complete_ordered(1 << dim, vertex_budget)?)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelCheck {
    pub level: u32,
    pub count: u64,
    pub target: f64,
    /// `(count - target) / target`.
    pub deviation: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairCheck {
    pub x: String,
    pub y: String,
    pub level: u32,
    pub p_size: usize,
    pub q_size: usize,
    pub edges: u64,
    /// `2^(-d+δ)·|P|·|Q|`.
    pub expected: f64,
    pub bound: f64,
    pub pass: bool,
}

impl PairCheck {
    pub fn excess(&self) -> f64 {
        self.edges as f64 / self.expected
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HostReport {
    pub dim: u32,
    pub m: usize,
    pub seed: u64,
    pub epsilon: f64,
    pub subset_size: usize,
    pub levels: Vec<LevelCheck>,
    pub pair_checks: Vec<PairCheck>,
    pub levels_pass: bool,
    pub pairs_failed: usize,
    pub worst_level: Option<LevelCheck>,
    pub worst_pair: Option<PairCheck>,
    pub pass: bool,
}

/// Least integer `s` with `s >= m^(2/3)`, i.e. `s³ >= m²`.
pub fn subset_size(m: usize) -> usize {
    let target = (m as u128).pow(2);
    let mut s = (m as f64).powf(2.0 / 3.0).floor() as u128;
    while s > 0 && (s - 1).pow(3) >= target {
        s -= 1;
    }
    while s.pow(3) < target {
        s += 1;
    }
    s as usize
}

/// Checks per-level counts against `(1±ε)·2^(d-1)m²` and `samples` random
/// block-pair subset densities against `(1+ε)·2^(-d+δ)|P||Q|`.
pub fn verify_r_properties(host: &BlockedGraph, epsilon: f64, samples: usize, seed: u64) -> Result<HostReport> {
    if !(epsilon > 0.0) {
        return invalid(format!("epsilon must be positive, got {epsilon}"));
    }
    let target = host.level_target();
    let levels: Vec<LevelCheck> = host
        .level_counts()
        .into_iter()
        .enumerate()
        .map(|(i, count)| {
            let deviation = (count as f64 - target) / target;
            LevelCheck { level: i as u32 + 1, count, target, deviation, pass: deviation.abs() <= epsilon }
        })
        .collect();
    let levels_pass = levels.iter().all(|l| l.pass);
    let worst_level = levels
        .iter()
        .max_by(|a, b| a.deviation.abs().total_cmp(&b.deviation.abs()))
        .cloned();

    let m = host.m;
    let s = subset_size(m).min(m);
    let blocks = 1u64 << host.dim;
    let mut rng = stream(seed, 0x5eed);
    let mut pair_checks = Vec::with_capacity(samples);
    if blocks >= 2 {
        for _ in 0..samples {
            let a = rng.gen_range(0..blocks);
            let mut b = rng.gen_range(0..blocks - 1);
            if b >= a {
                b += 1;
            }
            let (x, y) = (a.min(b), a.max(b));
            let p: Vec<usize> = sample(&mut rng, m, s).into_iter().map(|i| host.index(x, i)).collect();
            let q: Vec<usize> = sample(&mut rng, m, s).into_iter().map(|j| host.index(y, j)).collect();
            let edges = p
                .iter()
                .map(|&u| q.iter().filter(|&&v| host.graph.has_edge(u, v)).count() as u64)
                .sum();
            let level = delta_raw(host.dim, x, y);
            let expected = 2f64.powi(level as i32 - host.dim as i32) * (s * s) as f64;
            let bound = (1.0 + epsilon) * expected;
            pair_checks.push(PairCheck {
                x: BitString::from_raw(host.dim, x).to_string(),
                y: BitString::from_raw(host.dim, y).to_string(),
                level,
                p_size: s,
                q_size: s,
                edges,
                expected,
                bound,
                pass: edges as f64 <= bound,
            });
        }
    }
    let pairs_failed = pair_checks.iter().filter(|c| !c.pass).count();
    let worst_pair = pair_checks.iter().max_by(|a, b| a.excess().total_cmp(&b.excess())).cloned();
    Ok(HostReport {
        dim: host.dim,
        m,
        seed,
        epsilon,
        subset_size: s,
        levels,
        pair_checks,
        levels_pass,
        pairs_failed,
        worst_level,
        worst_pair,
        pass: levels_pass && pairs_failed == 0,
    })
}
