//! The random window embedding of an ordered graph into the complete graph
//! on `{0,1}^d`, with exact pair probabilities.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::seq::index::sample as sample_indices;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::binom::{decimal, Pascal};
use crate::error::{invalid, Error, Result};
use crate::ordered::{delta_raw, BitString, OrderedGraph, MAX_DIM};
use crate::rng::stream;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TilingConfig {
    pub dim: u32,
    /// `ι(1) < … < ι(L)`.
    pub levels: Vec<u32>,
    pub w: usize,
    pub h: usize,
}

impl TilingConfig {
    pub fn new(dim: u32, levels: Vec<u32>, w: usize, h: usize) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return invalid(format!("dimension {dim} outside 1..={MAX_DIM}"));
        }
        if levels.windows(2).any(|p| p[0] >= p[1]) || levels.iter().any(|&l| l == 0 || l > dim) {
            return invalid("levels must be strictly increasing inside 1..=d");
        }
        if h == 0 || h > w {
            return invalid(format!("need 1 <= h <= w, got h={h}, w={w}"));
        }
        if w >= levels.len() {
            return invalid(format!("window {w} leaves no start position among {} levels", levels.len()));
        }
        Ok(Self { dim, levels, w, h })
    }

    /// All levels `1..=d`.
    pub fn full(dim: u32, w: usize, h: usize) -> Result<Self> {
        Self::new(dim, (1..=dim).collect(), w, h)
    }

    pub fn level_count(&self) -> usize {
        self.levels.len()
    }

    /// 1-based position of `level` among the chosen levels.
    pub fn position(&self, level: u32) -> Option<usize> {
        self.levels.binary_search(&level).ok().map(|p| p + 1)
    }
}

/// Window width, balance scale and minimum window `(⌈η²L⌉, ⌈η⁴L⌉, ⌈η⁶L⌉)`.
pub fn paper_window(level_count: usize, eta: f64) -> (usize, usize, usize) {
    let l = level_count as f64;
    ((eta.powi(2) * l).ceil() as usize, (eta.powi(4) * l).ceil() as usize, (eta.powi(6) * l).ceil() as usize)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingSample {
    pub a: usize,
    pub levels: Vec<u32>,
    pub vertices: Vec<u64>,
}

/// The free blocks of a sample: `a[t]` is `A_{t+1}`, `b[t]` is `B_{t+1}`, as
/// `(length, value)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Blocks {
    pub a: Vec<(u32, u64)>,
    pub b: Vec<(u32, u64)>,
}

fn random_bits<R: Rng>(rng: &mut R, len: u32) -> u64 {
    if len == 0 {
        0
    } else {
        rng.gen::<u64>() >> (64 - len)
    }
}

fn block_lengths(dim: u32, levels: &[u32]) -> (Vec<u32>, Vec<u32>) {
    let a = levels.iter().enumerate().map(|(t, &l)| if t == 0 { l - 1 } else { l - levels[t - 1] - 1 }).collect();
    let b = levels.iter().map(|&l| dim - l).collect();
    (a, b)
}

/// Lays the blocks out as `v_t = A_1 1 A_2 1 … A_t 0 B_t`.
pub fn assemble(dim: u32, levels: &[u32], blocks: &Blocks) -> Vec<u64> {
    let mut prefix = 0u64;
    let mut out = Vec::with_capacity(levels.len());
    for t in 0..levels.len() {
        let (alen, aval) = blocks.a[t];
        prefix = (prefix << alen) | aval;
        let (blen, bval) = blocks.b[t];
        debug_assert_eq!(blen, dim - levels[t]);
        out.push((prefix << 1 << blen) | bval);
        prefix = (prefix << 1) | 1;
    }
    out
}

/// Reads the blocks back off a sample.
pub fn decompose(dim: u32, sample: &EmbeddingSample) -> Blocks {
    let (alens, blens) = block_lengths(dim, &sample.levels);
    let mask = |len: u32| if len == 0 { 0 } else { u64::MAX >> (64 - len) };
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (t, &l) in sample.levels.iter().enumerate() {
        let v = sample.vertices[t];
        // A_t occupies bits ℓ_{t-1}+1 ..= ℓ_t - 1
        a.push((alens[t], (v >> (dim - l + 1)) & mask(alens[t])));
        b.push((blens[t], v & mask(blens[t])));
    }
    Blocks { a, b }
}

pub fn sample_with<R: Rng>(cfg: &TilingConfig, rng: &mut R) -> EmbeddingSample {
    let big_l = cfg.level_count();
    let a = rng.gen_range(0..big_l - cfg.w);
    let mut picks = sample_indices(rng, cfg.w, cfg.h).into_vec();
    picks.sort_unstable();
    let levels: Vec<u32> = picks.iter().map(|&p| cfg.levels[a + p]).collect();
    let (alens, blens) = block_lengths(cfg.dim, &levels);
    let mut blocks = Blocks { a: Vec::with_capacity(cfg.h), b: Vec::with_capacity(cfg.h) };
    for t in 0..cfg.h {
        blocks.a.push((alens[t], random_bits(rng, alens[t])));
        blocks.b.push((blens[t], random_bits(rng, blens[t])));
    }
    let vertices = assemble(cfg.dim, &levels, &blocks);
    EmbeddingSample { a, levels, vertices }
}

/// One sample for the pattern `h`; the pattern fixes only the size.
pub fn sample_embedding(h: &OrderedGraph, cfg: &TilingConfig, seed: u64) -> Result<EmbeddingSample> {
    if h.vertex_count() != cfg.h {
        return invalid(format!("pattern has {} vertices, config expects {}", h.vertex_count(), cfg.h));
    }
    Ok(sample_with(cfg, &mut stream(seed, 0)))
}

/// Sample `index` of a run seeded by `seed`.
pub fn sample_at(cfg: &TilingConfig, seed: u64, index: u64) -> EmbeddingSample {
    sample_with(cfg, &mut stream(seed, index))
}

pub fn check_sample(cfg: &TilingConfig, s: &EmbeddingSample) -> std::result::Result<(), String> {
    let d = cfg.dim;
    if s.levels.len() != cfg.h || s.vertices.len() != cfg.h {
        return Err("wrong sample size".into());
    }
    if s.a + cfg.w > cfg.level_count() {
        return Err(format!("window start {} out of range", s.a));
    }
    let window = &cfg.levels[s.a..s.a + cfg.w];
    if s.levels.windows(2).any(|p| p[0] >= p[1]) || !s.levels.iter().all(|l| window.contains(l)) {
        return Err("levels not an increasing subset of the window".into());
    }
    for t in 0..cfg.h - 1 {
        let (u, v) = (s.vertices[t], s.vertices[t + 1]);
        if u >= v || delta_raw(d, u, v) != s.levels[t] {
            return Err(format!("v_{} and v_{} do not split at level {}", t + 1, t + 2, s.levels[t]));
        }
    }
    let last = s.vertices[cfg.h - 1];
    if (last >> (d - s.levels[cfg.h - 1])) & 1 != 0 {
        return Err("last vertex has a 1 at the last level".into());
    }
    Ok(())
}

/// Hits of each target pair `x < y` by `Φ(edge)` over `samples` draws.
pub fn edge_hit_counts(h: &OrderedGraph, cfg: &TilingConfig, samples: u64, seed: u64, targets: &[(u64, u64)]) -> Result<Vec<u64>> {
    if h.vertex_count() != cfg.h {
        return invalid(format!("pattern has {} vertices, config expects {}", h.vertex_count(), cfg.h));
    }
    let index: HashMap<(u64, u64), usize> = targets.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let edges = h.edge_vec();
    Ok((0..samples)
        .into_par_iter()
        .fold(
            || vec![0u64; targets.len()],
            |mut acc, k| {
                let s = sample_at(cfg, seed, k);
                for &(i, j) in &edges {
                    if let Some(&t) = index.get(&(s.vertices[i], s.vertices[j])) {
                        acc[t] += 1;
                    }
                }
                acc
            },
        )
        .reduce(|| vec![0u64; targets.len()], |mut a, b| {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
            a
        }))
}

/// `P(ℓ_1 = ι(p))` for `p = 1..=L`.
pub fn first_level_law(cfg: &TilingConfig) -> Vec<BigRational> {
    let big_l = cfg.level_count();
    let pas = Pascal::new(big_l);
    let denom = BigInt::from((big_l - cfg.w) as u128 * pas.get(cfg.w, cfg.h));
    (1..=big_l)
        .map(|p| {
            let num: u128 = (0..big_l - cfg.w).filter(|&a| a < p && p <= a + cfg.w).map(|a| pas.get(a + cfg.w - p, cfg.h - 1)).sum();
            BigRational::new(BigInt::from(num), denom.clone())
        })
        .collect()
}

/// Level sets compatible with `v_i = x`, `v_j = y`, summed over window
/// starts: `κ` is the position of `δ(x, y)` and `ones[p]` says whether `y`
/// has a 1 at `ι(p)`.
fn compatible_count(cfg: &TilingConfig, pas: &Pascal, i: usize, j: usize, kappa: usize, ones: &[bool]) -> u128 {
    let big_l = cfg.level_count();
    let (w, h) = (cfg.w, cfg.h);
    let mut pre = vec![0usize; big_l + 1];
    for p in 1..=big_l {
        pre[p] = pre[p - 1] + ones[p] as usize;
    }
    let mut total = 0u128;
    for a in 0..big_l - w {
        // δ(x, y) itself has to be one of the chosen levels
        if !(a < kappa && kappa <= a + w) {
            continue;
        }
        let before = pas.get(pre[kappa - 1] - pre[a], i - 1);
        if before == 0 {
            continue;
        }
        let mut inner = 0u128;
        for r in kappa + 1..=a + w {
            if ones[r] {
                continue;
            }
            inner += pas.get(pre[r - 1] - pre[kappa], j - i - 1) * pas.get(a + w - r, h - j);
        }
        total += before * inner;
    }
    total
}

fn bits_by_position(cfg: &TilingConfig, y: u64) -> Vec<bool> {
    let mut ones = vec![false; cfg.level_count() + 1];
    for (p, &l) in cfg.levels.iter().enumerate() {
        ones[p + 1] = (y >> (cfg.dim - l)) & 1 == 1;
    }
    ones
}

fn check_pair(cfg: &TilingConfig, x: BitString, y: BitString) -> Result<u32> {
    if x.len() != cfg.dim || y.len() != cfg.dim {
        return invalid(format!("strings must have length {}", cfg.dim));
    }
    if x.value() >= y.value() {
        return invalid(format!("need x < y, got {x} and {y}"));
    }
    Ok(delta_raw(cfg.dim, x.value(), y.value()))
}

/// `P(v_i = x, v_j = y)` with 1-based `i < j`.
pub fn exact_pair_probability(cfg: &TilingConfig, i: usize, j: usize, x: BitString, y: BitString) -> Result<BigRational> {
    if !(1 <= i && i < j && j <= cfg.h) {
        return invalid(format!("need 1 <= i < j <= {}, got i={i}, j={j}", cfg.h));
    }
    let delta = check_pair(cfg, x, y)?;
    let Some(kappa) = cfg.position(delta) else { return Ok(BigRational::zero()) };
    let pas = Pascal::new(cfg.level_count());
    let count = compatible_count(cfg, &pas, i, j, kappa, &bits_by_position(cfg, y.value()));
    Ok(scale(cfg, &pas, count << (j - 1), delta))
}

/// `count / ((L-w) C(w,h) τ_δ)`.
fn scale(cfg: &TilingConfig, pas: &Pascal, count: u128, delta: u32) -> BigRational {
    let windows = BigInt::from((cfg.level_count() - cfg.w) as u128 * pas.get(cfg.w, cfg.h));
    let tau = BigInt::one() << (2 * cfg.dim - delta - 1) as usize;
    BigRational::new(BigInt::from(count), windows * tau)
}

fn edge_weight(cfg: &TilingConfig, pas: &Pascal, edges: &[(usize, usize)], kappa: usize, ones: &[bool]) -> u128 {
    edges.iter().map(|&(u, v)| compatible_count(cfg, pas, u + 1, v + 1, kappa, ones) << v).sum()
}

/// `P(xy ∈ Φ(H))`: the pair events over the edges of `H` are disjoint.
pub fn exact_edge_probability(h: &OrderedGraph, cfg: &TilingConfig, x: BitString, y: BitString) -> Result<BigRational> {
    if h.vertex_count() != cfg.h {
        return invalid(format!("pattern has {} vertices, config expects {}", h.vertex_count(), cfg.h));
    }
    let delta = check_pair(cfg, x, y)?;
    let Some(kappa) = cfg.position(delta) else { return Ok(BigRational::zero()) };
    let pas = Pascal::new(cfg.level_count());
    let weight = edge_weight(cfg, &pas, &h.edge_vec(), kappa, &bits_by_position(cfg, y.value()));
    Ok(scale(cfg, &pas, weight, delta))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelGuarantee {
    pub level: u32,
    /// Share of level-`ℓ` pairs meeting `(1-ε) e(H) / (|L| τ_ℓ)`.
    pub pass_fraction: f64,
    /// Smallest `P · |L| τ_ℓ / e(H)` over level-`ℓ` pairs.
    pub min_normalised: f64,
    pub level_pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TilingReport {
    pub epsilon: f64,
    pub config: TilingConfig,
    pub edges: usize,
    pub levels: Vec<LevelGuarantee>,
    pub passing_level_fraction: f64,
    pub pass: bool,
}

pub const DEFAULT_REPORT_BUDGET: u128 = 1 << 24;

/// Exhausts `(x, y)` per level. The probability depends on `x` only through
/// `δ(x, y)`, so each `y` with a 1 at `ℓ` stands for its `2^(d-ℓ)` partners.
pub fn tiling_guarantee_report(h: &OrderedGraph, cfg: &TilingConfig, eps: f64, budget: u128) -> Result<TilingReport> {
    if h.vertex_count() != cfg.h {
        return invalid(format!("pattern has {} vertices, config expects {}", h.vertex_count(), cfg.h));
    }
    if !(eps > 0.0) {
        return invalid("epsilon must be positive");
    }
    let work = (1u128 << cfg.dim) * cfg.level_count() as u128;
    if work > budget {
        return Err(Error::Budget { what: "tiling report enumeration", requested: work, budget });
    }
    let edges = h.edge_vec();
    let e = edges.len();
    let big_l = cfg.level_count();
    let pas = Pascal::new(big_l);
    let windows = (big_l - cfg.w) as u128 * pas.get(cfg.w, cfg.h);
    // pass iff weight · L ≥ (1-ε) e (L-w) C(w,h)
    let slack = (BigRational::one() - decimal(eps).expect("finite")).max(BigRational::zero());
    let need = slack * BigRational::from_integer(BigInt::from(e as u128 * windows));
    let d = cfg.dim;

    let levels: Vec<LevelGuarantee> = cfg
        .levels
        .iter()
        .enumerate()
        .map(|(p, &l)| {
            let kappa = p + 1;
            let ys: Vec<u64> = (0..1u64 << d).filter(|y| (y >> (d - l)) & 1 == 1).collect();
            let weights: Vec<u128> = ys.par_iter().map(|&y| edge_weight(cfg, &pas, &edges, kappa, &bits_by_position(cfg, y))).collect();
            let passing = weights.iter().filter(|&&wt| BigRational::from_integer(BigInt::from(wt * big_l as u128)) >= need).count();
            let min_w = weights.iter().copied().min().unwrap_or(0);
            let min_normalised = if e == 0 { f64::INFINITY } else { (min_w * big_l as u128) as f64 / (e as u128 * windows) as f64 };
            let pass_fraction = passing as f64 / ys.len() as f64;
            LevelGuarantee { level: l, pass_fraction, min_normalised, level_pass: pass_fraction >= 1.0 - eps }
        })
        .collect();
    let passing_level_fraction = levels.iter().filter(|g| g.level_pass).count() as f64 / big_l as f64;
    Ok(TilingReport { epsilon: eps, config: cfg.clone(), edges: e, pass: passing_level_fraction >= 1.0 - eps, levels, passing_level_fraction })
}

/// Whether `y` is balanced on every run of at least `m_window` consecutive
/// chosen levels: each bit value fills at least `(1-η)/2` of the run.
pub fn good_vertex_check(y: BitString, cfg: &TilingConfig, m_window: usize, eta: f64) -> bool {
    let ones = bits_by_position(cfg, y.value());
    let big_l = cfg.level_count();
    let mut pre = vec![0usize; big_l + 1];
    for p in 1..=big_l {
        pre[p] = pre[p - 1] + ones[p] as usize;
    }
    let floor = (1.0 - eta) / 2.0;
    for start in 0..big_l {
        for end in start + m_window.max(1)..=big_l {
            let len = end - start;
            let c1 = pre[end] - pre[start];
            let need = floor * len as f64;
            if (c1 as f64) < need || ((len - c1) as f64) < need {
                return false;
            }
        }
    }
    true
}

pub fn to_f64(p: &BigRational) -> f64 {
    p.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(len: u32, v: u64) -> BitString {
        BitString::new(len, v).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(TilingConfig::full(3, 2, 2).is_ok());
        assert!(TilingConfig::full(3, 3, 2).is_err());
        assert!(TilingConfig::full(3, 1, 2).is_err());
        assert!(TilingConfig::new(4, vec![2, 1, 3], 1, 1).is_err());
        assert!(TilingConfig::new(4, vec![1, 5], 1, 1).is_err());
        assert_eq!(paper_window(100, 0.5), (25, 7, 2));
    }

    #[test]
    fn samples_respect_layout() {
        let cfg = TilingConfig::full(3, 2, 2).unwrap();
        for k in 0..500 {
            let s = sample_at(&cfg, 7, k);
            check_sample(&cfg, &s).unwrap();
            assert!(s.vertices[0] < s.vertices[1]);
            assert_eq!(delta_raw(3, s.vertices[0], s.vertices[1]), s.levels[0]);
        }
        let cfg = TilingConfig::full(12, 6, 3).unwrap();
        for k in 0..2000 {
            let s = sample_at(&cfg, 1, k);
            check_sample(&cfg, &s).unwrap();
            assert_eq!(assemble(12, &s.levels, &decompose(12, &s)), s.vertices);
        }
        let p3 = OrderedGraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(sample_embedding(&p3, &cfg, 4).unwrap(), sample_embedding(&p3, &cfg, 4).unwrap());
        assert!(sample_embedding(&OrderedGraph::new(2), &cfg, 4).is_err());
    }

    /// Every `(a, subset, blocks)` outcome with its exact weight.
    fn enumerate_pairs(cfg: &TilingConfig, i: usize, j: usize) -> HashMap<(u64, u64), BigRational> {
        let big_l = cfg.level_count();
        let mut out: HashMap<(u64, u64), BigRational> = HashMap::new();
        let subsets: Vec<Vec<usize>> = (0u32..1 << cfg.w).filter(|m| m.count_ones() as usize == cfg.h).map(|m| (0..cfg.w).filter(|b| m >> b & 1 == 1).collect()).collect();
        let base = BigRational::new(BigInt::one(), BigInt::from(((big_l - cfg.w) * subsets.len()) as u64));
        for a in 0..big_l - cfg.w {
            for sub in &subsets {
                let levels: Vec<u32> = sub.iter().map(|&p| cfg.levels[a + p]).collect();
                let (alens, blens) = block_lengths(cfg.dim, &levels);
                let lens: Vec<u32> = alens.iter().zip(&blens).flat_map(|(&x, &y)| [x, y]).collect();
                let total: u32 = lens.iter().sum();
                let weight = &base / BigRational::from_integer(BigInt::one() << total as usize);
                for bits in 0..1u64 << total {
                    let mut rest = bits;
                    let mut take = |len: u32| {
                        let v = rest & ((1u64 << len) - 1);
                        rest >>= len;
                        v
                    };
                    let mut blocks = Blocks { a: vec![], b: vec![] };
                    for t in 0..cfg.h {
                        blocks.a.push((alens[t], take(alens[t])));
                        blocks.b.push((blens[t], take(blens[t])));
                    }
                    let v = assemble(cfg.dim, &levels, &blocks);
                    *out.entry((v[i - 1], v[j - 1])).or_insert_with(BigRational::zero) += &weight;
                }
            }
        }
        out
    }

    #[test]
    fn formula_matches_full_enumeration() {
        for (d, levels, w, h) in [(4, vec![1, 2, 3, 4], 2, 2), (5, vec![1, 2, 3, 4, 5], 3, 3), (6, vec![1, 2, 4, 5, 6], 3, 2), (6, vec![1, 2, 3, 4, 5, 6], 4, 3)] {
            let cfg = TilingConfig::new(d, levels, w, h).unwrap();
            for i in 1..h {
                for j in i + 1..=h {
                    let table = enumerate_pairs(&cfg, i, j);
                    for x in 0..1u64 << d {
                        for y in x + 1..1u64 << d {
                            let want = table.get(&(x, y)).cloned().unwrap_or_else(BigRational::zero);
                            let got = exact_pair_probability(&cfg, i, j, bs(d, x), bs(d, y)).unwrap();
                            assert_eq!(got, want, "d={d} i={i} j={j} x={x} y={y}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn pair_probabilities_sum_to_one() {
        let cfg = TilingConfig::full(6, 3, 3).unwrap();
        for (i, j) in [(1, 2), (1, 3), (2, 3)] {
            let mut total = BigRational::zero();
            for x in 0..64 {
                for y in x + 1..64 {
                    total += exact_pair_probability(&cfg, i, j, bs(6, x), bs(6, y)).unwrap();
                }
            }
            assert_eq!(total, BigRational::one());
        }
    }

    #[test]
    fn levels_outside_set_have_zero_probability() {
        let cfg = TilingConfig::new(5, vec![1, 3, 4, 5], 2, 2).unwrap();
        // δ(00000, 01000) = 2 is not a chosen level
        assert!(exact_pair_probability(&cfg, 1, 2, bs(5, 0), bs(5, 8)).unwrap().is_zero());
        // y = 11111 has no 0 to host v_2's last level
        let p = exact_pair_probability(&cfg, 1, 2, bs(5, 0b01111), bs(5, 0b11111)).unwrap();
        assert!(p.is_zero());
        assert!(exact_pair_probability(&cfg, 2, 2, bs(5, 0), bs(5, 1)).is_err());
        assert!(exact_pair_probability(&cfg, 1, 2, bs(5, 3), bs(5, 1)).is_err());
    }

    #[test]
    fn edge_probability_is_sum_over_edges() {
        let cfg = TilingConfig::full(6, 4, 3).unwrap();
        let p3 = OrderedGraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let (x, y) = (bs(6, 0b000101), bs(6, 0b010100));
        let sum = exact_pair_probability(&cfg, 1, 2, x, y).unwrap() + exact_pair_probability(&cfg, 2, 3, x, y).unwrap();
        assert_eq!(exact_edge_probability(&p3, &cfg, x, y).unwrap(), sum);
        let edge_cfg = TilingConfig::full(6, 4, 2).unwrap();
        let e = OrderedGraph::from_edges(2, [(0, 1)]).unwrap();
        assert_eq!(exact_edge_probability(&e, &edge_cfg, x, y).unwrap(), exact_pair_probability(&edge_cfg, 1, 2, x, y).unwrap());
    }

    #[test]
    fn first_level_law_matches_sampler() {
        let cfg = TilingConfig::full(10, 4, 1).unwrap();
        let law = first_level_law(&cfg);
        assert_eq!(law.iter().fold(BigRational::zero(), |a, b| a + b), BigRational::one());
        let n = 100_000u64;
        let mut counts = vec![0u64; 11];
        for k in 0..n {
            counts[sample_at(&cfg, 3, k).levels[0] as usize] += 1;
        }
        for p in 1..=10 {
            let q = to_f64(&law[p - 1]);
            let se = (q * (1.0 - q) / n as f64).sqrt();
            assert!((counts[p] as f64 / n as f64 - q).abs() <= 4.0 * se + 1e-12, "level {p}");
        }
    }

    #[test]
    fn report_basics() {
        let e = OrderedGraph::from_edges(2, [(0, 1)]).unwrap();
        let cfg = TilingConfig::full(8, 3, 2).unwrap();
        let r = tiling_guarantee_report(&e, &cfg, 1.0, DEFAULT_REPORT_BUDGET).unwrap();
        assert!(r.pass && r.levels.iter().all(|g| g.pass_fraction == 1.0));
        let r = tiling_guarantee_report(&e, &cfg, 0.3, DEFAULT_REPORT_BUDGET).unwrap();
        assert_eq!(r.levels.len(), 8);
        assert!(r.levels.iter().all(|g| (0.0..=1.0).contains(&g.pass_fraction)));
        assert!(tiling_guarantee_report(&e, &cfg, 0.3, 10).is_err());
    }

    #[test]
    fn good_vertices() {
        let cfg = TilingConfig::full(20, 1, 1).unwrap();
        assert!(good_vertex_check(bs(20, 0b1010_1010_1010_1010_1010), &cfg, 10, 0.1));
        assert!(!good_vertex_check(bs(20, 0b1010_1010_1010_1010_1010), &cfg, 2, 0.1));
        assert!(!good_vertex_check(bs(20, 0), &cfg, 5, 0.5));
        assert!(!good_vertex_check(bs(20, 0xFFFFF), &cfg, 5, 0.5));
    }

    fn balanced_oracle(y: u64, len: usize, m: usize, eta: f64) -> bool {
        let bits: Vec<u64> = (0..len).map(|p| (y >> (len - 1 - p)) & 1).collect();
        (0..len).all(|s| {
            (s + m..=len).all(|e| {
                let ones = bits[s..e].iter().sum::<u64>() as f64;
                let n = (e - s) as f64;
                ones >= (1.0 - eta) / 2.0 * n && n - ones >= (1.0 - eta) / 2.0 * n
            })
        })
    }

    #[test]
    fn good_vertex_proportion_frozen() {
        let cfg = TilingConfig::full(20, 1, 1).unwrap();
        let good = (0..1u64 << 20).into_par_iter().filter(|&y| good_vertex_check(bs(20, y), &cfg, 9, 0.25)).count();
        assert_eq!(good as f64 / (1u64 << 20) as f64, 0.010919570922851562);
        for y in (0..1u64 << 20).step_by(997) {
            assert_eq!(good_vertex_check(bs(20, y), &cfg, 9, 0.25), balanced_oracle(y, 20, 9, 0.25));
        }
    }
}
