use std::fmt;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{bit, sibling_range};
use crate::ordered::{tau_level, FundamentalInterval, HypercubeGraph, OrderedGraph};

/// Threshold families for the extraction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    /// The constants of the proof.
    Paper,
    /// The set-defining cutoffs of the proof with every proportion check
    /// weakened to non-emptiness.
    Desk,
}

impl Preset {
    pub fn thresholds(self, eps: f64) -> Thresholds {
        match self {
            Preset::Paper => Thresholds::paper(eps),
            Preset::Desk => Thresholds::desk(eps),
        }
    }
}

impl std::str::FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "paper" => Ok(Preset::Paper),
            "desk" => Ok(Preset::Desk),
            other => Err(format!("unknown preset {other:?} (expected paper or desk)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    /// Levels with `e_ℓ ≥ level_alpha · τ_ℓ` form `L`.
    pub level_alpha: f64,
    /// `y ∈ Y₁` iff the mean of `f(ℓ, y)` over `L` is at least this.
    pub y1_mean: f64,
    pub y1_fraction: f64,
    /// `ℓ ∈ L_y` iff `f(ℓ, y)` is at least this.
    pub level_degree: f64,
    pub lstar_fraction: f64,
    pub j_density: f64,
    pub x_fraction: f64,
    /// `ℓ ∈ L'` iff `ℓ` lies in at least this proportion of `L_y^high`, `y ∈ Y₃`.
    pub high_fraction: f64,
    pub lprime_fraction: f64,
    /// Richness certified for the levels of `G'`.
    pub eta: f64,
}

impl Thresholds {
    pub fn paper(eps: f64) -> Self {
        Self {
            level_alpha: eps,
            y1_mean: eps / 3.0,
            y1_fraction: eps / 6.0,
            level_degree: eps / 6.0,
            lstar_fraction: eps / 18.0,
            j_density: eps * eps / 108.0,
            x_fraction: eps / 6.0,
            high_fraction: eps / 24.0,
            lprime_fraction: eps / 24.0,
            eta: eps.powi(5) / 46656.0,
        }
    }

    pub fn desk(eps: f64) -> Self {
        Self { y1_fraction: 0.0, lstar_fraction: 0.0, j_density: 0.0, x_fraction: 0.0, lprime_fraction: 0.0, ..Self::paper(eps) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    RichLevels,
    Y1,
    LStar,
    J,
    X,
    HighLevels,
    Certify,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuxFailure {
    pub stage: Stage,
    pub detail: String,
}

impl fmt::Display for AuxFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} stage: {}", self.stage, self.detail)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtractionTrace {
    pub epsilon: f64,
    pub thresholds: Thresholds,
    pub dim: u32,
    pub rich_levels: Vec<u32>,
    pub y1: Vec<usize>,
    pub l_star: u32,
    pub y2: Vec<usize>,
    pub j: FundamentalInterval,
    pub y2_in_j: usize,
    pub i: FundamentalInterval,
    pub x: usize,
    pub y3: Vec<usize>,
    pub l_prime: Vec<u32>,
    /// Levels of `G'` are levels of `G` minus this.
    pub offset: u32,
    /// Levels of `G'`, in its own numbering, verified `η`-rich.
    pub certified_levels: Vec<u32>,
    /// Count of `η`-rich levels of `G'`, recomputed.
    pub sub_rich_count: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExtractionResult {
    pub trace: ExtractionTrace,
    /// `G'` on `{0,1}^(d-ℓ*)`; vertex `s` stands for `min rhs(I) + s`.
    pub sub: HypercubeGraph,
}

impl ExtractionResult {
    pub fn lift(&self, s: usize) -> usize {
        self.trace.j.range().start as usize + s
    }

    pub fn eta(&self) -> f64 {
        self.trace.thresholds.eta
    }
}

fn meets(count: usize, fraction: f64, total: usize) -> bool {
    count >= 1 && count as f64 >= fraction * total as f64
}

fn fail<T>(stage: Stage, detail: impl Into<String>) -> Result<T, AuxFailure> {
    Err(AuxFailure { stage, detail: detail.into() })
}

/// Splits sorted `L_y` into the low half and the largest `⌈|L_y|/2⌉`.
fn halves(ly: &[u32]) -> (&[u32], &[u32]) {
    ly.split_at(ly.len() / 2)
}

/// Smallest-index maximiser.
fn argmax<I: IntoIterator<Item = (T, usize)>, T>(items: I) -> Option<(T, usize)> {
    let mut best: Option<(T, usize)> = None;
    for (k, c) in items {
        if best.as_ref().is_none_or(|b| c > b.1) {
            best = Some((k, c));
        }
    }
    best
}

/// Finds `I`, `x ∈ lhs(I)` and `G' ⊆ G[rhs(I)]` whose edges all end in
/// `N⁺(x)`, following the averaging argument stage by stage.
pub fn vanishing_aux(g: &HypercubeGraph, eps: f64, t: &Thresholds) -> Result<ExtractionResult, AuxFailure> {
    let d = g.dim();
    let src = g.graph();
    let n = src.vertex_count();
    let profile = g.level_profile();

    let levels: Vec<u32> = (1..=d).filter(|&l| profile.count(l) as f64 >= t.level_alpha * profile.capacity(l) as f64).collect();
    if levels.is_empty() {
        return fail(Stage::RichLevels, format!("no level has {} of its capacity", t.level_alpha));
    }

    let f: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|y| {
            levels
                .iter()
                .map(|&l| {
                    if bit(d, y, l) == 0 {
                        0.0
                    } else {
                        src.backward(y).count_ones(sibling_range(d, y, l)) as f64 / (1u64 << (d - l)) as f64
                    }
                })
                .collect()
        })
        .collect();

    let y1: Vec<usize> = (0..n).filter(|&y| f[y].iter().sum::<f64>() / levels.len() as f64 >= t.y1_mean).collect();
    if !meets(y1.len(), t.y1_fraction, n) {
        return fail(Stage::Y1, format!("{} of {n} vertices have mean backward level degree {}", y1.len(), t.y1_mean));
    }

    let ly: Vec<Vec<u32>> = y1
        .iter()
        .map(|&y| levels.iter().zip(&f[y]).filter(|(_, &v)| v >= t.level_degree).map(|(&l, _)| l).collect())
        .collect();

    let low_count = |l: u32| ly.iter().filter(|s| halves(s).0.contains(&l)).count();
    let (l_star, lstar_count) = argmax(levels.iter().map(|&l| (l, low_count(l)))).expect("levels nonempty");
    if !meets(lstar_count, t.lstar_fraction, y1.len()) {
        return fail(Stage::LStar, format!("best level {l_star} is in {lstar_count} of {} low halves", y1.len()));
    }
    let y2: Vec<usize> = y1.iter().zip(&ly).filter(|(_, s)| halves(s).0.contains(&l_star)).map(|(&y, _)| y).collect();

    let shift = d - l_star;
    let mut per_prefix = vec![0usize; 1 << l_star];
    for &y in &y2 {
        per_prefix[y >> shift] += 1;
    }
    let (prefix, y2_in_j) = argmax(per_prefix.iter().copied().enumerate()).expect("at least one interval");
    let j = FundamentalInterval::new(d, l_star, prefix as u64).expect("valid prefix");
    if !meets(y2_in_j, t.j_density, j.size() as usize) {
        return fail(Stage::J, format!("densest level-{l_star} interval holds {y2_in_j} of Y2"));
    }
    let i = j.parent().expect("level at least 1");
    if j != i.rhs().expect("level below d") {
        return fail(Stage::J, "densest interval is a left half");
    }

    let mut y2j = FixedBitSet::with_capacity(n);
    y2.iter().filter(|&&y| y >> shift == prefix).for_each(|&y| y2j.insert(y));
    let lhs = i.lhs().expect("level below d").range();
    let (x, x_count) = argmax((lhs.start as usize..lhs.end as usize).map(|x| (x, src.forward(x).intersection_count(&y2j))))
        .expect("lhs nonempty");
    if !meets(x_count, t.x_fraction, y2_in_j) {
        return fail(Stage::X, format!("best x reaches {x_count} of {y2_in_j}"));
    }
    let y3: Vec<usize> = src.forward(x).intersection(&y2j).collect();

    let high: Vec<&[u32]> = y1.iter().zip(&ly).filter(|(y, _)| y3.binary_search(y).is_ok()).map(|(_, s)| halves(s).1).collect();
    let l_prime: Vec<u32> = levels
        .iter()
        .copied()
        .filter(|l| meets(high.iter().filter(|h| h.contains(l)).count(), t.high_fraction, y3.len()))
        .collect();
    if !meets(l_prime.len(), t.lprime_fraction, levels.len()) {
        return fail(Stage::HighLevels, format!("{} of {} rich levels are high for Y3", l_prime.len(), levels.len()));
    }

    let base = j.range().start as usize;
    let mut sub = OrderedGraph::new(1 << shift);
    for &y in &y3 {
        for u in src.backward(y).ones().filter(|&u| u >= base) {
            sub.add_edge(u - base, y - base).expect("inside J");
        }
    }
    let sub = HypercubeGraph::from_graph(shift, sub).expect("dimension below d");
    let sub_profile = sub.level_profile();
    let rich = |l: u32| sub_profile.count(l) as f64 >= t.eta * tau_level(shift, l) as f64;
    let certified_levels: Vec<u32> = l_prime.iter().map(|l| l - l_star).filter(|&l| rich(l)).collect();
    if certified_levels.is_empty() {
        return fail(Stage::Certify, format!("no level of L' is {}-rich in G'", t.eta));
    }
    let sub_rich_count = (1..=shift).filter(|&l| rich(l)).count();

    Ok(ExtractionResult {
        trace: ExtractionTrace {
            epsilon: eps,
            thresholds: *t,
            dim: d,
            rich_levels: levels,
            y1,
            l_star,
            y2,
            j,
            y2_in_j,
            i,
            x,
            y3,
            l_prime,
            offset: l_star,
            certified_levels,
            sub_rich_count,
        },
        sub,
    })
}

/// Replays a trace against `g` from raw adjacency, using level counts taken
/// edge by edge rather than by interval arithmetic.
pub fn verify_extraction(g: &HypercubeGraph, res: &ExtractionResult) -> Result<(), String> {
    let tr = &res.trace;
    let t = &tr.thresholds;
    let d = g.dim();
    let src = g.graph();
    let n = src.vertex_count();
    let check = |ok: bool, what: &str| if ok { Ok(()) } else { Err(what.to_string()) };

    let mut per_level = vec![0u64; d as usize + 1];
    let mut back_at = vec![vec![0u64; d as usize + 1]; n];
    for (u, v) in src.edges() {
        let l = g.level_of(u, v) as usize;
        per_level[l] += 1;
        back_at[v][l] += 1;
    }
    let levels: Vec<u32> = (1..=d).filter(|&l| per_level[l as usize] as f64 >= t.level_alpha * tau_level(d, l) as f64).collect();
    check(levels == tr.rich_levels, "rich level set differs")?;
    let f = |y: usize, l: u32| back_at[y][l as usize] as f64 / (1u64 << (d - l)) as f64;

    let y1: Vec<usize> = (0..n).filter(|&y| levels.iter().map(|&l| f(y, l)).sum::<f64>() / levels.len() as f64 >= t.y1_mean).collect();
    check(y1 == tr.y1, "Y1 differs")?;
    check(meets(y1.len(), t.y1_fraction, n), "Y1 proportion")?;

    let ly = |y: usize| -> Vec<u32> { levels.iter().copied().filter(|&l| f(y, l) >= t.level_degree).collect() };
    let lows: Vec<Vec<u32>> = y1.iter().map(|&y| halves(&ly(y)).0.to_vec()).collect();
    let count_low = |l: u32| lows.iter().filter(|s| s.contains(&l)).count();
    let c_star = count_low(tr.l_star);
    check(levels.iter().all(|&l| count_low(l) < c_star || (count_low(l) == c_star && l >= tr.l_star)), "l* not the first maximiser")?;
    check(meets(c_star, t.lstar_fraction, y1.len()), "l* proportion")?;
    let y2: Vec<usize> = y1.iter().zip(&lows).filter(|(_, s)| s.contains(&tr.l_star)).map(|(&y, _)| y).collect();
    check(y2 == tr.y2, "Y2 differs")?;

    check(tr.j.level == tr.l_star && tr.i.level + 1 == tr.l_star, "interval levels")?;
    check(tr.j.prefix == tr.i.prefix * 2 + 1, "J is not rhs(I)")?;
    let in_range = |r: &std::ops::Range<u64>, v: usize| r.contains(&(v as u64));
    let jr = tr.j.range();
    let lhs = FundamentalInterval { dim: d, level: tr.l_star, prefix: tr.i.prefix * 2 }.range();
    let y2j: Vec<usize> = y2.iter().copied().filter(|&y| in_range(&jr, y)).collect();
    check(y2j.len() == tr.y2_in_j && meets(y2j.len(), t.j_density, tr.j.size() as usize), "J density")?;
    check(in_range(&lhs, tr.x), "x outside lhs(I)")?;
    let y3: Vec<usize> = y2j.iter().copied().filter(|&y| src.has_edge(tr.x, y)).collect();
    check(y3 == tr.y3, "Y3 differs")?;
    check(meets(y3.len(), t.x_fraction, y2j.len()), "x proportion")?;

    let highs: Vec<Vec<u32>> = y3.iter().map(|&y| halves(&ly(y)).1.to_vec()).collect();
    let l_prime: Vec<u32> = levels.iter().copied().filter(|l| meets(highs.iter().filter(|h| h.contains(l)).count(), t.high_fraction, y3.len())).collect();
    check(l_prime == tr.l_prime, "L' differs")?;
    check(meets(l_prime.len(), t.lprime_fraction, levels.len()), "L' proportion")?;
    check(l_prime.iter().all(|&l| l > tr.l_star), "L' not above l*")?;

    let sub = res.sub.graph();
    check(res.sub.dim() == d - tr.l_star, "G' dimension")?;
    for (a, b) in sub.edges() {
        let (u, v) = (res.lift(a), res.lift(b));
        check(in_range(&jr, u) && in_range(&jr, v), "G' edge outside rhs(I)")?;
        check(src.has_edge(u, v), "G' edge not in G")?;
        check(tr.x < v && src.has_edge(tr.x, v), "G' edge ends outside N+(x)")?;
    }
    let expected: usize = y3.iter().map(|&y| src.backward(y).ones().filter(|&u| in_range(&jr, u)).count()).sum();
    check(expected == sub.edge_count(), "G' is not all edges into Y3")?;

    let sd = res.sub.dim();
    let mut sub_levels = vec![0u64; sd as usize + 1];
    for (a, b) in sub.edges() {
        sub_levels[res.sub.level_of(a, b) as usize] += 1;
    }
    let rich = |l: u32| sub_levels[l as usize] as f64 >= t.eta * tau_level(sd, l) as f64;
    check(tr.certified_levels.iter().all(|&l| rich(l)), "certified level not rich")?;
    let recount = (1..=sd).filter(|&l| rich(l)).count();
    check(recount == tr.sub_rich_count && recount >= tr.certified_levels.len(), "rich level recount")?;
    Ok(())
}
