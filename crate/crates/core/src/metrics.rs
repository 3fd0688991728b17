//! Branching-factor statistics: sampled and exhaustive out-degree
//! distributions, tree-level averages, and the effective branching factor.

use std::collections::BTreeMap;
use std::io::Write;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{BudgetExceeded, Error, Result};
use crate::geometry::{Cell, CellSet, NUM_CELLS};
use crate::placement::{Catalog, PlacementId};
use crate::search::{solve, SearchRng, SearchStats, StrategyConfig, GENERATOR_NAME};
use crate::state::MAX_DEPTH;

/// Depths whose out-degree is defined (solution leaves at depth 7 are excluded).
pub const BRANCHING_DEPTHS: std::ops::RangeInclusive<usize> = 0..=MAX_DEPTH - 1;

pub const ESTIMATOR_NAIVE: &str = "random walk with restart on dead end, unweighted";
pub const ESTIMATOR_WEIGHTED: &str = "random walk, self-normalized weights 1/P(reach state)";
pub const CI_METHOD: &str = "bias-corrected percentile bootstrap, 10000 resamples";
pub const BOOTSTRAP_RESAMPLES: usize = 10_000;

/// What counts as a move out of a state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchingModel {
    /// Every legal placement of every unused piece.
    ConfigurationGraph,
    /// Placements covering one uniformly random empty cell, as in randomized DFS.
    RandomPosition,
}

impl BranchingModel {
    pub fn name(self) -> &'static str {
        match self {
            Self::ConfigurationGraph => "configuration_graph",
            Self::RandomPosition => "random_position",
        }
    }
}

impl std::str::FromStr for BranchingModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "configuration_graph" | "gp" => Ok(Self::ConfigurationGraph),
            "random_position" | "random" => Ok(Self::RandomPosition),
            other => Err(Error::InvalidArgument(format!("unknown branching model {other:?}"))),
        }
    }
}

const WORDS: usize = 11;

/// Set of placement ids as a fixed bitset.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Mask([u64; WORDS]);

impl Mask {
    const ZERO: Mask = Mask([0; WORDS]);

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and(self, o: Mask) -> Mask {
        let mut r = self;
        for (a, b) in r.0.iter_mut().zip(o.0) {
            *a &= b;
        }
        r
    }

    fn and_not(self, o: Mask) -> Mask {
        let mut r = self;
        for (a, b) in r.0.iter_mut().zip(o.0) {
            *a &= !b;
        }
        r
    }

    fn count(self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }

    fn ids(self) -> impl Iterator<Item = usize> {
        self.0.into_iter().enumerate().flat_map(|(i, mut w)| {
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            })
        })
    }
}

/// Per-placement conflict sets and per-cell covering sets.
struct Tables {
    all: Mask,
    conflict: Vec<Mask>,
    cover: [Mask; NUM_CELLS],
}

impl Tables {
    fn new(catalog: &Catalog) -> Tables {
        assert!(catalog.len() <= WORDS * 64, "catalog too large for the bitset");
        let ps = catalog.placements();
        let mut all = Mask::ZERO;
        let mut cover = [Mask::ZERO; NUM_CELLS];
        for (i, p) in ps.iter().enumerate() {
            all.set(i);
            for c in p.cells.iter() {
                cover[c.index()].set(i);
            }
        }
        let conflict = ps
            .iter()
            .map(|p| {
                let mut m = Mask::ZERO;
                for (j, q) in ps.iter().enumerate() {
                    if q.piece == p.piece || !q.cells.is_disjoint(p.cells) {
                        m.set(j);
                    }
                }
                m
            })
            .collect();
        Tables { all, conflict, cover }
    }

    fn legal_after(&self, placed: &[usize]) -> Mask {
        placed.iter().fold(self.all, |m, &i| m.and_not(self.conflict[i]))
    }

    fn covering_count(&self, legal: Mask, cell: usize) -> u32 {
        legal.and(self.cover[cell]).count()
    }
}

fn soma_tables() -> &'static Tables {
    static T: std::sync::OnceLock<Tables> = std::sync::OnceLock::new();
    T.get_or_init(|| Tables::new(Catalog::soma()))
}

fn occupancy(catalog: &Catalog, placed: &[usize]) -> CellSet {
    placed.iter().fold(CellSet::EMPTY, |s, &i| s.union(catalog.placements()[i].cells))
}

/// Mean out-degree of a state under `model` (for `RandomPosition`, averaged over the cell choice).
fn expected_out_degree(t: &Tables, model: BranchingModel, legal: Mask, occupied: CellSet) -> Vec<(u32, f64)> {
    match model {
        BranchingModel::ConfigurationGraph => vec![(legal.count(), 1.0)],
        BranchingModel::RandomPosition => {
            let empty = occupied.complement();
            let w = 1.0 / empty.len() as f64;
            empty.iter().map(|c| (t.covering_count(legal, c.index()), w)).collect()
        }
    }
}

/// Probability that a walk under `model` builds the configuration `placed`
/// (in any order), by dynamic programming over its subsets.
fn reach_probability(t: &Tables, catalog: &Catalog, model: BranchingModel, placed: &[usize]) -> f64 {
    let n = placed.len();
    let mut p = vec![0.0f64; 1 << n];
    p[0] = 1.0;
    for mask in 1usize..(1 << n) {
        let mut total = 0.0;
        for i in 0..n {
            if mask & (1 << i) == 0 {
                continue;
            }
            let prev = mask & !(1 << i);
            if p[prev] == 0.0 {
                continue;
            }
            let subset: Vec<usize> = (0..n).filter(|&j| prev & (1 << j) != 0).map(|j| placed[j]).collect();
            let legal = t.legal_after(&subset);
            let step = match model {
                BranchingModel::ConfigurationGraph => 1.0 / legal.count() as f64,
                BranchingModel::RandomPosition => {
                    let empty = occupancy(catalog, &subset).complement().len() as f64;
                    catalog.placements()[placed[i]]
                        .cells
                        .iter()
                        .map(|c| 1.0 / t.covering_count(legal, c.index()) as f64)
                        .sum::<f64>()
                        / empty
                }
            };
            total += p[prev] * step;
        }
        p[mask] = total;
    }
    p[(1 << n) - 1]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplerSettings {
    pub model: BranchingModel,
    pub num_samples: usize,
    pub seed: u64,
    /// Total restarts allowed per depth before giving up.
    pub max_restarts: u64,
}

impl SamplerSettings {
    pub fn new(model: BranchingModel, num_samples: usize, seed: u64) -> SamplerSettings {
        SamplerSettings { model, num_samples, seed, max_restarts: 1_000_000 }
    }
}

/// Out-degrees observed at one depth, with importance weights.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DepthSample {
    pub depth: usize,
    pub out_degrees: Vec<u32>,
    /// 1 / P(walk reaches the sampled configuration); unnormalized.
    pub weights: Vec<f64>,
    pub restarts: u64,
}

pub(crate) fn walk_seed(seed: u64, depth: usize, index: usize) -> u64 {
    let mut z = seed ^ (depth as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (index as u64).rotate_left(32);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// One walk to `depth`; returns (out-degree, weight, restarts) or None when the cap is hit.
fn one_walk(t: &Tables, catalog: &Catalog, model: BranchingModel, depth: usize, seed: u64, cap: u64) -> Option<(u32, f64, u64)> {
    let mut rng = SearchRng::new(seed);
    let mut restarts = 0;
    'walk: loop {
        let mut placed: Vec<usize> = Vec::with_capacity(depth);
        let mut legal = t.all;
        let mut occupied = CellSet::EMPTY;
        while placed.len() < depth {
            let choices: Vec<usize> = match model {
                BranchingModel::ConfigurationGraph => legal.ids().collect(),
                BranchingModel::RandomPosition => {
                    let empty = occupied.complement();
                    let cell = empty.iter().nth(rng.below(empty.len())).expect("box not full");
                    legal.and(t.cover[cell.index()]).ids().collect()
                }
            };
            if choices.is_empty() {
                restarts += 1;
                if restarts > cap {
                    return None;
                }
                continue 'walk;
            }
            let pick = choices[rng.below(choices.len())];
            legal = legal.and_not(t.conflict[pick]);
            occupied = occupied.union(catalog.placements()[pick].cells);
            placed.push(pick);
        }
        let k = match model {
            BranchingModel::ConfigurationGraph => legal.count(),
            BranchingModel::RandomPosition => {
                let empty = occupied.complement();
                let cell = empty.iter().nth(rng.below(empty.len())).expect("depth below 7");
                t.covering_count(legal, cell.index())
            }
        };
        let weight = 1.0 / reach_probability(t, catalog, model, &placed);
        return Some((k, weight, restarts));
    }
}

/// Out-degrees of random depth-`depth` states reached by uniform random walks.
pub fn sample_branching(depth: usize, settings: &SamplerSettings) -> Result<DepthSample> {
    if !BRANCHING_DEPTHS.contains(&depth) {
        return Err(Error::InvalidArgument(format!("sampling depth must be in 0..=6, got {depth}")));
    }
    if settings.num_samples == 0 {
        return Err(Error::InvalidArgument("num_samples must be positive".into()));
    }
    let catalog = Catalog::soma();
    let t = soma_tables();
    let results: Vec<Option<(u32, f64, u64)>> = (0..settings.num_samples)
        .into_par_iter()
        .map(|i| one_walk(t, catalog, settings.model, depth, walk_seed(settings.seed, depth, i), settings.max_restarts))
        .collect();
    let mut sample = DepthSample { depth, out_degrees: Vec::new(), weights: Vec::new(), restarts: 0 };
    for r in results {
        let Some((k, w, restarts)) = r else {
            return Err(Error::SamplingExhausted { restarts: settings.max_restarts, cap: settings.max_restarts });
        };
        sample.restarts += restarts;
        if sample.restarts > settings.max_restarts {
            return Err(Error::SamplingExhausted { restarts: sample.restarts, cap: settings.max_restarts });
        }
        sample.out_degrees.push(k);
        sample.weights.push(w);
    }
    Ok(sample)
}

/// Summary statistics of one depth's sample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DepthSummary {
    pub depth: usize,
    pub samples: usize,
    pub mean: f64,
    pub variance: f64,
    pub standard_error: f64,
    /// Mean over states with at least one move.
    pub nonterminal_mean: f64,
    pub weighted_mean: f64,
    pub weighted_standard_error: f64,
}

impl DepthSample {
    pub fn summary(&self) -> DepthSummary {
        let n = self.out_degrees.len() as f64;
        let xs: Vec<f64> = self.out_degrees.iter().map(|&k| k as f64).collect();
        let mean = xs.iter().sum::<f64>() / n;
        let variance = if n > 1.0 { xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
        let live: Vec<f64> = xs.iter().copied().filter(|&x| x > 0.0).collect();
        let nonterminal_mean = if live.is_empty() { 0.0 } else { live.iter().sum::<f64>() / live.len() as f64 };
        let wsum: f64 = self.weights.iter().sum();
        let weighted_mean = xs.iter().zip(&self.weights).map(|(x, w)| x * w).sum::<f64>() / wsum;
        let weighted_var =
            xs.iter().zip(&self.weights).map(|(x, w)| (w * (x - weighted_mean)).powi(2)).sum::<f64>() / (wsum * wsum);
        DepthSummary {
            depth: self.depth,
            samples: self.out_degrees.len(),
            mean,
            variance,
            standard_error: (variance / n).sqrt(),
            nonterminal_mean,
            weighted_mean,
            weighted_standard_error: weighted_var.sqrt(),
        }
    }

    /// Observed out-degree histogram.
    pub fn histogram(&self) -> BTreeMap<u32, u64> {
        let mut h = BTreeMap::new();
        for &k in &self.out_degrees {
            *h.entry(k).or_insert(0) += 1;
        }
        h
    }
}

/// Averages of per-depth branching across the whole tree (depths 0..=6).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OverallMeans {
    /// Unweighted average of the per-depth means, dead ends included.
    pub per_depth: f64,
    /// Unweighted average of the per-depth means over states with moves.
    pub per_depth_nonterminal: f64,
    /// Per-depth means weighted by the number of states at each depth.
    pub node_weighted: f64,
    pub node_weighted_nonterminal: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BranchingProfile {
    pub settings: SamplerSettings,
    pub per_depth_samples: Vec<DepthSample>,
    pub per_depth: Vec<DepthSummary>,
    pub overall: OverallMeans,
    /// Headline estimate: average of per-depth means, dead ends included.
    pub overall_mean: f64,
    pub ci95: (f64, f64),
    pub ci_method: String,
    pub estimator: String,
    pub generator: String,
}

/// Samples every depth 0..=6 and summarizes. Node weights for the
/// node-weighted averages are the importance-weighted state counts
/// (mean of 1/P(state) per depth).
pub fn branching_profile(settings: &SamplerSettings) -> Result<BranchingProfile> {
    let samples: Vec<DepthSample> =
        BRANCHING_DEPTHS.map(|d| sample_branching(d, settings)).collect::<Result<_>>()?;
    let per_depth: Vec<DepthSummary> = samples.iter().map(DepthSample::summary).collect();
    let sizes: Vec<f64> = samples
        .iter()
        .map(|s| s.weights.iter().sum::<f64>() / (s.weights.len() as f64 + s.restarts as f64))
        .collect();
    let overall = overall_means(&per_depth, &sizes);
    let (lo, hi) = bootstrap_ci(&samples, settings.seed, BOOTSTRAP_RESAMPLES);
    Ok(BranchingProfile {
        settings: settings.clone(),
        per_depth_samples: samples,
        per_depth,
        overall,
        overall_mean: overall.per_depth,
        ci95: (lo.min(overall.per_depth), hi.max(overall.per_depth)),
        ci_method: CI_METHOD.into(),
        estimator: ESTIMATOR_NAIVE.into(),
        generator: GENERATOR_NAME.into(),
    })
}

fn overall_means(per_depth: &[DepthSummary], sizes: &[f64]) -> OverallMeans {
    let n = per_depth.len() as f64;
    let total: f64 = sizes.iter().sum();
    OverallMeans {
        per_depth: per_depth.iter().map(|s| s.mean).sum::<f64>() / n,
        per_depth_nonterminal: per_depth.iter().map(|s| s.nonterminal_mean).sum::<f64>() / n,
        node_weighted: per_depth.iter().zip(sizes).map(|(s, w)| s.mean * w).sum::<f64>() / total,
        node_weighted_nonterminal: per_depth.iter().zip(sizes).map(|(s, w)| s.nonterminal_mean * w).sum::<f64>()
            / total,
    }
}

/// Bias-corrected percentile bootstrap for the average of per-depth means.
/// Each depth is resampled independently.
pub fn bootstrap_ci(samples: &[DepthSample], seed: u64, resamples: usize) -> (f64, f64) {
    let estimate = samples.iter().map(|s| s.summary().mean).sum::<f64>() / samples.len() as f64;
    let mut rng = SearchRng::new(seed ^ 0xB007_5742);
    let mut stats: Vec<f64> = (0..resamples)
        .map(|_| {
            samples
                .iter()
                .map(|s| {
                    let n = s.out_degrees.len();
                    (0..n).map(|_| s.out_degrees[rng.inner().gen_range(0..n)] as f64).sum::<f64>() / n as f64
                })
                .sum::<f64>()
                / samples.len() as f64
        })
        .collect();
    stats.sort_by(f64::total_cmp);
    let normal = Normal::standard();
    let below = stats.iter().filter(|&&x| x < estimate).count() as f64 / resamples as f64;
    let z0 = normal.inverse_cdf(below.clamp(0.5 / resamples as f64, 1.0 - 0.5 / resamples as f64));
    let z = normal.inverse_cdf(0.975);
    let quantile = |p: f64| {
        let idx = ((p * resamples as f64).floor() as usize).min(resamples - 1);
        stats[idx]
    };
    (quantile(normal.cdf(2.0 * z0 - z)), quantile(normal.cdf(2.0 * z0 + z)))
}

/// Exact out-degree distribution over every configuration with `depth` pieces.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExhaustiveHistogram {
    pub model: BranchingModel,
    pub depth: usize,
    /// Configurations visited.
    pub states: u64,
    /// Out-degree to total weight. Each configuration has weight 1, split
    /// evenly over its empty cells under `RandomPosition`.
    pub counts: BTreeMap<u32, f64>,
}

impl ExhaustiveHistogram {
    pub fn mean(&self) -> f64 {
        let total: f64 = self.counts.values().sum();
        self.counts.iter().map(|(&k, &w)| k as f64 * w).sum::<f64>() / total
    }

    pub fn variance(&self) -> f64 {
        let total: f64 = self.counts.values().sum();
        let m = self.mean();
        self.counts.iter().map(|(&k, &w)| (k as f64 - m).powi(2) * w).sum::<f64>() / total
    }
}

/// Walks all unordered configurations of `depth` pieces (pieces chosen in
/// increasing id order), stopping with a partial histogram once more than
/// `node_budget` configurations have been visited.
pub fn exhaustive_branching(
    model: BranchingModel,
    depth: usize,
    node_budget: Option<u64>,
) -> std::result::Result<ExhaustiveHistogram, BudgetExceeded<ExhaustiveHistogram>> {
    let catalog = Catalog::soma();
    let t = soma_tables();
    let mut hist = ExhaustiveHistogram { model, depth, states: 0, counts: BTreeMap::new() };
    let budget = node_budget.unwrap_or(u64::MAX);
    let mut nodes = 0u64;
    let ranges: Vec<std::ops::Range<usize>> = catalog.pieces().iter().map(|p| catalog.piece_range(p.id)).collect();

    struct Walk<'a> {
        t: &'a Tables,
        catalog: &'a Catalog,
        ranges: &'a [std::ops::Range<usize>],
        model: BranchingModel,
        depth: usize,
        budget: u64,
        nodes: &'a mut u64,
        hist: &'a mut ExhaustiveHistogram,
    }

    impl Walk<'_> {
        fn go(&mut self, next_piece: usize, placed: usize, legal: Mask, occupied: CellSet) -> bool {
            *self.nodes += 1;
            if *self.nodes > self.budget {
                return false;
            }
            if placed == self.depth {
                self.hist.states += 1;
                for (k, w) in expected_out_degree(self.t, self.model, legal, occupied) {
                    *self.hist.counts.entry(k).or_insert(0.0) += w;
                }
                return true;
            }
            let remaining = self.depth - placed;
            for piece in next_piece..self.ranges.len() {
                if self.ranges.len() - piece < remaining {
                    break;
                }
                for id in self.ranges[piece].clone() {
                    if legal.0[id / 64] & (1 << (id % 64)) == 0 {
                        continue;
                    }
                    let cells = self.catalog.placements()[id].cells;
                    if !self.go(piece + 1, placed + 1, legal.and_not(self.t.conflict[id]), occupied.union(cells)) {
                        return false;
                    }
                }
            }
            true
        }
    }

    let finished = Walk { t, catalog, ranges: &ranges, model, depth, budget, nodes: &mut nodes, hist: &mut hist }
        .go(0, 0, t.all, CellSet::EMPTY);
    if finished {
        Ok(hist)
    } else {
        Err(BudgetExceeded { budget, partial: hist })
    }
}

/// Writes `(depth, out_degree, count)` rows; `puzzle` adds a leading column when given.
pub fn write_histogram_csv<W: Write>(
    w: W,
    puzzle: Option<&str>,
    rows: impl IntoIterator<Item = (usize, u32, f64)>,
) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    match puzzle {
        Some(_) => out.write_record(["puzzle", "depth", "out_degree", "count"])?,
        None => out.write_record(["depth", "out_degree", "count"])?,
    }
    for (d, k, c) in rows {
        let mut rec = Vec::new();
        if let Some(p) = puzzle {
            rec.push(p.to_string());
        }
        rec.extend([d.to_string(), k.to_string(), format_count(c)]);
        out.write_record(&rec)?;
    }
    out.flush()?;
    Ok(())
}

fn format_count(c: f64) -> String {
    if c.fract() == 0.0 && c.abs() < 1e15 {
        format!("{}", c as i64)
    } else {
        format!("{c:.6}")
    }
}

fn level_sum(b: f64) -> f64 {
    (0..=6).map(|d| b.powi(d)).sum()
}

/// Effective branching factor: the nonnegative root of sum_{d=0}^{6} b^d = N.
pub fn effective_bf(n: f64) -> Result<f64> {
    if !(n >= 1.0) || !n.is_finite() {
        return Err(Error::InvalidArgument(format!("effective branching factor needs N >= 1, got {n}")));
    }
    let (mut lo, mut hi) = (0.0f64, n.max(1.0));
    let mut b = 0.5 * (lo + hi);
    for _ in 0..400 {
        b = 0.5 * (lo + hi);
        let sum = level_sum(b);
        if (sum - n).abs() <= 1e-12 * n || hi - lo <= f64::EPSILON * hi {
            break;
        }
        if sum < n {
            lo = b;
        } else {
            hi = b;
        }
    }
    let rounded = b.round();
    if level_sum(rounded) == n {
        return Ok(rounded);
    }
    Ok(b)
}

/// Counts for one level of a search tree.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelCounts {
    /// Nodes at this depth with at least one child.
    pub nonleaf: u64,
    /// Leaves at this depth that are not solutions.
    pub dead_leaves: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelRatio {
    /// (1/D) * sum over usable depths of N_d / (N_d + L_d).
    pub value: f64,
    pub per_depth: Vec<Option<f64>>,
    /// Depths with N_d + L_d = 0, left out of the sum.
    pub skipped: Vec<usize>,
}

/// The average printed as b-bar = (1/D) sum_{d=1}^{D} N_d / (N_d + L_d), taken
/// literally. `levels[d - 1]` holds depth d.
pub fn level_ratio_mean(levels: &[LevelCounts]) -> Result<LevelRatio> {
    if levels.is_empty() {
        return Err(Error::InvalidArgument("need at least one depth".into()));
    }
    let per_depth: Vec<Option<f64>> = levels
        .iter()
        .map(|l| {
            let denom = l.nonleaf + l.dead_leaves;
            (denom > 0).then(|| l.nonleaf as f64 / denom as f64)
        })
        .collect();
    let skipped: Vec<usize> = per_depth.iter().enumerate().filter(|(_, v)| v.is_none()).map(|(i, _)| i + 1).collect();
    if skipped.len() == levels.len() {
        return Err(Error::DivisionByZero { depth: skipped[0] });
    }
    let value = per_depth.iter().flatten().sum::<f64>() / levels.len() as f64;
    Ok(LevelRatio { value, per_depth, skipped })
}

/// b_d = C_d / C_{d-1} for d = 1..len.
pub fn ratio_branching(level_sizes: &[u64]) -> Result<Vec<f64>> {
    level_sizes
        .windows(2)
        .enumerate()
        .map(|(i, w)| {
            if w[0] == 0 {
                Err(Error::DivisionByZero { depth: i })
            } else {
                Ok(w[1] as f64 / w[0] as f64)
            }
        })
        .collect()
}

/// Branching figures of one explored search tree.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TreeBranching {
    /// Children per node at depth d = C_{d+1} / C_d, d = 0..=6 (dead ends included).
    pub ratio: Vec<f64>,
    /// Children per node with at least one child, d = 0..=6.
    pub nonterminal: Vec<f64>,
    pub overall: OverallMeans,
    pub level_ratio: LevelRatio,
    pub total_nodes: u64,
    pub b_star: f64,
}

/// Reads per-depth figures off exhaustive search statistics. Solution leaves
/// at depth 7 never contribute.
pub fn tree_branching(stats: &SearchStats) -> Result<TreeBranching> {
    let c = &stats.nodes_created_per_depth;
    let mut ratio = Vec::new();
    let mut nonterminal = Vec::new();
    let mut levels = Vec::new();
    for d in 0..MAX_DEPTH {
        if c[d] == 0 {
            return Err(Error::DivisionByZero { depth: d });
        }
        ratio.push(c[d + 1] as f64 / c[d] as f64);
        let live = stats.expanded_per_depth[d] - stats.dead_ends_per_depth[d];
        nonterminal.push(if live == 0 { 0.0 } else { c[d + 1] as f64 / live as f64 });
        if d >= 1 {
            levels.push(LevelCounts { nonleaf: live, dead_leaves: c[d] - live });
        }
    }
    let n = MAX_DEPTH as f64;
    let weights: Vec<f64> = c[..MAX_DEPTH].iter().map(|&x| x as f64).collect();
    let total: f64 = weights.iter().sum();
    let overall = OverallMeans {
        per_depth: ratio.iter().sum::<f64>() / n,
        per_depth_nonterminal: nonterminal.iter().sum::<f64>() / n,
        node_weighted: ratio.iter().zip(&weights).map(|(r, w)| r * w).sum::<f64>() / total,
        node_weighted_nonterminal: nonterminal.iter().zip(&weights).map(|(r, w)| r * w).sum::<f64>() / total,
    };
    Ok(TreeBranching {
        ratio,
        nonterminal,
        overall,
        level_ratio: level_ratio_mean(&levels)?,
        total_nodes: stats.total_nodes,
        b_star: effective_bf(stats.total_nodes.max(1) as f64)?,
    })
}

/// One strategy run feeding the comparison grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixRow {
    pub strategy: String,
    pub ordering: String,
    pub pruning: bool,
    pub landmarks: bool,
    pub seed: u64,
    pub nodes: u64,
    pub b_star: f64,
}

/// Grid cell: one strategy, all seeds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixCell {
    pub strategy: String,
    pub mean_nodes: f64,
    /// Effective branching factor of the mean node count.
    pub b_star: f64,
    /// `b_star` rounded to one decimal for display.
    pub display: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrategyMatrix {
    pub rows: Vec<MatrixRow>,
    pub cells: Vec<MatrixCell>,
}

/// Runs every config to its first solution once per seed. Configs with a
/// landmark table use the landmark query.
pub fn strategy_matrix(configs: &[StrategyConfig], seeds: &[u64]) -> Result<StrategyMatrix> {
    let mut rows = Vec::new();
    let mut cells = Vec::new();
    for config in configs {
        let runs: Vec<Result<MatrixRow>> = seeds
            .par_iter()
            .map(|&seed| {
                let c = StrategyConfig { seed, ..config.clone() }.first_solution();
                let nodes = match &c.landmarks {
                    Some(table) => table.query_solve(&c)?.stats.total_nodes,
                    None => solve(&c).stats.total_nodes,
                };
                Ok(MatrixRow {
                    strategy: config.label(),
                    ordering: config.ordering.name().into(),
                    pruning: config.pruning,
                    landmarks: config.landmarks.is_some(),
                    seed,
                    nodes,
                    b_star: effective_bf(nodes as f64)?,
                })
            })
            .collect();
        let runs: Vec<MatrixRow> = runs.into_iter().collect::<Result<_>>()?;
        let mean_nodes = runs.iter().map(|r| r.nodes as f64).sum::<f64>() / runs.len().max(1) as f64;
        let b_star = effective_bf(mean_nodes.max(1.0))?;
        cells.push(MatrixCell { strategy: config.label(), mean_nodes, b_star, display: format!("{b_star:.1}") });
        rows.extend(runs);
    }
    Ok(StrategyMatrix { rows, cells })
}

/// Writes `(strategy, ordering, pruning, landmarks, seed, N, b_star)` rows.
pub fn write_matrix_csv<W: Write>(w: W, rows: &[MatrixRow]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["strategy", "ordering", "pruning", "landmarks", "seed", "N", "b_star"])?;
    for r in rows {
        out.write_record([
            r.strategy.clone(),
            r.ordering.clone(),
            r.pruning.to_string(),
            r.landmarks.to_string(),
            r.seed.to_string(),
            r.nodes.to_string(),
            format!("{}", r.b_star),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// Exact per-configuration out-degree: number of legal placements of unused
/// pieces, or (for `RandomPosition`) the average over empty cells.
pub fn out_degree(model: BranchingModel, placements: &[PlacementId]) -> f64 {
    let t = soma_tables();
    let placed: Vec<usize> = placements.iter().map(|&p| p as usize).collect();
    let legal = t.legal_after(&placed);
    let occ = occupancy(Catalog::soma(), &placed);
    expected_out_degree(t, model, legal, occ).iter().map(|&(k, w)| k as f64 * w).sum()
}

/// Number of legal placements covering `cell` after `placements`.
pub fn covering_out_degree(placements: &[PlacementId], cell: Cell) -> u32 {
    let t = soma_tables();
    let placed: Vec<usize> = placements.iter().map(|&p| p as usize).collect();
    t.covering_count(t.legal_after(&placed), cell.index())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn effective_bf_exact_points() {
        assert_eq!(effective_bf(1.0).unwrap(), 0.0);
        assert_eq!(effective_bf(7.0).unwrap(), 1.0);
        assert_eq!(effective_bf(127.0).unwrap(), 2.0);
        assert_eq!(effective_bf(1093.0).unwrap(), 3.0);
        assert!(effective_bf(0.5).is_err());
        let b = effective_bf(1000.0).unwrap();
        assert!((level_sum(b) - 1000.0).abs() <= 1e-9 * 1000.0);
    }

    #[test]
    fn level_ratio_all_solution_leaves() {
        let levels = [LevelCounts { nonleaf: 4, dead_leaves: 0 }; 3];
        let r = level_ratio_mean(&levels).unwrap();
        assert_eq!(r.value, 1.0);
        let with_gap = [LevelCounts { nonleaf: 4, dead_leaves: 0 }, LevelCounts::default()];
        assert_eq!(level_ratio_mean(&with_gap).unwrap().skipped, vec![2]);
        assert!(matches!(level_ratio_mean(&[LevelCounts::default()]), Err(Error::DivisionByZero { .. })));
    }

    #[test]
    fn ratio_of_binary_tree() {
        let sizes: Vec<u64> = (0..6).map(|d| 1 << d).collect();
        assert!(ratio_branching(&sizes).unwrap().iter().all(|&b| b == 2.0));
        assert!(ratio_branching(&[0, 1]).is_err());
    }

    #[test]
    fn root_out_degrees() {
        assert_eq!(out_degree(BranchingModel::ConfigurationGraph, &[]), Catalog::soma().len() as f64);
        let expected: f64 = Catalog::soma().placements().iter().map(|p| p.cells.len() as f64).sum::<f64>() / 27.0;
        assert!((out_degree(BranchingModel::RandomPosition, &[]) - expected).abs() < 1e-9);
    }

    #[test]
    fn reach_probability_sums_to_one_at_depth_one() {
        let t = soma_tables();
        let cat = Catalog::soma();
        for model in [BranchingModel::ConfigurationGraph, BranchingModel::RandomPosition] {
            let total: f64 = (0..cat.len()).map(|i| reach_probability(t, cat, model, &[i])).sum();
            assert!((total - 1.0).abs() < 1e-9, "{model:?} {total}");
        }
    }

    #[test]
    fn budget_returns_partial() {
        let err = exhaustive_branching(BranchingModel::ConfigurationGraph, 2, Some(100)).unwrap_err();
        assert_eq!(err.budget, 100);
        assert!(err.partial.states > 0);
    }
}
