//! Instrumented backtracking search with pluggable variable ordering and pruning.
//!
//! Every strategy works the same way: pick one empty cell, branch over every
//! legal placement that covers it (in catalog order: piece id, orientation,
//! anchor), recurse. Strategies differ only in which cell they pick.

use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};
use std::time::{Duration, Instant};

use arrayvec::ArrayVec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{neighbor_masks, Cell, CellSet, NUM_CELLS};
use crate::landmarks::LandmarkTable;
use crate::piece::PieceSet;
use crate::placement::{Catalog, Placement, PlacementId};
use crate::state::{PuzzleState, MAX_DEPTH};

/// Name recorded in output metadata for the generator behind [`SearchRng`].
pub const GENERATOR_NAME: &str = "ChaCha8Rng (rand_chacha 0.3, seed_from_u64)";

pub const DEPTHS: usize = MAX_DEPTH + 1;

/// Seedable random source with a platform-independent stream.
#[derive(Clone, Debug)]
pub struct SearchRng(ChaCha8Rng);

impl SearchRng {
    pub fn new(seed: u64) -> SearchRng {
        SearchRng(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.0.gen_range(0..n)
    }

    pub fn inner(&mut self) -> &mut ChaCha8Rng {
        &mut self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VariableOrdering {
    /// A uniformly random empty cell.
    Randomized,
    /// The lowest-index empty cell.
    CellOrdered,
    /// The first empty cell in (z, x, y) order: bottom layer first.
    LayerOrdered,
    /// The empty cell with the fewest legal covering placements; ties go to the lowest index.
    Mcv,
}

impl VariableOrdering {
    pub const ALL: [VariableOrdering; 4] = [Self::Randomized, Self::CellOrdered, Self::LayerOrdered, Self::Mcv];

    pub fn name(self) -> &'static str {
        match self {
            Self::Randomized => "random",
            Self::CellOrdered => "cell",
            Self::LayerOrdered => "layer",
            Self::Mcv => "mcv",
        }
    }
}

impl fmt::Display for VariableOrdering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for VariableOrdering {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" | "randomized" => Ok(Self::Randomized),
            "cell" | "cell_ordered" => Ok(Self::CellOrdered),
            "layer" | "layer_ordered" => Ok(Self::LayerOrdered),
            "mcv" => Ok(Self::Mcv),
            other => Err(Error::InvalidArgument(format!("unknown ordering {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopMode {
    FirstSolution,
    Exhaustive,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StrategyConfig {
    pub ordering: VariableOrdering,
    /// Reject children that leave an empty region of one or two cells.
    pub pruning: bool,
    pub seed: u64,
    pub stop_mode: StopMode,
    /// Anti-landmark states in this table are pruned during search.
    #[serde(skip)]
    pub landmarks: Option<Arc<LandmarkTable>>,
}

impl StrategyConfig {
    pub fn new(ordering: VariableOrdering) -> StrategyConfig {
        StrategyConfig { ordering, pruning: false, seed: 0, stop_mode: StopMode::FirstSolution, landmarks: None }
    }

    pub fn pruning(mut self, on: bool) -> Self {
        self.pruning = on;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn exhaustive(mut self) -> Self {
        self.stop_mode = StopMode::Exhaustive;
        self
    }

    pub fn first_solution(mut self) -> Self {
        self.stop_mode = StopMode::FirstSolution;
        self
    }

    pub fn with_landmarks(mut self, table: Arc<LandmarkTable>) -> Self {
        self.landmarks = Some(table);
        self
    }

    /// Short stable description, e.g. `cell+prune/first`.
    pub fn label(&self) -> String {
        let mut s = self.ordering.name().to_string();
        if self.pruning {
            s.push_str("+prune");
        }
        if self.landmarks.is_some() {
            s.push_str("+landmarks");
        }
        s.push_str(match self.stop_mode {
            StopMode::FirstSolution => "/first",
            StopMode::Exhaustive => "/all",
        });
        s
    }
}

/// Per-depth counters. Depth 0 is the empty box; depth 7 holds complete assemblies.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes_created_per_depth: [u64; DEPTHS],
    /// Nodes whose successor list was generated.
    pub expanded_per_depth: [u64; DEPTHS],
    /// Expanded nodes that had no legal successor.
    pub dead_ends_per_depth: [u64; DEPTHS],
    pub backtracks_per_depth: [u64; DEPTHS],
    /// Candidate children rejected by void or anti-landmark pruning (never created).
    pub pruned_per_depth: [u64; DEPTHS],
    pub solutions_found: u64,
    /// Solutions accounted for by landmark jumps without being expanded.
    pub credited_solutions: u64,
    pub landmark_jumps: u64,
    pub total_nodes: u64,
    pub elapsed: Duration,
    /// `out_degree_histogram[d][k]`: expanded depth-d nodes that created k children.
    pub out_degree_histogram: Vec<Vec<u64>>,
}

impl SearchStats {
    /// Adds another run's counters (elapsed times are summed).
    pub fn merge(&mut self, other: &SearchStats) {
        for d in 0..DEPTHS {
            self.nodes_created_per_depth[d] += other.nodes_created_per_depth[d];
            self.expanded_per_depth[d] += other.expanded_per_depth[d];
            self.dead_ends_per_depth[d] += other.dead_ends_per_depth[d];
            self.backtracks_per_depth[d] += other.backtracks_per_depth[d];
            self.pruned_per_depth[d] += other.pruned_per_depth[d];
        }
        self.solutions_found += other.solutions_found;
        self.credited_solutions += other.credited_solutions;
        self.landmark_jumps += other.landmark_jumps;
        self.total_nodes += other.total_nodes;
        self.elapsed += other.elapsed;
        for (d, row) in other.out_degree_histogram.iter().enumerate() {
            for (k, &n) in row.iter().enumerate() {
                self.record_out_degree(d, k, n);
            }
        }
    }

    fn record_out_degree(&mut self, depth: usize, k: usize, n: u64) {
        if self.out_degree_histogram.len() <= depth {
            self.out_degree_histogram.resize(depth + 1, Vec::new());
        }
        let row = &mut self.out_degree_histogram[depth];
        if row.len() <= k {
            row.resize(k + 1, 0);
        }
        row[k] += n;
    }

    /// Mean number of children created per expanded node, by depth.
    pub fn out_degree_per_depth(&self) -> [f64; DEPTHS] {
        let mut out = [0.0; DEPTHS];
        for d in 0..MAX_DEPTH {
            if self.expanded_per_depth[d] > 0 {
                out[d] = self.nodes_created_per_depth[d + 1] as f64 / self.expanded_per_depth[d] as f64;
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub solutions: Vec<PuzzleState>,
    pub stats: SearchStats,
}

/// Decision on a freshly generated child.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Verdict {
    Expand,
    Prune,
    /// Create the node but do not expand it; its completions are known.
    Jump(u64),
}

/// Extra per-child test plugged into the engine (landmark tables).
pub(crate) trait NodeOracle: Sync {
    fn classify(&self, depth: usize, labels: &[u8; NUM_CELLS]) -> Verdict;
    /// Depth range the oracle may answer anything but `Expand` for.
    fn depths(&self) -> std::ops::RangeInclusive<usize>;
}

fn layer_order() -> &'static [u8; NUM_CELLS] {
    static ORDER: OnceLock<[u8; NUM_CELLS]> = OnceLock::new();
    ORDER.get_or_init(|| {
        let mut cells: Vec<Cell> = (0..NUM_CELLS).map(Cell::from_index).collect();
        cells.sort_by_key(|c| (c.z(), c.x(), c.y()));
        let mut order = [0u8; NUM_CELLS];
        for (slot, c) in order.iter_mut().zip(cells) {
            *slot = c.index() as u8;
        }
        order
    })
}

/// True when the empty cells of `occupied` contain a face-connected region of
/// size 1 or 2. A full box has no empty region and is never pruned.
pub fn has_small_void(occupied: CellSet) -> bool {
    let neighbors = neighbor_masks();
    let mut empty = occupied.complement().bits();
    while empty != 0 {
        let mut region = empty & empty.wrapping_neg();
        let mut frontier = region;
        while frontier != 0 {
            let mut next = 0;
            let mut bits = frontier;
            while bits != 0 {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                next |= neighbors[i];
            }
            frontier = next & empty & !region;
            region |= frontier;
        }
        if region.count_ones() <= 2 {
            return true;
        }
        empty &= !region;
    }
    false
}

/// Void-pruning predicate on a state.
pub fn void_prune(state: &PuzzleState) -> bool {
    has_small_void(state.occupancy())
}

fn fits(p: &Placement, occupied: CellSet, used: PieceSet) -> bool {
    !used.contains(p.piece) && p.cells.is_disjoint(occupied)
}

/// Number of legal placements covering `cell`.
fn covering_count(catalog: &Catalog, cell: Cell, occupied: CellSet, used: PieceSet) -> usize {
    catalog.covering(cell).iter().filter(|&&id| fits(catalog.placement(id), occupied, used)).count()
}

/// The cell the strategy branches on, or `None` for a full box.
pub(crate) fn choose_cell(
    catalog: &Catalog,
    ordering: VariableOrdering,
    occupied: CellSet,
    used: PieceSet,
    rng: &mut SearchRng,
) -> Option<Cell> {
    let empty = occupied.complement();
    if empty.is_empty() {
        return None;
    }
    Some(match ordering {
        VariableOrdering::CellOrdered => empty.first().expect("nonempty"),
        VariableOrdering::LayerOrdered => layer_order()
            .iter()
            .map(|&i| Cell::from_index(i as usize))
            .find(|&c| empty.contains(c))
            .expect("nonempty"),
        VariableOrdering::Randomized => empty.iter().nth(rng.below(empty.len())).expect("index in range"),
        VariableOrdering::Mcv => {
            let mut best: Option<(usize, Cell)> = None;
            for c in empty.iter() {
                let n = covering_count(catalog, c, occupied, used);
                if best.is_none_or(|(b, _)| n < b) {
                    best = Some((n, c));
                    if n == 0 {
                        break;
                    }
                }
            }
            best.expect("nonempty").1
        }
    })
}

fn successor_ids(catalog: &Catalog, cell: Cell, occupied: CellSet, used: PieceSet, out: &mut Vec<PlacementId>) {
    out.clear();
    out.extend(catalog.covering(cell).iter().copied().filter(|&id| fits(catalog.placement(id), occupied, used)));
}

/// Ordered successor placements of `state` under `config`'s variable ordering.
/// An empty list means the chosen cell cannot be covered (a dead end).
/// Void pruning is not applied here; see [`void_prune`].
pub fn successors(state: &PuzzleState, config: &StrategyConfig, rng: &mut SearchRng) -> Vec<Placement> {
    successors_in(Catalog::soma(), state, config.ordering, rng)
}

pub fn successors_in(
    catalog: &Catalog,
    state: &PuzzleState,
    ordering: VariableOrdering,
    rng: &mut SearchRng,
) -> Vec<Placement> {
    let Some(cell) = choose_cell(catalog, ordering, state.occupancy(), state.used_pieces(), rng) else {
        return Vec::new();
    };
    let mut ids = Vec::new();
    successor_ids(catalog, cell, state.occupancy(), state.used_pieces(), &mut ids);
    ids.into_iter().map(|id| *catalog.placement(id)).collect()
}

/// Depth-first search from the empty box.
pub fn solve(config: &StrategyConfig) -> SolveOutcome {
    let oracle = config.landmarks.as_deref().map(|t| t.anti_oracle());
    let mut engine = Engine::new(Catalog::soma(), config, oracle.as_ref().map(|o| o as &dyn NodeOracle));
    engine.run_from(&PuzzleState::empty());
    engine.finish()
}

pub(crate) struct Engine<'a> {
    catalog: &'a Catalog,
    ordering: VariableOrdering,
    pruning: bool,
    stop_first: bool,
    pub(crate) collect: bool,
    oracle: Option<&'a dyn NodeOracle>,
    rng: SearchRng,
    all_pieces: PieceSet,
    path: ArrayVec<PlacementId, MAX_DEPTH>,
    labels: [u8; NUM_CELLS],
    buffers: Vec<Vec<PlacementId>>,
    pub(crate) stats: SearchStats,
    solutions: Vec<PuzzleState>,
    started: Instant,
}

impl<'a> Engine<'a> {
    pub(crate) fn new(catalog: &'a Catalog, config: &StrategyConfig, oracle: Option<&'a dyn NodeOracle>) -> Self {
        Engine {
            catalog,
            ordering: config.ordering,
            pruning: config.pruning,
            stop_first: config.stop_mode == StopMode::FirstSolution,
            collect: true,
            oracle,
            rng: SearchRng::new(config.seed),
            all_pieces: catalog.pieces().iter().fold(PieceSet::EMPTY, |s, p| s.with(p.id)),
            path: ArrayVec::new(),
            labels: [0; NUM_CELLS],
            buffers: vec![Vec::new(); DEPTHS],
            stats: SearchStats::default(),
            solutions: Vec::new(),
            started: Instant::now(),
        }
    }

    pub(crate) fn found_solution(&self) -> bool {
        self.stats.solutions_found > 0
    }

    /// Counts `start` as a created node and searches below it. Returns true
    /// when the search should stop (first solution found in first-solution mode).
    pub(crate) fn run_from(&mut self, start: &PuzzleState) -> bool {
        self.path.clear();
        self.labels = [0; NUM_CELLS];
        for p in start.placements() {
            let id = self.catalog.find(p.piece, p.cells).expect("placement from this catalog");
            self.path.push(id);
            self.paint(p.cells, p.piece.get());
        }
        let depth = start.depth();
        self.stats.nodes_created_per_depth[depth] += 1;
        self.stats.total_nodes += 1;
        self.dfs(depth, start.occupancy(), start.used_pieces())
    }

    pub(crate) fn finish(mut self) -> SolveOutcome {
        self.stats.elapsed = self.started.elapsed();
        SolveOutcome { solutions: self.solutions, stats: self.stats }
    }

    fn paint(&mut self, cells: CellSet, label: u8) {
        for c in cells.iter() {
            self.labels[c.index()] = label;
        }
    }

    fn record_solution(&mut self) {
        self.stats.solutions_found += 1;
        if self.collect {
            let state = PuzzleState::from_placements(self.path.iter().map(|&id| self.catalog.placement(id)))
                .expect("search only builds legal states");
            self.solutions.push(state);
        }
    }

    fn dfs(&mut self, depth: usize, occupied: CellSet, used: PieceSet) -> bool {
        if used == self.all_pieces {
            self.record_solution();
            if self.stop_first {
                return true;
            }
            if depth > 0 {
                self.stats.backtracks_per_depth[depth] += 1;
            }
            return false;
        }
        self.stats.expanded_per_depth[depth] += 1;
        let mut succ = std::mem::take(&mut self.buffers[depth]);
        match choose_cell(self.catalog, self.ordering, occupied, used, &mut self.rng) {
            Some(cell) => successor_ids(self.catalog, cell, occupied, used, &mut succ),
            None => succ.clear(),
        }
        if succ.is_empty() {
            self.stats.dead_ends_per_depth[depth] += 1;
        }
        let child_depth = depth + 1;
        let mut stop = false;
        let mut created = 0;
        for &id in &succ {
            let p = *self.catalog.placement(id);
            let child_occ = occupied.union(p.cells);
            if self.pruning && has_small_void(child_occ) {
                self.stats.pruned_per_depth[child_depth] += 1;
                continue;
            }
            self.path.push(id);
            self.paint(p.cells, p.piece.get());
            let verdict = match self.oracle {
                Some(o) if o.depths().contains(&child_depth) => o.classify(child_depth, &self.labels),
                _ => Verdict::Expand,
            };
            match verdict {
                Verdict::Prune => self.stats.pruned_per_depth[child_depth] += 1,
                Verdict::Jump(n) => {
                    created += 1;
                    self.stats.nodes_created_per_depth[child_depth] += 1;
                    self.stats.total_nodes += 1;
                    self.stats.landmark_jumps += 1;
                    self.stats.credited_solutions += n;
                }
                Verdict::Expand => {
                    created += 1;
                    self.stats.nodes_created_per_depth[child_depth] += 1;
                    self.stats.total_nodes += 1;
                    stop = self.dfs(child_depth, child_occ, used.with(p.piece));
                }
            }
            self.paint(p.cells, 0);
            self.path.pop();
            if stop {
                break;
            }
        }
        self.buffers[depth] = succ;
        if !stop {
            self.stats.record_out_degree(depth, created, 1);
        }
        if !stop && depth > 0 {
            self.stats.backtracks_per_depth[depth] += 1;
        }
        stop
    }
}

/// Normalized backtrack frequency per depth.
pub fn backtrack_histogram(stats: &SearchStats) -> Result<[f64; DEPTHS]> {
    let total: u64 = stats.backtracks_per_depth.iter().sum();
    if total == 0 {
        return Err(Error::EmptyStats);
    }
    let mut out = [0.0; DEPTHS];
    for (o, &b) in out.iter_mut().zip(&stats.backtracks_per_depth) {
        *o = b as f64 / total as f64;
    }
    Ok(out)
}

/// Depth with the largest entry (lowest depth on ties).
pub fn modal_depth(histogram: &[f64]) -> usize {
    let mut best = 0;
    for (d, &v) in histogram.iter().enumerate() {
        if v > histogram[best] {
            best = d;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cell(x: usize, y: usize, z: usize) -> Cell {
        Cell::new(x, y, z).unwrap()
    }

    #[test]
    fn cell_ordering_covers_origin_first() {
        let config = StrategyConfig::new(VariableOrdering::CellOrdered);
        let succ = successors(&PuzzleState::empty(), &config, &mut SearchRng::new(0));
        assert!(!succ.is_empty());
        assert!(succ.iter().all(|p| p.cells.contains(cell(0, 0, 0))));
    }

    #[test]
    fn layer_ordering_fills_bottom_first() {
        let order = layer_order();
        assert!(order[..9].iter().all(|&i| Cell::from_index(i as usize).z() == 0));
        assert_eq!(order[1] as usize, cell(0, 1, 0).index());
        assert_eq!(order[3] as usize, cell(1, 0, 0).index());
    }

    #[test]
    fn void_detection() {
        assert!(!has_small_void(CellSet::EMPTY));
        assert!(!has_small_void(CellSet::FULL));
        let corner = cell(0, 0, 0);
        let walls: CellSet = [cell(1, 0, 0), cell(0, 1, 0), cell(0, 0, 1)].into_iter().collect();
        assert!(has_small_void(walls));
        let two: CellSet = CellSet::FULL.difference([corner, cell(2, 2, 2)].into_iter().collect());
        assert!(has_small_void(two));
        let three: CellSet =
            CellSet::FULL.difference([corner, cell(1, 0, 0), cell(2, 0, 0)].into_iter().collect());
        assert!(!has_small_void(three));
    }

    #[test]
    fn histogram_point_mass() {
        let stats = SearchStats { backtracks_per_depth: [0, 0, 0, 0, 0, 0, 0, 5], ..Default::default() };
        let h = backtrack_histogram(&stats).unwrap();
        assert_eq!(h[7], 1.0);
        assert_eq!(modal_depth(&h), 7);
        assert!(matches!(backtrack_histogram(&SearchStats::default()), Err(Error::EmptyStats)));
    }

    #[test]
    fn ordering_names_parse() {
        for o in VariableOrdering::ALL {
            assert_eq!(o.name().parse::<VariableOrdering>().unwrap(), o);
        }
        assert!("sideways".parse::<VariableOrdering>().is_err());
    }
}
