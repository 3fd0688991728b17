//! Landmark and anti-landmark tables over canonical partial assemblies.
//!
//! Preprocessing walks the strategy's own search tree down to a fixed depth,
//! canonicalizes every state it meets there and counts how many complete
//! assemblies extend it. Live states become landmarks (ranked by extension
//! count), dead ones become anti-landmarks. At query time anti-landmarks prune
//! and landmarks are jumped to.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::io::{Read, Write};
use std::ops::RangeInclusive;
use std::path::Path;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::canon::{canonical_key, state_from_labels, CanonicalKey};
use crate::error::{Error, Result};
use crate::geometry::{CellSet, NUM_CELLS};
use crate::piece::PieceSet;
use crate::placement::{Catalog, PlacementId};
use crate::search::{
    choose_cell, has_small_void, Engine, NodeOracle, SearchRng, SearchStats, StopMode, StrategyConfig,
    VariableOrdering, Verdict,
};
use crate::state::{PuzzleState, MAX_DEPTH};

pub const TABLE_MAGIC: &[u8; 8] = b"SOMALMK\0";
pub const TABLE_VERSION: u32 = 1;

/// Which strategy a table was built for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseStrategy {
    pub ordering: VariableOrdering,
    pub pruning: bool,
}

impl BaseStrategy {
    pub fn of(config: &StrategyConfig) -> BaseStrategy {
        BaseStrategy { ordering: config.ordering, pruning: config.pruning }
    }

    /// Ordering used to enumerate and continue states. A random cell choice
    /// would make the reachable set seed dependent, so it maps to cell order.
    pub fn walk_ordering(self) -> VariableOrdering {
        match self.ordering {
            VariableOrdering::Randomized => VariableOrdering::CellOrdered,
            other => other,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LandmarkEntry {
    pub key: CanonicalKey,
    pub extensions: u64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildOptions {
    /// Also store dead states met above and below the table depth.
    pub deep_anti_landmarks: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LandmarkTable {
    pub depth: usize,
    pub base: BaseStrategy,
    pub landmark_count_limit: usize,
    /// Smallest extension count among the selected landmarks (0 when there are none).
    pub landmark_threshold: u64,
    /// Every evaluated state at the table depth with its extension count, sorted by key.
    pub entries: Vec<LandmarkEntry>,
    /// Selected landmarks, best first.
    pub landmarks: Vec<LandmarkEntry>,
    /// Dead states at any depth, sorted by key.
    pub anti_landmarks: Vec<CanonicalKey>,
    pub preprocessing_nodes: u64,
    pub preprocessing_time: Duration,
    pub options: BuildOptions,
}

/// Nodes created while continuing a state to all of its completions.
struct Continuation<'a> {
    catalog: &'a Catalog,
    ordering: VariableOrdering,
    pruning: bool,
    all: PieceSet,
    labels: [u8; NUM_CELLS],
    nodes: u64,
    dead: Option<&'a mut BTreeSet<CanonicalKey>>,
    rng: SearchRng,
}

impl Continuation<'_> {
    fn count(&mut self, depth: usize, occupied: CellSet, used: PieceSet) -> u64 {
        if used == self.all {
            return 1;
        }
        let Some(cell) = choose_cell(self.catalog, self.ordering, occupied, used, &mut self.rng) else {
            return 0;
        };
        let mut total = 0;
        for &id in self.catalog.covering(cell) {
            let p = *self.catalog.placement(id);
            if used.contains(p.piece) || !p.cells.is_disjoint(occupied) {
                continue;
            }
            let occ = occupied.union(p.cells);
            if self.pruning && has_small_void(occ) {
                continue;
            }
            self.nodes += 1;
            paint(&mut self.labels, p.cells, p.piece.get());
            let n = self.count(depth + 1, occ, used.with(p.piece));
            if n == 0 && depth + 1 < MAX_DEPTH {
                if let Some(dead) = self.dead.as_deref_mut() {
                    dead.insert(canonical_key(&self.labels, self.catalog.mirror_labels()));
                }
            }
            paint(&mut self.labels, p.cells, 0);
            total += n;
        }
        total
    }
}

fn paint(labels: &mut [u8; NUM_CELLS], cells: CellSet, label: u8) {
    for c in cells.iter() {
        labels[c.index()] = label;
    }
}

fn all_pieces(catalog: &Catalog) -> PieceSet {
    catalog.pieces().iter().fold(PieceSet::EMPTY, |s, p| s.with(p.id))
}

/// Number of complete assemblies extending `labels` (strategy independent),
/// plus the nodes created finding them under `ordering`.
pub fn count_extensions(catalog: &Catalog, labels: &[u8; NUM_CELLS], ordering: VariableOrdering) -> (u64, u64) {
    let state = state_from_labels(labels, catalog).expect("labels of a legal state");
    let mut c = Continuation {
        catalog,
        ordering: BaseStrategy { ordering, pruning: false }.walk_ordering(),
        pruning: false,
        all: all_pieces(catalog),
        labels: *labels,
        nodes: 0,
        dead: None,
        rng: SearchRng::new(0),
    };
    let n = c.count(state.depth(), state.occupancy(), state.used_pieces());
    (n, c.nodes)
}

/// Walks the base strategy's tree to `depth`, handing each new canonical
/// state to `visit` in DFS order. `visit` returns false to stop the walk.
struct Prefixes<'a, F> {
    catalog: &'a Catalog,
    base: BaseStrategy,
    depth: usize,
    labels: [u8; NUM_CELLS],
    seen: HashSet<CanonicalKey>,
    nodes: u64,
    dead: Vec<CanonicalKey>,
    visit: F,
    rng: SearchRng,
}

impl<F: FnMut(CanonicalKey, &[u8; NUM_CELLS], &mut u64) -> bool> Prefixes<'_, F> {
    fn walk(&mut self, depth: usize, occupied: CellSet, used: PieceSet) -> bool {
        if depth == self.depth {
            let key = canonical_key(&self.labels, self.catalog.mirror_labels());
            if self.seen.insert(key) {
                let labels = self.labels;
                return (self.visit)(key, &labels, &mut self.nodes);
            }
            return true;
        }
        let ordering = self.base.walk_ordering();
        let Some(cell) = choose_cell(self.catalog, ordering, occupied, used, &mut self.rng) else {
            return true;
        };
        let mut children = 0;
        for &id in self.catalog.covering(cell) {
            let p = *self.catalog.placement(id);
            if used.contains(p.piece) || !p.cells.is_disjoint(occupied) {
                continue;
            }
            let occ = occupied.union(p.cells);
            if self.base.pruning && has_small_void(occ) {
                continue;
            }
            children += 1;
            self.nodes += 1;
            paint(&mut self.labels, p.cells, p.piece.get());
            let go_on = self.walk(depth + 1, occ, used.with(p.piece));
            paint(&mut self.labels, p.cells, 0);
            if !go_on {
                return false;
            }
        }
        if children == 0 && depth > 0 {
            self.dead.push(canonical_key(&self.labels, self.catalog.mirror_labels()));
        }
        true
    }
}

fn rank(entries: &[LandmarkEntry], limit: usize) -> Vec<LandmarkEntry> {
    let mut live: Vec<LandmarkEntry> = entries.iter().copied().filter(|e| e.extensions > 0).collect();
    live.sort_by(|a, b| b.extensions.cmp(&a.extensions).then(a.key.cmp(&b.key)));
    live.truncate(limit);
    live
}

fn validate_depth(depth: usize) -> Result<()> {
    if !(1..MAX_DEPTH).contains(&depth) {
        return Err(Error::InvalidArgument(format!("table depth must be in 1..=6, got {depth}")));
    }
    Ok(())
}

/// Full table: every reachable canonical state at `depth`, all of them evaluated.
/// The top `limit` live states (by extension count, then key) are landmarks.
pub fn build_table(depth: usize, base: &StrategyConfig, limit: usize, options: BuildOptions) -> Result<LandmarkTable> {
    build(depth, base, limit, None, options)
}

/// Table built lazily: states are evaluated in the base strategy's DFS order
/// until `num_landmarks` live ones have been found. Preprocessing cost grows
/// with `num_landmarks`; zero means no preprocessing at all.
pub fn build_incremental(
    depth: usize,
    base: &StrategyConfig,
    num_landmarks: usize,
    options: BuildOptions,
) -> Result<LandmarkTable> {
    build(depth, base, num_landmarks, Some(num_landmarks), options)
}

fn build(
    depth: usize,
    base: &StrategyConfig,
    limit: usize,
    stop_after: Option<usize>,
    options: BuildOptions,
) -> Result<LandmarkTable> {
    validate_depth(depth)?;
    let catalog = Catalog::soma();
    let started = Instant::now();
    let base_strategy = BaseStrategy::of(base);
    let mut entries = Vec::new();
    let mut deep = BTreeSet::new();
    let mut live = 0usize;
    let mut prep_nodes = 0;
    let mut dead_above = Vec::new();
    if stop_after != Some(0) {
        let mut walker = Prefixes {
            catalog,
            base: base_strategy,
            depth,
            labels: [0; NUM_CELLS],
            seen: HashSet::new(),
            nodes: 0,
            dead: Vec::new(),
            rng: SearchRng::new(base.seed),
            visit: |key: CanonicalKey, labels: &[u8; NUM_CELLS], nodes: &mut u64| {
                let state_depth = depth;
                let used = labels.iter().fold(PieceSet::EMPTY, |s, &l| match crate::piece::PieceId::new(l) {
                    Some(id) => s.with(id),
                    None => s,
                });
                let occupied: CellSet =
                    (0..NUM_CELLS).filter(|&i| labels[i] != 0).map(crate::geometry::Cell::from_index).collect();
                let mut c = Continuation {
                    catalog,
                    ordering: base_strategy.walk_ordering(),
                    pruning: base_strategy.pruning,
                    all: all_pieces(catalog),
                    labels: *labels,
                    nodes: 0,
                    dead: options.deep_anti_landmarks.then_some(&mut deep),
                    rng: SearchRng::new(0),
                };
                let extensions = c.count(state_depth, occupied, used);
                *nodes += c.nodes;
                entries.push(LandmarkEntry { key, extensions });
                if extensions > 0 {
                    live += 1;
                }
                stop_after.is_none_or(|k| live < k)
            },
        };
        walker.walk(0, CellSet::EMPTY, PieceSet::EMPTY);
        prep_nodes = walker.nodes;
        dead_above = walker.dead;
    }
    let mut anti: BTreeSet<CanonicalKey> = entries.iter().filter(|e| e.extensions == 0).map(|e| e.key).collect();
    if options.deep_anti_landmarks {
        anti.extend(deep);
        anti.extend(dead_above);
    }
    let landmarks = rank(&entries, limit);
    entries.sort_by_key(|e| e.key);
    Ok(LandmarkTable {
        depth,
        base: base_strategy,
        landmark_count_limit: limit,
        landmark_threshold: landmarks.last().map_or(0, |e| e.extensions),
        entries,
        landmarks,
        anti_landmarks: anti.into_iter().collect(),
        preprocessing_nodes: prep_nodes,
        preprocessing_time: started.elapsed(),
        options,
    })
}

/// Anti-landmark pruning only.
pub(crate) struct AntiOracle<'a> {
    catalog: &'a Catalog,
    anti: HashSet<CanonicalKey>,
    depths: RangeInclusive<usize>,
}

/// Anti-landmark pruning plus landmark jumps at the table depth.
pub(crate) struct JumpOracle<'a> {
    inner: AntiOracle<'a>,
    depth: usize,
    landmarks: HashMap<CanonicalKey, u64>,
}

impl NodeOracle for AntiOracle<'_> {
    fn classify(&self, _depth: usize, labels: &[u8; NUM_CELLS]) -> Verdict {
        if self.anti.contains(&canonical_key(labels, self.catalog.mirror_labels())) {
            Verdict::Prune
        } else {
            Verdict::Expand
        }
    }

    fn depths(&self) -> RangeInclusive<usize> {
        self.depths.clone()
    }
}

impl NodeOracle for JumpOracle<'_> {
    fn classify(&self, depth: usize, labels: &[u8; NUM_CELLS]) -> Verdict {
        let key = canonical_key(labels, self.inner.catalog.mirror_labels());
        if self.inner.anti.contains(&key) {
            return Verdict::Prune;
        }
        if depth == self.depth {
            if let Some(&n) = self.landmarks.get(&key) {
                return Verdict::Jump(n);
            }
        }
        Verdict::Expand
    }

    fn depths(&self) -> RangeInclusive<usize> {
        let d = self.inner.depths.clone();
        (*d.start()).min(self.depth)..=(*d.end()).max(self.depth)
    }
}

/// Outcome of a landmark-assisted query.
#[derive(Clone, Debug)]
pub struct QueryOutcome {
    pub solutions: Vec<PuzzleState>,
    pub stats: SearchStats,
    /// Solutions found plus solutions credited through landmark jumps.
    pub solutions_total: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TradeoffRecord {
    pub depth: usize,
    pub num_landmarks: usize,
    pub preprocessing_nodes: u64,
    pub preprocessing_time: Duration,
    pub query_nodes: u64,
    pub query_time: Duration,
    /// Query nodes when only dead states at the table depth are kept.
    pub query_nodes_table_depth_only: u64,
}

impl LandmarkTable {
    pub fn is_anti_landmark(&self, key: CanonicalKey) -> bool {
        self.anti_landmarks.binary_search(&key).is_ok()
    }

    pub fn extensions(&self, key: CanonicalKey) -> Option<u64> {
        self.entries.binary_search_by_key(&key, |e| e.key).ok().map(|i| self.entries[i].extensions)
    }

    /// The same table with anti-landmarks restricted to the table depth.
    pub fn table_depth_only(&self) -> LandmarkTable {
        let mut t = self.clone();
        t.anti_landmarks.retain(|k| k.depth() == self.depth);
        t.options.deep_anti_landmarks = false;
        t
    }

    fn anti_depths(&self) -> RangeInclusive<usize> {
        let lo = self.anti_landmarks.iter().map(|k| k.depth()).min().unwrap_or(1);
        let hi = self.anti_landmarks.iter().map(|k| k.depth()).max().unwrap_or(0);
        lo..=hi
    }

    pub(crate) fn anti_oracle(&self) -> AntiOracle<'_> {
        AntiOracle {
            catalog: Catalog::soma(),
            anti: self.anti_landmarks.iter().copied().collect(),
            depths: self.anti_depths(),
        }
    }

    fn jump_oracle(&self) -> JumpOracle<'_> {
        JumpOracle {
            inner: self.anti_oracle(),
            depth: self.depth,
            landmarks: self.landmarks.iter().map(|e| (e.key, e.extensions)).collect(),
        }
    }

    /// Landmark-assisted search.
    ///
    /// First-solution mode seeds the frontier with the landmark states in
    /// rank order (one node each) and runs DFS below them, pruning
    /// anti-landmarks; with no landmarks it is a plain search from the root.
    /// Exhaustive mode searches from the root, prunes anti-landmarks and jumps
    /// over landmarks at the table depth, crediting their extension counts.
    pub fn query_solve(&self, config: &StrategyConfig) -> Result<QueryOutcome> {
        if self.landmarks.is_empty() && self.entries.is_empty() && self.landmark_count_limit > 0 {
            return Err(Error::NoLandmarks);
        }
        let catalog = Catalog::soma();
        let outcome = match config.stop_mode {
            StopMode::FirstSolution => {
                let oracle = self.anti_oracle();
                let mut engine = Engine::new(catalog, config, Some(&oracle));
                let mut done = false;
                for e in &self.landmarks {
                    let state = state_from_labels(&e.key.labels(), catalog)?;
                    if engine.run_from(&state) {
                        done = true;
                        break;
                    }
                }
                if !done && !engine.found_solution() {
                    engine.run_from(&PuzzleState::empty());
                }
                engine.finish()
            }
            StopMode::Exhaustive => {
                let oracle = self.jump_oracle();
                let mut engine = Engine::new(catalog, config, Some(&oracle));
                engine.run_from(&PuzzleState::empty());
                engine.finish()
            }
        };
        let solutions_total = outcome.stats.solutions_found + outcome.stats.credited_solutions;
        Ok(QueryOutcome { solutions: outcome.solutions, stats: outcome.stats, solutions_total })
    }

    /// Per-depth mean out-degree of the base strategy's exhaustive tree after
    /// deleting anti-landmark states, next to the same figures without deletion.
    pub fn effective_bf_upper_bound(&self, seed: u64) -> BranchingBound {
        let config = StrategyConfig::new(self.base.ordering).pruning(self.base.pruning).seed(seed).exhaustive();
        let plain = run_without_collect(&config, None);
        let oracle = self.anti_oracle();
        let reduced = run_without_collect(&config, Some(&oracle));
        BranchingBound {
            per_depth: reduced.out_degree_per_depth(),
            unpruned_per_depth: plain.out_degree_per_depth(),
            total_nodes: reduced.total_nodes,
            unpruned_total_nodes: plain.total_nodes,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<LandmarkTable> {
        Ok(serde_json::from_str(text)?)
    }

    /// Versioned little-endian binary form.
    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(TABLE_MAGIC)?;
        w.write_all(&TABLE_VERSION.to_le_bytes())?;
        w.write_all(&[self.depth as u8, ordering_code(self.base.ordering), self.base.pruning as u8])?;
        w.write_all(&[self.options.deep_anti_landmarks as u8])?;
        w.write_all(&(self.landmark_count_limit as u64).to_le_bytes())?;
        w.write_all(&self.landmark_threshold.to_le_bytes())?;
        w.write_all(&self.preprocessing_nodes.to_le_bytes())?;
        w.write_all(&(self.preprocessing_time.as_nanos() as u64).to_le_bytes())?;
        for list in [&self.entries, &self.landmarks] {
            w.write_all(&(list.len() as u64).to_le_bytes())?;
            for e in list.iter() {
                w.write_all(&e.key.0.to_le_bytes())?;
                w.write_all(&e.extensions.to_le_bytes())?;
            }
        }
        w.write_all(&(self.anti_landmarks.len() as u64).to_le_bytes())?;
        for k in &self.anti_landmarks {
            w.write_all(&k.0.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(mut r: R) -> Result<LandmarkTable> {
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != TABLE_MAGIC {
            return Err(Error::parse(0, "not a landmark table"));
        }
        let version = u32::from_le_bytes(read_array(&mut r)?);
        if version != TABLE_VERSION {
            return Err(Error::parse(0, format!("unsupported table version {version}")));
        }
        let [depth, ordering, pruning, deep]: [u8; 4] = read_array(&mut r)?;
        let limit = read_u64(&mut r)? as usize;
        let threshold = read_u64(&mut r)?;
        let nodes = read_u64(&mut r)?;
        let nanos = read_u64(&mut r)?;
        let mut lists = Vec::new();
        for _ in 0..2 {
            let n = read_u64(&mut r)?;
            let mut list = Vec::new();
            for _ in 0..n {
                let key = CanonicalKey(u128::from_le_bytes(read_array(&mut r)?));
                list.push(LandmarkEntry { key, extensions: read_u64(&mut r)? });
            }
            lists.push(list);
        }
        let n = read_u64(&mut r)?;
        let mut anti = Vec::new();
        for _ in 0..n {
            anti.push(CanonicalKey(u128::from_le_bytes(read_array(&mut r)?)));
        }
        let landmarks = lists.pop().expect("two lists");
        let entries = lists.pop().expect("two lists");
        Ok(LandmarkTable {
            depth: depth as usize,
            base: BaseStrategy { ordering: ordering_from_code(ordering)?, pruning: pruning != 0 },
            landmark_count_limit: limit,
            landmark_threshold: threshold,
            entries,
            landmarks,
            anti_landmarks: anti,
            preprocessing_nodes: nodes,
            preprocessing_time: Duration::from_nanos(nanos),
            options: BuildOptions { deep_anti_landmarks: deep != 0 },
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path)?;
        self.write_binary(std::io::BufWriter::new(file))
    }

    pub fn load(path: &Path) -> Result<LandmarkTable> {
        let file = std::fs::File::open(path)?;
        LandmarkTable::read_binary(std::io::BufReader::new(file))
    }
}

fn read_array<const N: usize, R: Read>(r: &mut R) -> Result<[u8; N]> {
    let mut buf = [0u8; N];
    r.read_exact(&mut buf)?;
    Ok(buf)
}

fn read_u64<R: Read>(r: &mut R) -> Result<u64> {
    Ok(u64::from_le_bytes(read_array(r)?))
}

fn ordering_code(o: VariableOrdering) -> u8 {
    VariableOrdering::ALL.iter().position(|&x| x == o).expect("listed") as u8
}

fn ordering_from_code(code: u8) -> Result<VariableOrdering> {
    VariableOrdering::ALL
        .get(code as usize)
        .copied()
        .ok_or_else(|| Error::parse(0, format!("unknown ordering code {code}")))
}

fn run_without_collect(config: &StrategyConfig, oracle: Option<&dyn NodeOracle>) -> SearchStats {
    let mut engine = Engine::new(Catalog::soma(), config, oracle);
    engine.collect = false;
    engine.run_from(&PuzzleState::empty());
    engine.finish().stats
}

/// Per-depth branching after anti-landmark deletion.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BranchingBound {
    pub per_depth: [f64; MAX_DEPTH + 1],
    pub unpruned_per_depth: [f64; MAX_DEPTH + 1],
    pub total_nodes: u64,
    pub unpruned_total_nodes: u64,
}

/// Exhaustive query nodes with no table, the `num_landmarks = 0` reference point.
pub fn baseline_nodes(base: &StrategyConfig) -> u64 {
    let config = base.clone().exhaustive();
    run_without_collect(&config, None).total_nodes
}

/// One record per (depth, landmark count), in sweep order. Queries run in
/// exhaustive mode so that the node counts are independent of where a first
/// solution happens to sit.
pub fn tradeoff_sweep(depths: &[usize], counts: &[usize], base: &StrategyConfig) -> Result<Vec<TradeoffRecord>> {
    let mut records = Vec::new();
    let query_config = StrategyConfig { landmarks: None, ..base.clone() }.exhaustive();
    for &depth in depths {
        for &k in counts {
            let table = build_incremental(depth, base, k, BuildOptions { deep_anti_landmarks: true })?;
            let started = Instant::now();
            let q = table.query_solve(&query_config)?;
            let query_time = started.elapsed();
            let shallow = table.table_depth_only().query_solve(&query_config)?;
            records.push(TradeoffRecord {
                depth,
                num_landmarks: k,
                preprocessing_nodes: table.preprocessing_nodes,
                preprocessing_time: table.preprocessing_time,
                query_nodes: q.stats.total_nodes,
                query_time,
                query_nodes_table_depth_only: shallow.stats.total_nodes,
            });
        }
    }
    Ok(records)
}

/// Writes sweep records as CSV: depth, num_landmarks, preprocessing_nodes,
/// preprocessing_ms, query_nodes, query_ms.
pub fn write_tradeoff_csv<W: Write>(w: W, records: &[TradeoffRecord]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["depth", "num_landmarks", "preprocessing_nodes", "preprocessing_ms", "query_nodes", "query_ms"])?;
    for r in records {
        out.write_record([
            r.depth.to_string(),
            r.num_landmarks.to_string(),
            r.preprocessing_nodes.to_string(),
            format!("{:.3}", r.preprocessing_time.as_secs_f64() * 1e3),
            r.query_nodes.to_string(),
            format!("{:.3}", r.query_time.as_secs_f64() * 1e3),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// Counts, over all raw depth-`depth` states of the cell-ordered tree, how
/// many complete assemblies extend each, grouped by canonical key.
pub fn raw_prefix_multiplicities(depth: usize) -> Result<BTreeMap<CanonicalKey, u64>> {
    validate_depth(depth)?;
    let catalog = Catalog::soma();
    let mut out = BTreeMap::new();
    let mut path: Vec<PlacementId> = Vec::new();
    fn rec(
        catalog: &Catalog,
        depth: usize,
        target: usize,
        occupied: CellSet,
        used: PieceSet,
        labels: &mut [u8; NUM_CELLS],
        path: &mut Vec<PlacementId>,
        out: &mut BTreeMap<CanonicalKey, u64>,
    ) {
        if depth == target {
            *out.entry(canonical_key(labels, catalog.mirror_labels())).or_insert(0) += 1;
            return;
        }
        let Some(cell) = occupied.complement().first() else { return };
        for &id in catalog.covering(cell) {
            let p = *catalog.placement(id);
            if used.contains(p.piece) || !p.cells.is_disjoint(occupied) {
                continue;
            }
            paint(labels, p.cells, p.piece.get());
            path.push(id);
            rec(catalog, depth + 1, target, occupied.union(p.cells), used.with(p.piece), labels, path, out);
            path.pop();
            paint(labels, p.cells, 0);
        }
    }
    rec(catalog, 0, depth, CellSet::EMPTY, PieceSet::EMPTY, &mut [0; NUM_CELLS], &mut path, &mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn depth_is_validated() {
        let base = StrategyConfig::new(VariableOrdering::CellOrdered);
        assert!(build_table(0, &base, 1, BuildOptions::default()).is_err());
        assert!(build_table(7, &base, 1, BuildOptions::default()).is_err());
    }

    #[test]
    fn zero_landmarks_means_no_preprocessing() {
        let base = StrategyConfig::new(VariableOrdering::CellOrdered);
        let t = build_incremental(2, &base, 0, BuildOptions::default()).unwrap();
        assert_eq!(t.preprocessing_nodes, 0);
        assert!(t.landmarks.is_empty() && t.anti_landmarks.is_empty());
    }

    #[test]
    fn binary_round_trip() {
        let base = StrategyConfig::new(VariableOrdering::CellOrdered);
        let t = build_incremental(2, &base, 5, BuildOptions { deep_anti_landmarks: true }).unwrap();
        let mut buf = Vec::new();
        t.write_binary(&mut buf).unwrap();
        let back = LandmarkTable::read_binary(buf.as_slice()).unwrap();
        assert_eq!(back, t);
        assert!(LandmarkTable::read_binary(&b"garbage!"[..]).is_err());
    }
}
