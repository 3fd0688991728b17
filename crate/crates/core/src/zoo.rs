//! Comparison puzzles behind a common search-space interface: the sliding
//! 8-puzzle, the 3×3 magic square, the Slothouber–Graatsma cube, and the Soma
//! cube itself.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canon::{canonical_partition_key, CanonicalKey};
use crate::error::{Error, Result};
use crate::geometry::{Cell, CellSet, NUM_CELLS};
use crate::metrics::{walk_seed, write_histogram_csv};
use crate::placement::Catalog;
use crate::search::{has_small_void, successors_in, SearchRng, VariableOrdering};
use crate::state::PuzzleState;

/// What a state's depth counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DepthNotion {
    MovesMade,
    PiecesPlaced,
}

pub trait PuzzleSpace: Sync {
    type State: Clone + Send + Sync;

    fn name(&self) -> &str;
    fn initial_states(&self) -> Vec<Self::State>;
    /// Deterministic: the same state always yields the same list in the same order.
    fn successors(&self, state: &Self::State) -> Vec<Self::State>;
    fn is_goal(&self, state: &Self::State) -> bool;
    fn depth(&self, state: &Self::State) -> usize;
    fn depth_notion(&self) -> DepthNotion;

    fn non_backtracking(&self) -> bool {
        false
    }

    /// Worst-case minimum solution length, when known.
    fn depth_measure(&self) -> Option<usize> {
        None
    }
}

/// How a profile visits states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ProfileMethod {
    /// Every state of the search tree down to `max_depth`.
    Exhaustive { max_depth: usize },
    /// Uniform random walks of `length` moves from a uniformly chosen initial state.
    RandomWalk { walks: usize, length: usize, seed: u64 },
}

/// Per-depth branching of one puzzle. Goal states are counted in
/// `goal_states` and left out of the histograms and means.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZooProfile {
    pub puzzle: String,
    pub method: ProfileMethod,
    pub depth_notion: DepthNotion,
    pub non_backtracking: bool,
    /// `histograms[d][k]`: non-goal depth-d states with k successors.
    pub histograms: Vec<BTreeMap<u32, u64>>,
    pub goal_states: Vec<u64>,
    /// Mean out-degree per depth, dead ends included.
    pub per_depth_mean: Vec<f64>,
    /// Mean out-degree per depth over states with at least one successor.
    pub per_depth_nonterminal_mean: Vec<f64>,
    pub depth_measure: Option<usize>,
}

#[derive(Default)]
struct Tally {
    histograms: Vec<BTreeMap<u32, u64>>,
    goals: Vec<u64>,
}

impl Tally {
    fn grow(&mut self, depth: usize) {
        if self.histograms.len() <= depth {
            self.histograms.resize(depth + 1, BTreeMap::new());
            self.goals.resize(depth + 1, 0);
        }
    }

    fn record(&mut self, depth: usize, out_degree: usize, goal: bool) {
        self.grow(depth);
        if goal {
            self.goals[depth] += 1;
        } else {
            *self.histograms[depth].entry(out_degree as u32).or_insert(0) += 1;
        }
    }

    fn merge(&mut self, other: Tally) {
        for (d, h) in other.histograms.into_iter().enumerate() {
            self.grow(d);
            for (k, n) in h {
                *self.histograms[d].entry(k).or_insert(0) += n;
            }
        }
        for (d, g) in other.goals.into_iter().enumerate() {
            self.grow(d);
            self.goals[d] += g;
        }
    }
}

fn mean_of(h: &BTreeMap<u32, u64>, skip_zero: bool) -> f64 {
    let (mut n, mut s) = (0u64, 0u64);
    for (&k, &c) in h {
        if skip_zero && k == 0 {
            continue;
        }
        n += c;
        s += k as u64 * c;
    }
    if n == 0 {
        0.0
    } else {
        s as f64 / n as f64
    }
}

pub fn zoo_profile<S: PuzzleSpace>(space: &S, method: ProfileMethod) -> Result<ZooProfile> {
    let initial = space.initial_states();
    if initial.is_empty() {
        return Err(Error::InvalidArgument(format!("{} has no initial states", space.name())));
    }
    let tally = match method {
        ProfileMethod::Exhaustive { max_depth } => {
            let mut t = Tally::default();
            for s in &initial {
                exhaustive(space, s, max_depth, &mut t);
            }
            t
        }
        ProfileMethod::RandomWalk { walks, length, seed } => {
            if walks == 0 {
                return Err(Error::InvalidArgument("random-walk profile needs at least one walk".into()));
            }
            let parts: Vec<Tally> = (0..walks)
                .into_par_iter()
                .map(|i| {
                    let mut rng = SearchRng::new(walk_seed(seed, 0, i));
                    let start = &initial[rng.below(initial.len())];
                    let mut t = Tally::default();
                    walk(space, start, length, &mut rng, |s, k| t.record(space.depth(s), k, space.is_goal(s)));
                    t
                })
                .collect();
            let mut t = Tally::default();
            for p in parts {
                t.merge(p);
            }
            t
        }
    };
    let mut tally = tally;
    while tally.histograms.last().is_some_and(|h| h.is_empty()) {
        tally.histograms.pop();
    }
    Ok(ZooProfile {
        puzzle: space.name().to_string(),
        method,
        depth_notion: space.depth_notion(),
        non_backtracking: space.non_backtracking(),
        per_depth_mean: tally.histograms.iter().map(|h| mean_of(h, false)).collect(),
        per_depth_nonterminal_mean: tally.histograms.iter().map(|h| mean_of(h, true)).collect(),
        histograms: tally.histograms,
        goal_states: tally.goals,
        depth_measure: space.depth_measure(),
    })
}

fn exhaustive<S: PuzzleSpace>(space: &S, state: &S::State, max_depth: usize, t: &mut Tally) {
    let depth = space.depth(state);
    if depth >= max_depth {
        if space.is_goal(state) {
            t.record(depth, 0, true);
        }
        return;
    }
    let next = space.successors(state);
    t.record(depth, next.len(), space.is_goal(state));
    for s in &next {
        exhaustive(space, s, max_depth, t);
    }
}

/// Random walk of at most `length` moves. `visit` sees every state before
/// leaving it, together with its out-degree; the walk ends early at a dead end.
fn walk<S: PuzzleSpace>(
    space: &S,
    start: &S::State,
    length: usize,
    rng: &mut SearchRng,
    mut visit: impl FnMut(&S::State, usize),
) -> S::State {
    let mut state = start.clone();
    for _ in 0..length {
        let next = space.successors(&state);
        visit(&state, next.len());
        if next.is_empty() {
            break;
        }
        state = next[rng.below(next.len())].clone();
    }
    state
}

/// States along one random walk, start included.
pub fn random_walk<S: PuzzleSpace>(space: &S, start: &S::State, length: usize, seed: u64) -> Vec<S::State> {
    let mut rng = SearchRng::new(seed);
    let mut states = Vec::with_capacity(length + 1);
    let last = walk(space, start, length, &mut rng, |s, _| states.push(s.clone()));
    if states.len() == length {
        states.push(last);
    }
    states
}

/// Writes every profile's histograms with a `puzzle` column.
pub fn write_zoo_csv<W: std::io::Write>(mut w: W, profiles: &[ZooProfile]) -> Result<()> {
    let mut first = true;
    for p in profiles {
        let mut buf = Vec::new();
        let rows = p.histograms.iter().enumerate().flat_map(|(d, h)| h.iter().map(move |(&k, &c)| (d, k, c as f64)));
        write_histogram_csv(&mut buf, Some(&p.puzzle), rows)?;
        let text = String::from_utf8(buf).expect("csv output is utf-8");
        let body = if first { text.as_str() } else { text.split_once('\n').map_or("", |(_, rest)| rest) };
        w.write_all(body.as_bytes())?;
        first = false;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// 8-puzzle

/// Board position, blank as 0.
pub type Board = [u8; 9];

pub const EIGHT_GOAL: Board = [1, 2, 3, 4, 5, 6, 7, 8, 0];
pub const EIGHT_REVERSED: Board = [8, 7, 6, 5, 4, 3, 2, 1, 0];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EightState {
    pub board: Board,
    pub blank: u8,
    /// Blank position before the last move.
    pub prev_blank: Option<u8>,
    pub moves: u32,
}

impl EightState {
    pub fn new(board: Board) -> Result<EightState> {
        let mut seen = [false; 9];
        for &t in &board {
            if t > 8 || seen[t as usize] {
                return Err(Error::InvalidArgument(format!("not an 8-puzzle board: {board:?}")));
            }
            seen[t as usize] = true;
        }
        let blank = board.iter().position(|&t| t == 0).expect("checked") as u8;
        Ok(EightState { board, blank, prev_blank: None, moves: 0 })
    }
}

/// Kind of blank position on the flat board.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Square {
    Corner,
    Side,
    Center,
}

pub fn square_kind(pos: u8) -> Square {
    match pos {
        4 => Square::Center,
        1 | 3 | 5 | 7 => Square::Side,
        _ => Square::Corner,
    }
}

/// Result of a breadth-first sweep from the goal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diameter {
    pub reachable: usize,
    pub eccentricity: usize,
    pub farthest: Vec<Board>,
    /// Number of boards at each distance from the goal.
    pub layer_sizes: Vec<usize>,
}

#[derive(Debug)]
pub struct EightPuzzle {
    start: EightState,
    non_backtracking: bool,
    torus: bool,
    diameter: OnceLock<Diameter>,
}

impl EightPuzzle {
    pub fn new(start: Board, non_backtracking: bool) -> Result<EightPuzzle> {
        Ok(EightPuzzle { start: EightState::new(start)?, non_backtracking, torus: false, diameter: OnceLock::new() })
    }

    /// Board whose rows and columns wrap around: every blank position has four neighbours.
    pub fn torus(start: Board, non_backtracking: bool) -> Result<EightPuzzle> {
        Ok(EightPuzzle { torus: true, ..EightPuzzle::new(start, non_backtracking)? })
    }

    /// Tile order reversed, blank in the corner.
    pub fn standard(non_backtracking: bool) -> EightPuzzle {
        EightPuzzle::new(EIGHT_REVERSED, non_backtracking).expect("valid board")
    }

    pub fn start(&self) -> EightState {
        self.start
    }

    /// Positions the blank can move to, in increasing order.
    pub fn neighbors(&self, pos: u8) -> Vec<u8> {
        let (r, c) = ((pos / 3) as i32, (pos % 3) as i32);
        let mut out: Vec<u8> = [(-1, 0), (1, 0), (0, -1), (0, 1)]
            .iter()
            .filter_map(|&(dr, dc)| {
                let (nr, nc) = (r + dr, c + dc);
                if self.torus {
                    Some((nr.rem_euclid(3) * 3 + nc.rem_euclid(3)) as u8)
                } else if (0..3).contains(&nr) && (0..3).contains(&nc) {
                    Some((nr * 3 + nc) as u8)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    fn slide(board: &Board, from: u8, to: u8) -> Board {
        let mut b = *board;
        b.swap(from as usize, to as usize);
        b
    }

    /// Breadth-first search over boards from the goal.
    pub fn diameter(&self) -> &Diameter {
        self.diameter.get_or_init(|| {
            let mut dist: HashMap<Board, u8> = HashMap::new();
            let mut queue = VecDeque::new();
            dist.insert(EIGHT_GOAL, 0);
            queue.push_back(EIGHT_GOAL);
            let mut layer_sizes = vec![1usize];
            while let Some(b) = queue.pop_front() {
                let d = dist[&b];
                let blank = b.iter().position(|&t| t == 0).expect("blank") as u8;
                for n in self.neighbors(blank) {
                    let nb = Self::slide(&b, blank, n);
                    if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(nb) {
                        e.insert(d + 1);
                        if layer_sizes.len() <= d as usize + 1 {
                            layer_sizes.push(0);
                        }
                        layer_sizes[d as usize + 1] += 1;
                        queue.push_back(nb);
                    }
                }
            }
            let eccentricity = layer_sizes.len() - 1;
            let mut farthest: Vec<Board> =
                dist.iter().filter(|(_, &d)| d as usize == eccentricity).map(|(b, _)| *b).collect();
            farthest.sort_unstable();
            Diameter { reachable: dist.len(), eccentricity, farthest, layer_sizes }
        })
    }
}

impl PuzzleSpace for EightPuzzle {
    type State = EightState;

    fn name(&self) -> &str {
        match (self.torus, self.non_backtracking) {
            (false, false) => "8-puzzle",
            (false, true) => "8-puzzle-nb",
            (true, false) => "8-puzzle-torus",
            (true, true) => "8-puzzle-torus-nb",
        }
    }

    fn initial_states(&self) -> Vec<EightState> {
        vec![self.start]
    }

    fn successors(&self, s: &EightState) -> Vec<EightState> {
        self.neighbors(s.blank)
            .into_iter()
            .filter(|&n| !(self.non_backtracking && s.prev_blank == Some(n)))
            .map(|n| EightState {
                board: Self::slide(&s.board, s.blank, n),
                blank: n,
                prev_blank: Some(s.blank),
                moves: s.moves + 1,
            })
            .collect()
    }

    fn is_goal(&self, s: &EightState) -> bool {
        s.board == EIGHT_GOAL
    }

    fn depth(&self, s: &EightState) -> usize {
        s.moves as usize
    }

    fn depth_notion(&self) -> DepthNotion {
        DepthNotion::MovesMade
    }

    fn non_backtracking(&self) -> bool {
        self.non_backtracking
    }

    fn depth_measure(&self) -> Option<usize> {
        Some(self.diameter().eccentricity)
    }
}

// ---------------------------------------------------------------------------
// Magic square

/// Fill order: edge cells, then corners, then the centre.
pub const MAGIC_ORDER: [usize; 9] = [1, 3, 5, 7, 0, 2, 6, 8, 4];

const MAGIC_LINES: [[usize; 3]; 8] =
    [[0, 1, 2], [3, 4, 5], [6, 7, 8], [0, 3, 6], [1, 4, 7], [2, 5, 8], [0, 4, 8], [2, 4, 6]];

pub const MAGIC_SUM: u8 = 15;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MagicState {
    /// Digit per cell, 0 for empty.
    pub cells: [u8; 9],
    pub filled: u8,
}

/// Digits 1..9 placed one cell at a time in [`MAGIC_ORDER`]; a placement is
/// legal when every line it completes sums to [`MAGIC_SUM`].
#[derive(Clone, Copy, Debug, Default)]
pub struct MagicSquare;

impl MagicSquare {
    pub fn is_magic(cells: &[u8; 9]) -> bool {
        let mut seen = 0u16;
        for &d in cells {
            seen |= 1 << d;
        }
        seen == 0b11_1111_1110 && MAGIC_LINES.iter().all(|l| l.iter().map(|&i| cells[i]).sum::<u8>() == MAGIC_SUM)
    }
}

impl PuzzleSpace for MagicSquare {
    type State = MagicState;

    fn name(&self) -> &str {
        "magic-square"
    }

    fn initial_states(&self) -> Vec<MagicState> {
        vec![MagicState { cells: [0; 9], filled: 0 }]
    }

    fn successors(&self, s: &MagicState) -> Vec<MagicState> {
        if s.filled as usize == 9 {
            return Vec::new();
        }
        let cell = MAGIC_ORDER[s.filled as usize];
        (1..=9u8)
            .filter(|d| !s.cells.contains(d))
            .filter_map(|d| {
                let mut cells = s.cells;
                cells[cell] = d;
                let legal = MAGIC_LINES.iter().filter(|l| l.contains(&cell)).all(|l| {
                    let v = l.map(|i| cells[i]);
                    v.contains(&0) || v.iter().sum::<u8>() == MAGIC_SUM
                });
                legal.then_some(MagicState { cells, filled: s.filled + 1 })
            })
            .collect()
    }

    fn is_goal(&self, s: &MagicState) -> bool {
        s.filled == 9
    }

    fn depth(&self, s: &MagicState) -> usize {
        s.filled as usize
    }

    fn depth_notion(&self) -> DepthNotion {
        DepthNotion::PiecesPlaced
    }

    fn depth_measure(&self) -> Option<usize> {
        Some(9)
    }
}

/// The eight symmetries of the square as cell permutations.
pub fn square_symmetries() -> [[usize; 9]; 8] {
    let rot = |p: [usize; 9]| -> [usize; 9] {
        let mut out = [0; 9];
        for (i, o) in out.iter_mut().enumerate() {
            let (r, c) = (i / 3, i % 3);
            *o = p[(2 - c) * 3 + r];
        }
        out
    };
    let flip = |p: [usize; 9]| -> [usize; 9] {
        let mut out = [0; 9];
        for (i, o) in out.iter_mut().enumerate() {
            *o = p[(i / 3) * 3 + 2 - i % 3];
        }
        out
    };
    let mut out = [[0; 9]; 8];
    let mut p = [0, 1, 2, 3, 4, 5, 6, 7, 8];
    for k in 0..4 {
        out[k] = p;
        out[k + 4] = flip(p);
        p = rot(p);
    }
    out
}

/// Least image of a grid under the square's symmetries.
pub fn canonical_square(cells: &[u8; 9]) -> [u8; 9] {
    square_symmetries().iter().map(|p| p.map(|i| cells[i])).min().expect("eight symmetries")
}

// ---------------------------------------------------------------------------
// Slothouber–Graatsma

pub const SG_BLOCKS: u8 = 6;
pub const SG_UNITS: u8 = 3;
/// Cell label of a unit cube; blocks are labeled 1..=6 in placement order.
pub const SG_UNIT_LABEL: u8 = 7;

/// All placements of a 1×2×2 block in the 3×3×3 box.
pub fn sg_block_placements() -> &'static [CellSet] {
    static BLOCKS: OnceLock<Vec<CellSet>> = OnceLock::new();
    BLOCKS.get_or_init(|| {
        let mut out = BTreeSet::new();
        for dims in [[1, 2, 2], [2, 1, 2], [2, 2, 1]] {
            for x in 0..=3 - dims[0] {
                for y in 0..=3 - dims[1] {
                    for z in 0..=3 - dims[2] {
                        let mut set = CellSet::EMPTY;
                        for dx in 0..dims[0] {
                            for dy in 0..dims[1] {
                                for dz in 0..dims[2] {
                                    set = set.with(Cell::new(x + dx, y + dy, z + dz).expect("inside"));
                                }
                            }
                        }
                        out.insert(set.bits());
                    }
                }
            }
        }
        out.into_iter().map(CellSet::from_bits).collect()
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SgState {
    pub labels: [u8; NUM_CELLS],
    pub occupied: CellSet,
    pub blocks: u8,
    pub units: u8,
}

impl SgState {
    pub fn pieces(&self) -> usize {
        (self.blocks + self.units) as usize
    }

    pub fn canonical_key(&self) -> CanonicalKey {
        canonical_partition_key(&self.labels, 1..=SG_BLOCKS)
    }
}

/// Six 1×2×2 blocks and three unit cubes; each move covers the lowest empty cell.
#[derive(Clone, Copy, Debug, Default)]
pub struct Slothouber;

impl PuzzleSpace for Slothouber {
    type State = SgState;

    fn name(&self) -> &str {
        "slothouber-graatsma"
    }

    fn initial_states(&self) -> Vec<SgState> {
        vec![SgState { labels: [0; NUM_CELLS], occupied: CellSet::EMPTY, blocks: 0, units: 0 }]
    }

    fn successors(&self, s: &SgState) -> Vec<SgState> {
        let Some(cell) = s.occupied.complement().first() else {
            return Vec::new();
        };
        let mut out = Vec::new();
        if s.blocks < SG_BLOCKS {
            for &b in sg_block_placements() {
                if b.contains(cell) && b.is_disjoint(s.occupied) {
                    let mut next = *s;
                    next.blocks += 1;
                    next.occupied = s.occupied.union(b);
                    for c in b.iter() {
                        next.labels[c.index()] = next.blocks;
                    }
                    out.push(next);
                }
            }
        }
        if s.units < SG_UNITS {
            let mut next = *s;
            next.units += 1;
            next.occupied = s.occupied.with(cell);
            next.labels[cell.index()] = SG_UNIT_LABEL;
            out.push(next);
        }
        out
    }

    fn is_goal(&self, s: &SgState) -> bool {
        s.occupied == CellSet::FULL
    }

    fn depth(&self, s: &SgState) -> usize {
        s.pieces()
    }

    fn depth_notion(&self) -> DepthNotion {
        DepthNotion::PiecesPlaced
    }

    fn depth_measure(&self) -> Option<usize> {
        Some((SG_BLOCKS + SG_UNITS) as usize)
    }
}

/// Complete assemblies found by exhaustive search of a space.
pub fn goal_states<S: PuzzleSpace>(space: &S) -> Vec<S::State> {
    fn go<S: PuzzleSpace>(space: &S, s: &S::State, out: &mut Vec<S::State>) {
        if space.is_goal(s) {
            out.push(s.clone());
        }
        for n in space.successors(s) {
            go(space, &n, out);
        }
    }
    let mut out = Vec::new();
    for s in space.initial_states() {
        go(space, &s, &mut out);
    }
    out
}

/// Slothouber–Graatsma solutions: raw count and the set of canonical keys.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SgSolutions {
    pub raw: usize,
    pub canonical: BTreeSet<CanonicalKey>,
}

pub fn sg_solutions() -> SgSolutions {
    let goals = goal_states(&Slothouber);
    SgSolutions { raw: goals.len(), canonical: goals.iter().map(SgState::canonical_key).collect() }
}

/// Brute-force recount: every choice of three unit-cube cells, then every
/// tiling of the remaining 24 cells by blocks, filling the highest empty cell first.
pub fn sg_recount() -> SgSolutions {
    fn tile(occupied: CellSet, labels: &mut [u8; NUM_CELLS], next: u8, out: &mut Vec<[u8; NUM_CELLS]>) {
        let empty = occupied.complement();
        let Some(cell) = empty.iter().last() else {
            out.push(*labels);
            return;
        };
        for &b in sg_block_placements() {
            if b.contains(cell) && b.is_disjoint(occupied) {
                for c in b.iter() {
                    labels[c.index()] = next;
                }
                tile(occupied.union(b), labels, next + 1, out);
                for c in b.iter() {
                    labels[c.index()] = 0;
                }
            }
        }
    }
    let mut tilings = Vec::new();
    for a in 0..NUM_CELLS {
        for b in a + 1..NUM_CELLS {
            for c in b + 1..NUM_CELLS {
                let mut labels = [0u8; NUM_CELLS];
                let mut occupied = CellSet::EMPTY;
                for i in [a, b, c] {
                    labels[i] = SG_UNIT_LABEL;
                    occupied = occupied.with(Cell::from_index(i));
                }
                tile(occupied, &mut labels, 1, &mut tilings);
            }
        }
    }
    SgSolutions {
        raw: tilings.len(),
        canonical: tilings.iter().map(|l| canonical_partition_key(l, 1..=SG_BLOCKS)).collect(),
    }
}

// ---------------------------------------------------------------------------
// Soma through the generic interface

/// The Soma search tree of a deterministic cell ordering.
#[derive(Clone, Copy, Debug)]
pub struct SomaSpace {
    ordering: VariableOrdering,
    pruning: bool,
}

impl SomaSpace {
    pub fn new(ordering: VariableOrdering, pruning: bool) -> Result<SomaSpace> {
        if ordering == VariableOrdering::Randomized {
            return Err(Error::InvalidArgument("the generic Soma space needs a deterministic ordering".into()));
        }
        Ok(SomaSpace { ordering, pruning })
    }
}

impl PuzzleSpace for SomaSpace {
    type State = PuzzleState;

    fn name(&self) -> &str {
        "soma"
    }

    fn initial_states(&self) -> Vec<PuzzleState> {
        vec![PuzzleState::empty()]
    }

    fn successors(&self, s: &PuzzleState) -> Vec<PuzzleState> {
        let mut rng = SearchRng::new(0);
        successors_in(Catalog::soma(), s, self.ordering, &mut rng)
            .iter()
            .map(|p| s.apply(p).expect("successors fit"))
            .filter(|c| !(self.pruning && has_small_void(c.occupancy())))
            .collect()
    }

    fn is_goal(&self, s: &PuzzleState) -> bool {
        s.is_complete()
    }

    fn depth(&self, s: &PuzzleState) -> usize {
        s.depth()
    }

    fn depth_notion(&self) -> DepthNotion {
        DepthNotion::PiecesPlaced
    }

    fn depth_measure(&self) -> Option<usize> {
        Some(crate::state::MAX_DEPTH)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_placement_count() {
        // 3 orientations × 2 × 2 × 3 positions
        assert_eq!(sg_block_placements().len(), 36);
    }

    #[test]
    fn torus_has_four_neighbours() {
        let p = EightPuzzle::torus(EIGHT_GOAL, false).unwrap();
        for pos in 0..9 {
            assert_eq!(p.neighbors(pos).len(), 4);
        }
    }

    #[test]
    fn rejects_bad_board() {
        assert!(EightState::new([1, 1, 2, 3, 4, 5, 6, 7, 0]).is_err());
    }

    #[test]
    fn magic_first_move_is_free() {
        assert_eq!(MagicSquare.successors(&MagicSquare.initial_states()[0]).len(), 9);
    }

    #[test]
    fn square_symmetries_distinct() {
        let all: BTreeSet<[usize; 9]> = square_symmetries().into_iter().collect();
        assert_eq!(all.len(), 8);
    }

    #[test]
    fn lo_shu_is_magic() {
        assert!(MagicSquare::is_magic(&[2, 7, 6, 9, 5, 1, 4, 3, 8]));
        assert!(!MagicSquare::is_magic(&[1, 2, 3, 4, 5, 6, 7, 8, 9]));
    }
}
