//! Pairwise CNF encoding of the packing problem, DIMACS interchange, and a
//! small DPLL solver with blocking-clause model enumeration.
//!
//! Variable `v` stands for placement `v - 1` of the catalog, i.e. variables
//! are numbered by (piece, orientation, anchor).

use std::fmt::Write as _;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{BudgetExceeded, Error, Result};
use crate::geometry::NUM_CELLS;
use crate::piece::PieceId;
use crate::placement::{Catalog, Placement, PlacementId};
use crate::state::{is_valid_solution, PuzzleState};

pub const DIMACS_FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CnfFormula {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i32>>,
}

impl CnfFormula {
    pub fn new(num_vars: usize) -> CnfFormula {
        CnfFormula { num_vars, clauses: Vec::new() }
    }

    pub fn add(&mut self, clause: Vec<i32>) {
        self.clauses.push(clause);
    }

    /// True when every clause has a literal made true by `model`.
    pub fn satisfied_by(&self, model: &Model) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|&l| model.literal(l)))
    }
}

/// Clause totals by family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClauseCounts {
    pub piece_at_least_one: u64,
    pub piece_at_most_one: u64,
    pub cell_at_least_one: u64,
    pub cell_at_most_one: u64,
}

impl ClauseCounts {
    pub fn total(&self) -> u64 {
        self.piece_at_least_one + self.piece_at_most_one + self.cell_at_least_one + self.cell_at_most_one
    }
}

fn pairs(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

/// Closed-form clause counts from the sizes of the per-piece and per-cell placement sets.
pub fn expected_clause_counts(catalog: &Catalog) -> ClauseCounts {
    let pieces = catalog.pieces();
    let mut cell_sizes = [0u64; NUM_CELLS];
    for p in catalog.placements() {
        for c in p.cells.iter() {
            cell_sizes[c.index()] += 1;
        }
    }
    ClauseCounts {
        piece_at_least_one: pieces.len() as u64,
        piece_at_most_one: pieces.iter().map(|p| pairs(catalog.piece_range(p.id).len() as u64)).sum(),
        cell_at_least_one: NUM_CELLS as u64,
        cell_at_most_one: cell_sizes.iter().map(|&n| pairs(n)).sum(),
    }
}

fn var(id: usize) -> i32 {
    id as i32 + 1
}

fn at_most_one(f: &mut CnfFormula, vars: &[i32]) {
    for (i, &a) in vars.iter().enumerate() {
        for &b in &vars[i + 1..] {
            f.add(vec![-a, -b]);
        }
    }
}

/// For each piece: one at-least-one clause and pairwise at-most-one clauses
/// over its placements; the same for each cell over the placements covering it.
pub fn encode_with(catalog: &Catalog) -> CnfFormula {
    let mut f = CnfFormula::new(catalog.len());
    for piece in catalog.pieces() {
        let vars: Vec<i32> = catalog.piece_range(piece.id).map(var).collect();
        f.add(vars.clone());
        at_most_one(&mut f, &vars);
    }
    for cell in 0..NUM_CELLS {
        let vars: Vec<i32> =
            catalog.covering(crate::geometry::Cell::from_index(cell)).iter().map(|&id| var(id as usize)).collect();
        f.add(vars.clone());
        at_most_one(&mut f, &vars);
    }
    f
}

pub fn encode() -> CnfFormula {
    encode_with(Catalog::soma())
}

/// `P_xyzl`: 1-indexed anchor coordinates followed by the piece id.
pub fn variable_name(p: &Placement) -> String {
    let [x, y, z] = p.anchor.one_indexed();
    format!("P_{x}{y}{z}{}", p.piece)
}

/// DIMACS text with comment lines naming every variable. Byte-stable.
pub fn emit_dimacs(formula: &CnfFormula, catalog: &Catalog) -> String {
    let mut s = String::new();
    writeln!(s, "c soma packing cnf, format {DIMACS_FORMAT_VERSION}").unwrap();
    writeln!(s, "c variables are P_xyzl: anchor (x,y,z) 1-indexed, piece l, orientation o").unwrap();
    for (i, p) in catalog.placements().iter().enumerate().take(formula.num_vars) {
        writeln!(s, "c var {} {} o{}", var(i), variable_name(p), p.orientation).unwrap();
    }
    writeln!(s, "p cnf {} {}", formula.num_vars, formula.clauses.len()).unwrap();
    for c in &formula.clauses {
        for l in c {
            write!(s, "{l} ").unwrap();
        }
        s.push_str("0\n");
    }
    s
}

pub fn write_dimacs<W: Write>(mut w: W, formula: &CnfFormula, catalog: &Catalog) -> Result<()> {
    w.write_all(emit_dimacs(formula, catalog).as_bytes())?;
    Ok(())
}

pub fn parse_dimacs(text: &str) -> Result<CnfFormula> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("p ") {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            if parts.len() != 3 || parts[0] != "cnf" {
                return Err(Error::parse(i + 1, "malformed header"));
            }
            let n = parts[1].parse().map_err(|_| Error::parse(i + 1, "bad variable count"))?;
            let m = parts[2].parse().map_err(|_| Error::parse(i + 1, "bad clause count"))?;
            header = Some((n, m));
            continue;
        }
        let (n, _) = header.ok_or_else(|| Error::parse(i + 1, "clause before header"))?;
        for tok in line.split_whitespace() {
            let l: i32 = tok.parse().map_err(|_| Error::parse(i + 1, format!("bad literal {tok:?}")))?;
            if l == 0 {
                clauses.push(std::mem::take(&mut current));
            } else if l.unsigned_abs() as usize > n {
                return Err(Error::parse(i + 1, format!("literal {l} out of range")));
            } else {
                current.push(l);
            }
        }
    }
    let (num_vars, m) = header.ok_or_else(|| Error::parse(0, "missing header"))?;
    if !current.is_empty() {
        return Err(Error::parse(0, "unterminated clause"));
    }
    if clauses.len() != m {
        return Err(Error::parse(0, format!("header promises {m} clauses, found {}", clauses.len())));
    }
    Ok(CnfFormula { num_vars, clauses })
}

/// Truth assignment; `values[v - 1]` is variable `v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Model {
    pub values: Vec<bool>,
}

impl Model {
    pub fn literal(&self, l: i32) -> bool {
        let v = self.values[l.unsigned_abs() as usize - 1];
        if l > 0 {
            v
        } else {
            !v
        }
    }

    pub fn true_vars(&self) -> Vec<i32> {
        self.values.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| var(i)).collect()
    }

    /// The model selecting exactly the placements of `state`.
    pub fn of_state(state: &PuzzleState, catalog: &Catalog) -> Result<Model> {
        let mut values = vec![false; catalog.len()];
        for p in state.placements() {
            let id = catalog
                .find(p.piece, p.cells)
                .ok_or_else(|| Error::InvalidArgument("placement not in catalog".into()))?;
            values[id as usize] = true;
        }
        Ok(Model { values })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SatResult {
    Sat(Model),
    Unsat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BlockingMode {
    /// Negate only the variables set true. Enough when every model sets the
    /// same number of variables true, as exactly-one encodings do.
    TrueLiterals,
    /// Negate the whole assignment.
    FullAssignment,
}

type Lit = u32;

fn lit(l: i32) -> Lit {
    let v = l.unsigned_abs() - 1;
    2 * v + (l < 0) as u32
}

fn neg(l: Lit) -> Lit {
    l ^ 1
}

/// DPLL with unit propagation over two watched literals, chronological
/// backtracking and a static most-occurrences branching order (true first).
/// No clause learning.
pub struct Dpll {
    num_vars: usize,
    clauses: Vec<Vec<Lit>>,
    /// Binary clauses as implications: `bin[l]` lists literals forced when `l` becomes false.
    bin: Vec<Vec<Lit>>,
    watches: Vec<Vec<u32>>,
    /// `forbidden[l]`: a unit clause demands `l` be false.
    forbidden: Vec<bool>,
    /// 0 unassigned, 1 true, -1 false.
    value: Vec<i8>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    flipped: Vec<bool>,
    qhead: usize,
    order: Vec<u32>,
    inconsistent: bool,
    pending: Option<Vec<Lit>>,
    pub decisions: u64,
    pub propagations: u64,
}

impl Dpll {
    pub fn new(formula: &CnfFormula) -> Dpll {
        let n = formula.num_vars;
        let mut occurrences = vec![0u64; n];
        let mut s = Dpll {
            num_vars: n,
            clauses: Vec::new(),
            bin: vec![Vec::new(); 2 * n],
            watches: vec![Vec::new(); 2 * n],
            forbidden: vec![false; 2 * n],
            value: vec![0; n],
            trail: Vec::new(),
            trail_lim: Vec::new(),
            flipped: Vec::new(),
            qhead: 0,
            order: Vec::new(),
            inconsistent: false,
            pending: None,
            decisions: 0,
            propagations: 0,
        };
        for c in &formula.clauses {
            for &l in c {
                occurrences[l.unsigned_abs() as usize - 1] += 1;
            }
            s.add_clause(c.iter().map(|&l| lit(l)).collect());
        }
        let mut order: Vec<u32> = (0..n as u32).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(occurrences[v as usize]), v));
        s.order = order;
        s
    }

    fn lit_value(&self, l: Lit) -> i8 {
        let v = self.value[(l / 2) as usize];
        if l & 1 == 0 {
            v
        } else {
            -v
        }
    }

    fn add_clause(&mut self, mut c: Vec<Lit>) {
        c.sort_unstable();
        c.dedup();
        if c.windows(2).any(|w| w[0] == neg(w[1]) && w[0] / 2 == w[1] / 2) {
            return;
        }
        match c.len() {
            0 => self.inconsistent = true,
            1 => self.forbidden[neg(c[0]) as usize] = true,
            2 => {
                self.bin[neg(c[0]) as usize].push(c[1]);
                self.bin[neg(c[1]) as usize].push(c[0]);
            }
            _ => {
                let idx = self.clauses.len() as u32;
                self.watches[neg(c[0]) as usize].push(idx);
                self.watches[neg(c[1]) as usize].push(idx);
                self.clauses.push(c);
            }
        }
    }

    fn level(&self) -> usize {
        self.trail_lim.len()
    }

    /// Returns false on conflict.
    fn assign(&mut self, l: Lit) -> bool {
        match self.lit_value(l) {
            1 => true,
            -1 => false,
            _ => {
                if self.forbidden[l as usize] {
                    return false;
                }
                self.value[(l / 2) as usize] = if l & 1 == 0 { 1 } else { -1 };
                self.trail.push(l);
                true
            }
        }
    }

    /// Unit propagation; false on conflict.
    fn propagate(&mut self) -> bool {
        while self.qhead < self.trail.len() {
            let t = self.trail[self.qhead];
            self.qhead += 1;
            self.propagations += 1;
            // every clause containing neg(t) is watched under key t
            for i in 0..self.bin[t as usize].len() {
                let other = self.bin[t as usize][i];
                if !self.assign(other) {
                    return false;
                }
            }
            let false_lit = neg(t);
            let mut ws = std::mem::take(&mut self.watches[t as usize]);
            let mut keep = 0;
            let mut ok = true;
            let mut i = 0;
            while i < ws.len() {
                let ci = ws[i] as usize;
                i += 1;
                if !ok {
                    ws[keep] = ci as u32;
                    keep += 1;
                    continue;
                }
                let c = &mut self.clauses[ci];
                if c[0] == false_lit {
                    c.swap(0, 1);
                }
                let first = c[0];
                if self.lit_value(first) == 1 {
                    ws[keep] = ci as u32;
                    keep += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..self.clauses[ci].len() {
                    let cand = self.clauses[ci][k];
                    if self.lit_value(cand) != -1 {
                        self.clauses[ci].swap(1, k);
                        self.watches[neg(cand) as usize].push(ci as u32);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                ws[keep] = ci as u32;
                keep += 1;
                if !self.assign(first) {
                    ok = false;
                }
            }
            ws.truncate(keep);
            self.watches[t as usize] = ws;
            if !ok {
                return false;
            }
        }
        true
    }

    fn undo_to(&mut self, level: usize) {
        let start = self.trail_lim[level];
        for &l in &self.trail[start..] {
            self.value[(l / 2) as usize] = 0;
        }
        self.trail.truncate(start);
        self.trail_lim.truncate(level);
        self.flipped.truncate(level);
        self.qhead = self.qhead.min(start);
    }

    /// Flips the deepest untried decision. False when none is left.
    fn backtrack(&mut self) -> bool {
        while let Some(&done) = self.flipped.last() {
            let level = self.level() - 1;
            let decision = self.trail[self.trail_lim[level]];
            self.undo_to(level);
            if done {
                continue;
            }
            self.trail_lim.push(self.trail.len());
            self.flipped.push(true);
            if self.assign(neg(decision)) {
                return true;
            }
            // the flip itself is forbidden: this level is exhausted too
            self.trail_lim.pop();
            self.flipped.pop();
        }
        false
    }

    fn falsified(&self, c: &[Lit]) -> bool {
        c.iter().all(|&l| self.lit_value(l) == -1)
    }

    /// Finds the next model, continuing after the previous one.
    pub fn solve(&mut self) -> SatResult {
        if self.inconsistent {
            return SatResult::Unsat;
        }
        if let Some(c) = self.pending.take() {
            while self.falsified(&c) {
                if !self.backtrack() {
                    self.inconsistent = true;
                    return SatResult::Unsat;
                }
            }
        }
        loop {
            if !self.propagate() {
                if !self.backtrack() {
                    self.inconsistent = true;
                    return SatResult::Unsat;
                }
                continue;
            }
            let next = self.order.iter().copied().find(|&v| self.value[v as usize] == 0);
            match next {
                Some(v) => {
                    self.decisions += 1;
                    self.trail_lim.push(self.trail.len());
                    if self.assign(2 * v) {
                        self.flipped.push(false);
                        continue;
                    }
                    // the positive literal is forbidden, so the level starts flipped
                    self.flipped.push(true);
                    if !self.assign(neg(2 * v)) {
                        self.trail_lim.pop();
                        self.flipped.pop();
                        if !self.backtrack() {
                            self.inconsistent = true;
                            return SatResult::Unsat;
                        }
                    }
                }
                None => {
                    let model = Model { values: self.value.iter().map(|&v| v == 1).collect() };
                    return SatResult::Sat(model);
                }
            }
        }
    }

    /// Adds a clause excluding `model`; the next `solve` continues the search.
    pub fn block(&mut self, model: &Model, mode: BlockingMode) {
        let clause: Vec<Lit> = model
            .values
            .iter()
            .enumerate()
            .filter(|(_, &b)| mode == BlockingMode::FullAssignment || b)
            .map(|(i, &b)| if b { lit(-var(i)) } else { lit(var(i)) })
            .collect();
        if clause.is_empty() {
            self.inconsistent = true;
            return;
        }
        // watch the two most recently assigned literals so backtracking frees them first
        let pos: std::collections::HashMap<u32, usize> =
            self.trail.iter().enumerate().map(|(i, &l)| (l / 2, i)).collect();
        let mut sorted = clause.clone();
        sorted.sort_by_key(|l| std::cmp::Reverse(pos.get(&(l / 2)).copied().unwrap_or(usize::MAX)));
        self.add_clause_unsorted(sorted);
        self.pending = Some(clause);
    }

    fn add_clause_unsorted(&mut self, c: Vec<Lit>) {
        match c.len() {
            1 => self.forbidden[neg(c[0]) as usize] = true,
            2 => {
                self.bin[neg(c[0]) as usize].push(c[1]);
                self.bin[neg(c[1]) as usize].push(c[0]);
            }
            _ => {
                let idx = self.clauses.len() as u32;
                self.watches[neg(c[0]) as usize].push(idx);
                self.watches[neg(c[1]) as usize].push(idx);
                self.clauses.push(c);
            }
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }
}

/// One satisfying assignment, checked clause by clause, or `Unsat`.
pub fn dpll_solve(formula: &CnfFormula) -> SatResult {
    match Dpll::new(formula).solve() {
        SatResult::Sat(m) => {
            assert!(formula.satisfied_by(&m), "solver returned a non-model");
            SatResult::Sat(m)
        }
        SatResult::Unsat => SatResult::Unsat,
    }
}

/// All models, each blocked after it is found. Stops with the models found
/// so far once `cap` is exceeded.
pub fn enumerate_models(
    formula: &CnfFormula,
    mode: BlockingMode,
    cap: Option<usize>,
) -> std::result::Result<Vec<Model>, BudgetExceeded<Vec<Model>>> {
    let mut solver = Dpll::new(formula);
    let mut models = Vec::new();
    while let SatResult::Sat(m) = solver.solve() {
        debug_assert!(formula.satisfied_by(&m));
        if cap.is_some_and(|c| models.len() >= c) {
            return Err(BudgetExceeded { budget: cap.unwrap_or(0) as u64, partial: models });
        }
        solver.block(&m, mode);
        models.push(m);
    }
    Ok(models)
}

/// The complete assembly selected by a model.
pub fn decode(model: &Model, catalog: &Catalog) -> Result<PuzzleState> {
    if model.values.len() != catalog.len() {
        return Err(Error::InvalidModel(format!("expected {} variables, got {}", catalog.len(), model.values.len())));
    }
    let mut chosen: Vec<&Placement> = model.true_vars().iter().map(|&v| catalog.placement((v - 1) as PlacementId)).collect();
    chosen.sort_by_key(|p| p.piece);
    if chosen.len() != catalog.pieces().len() {
        return Err(Error::InvalidModel(format!("{} true variables, expected {}", chosen.len(), catalog.pieces().len())));
    }
    let state = PuzzleState::from_placements(chosen.iter().copied())
        .map_err(|e| Error::InvalidModel(format!("placements conflict: {e}")))?;
    if !is_valid_solution(&state) {
        return Err(Error::InvalidModel("placements do not fill the box".into()));
    }
    Ok(state)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlacementRecord {
    pub variable: i32,
    pub name: String,
    pub piece: PieceId,
    pub orientation: usize,
    /// 1-indexed anchor.
    pub anchor: [usize; 3],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelRecord {
    pub true_variables: Vec<i32>,
    pub placements: Vec<PlacementRecord>,
    pub canonical: String,
}

pub fn model_record(model: &Model, catalog: &Catalog) -> Result<ModelRecord> {
    let state = decode(model, catalog)?;
    let placements = model
        .true_vars()
        .into_iter()
        .map(|v| {
            let p = catalog.placement((v - 1) as PlacementId);
            PlacementRecord {
                variable: v,
                name: variable_name(p),
                piece: p.piece,
                orientation: p.orientation as usize,
                anchor: p.anchor.one_indexed(),
            }
        })
        .collect();
    Ok(ModelRecord {
        true_variables: model.true_vars(),
        placements,
        canonical: crate::canon::canonicalize_with(&state, catalog).to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(n: usize, clauses: &[&[i32]]) -> CnfFormula {
        CnfFormula { num_vars: n, clauses: clauses.iter().map(|c| c.to_vec()).collect() }
    }

    #[test]
    fn toy_unsat() {
        assert_eq!(dpll_solve(&f(1, &[&[1], &[-1]])), SatResult::Unsat);
        assert_eq!(dpll_solve(&f(1, &[&[]])), SatResult::Unsat);
    }

    #[test]
    fn toy_sat_and_enumeration() {
        let g = f(3, &[&[1, 2, 3], &[-1, -2], &[-1, -3], &[-2, -3]]);
        let models = enumerate_models(&g, BlockingMode::TrueLiterals, None).unwrap();
        assert_eq!(models.len(), 3);
        let all = enumerate_models(&f(2, &[&[1, 2]]), BlockingMode::FullAssignment, None).unwrap();
        assert_eq!(all.len(), 3);
        let capped = enumerate_models(&g, BlockingMode::TrueLiterals, Some(1)).unwrap_err();
        assert_eq!(capped.partial.len(), 1);
    }

    #[test]
    fn pigeonhole_three_into_two_is_unsat() {
        // p_{i,h}: pigeon i in hole h, var = 2i + h + 1
        let v = |i: i32, h: i32| 2 * i + h + 1;
        let mut g = CnfFormula::new(6);
        for i in 0..3 {
            g.add(vec![v(i, 0), v(i, 1)]);
        }
        for h in 0..2 {
            for i in 0..3 {
                for j in i + 1..3 {
                    g.add(vec![-v(i, h), -v(j, h)]);
                }
            }
        }
        assert_eq!(dpll_solve(&g), SatResult::Unsat);
    }

    #[test]
    fn dimacs_round_trip_and_errors() {
        let g = f(3, &[&[1, -2], &[3], &[-1, 2, -3]]);
        let text = emit_dimacs(&g, Catalog::soma());
        assert_eq!(parse_dimacs(&text).unwrap(), g);
        assert!(parse_dimacs("1 2 0\n").is_err());
        assert!(parse_dimacs("p cnf 1 1\n2 0\n").is_err());
        assert!(parse_dimacs("p cnf 2 2\n1 2 0\n").is_err());
    }

    #[test]
    fn decode_rejects_short_model() {
        let cat = Catalog::soma();
        let mut values = vec![false; cat.len()];
        for id in PieceId::all().take(6) {
            values[cat.piece_range(id).start] = true;
        }
        assert!(matches!(decode(&Model { values }, cat), Err(Error::InvalidModel(_))));
    }

    #[test]
    fn full_enumeration_matches_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..300 {
            let n = rng.gen_range(1..=5usize);
            let clauses: Vec<Vec<i32>> = (0..rng.gen_range(0..8))
                .map(|_| {
                    (0..rng.gen_range(1..=3))
                        .map(|_| {
                            let v = rng.gen_range(1..=n as i32);
                            if rng.gen() { v } else { -v }
                        })
                        .collect()
                })
                .collect();
            let g = CnfFormula { num_vars: n, clauses };
            let expected = (0..1u32 << n)
                .filter(|bits| g.satisfied_by(&Model { values: (0..n).map(|i| bits >> i & 1 == 1).collect() }))
                .count();
            let got = enumerate_models(&g, BlockingMode::FullAssignment, None).unwrap().len();
            assert_eq!(got, expected, "{:?}", g.clauses);
        }
    }
}
