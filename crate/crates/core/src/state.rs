//! Partial assemblies.

use arrayvec::ArrayVec;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{CellSet, NUM_CELLS};
use crate::piece::PieceSet;
use crate::placement::Placement;

pub const MAX_DEPTH: usize = 7;

/// A partial assembly: which cells are filled, which pieces are used, and the
/// placements in the order they were made.
///
/// `apply` and `remove_last` return new values, so a caller can keep the
/// previous state around for backtracking.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PuzzleState {
    occupancy: CellSet,
    used: PieceSet,
    placements: ArrayVec<Placement, MAX_DEPTH>,
}

impl PuzzleState {
    pub fn empty() -> PuzzleState {
        PuzzleState::default()
    }

    /// Builds a state by applying `placements` in order.
    pub fn from_placements<'a>(placements: impl IntoIterator<Item = &'a Placement>) -> Result<PuzzleState> {
        placements.into_iter().try_fold(PuzzleState::empty(), |s, p| s.apply(p))
    }

    pub fn occupancy(&self) -> CellSet {
        self.occupancy
    }

    pub fn used_pieces(&self) -> PieceSet {
        self.used
    }

    pub fn placements(&self) -> &[Placement] {
        &self.placements
    }

    pub fn depth(&self) -> usize {
        self.placements.len()
    }

    pub fn is_complete(&self) -> bool {
        self.occupancy == CellSet::FULL
    }

    pub fn apply(&self, p: &Placement) -> Result<PuzzleState> {
        if self.used.contains(p.piece) {
            return Err(Error::PieceReuse(p.piece));
        }
        if let Some(cell) = p.cells.intersection(self.occupancy).first() {
            return Err(Error::Overlap { piece: p.piece, cell });
        }
        if self.placements.is_full() {
            return Err(Error::InvalidArgument("state already holds the maximum number of pieces".into()));
        }
        let mut next = self.clone();
        next.occupancy = self.occupancy.union(p.cells);
        next.used = self.used.with(p.piece);
        next.placements.push(*p);
        Ok(next)
    }

    pub fn remove_last(&self) -> Result<PuzzleState> {
        let mut next = self.clone();
        let p = next.placements.pop().ok_or(Error::EmptyState)?;
        next.occupancy = next.occupancy.difference(p.cells);
        next.used = next.used.without(p.piece);
        Ok(next)
    }

    /// Cell-to-piece labeling in linear cell order; 0 marks an empty cell.
    pub fn labels(&self) -> [u8; NUM_CELLS] {
        let mut labels = [0u8; NUM_CELLS];
        for p in &self.placements {
            for c in p.cells.iter() {
                labels[c.index()] = p.piece.get();
            }
        }
        labels
    }

    /// Checks the representation invariants from scratch.
    pub fn is_consistent(&self) -> bool {
        let mut occ = CellSet::EMPTY;
        let mut used = PieceSet::EMPTY;
        for p in &self.placements {
            if !occ.is_disjoint(p.cells) || used.contains(p.piece) {
                return false;
            }
            occ = occ.union(p.cells);
            used = used.with(p.piece);
        }
        occ == self.occupancy && used == self.used
    }
}

/// A complete assembly: 27 cells covered by 7 distinct pieces, no overlap.
/// Independent of how the state was produced.
pub fn is_valid_solution(state: &PuzzleState) -> bool {
    state.is_consistent() && state.is_complete() && state.depth() == MAX_DEPTH
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::placement::Catalog;

    #[test]
    fn apply_then_remove_is_identity() {
        let cat = Catalog::soma();
        let s = PuzzleState::empty();
        let p = cat.placements()[10];
        let t = s.apply(&p).unwrap();
        assert_eq!(t.depth(), 1);
        assert_eq!(t.occupancy().len(), p.cells.len());
        assert_eq!(t.remove_last().unwrap(), s);
    }

    #[test]
    fn error_paths() {
        let cat = Catalog::soma();
        let p = cat.placements()[0];
        let s = PuzzleState::empty().apply(&p).unwrap();
        assert!(matches!(s.apply(&p), Err(Error::PieceReuse(_))));
        let overlapping = cat
            .placements()
            .iter()
            .find(|q| q.piece != p.piece && !q.cells.is_disjoint(p.cells))
            .unwrap();
        assert!(matches!(s.apply(overlapping), Err(Error::Overlap { .. })));
        assert!(matches!(PuzzleState::empty().remove_last(), Err(Error::EmptyState)));
    }
}
