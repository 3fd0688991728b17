//! Legal placements of pieces in the box and the placement catalog shared by
//! the search engine, the metrics and the CNF encoder.

use std::collections::HashMap;
use std::ops::Range;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::geometry::{symmetries, Cell, CellSet, NUM_CELLS};
use crate::piece::{generate_orientations, normalize, Orientation, Piece, PieceId};

/// One piece, in one orientation, translated by `anchor`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Placement {
    pub piece: PieceId,
    pub orientation: u8,
    pub anchor: Cell,
    pub cells: CellSet,
}

/// Every (orientation, anchor) pair of `piece` that stays inside the box,
/// ordered by orientation index and then anchor index.
pub fn enumerate_placements(piece: &Piece) -> Vec<Placement> {
    placements_of(piece.id, &generate_orientations(piece))
}

fn placements_of(piece: PieceId, orientations: &[Orientation]) -> Vec<Placement> {
    let mut out = Vec::new();
    for (oi, o) in orientations.iter().enumerate() {
        for a in 0..NUM_CELLS {
            let anchor = Cell::from_index(a);
            let base = anchor.coords();
            let cells: Option<CellSet> = o
                .cells
                .iter()
                .map(|c| Cell::from_coords([base[0] + c[0], base[1] + c[1], base[2] + c[2]]))
                .collect();
            if let Some(cells) = cells {
                out.push(Placement { piece, orientation: oi as u8, anchor, cells });
            }
        }
    }
    out
}

/// Dense index into [`Catalog::placements`].
pub type PlacementId = u16;

/// The full placement table for a piece set.
///
/// Placement ids follow (piece id, orientation index, anchor index) order, which
/// is also the CNF variable order (`variable = id + 1`).
#[derive(Debug)]
pub struct Catalog {
    pieces: Vec<Piece>,
    orientations: Vec<Vec<Orientation>>,
    placements: Vec<Placement>,
    by_piece: Vec<Range<usize>>,
    covering: Vec<Vec<PlacementId>>,
    lookup: HashMap<(PieceId, CellSet), PlacementId>,
    mirror: [u8; 8],
}

impl Catalog {
    pub fn new(pieces: Vec<Piece>) -> Catalog {
        let mut pieces = pieces;
        pieces.sort_by_key(|p| p.id);
        let mut orientations = Vec::with_capacity(pieces.len());
        let mut placements = Vec::new();
        let mut by_piece = vec![0..0; PieceId::MAX as usize + 1];
        for piece in &pieces {
            let os = generate_orientations(piece);
            let start = placements.len();
            placements.extend(placements_of(piece.id, &os));
            by_piece[piece.id.get() as usize] = start..placements.len();
            orientations.push(os);
        }
        assert!(placements.len() <= PlacementId::MAX as usize);
        let mut covering = vec![Vec::new(); NUM_CELLS];
        let mut lookup = HashMap::with_capacity(placements.len());
        for (i, p) in placements.iter().enumerate() {
            for c in p.cells.iter() {
                covering[c.index()].push(i as PlacementId);
            }
            lookup.insert((p.piece, p.cells), i as PlacementId);
        }
        let mirror = mirror_map(&pieces);
        Catalog { pieces, orientations, placements, by_piece, covering, lookup, mirror }
    }

    /// Catalog for the bundled Soma piece set.
    pub fn soma() -> &'static Catalog {
        static SOMA: OnceLock<Catalog> = OnceLock::new();
        SOMA.get_or_init(|| Catalog::new(Piece::standard_set()))
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn piece(&self, id: PieceId) -> Option<&Piece> {
        self.pieces.iter().find(|p| p.id == id)
    }

    pub fn orientations(&self, id: PieceId) -> &[Orientation] {
        self.pieces.iter().position(|p| p.id == id).map_or(&[], |i| &self.orientations[i])
    }

    pub fn placements(&self) -> &[Placement] {
        &self.placements
    }

    #[inline]
    pub fn placement(&self, id: PlacementId) -> &Placement {
        &self.placements[id as usize]
    }

    pub fn len(&self) -> usize {
        self.placements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.placements.is_empty()
    }

    /// Id range of the placements of one piece.
    pub fn piece_range(&self, id: PieceId) -> Range<usize> {
        self.by_piece[id.get() as usize].clone()
    }

    /// Ids of the placements covering `cell`, ascending.
    #[inline]
    pub fn covering(&self, cell: Cell) -> &[PlacementId] {
        &self.covering[cell.index()]
    }

    pub fn find(&self, piece: PieceId, cells: CellSet) -> Option<PlacementId> {
        self.lookup.get(&(piece, cells)).copied()
    }

    /// Label of the piece whose shape is the mirror image of `label`'s
    /// (identity for achiral pieces and for 0).
    #[inline]
    pub fn mirror_label(&self, label: u8) -> u8 {
        self.mirror[label as usize]
    }

    pub fn mirror_labels(&self) -> &[u8; 8] {
        &self.mirror
    }
}

fn mirror_map(pieces: &[Piece]) -> [u8; 8] {
    let mut map = [0, 1, 2, 3, 4, 5, 6, 7];
    let reflection = &symmetries()[24];
    let shapes: Vec<Vec<Vec<[i32; 3]>>> =
        pieces.iter().map(|p| generate_orientations(p).into_iter().map(|o| o.cells).collect()).collect();
    for p in pieces {
        let mirrored = normalize(&p.cells.iter().map(|&c| reflection.apply_vector(c)).collect::<Vec<_>>());
        if let Some(j) = shapes.iter().position(|s| s.contains(&mirrored)) {
            map[p.id.get() as usize] = pieces[j].id.get();
        }
    }
    map
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_probe_has_one_placement_per_cell() {
        let probe = Piece::new(PieceId::new(1).unwrap(), "probe", &[[0, 0, 0]]).unwrap();
        assert_eq!(generate_orientations(&probe).len(), 1);
        let ps = enumerate_placements(&probe);
        assert_eq!(ps.len(), 27);
        let cells: CellSet = ps.iter().flat_map(|p| p.cells.iter()).collect();
        assert_eq!(cells, CellSet::FULL);
    }

    #[test]
    fn placements_stay_in_bounds() {
        for piece in Piece::standard_set() {
            for p in enumerate_placements(&piece) {
                assert!(p.cells.is_subset(CellSet::FULL));
                assert_eq!(p.cells.len(), piece.size());
            }
        }
    }

    #[test]
    fn chiral_pair_is_detected() {
        let cat = Catalog::soma();
        assert_eq!(cat.mirror_labels(), &[0, 1, 2, 3, 4, 6, 5, 7]);
    }

    #[test]
    fn lookup_matches_table() {
        let cat = Catalog::soma();
        for (i, p) in cat.placements().iter().enumerate() {
            assert_eq!(cat.find(p.piece, p.cells), Some(i as PlacementId));
        }
    }
}
