//! Piece shapes and their orientations.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{rotations, Cell, CellSet, SIDE};

/// The bundled piece-definition file.
pub const STANDARD_PIECES: &str = include_str!("../data/pieces.txt");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PieceId(u8);

impl PieceId {
    pub const MAX: u8 = 7;

    pub fn new(id: u8) -> Option<PieceId> {
        (1..=Self::MAX).contains(&id).then_some(PieceId(id))
    }

    pub fn get(self) -> u8 {
        self.0
    }

    pub fn all() -> impl Iterator<Item = PieceId> {
        (1..=Self::MAX).map(PieceId)
    }
}

impl fmt::Display for PieceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Bit `i` set when piece `i` has been placed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PieceSet(u8);

impl PieceSet {
    pub const EMPTY: PieceSet = PieceSet(0);
    pub const ALL: PieceSet = PieceSet(0b1111_1110);

    pub fn from_bits(bits: u8) -> PieceSet {
        PieceSet(bits & Self::ALL.0)
    }
    pub fn bits(self) -> u8 {
        self.0
    }
    pub fn contains(self, id: PieceId) -> bool {
        self.0 >> id.0 & 1 == 1
    }
    pub fn with(self, id: PieceId) -> PieceSet {
        PieceSet(self.0 | 1 << id.0)
    }
    pub fn without(self, id: PieceId) -> PieceSet {
        PieceSet(self.0 & !(1 << id.0))
    }
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }
    pub fn iter(self) -> impl Iterator<Item = PieceId> {
        PieceId::all().filter(move |&p| self.contains(p))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Piece {
    pub id: PieceId,
    pub name: String,
    /// Normalized unit-cube offsets, sorted.
    pub cells: Vec<[i32; 3]>,
}

impl Piece {
    pub fn new(id: PieceId, name: impl Into<String>, cells: &[[i32; 3]]) -> Result<Piece> {
        if cells.is_empty() {
            return Err(Error::InvalidArgument(format!("piece {id} has no cells")));
        }
        let cells = normalize(cells);
        if cells.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument(format!("piece {id} repeats a cell")));
        }
        if cells.iter().flatten().any(|&v| v >= SIDE as i32) {
            return Err(Error::InvalidArgument(format!("piece {id} does not fit in the box")));
        }
        Ok(Piece { id, name: name.into(), cells })
    }

    pub fn size(&self) -> usize {
        self.cells.len()
    }

    /// The seven Soma pieces from the bundled data file.
    pub fn standard_set() -> Vec<Piece> {
        parse_pieces(STANDARD_PIECES).expect("bundled piece file is valid")
    }
}

/// Translates an offset set so its component-wise minimum is the origin, and sorts it.
pub fn normalize(cells: &[[i32; 3]]) -> Vec<[i32; 3]> {
    let mut min = [i32::MAX; 3];
    for c in cells {
        for a in 0..3 {
            min[a] = min[a].min(c[a]);
        }
    }
    let mut out: Vec<[i32; 3]> = cells.iter().map(|c| [c[0] - min[0], c[1] - min[1], c[2] - min[2]]).collect();
    out.sort_unstable();
    out
}

/// Parses the piece-definition format (see `data/pieces.txt`).
pub fn parse_pieces(text: &str) -> Result<Vec<Piece>> {
    let mut pieces = Vec::new();
    let mut saw_version = false;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = lineno + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        let head = fields.next().unwrap_or_default();
        if head == "version" {
            match fields.next() {
                Some("1") => saw_version = true,
                other => return Err(Error::parse(lineno, format!("unsupported version {other:?}"))),
            }
            continue;
        }
        let id = head
            .parse::<u8>()
            .ok()
            .and_then(PieceId::new)
            .ok_or_else(|| Error::parse(lineno, format!("bad piece id {head:?}")))?;
        let name = fields.next().ok_or_else(|| Error::parse(lineno, "missing piece name"))?;
        let mut cells = Vec::new();
        for tok in fields {
            let coords: Vec<i32> = tok
                .split(',')
                .map(|v| v.parse::<i32>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::parse(lineno, format!("bad offset {tok:?}: {e}")))?;
            let [x, y, z] = coords[..] else {
                return Err(Error::parse(lineno, format!("offset {tok:?} needs three coordinates")));
            };
            cells.push([x, y, z]);
        }
        let piece = Piece::new(id, name, &cells).map_err(|e| Error::parse(lineno, e.to_string()))?;
        if pieces.iter().any(|p: &Piece| p.id == id) {
            return Err(Error::parse(lineno, format!("duplicate piece id {id}")));
        }
        pieces.push(piece);
    }
    if !saw_version {
        return Err(Error::parse(0, "missing version line"));
    }
    pieces.sort_by_key(|p| p.id);
    Ok(pieces)
}

/// One distinct rotation of a piece, translated to the origin.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orientation {
    pub piece: PieceId,
    /// Index (into [`rotations`]) of the first rotation that produces this shape.
    pub rotation_index: u8,
    pub cells: Vec<[i32; 3]>,
}

impl Orientation {
    /// The shape as a cell set anchored at the origin cell.
    pub fn shape(&self) -> CellSet {
        self.cells.iter().map(|&c| Cell::from_coords(c).expect("normalized shape fits the box")).collect()
    }
}

/// All distinct normalized rotations of `piece`, sorted by their cell-set encoding.
pub fn generate_orientations(piece: &Piece) -> Vec<Orientation> {
    let mut out: Vec<Orientation> = Vec::with_capacity(24);
    for (r, rot) in rotations().iter().enumerate() {
        let rotated: Vec<[i32; 3]> = piece.cells.iter().map(|&c| rot.apply_vector(c)).collect();
        let cells = normalize(&rotated);
        if out.iter().all(|o| o.cells != cells) {
            out.push(Orientation { piece: piece.id, rotation_index: r as u8, cells });
        }
    }
    out.sort_by_key(|o| o.shape().bits());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_set_sizes() {
        let pieces = Piece::standard_set();
        let sizes: Vec<usize> = pieces.iter().map(Piece::size).collect();
        assert_eq!(sizes, vec![3, 4, 4, 4, 4, 4, 4]);
        assert_eq!(sizes.iter().sum::<usize>(), 27);
        let names: Vec<&str> = pieces.iter().map(|p| p.name.as_str()).collect();
        assert_eq!(names, ["V", "L", "T", "Z", "A", "B", "P"]);
    }

    #[test]
    fn parser_rejects_garbage() {
        assert!(parse_pieces("1 V 0,0,0").is_err(), "missing version");
        assert!(parse_pieces("version 1\n9 X 0,0,0").is_err());
        assert!(parse_pieces("version 1\n1 V 0,0").is_err());
        assert!(parse_pieces("version 1\n1 V 0,0,0 0,0,0").is_err());
        assert!(parse_pieces("version 1\n1 I 0,0,0 1,0,0 2,0,0 3,0,0").is_err());
        assert!(parse_pieces("version 1\n1 V 0,0,0\n1 W 0,0,0").is_err());
    }

    #[test]
    fn normalization_moves_min_to_origin() {
        assert_eq!(normalize(&[[2, -1, 5], [3, -1, 5]]), vec![[0, 0, 0], [1, 0, 0]]);
    }

    #[test]
    fn identity_rotation_is_present() {
        for piece in Piece::standard_set() {
            let orientations = generate_orientations(&piece);
            assert!(orientations.iter().any(|o| o.cells == piece.cells), "piece {}", piece.name);
            let mut keys: Vec<u32> = orientations.iter().map(|o| o.shape().bits()).collect();
            let sorted = keys.clone();
            keys.dedup();
            assert_eq!(keys, sorted, "sorted and distinct");
        }
    }
}
