//! Cells of the 3×3×3 box, 27-bit cell sets and the 48 symmetries of the cube.
//!
//! Every module linearizes cells the same way: `index = 9x + 3y + z`.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

pub const SIDE: usize = 3;
pub const NUM_CELLS: usize = 27;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    x: u8,
    y: u8,
    z: u8,
}

impl Cell {
    pub fn new(x: usize, y: usize, z: usize) -> Option<Cell> {
        (x < SIDE && y < SIDE && z < SIDE).then(|| Cell { x: x as u8, y: y as u8, z: z as u8 })
    }

    pub fn from_index(index: usize) -> Cell {
        assert!(index < NUM_CELLS, "cell index {index} out of range");
        Cell { x: (index / 9) as u8, y: (index / 3 % 3) as u8, z: (index % 3) as u8 }
    }

    pub fn from_coords(c: [i32; 3]) -> Option<Cell> {
        if c.iter().all(|&v| (0..SIDE as i32).contains(&v)) {
            Cell::new(c[0] as usize, c[1] as usize, c[2] as usize)
        } else {
            None
        }
    }

    #[inline]
    pub fn index(self) -> usize {
        9 * self.x as usize + 3 * self.y as usize + self.z as usize
    }

    pub fn x(self) -> usize {
        self.x as usize
    }
    pub fn y(self) -> usize {
        self.y as usize
    }
    pub fn z(self) -> usize {
        self.z as usize
    }

    pub fn coords(self) -> [i32; 3] {
        [self.x as i32, self.y as i32, self.z as i32]
    }

    /// Coordinates in the 1-indexed form used for variable names.
    pub fn one_indexed(self) -> [usize; 3] {
        [self.x() + 1, self.y() + 1, self.z() + 1]
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.x, self.y, self.z)
    }
}

/// A subset of the 27 cells, bit `i` standing for the cell with linear index `i`.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CellSet(u32);

impl CellSet {
    pub const EMPTY: CellSet = CellSet(0);
    pub const FULL: CellSet = CellSet((1 << NUM_CELLS) - 1);

    pub fn from_bits(bits: u32) -> CellSet {
        assert!(bits <= Self::FULL.0, "bits outside the 27-cell box");
        CellSet(bits)
    }

    #[inline]
    pub fn bits(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn contains(self, cell: Cell) -> bool {
        self.0 >> cell.index() & 1 == 1
    }

    #[inline]
    pub fn with(self, cell: Cell) -> CellSet {
        CellSet(self.0 | 1 << cell.index())
    }

    #[inline]
    pub fn union(self, other: CellSet) -> CellSet {
        CellSet(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: CellSet) -> CellSet {
        CellSet(self.0 & other.0)
    }

    #[inline]
    pub fn difference(self, other: CellSet) -> CellSet {
        CellSet(self.0 & !other.0)
    }

    #[inline]
    pub fn is_disjoint(self, other: CellSet) -> bool {
        self.0 & other.0 == 0
    }

    #[inline]
    pub fn is_subset(self, other: CellSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn complement(self) -> CellSet {
        CellSet(!self.0 & Self::FULL.0)
    }

    /// Lowest-index cell, if any.
    pub fn first(self) -> Option<Cell> {
        (self.0 != 0).then(|| Cell::from_index(self.0.trailing_zeros() as usize))
    }

    pub fn iter(self) -> impl Iterator<Item = Cell> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(Cell::from_index(i))
        })
    }
}

impl FromIterator<Cell> for CellSet {
    fn from_iter<I: IntoIterator<Item = Cell>>(iter: I) -> Self {
        iter.into_iter().fold(CellSet::EMPTY, CellSet::with)
    }
}

impl fmt::Debug for CellSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Bitmask of the face-adjacent neighbours of each cell.
pub fn neighbor_masks() -> &'static [u32; NUM_CELLS] {
    static MASKS: OnceLock<[u32; NUM_CELLS]> = OnceLock::new();
    MASKS.get_or_init(|| {
        let mut masks = [0u32; NUM_CELLS];
        for (i, mask) in masks.iter_mut().enumerate() {
            let c = Cell::from_index(i).coords();
            for axis in 0..3 {
                for delta in [-1, 1] {
                    let mut n = c;
                    n[axis] += delta;
                    if let Some(n) = Cell::from_coords(n) {
                        *mask |= 1 << n.index();
                    }
                }
            }
        }
        masks
    })
}

/// One of the 48 isometries of the cube: a signed permutation matrix.
#[derive(Clone, Debug)]
pub struct Symmetry {
    matrix: [[i32; 3]; 3],
    proper: bool,
    perm: [u8; NUM_CELLS],
}

impl Symmetry {
    fn from_matrix(matrix: [[i32; 3]; 3]) -> Symmetry {
        let proper = det(&matrix) == 1;
        let mut perm = [0u8; NUM_CELLS];
        for (i, slot) in perm.iter_mut().enumerate() {
            let c = Cell::from_index(i).coords();
            let centered = [c[0] - 1, c[1] - 1, c[2] - 1];
            let r = mul(&matrix, centered);
            let image = Cell::from_coords([r[0] + 1, r[1] + 1, r[2] + 1]).expect("isometry keeps the box");
            *slot = image.index() as u8;
        }
        Symmetry { matrix, proper, perm }
    }

    pub fn matrix(&self) -> &[[i32; 3]; 3] {
        &self.matrix
    }

    /// True for rotations, false for rotation-reflections.
    pub fn is_proper(&self) -> bool {
        self.proper
    }

    /// Rotates a vector about the origin (no translation).
    pub fn apply_vector(&self, v: [i32; 3]) -> [i32; 3] {
        mul(&self.matrix, v)
    }

    /// Image of a cell of the box under this symmetry (about the centre cell).
    #[inline]
    pub fn apply_cell(&self, cell: Cell) -> Cell {
        Cell::from_index(self.perm[cell.index()] as usize)
    }

    #[inline]
    pub fn permutation(&self) -> &[u8; NUM_CELLS] {
        &self.perm
    }

    pub fn apply_set(&self, set: CellSet) -> CellSet {
        set.iter().map(|c| self.apply_cell(c)).collect()
    }

    pub fn compose(&self, other: &Symmetry) -> [[i32; 3]; 3] {
        let mut out = [[0; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = (0..3).map(|k| self.matrix[i][k] * other.matrix[k][j]).sum();
            }
        }
        out
    }
}

fn mul(m: &[[i32; 3]; 3], v: [i32; 3]) -> [i32; 3] {
    [
        m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
        m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
        m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
    ]
}

fn det(m: &[[i32; 3]; 3]) -> i32 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// All 48 cube symmetries: the 24 rotations first (identity at index 0),
/// then the 24 improper ones.
pub fn symmetries() -> &'static [Symmetry] {
    static ALL: OnceLock<Vec<Symmetry>> = OnceLock::new();
    ALL.get_or_init(|| {
        const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let mut all: Vec<Symmetry> = Vec::with_capacity(48);
        for perm in PERMS {
            for signs in 0..8 {
                let mut m = [[0; 3]; 3];
                for row in 0..3 {
                    m[row][perm[row]] = if signs >> row & 1 == 1 { -1 } else { 1 };
                }
                all.push(Symmetry::from_matrix(m));
            }
        }
        // stable: keeps the generation order inside each class
        all.sort_by_key(|s| !s.proper);
        all
    })
}

/// The 24 proper rotations.
pub fn rotations() -> &'static [Symmetry] {
    &symmetries()[..24]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_index_round_trips() {
        for i in 0..NUM_CELLS {
            assert_eq!(Cell::from_index(i).index(), i);
        }
        assert_eq!(Cell::new(1, 2, 0).unwrap().index(), 15);
        assert!(Cell::new(3, 0, 0).is_none());
    }

    #[test]
    fn identity_first_and_classes_split() {
        let syms = symmetries();
        assert_eq!(syms.len(), 48);
        assert_eq!(syms[0].matrix(), &[[1, 0, 0], [0, 1, 0], [0, 0, 1]]);
        assert!(syms[..24].iter().all(Symmetry::is_proper));
        assert!(syms[24..].iter().all(|s| !s.is_proper()));
    }

    #[test]
    fn rotations_form_a_group() {
        let rots = rotations();
        let find = |m: [[i32; 3]; 3]| rots.iter().position(|r| *r.matrix() == m);
        for a in rots {
            for b in rots {
                assert!(find(a.compose(b)).is_some(), "not closed under composition");
            }
            let has_inverse = rots.iter().any(|b| a.compose(b) == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]);
            assert!(has_inverse);
        }
    }

    #[test]
    fn symmetries_permute_cells() {
        for s in symmetries() {
            let image: CellSet = (0..NUM_CELLS).map(|i| s.apply_cell(Cell::from_index(i))).collect();
            assert_eq!(image, CellSet::FULL);
            assert_eq!(s.apply_cell(Cell::new(1, 1, 1).unwrap()), Cell::new(1, 1, 1).unwrap());
        }
    }

    #[test]
    fn corner_neighbours() {
        let n = neighbor_masks();
        assert_eq!(n[0].count_ones(), 3);
        assert_eq!(n[13].count_ones(), 6);
    }
}
