//! Canonical forms of (partial) assemblies under the 48 cube symmetries.
//!
//! A reflection turns each chiral piece into its mirror partner, so under an
//! improper symmetry the labels of a chiral pair are swapped along with the
//! cell positions. That keeps the image of a solution a solution.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{symmetries, CellSet, Symmetry, NUM_CELLS};
use crate::piece::PieceId;
use crate::placement::Catalog;
use crate::state::PuzzleState;

/// Labeling packed 3 bits per cell, cell 0 in the most significant position,
/// so integer order equals lexicographic order of the labeling.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CanonicalKey(pub u128);

impl CanonicalKey {
    pub fn labels(self) -> [u8; NUM_CELLS] {
        let mut out = [0u8; NUM_CELLS];
        for (i, l) in out.iter_mut().enumerate() {
            *l = (self.0 >> (3 * (NUM_CELLS - 1 - i)) & 7) as u8;
        }
        out
    }

    /// Number of pieces present in the labeling.
    pub fn depth(self) -> usize {
        let mut seen = 0u8;
        for l in self.labels() {
            seen |= 1 << l;
        }
        (seen & !1).count_ones() as usize
    }
}

pub fn pack(labels: &[u8; NUM_CELLS]) -> CanonicalKey {
    let mut key = 0u128;
    for &l in labels {
        key = key << 3 | l as u128;
    }
    CanonicalKey(key)
}

fn image_key(labels: &[u8; NUM_CELLS], sym: &Symmetry, mirror: &[u8; 8]) -> u128 {
    let perm = sym.permutation();
    let mut key = 0u128;
    for c in 0..NUM_CELLS {
        let mut l = labels[c];
        if !sym.is_proper() {
            l = mirror[l as usize];
        }
        key |= (l as u128) << (3 * (NUM_CELLS - 1 - perm[c] as usize));
    }
    key
}

/// Minimal packed labeling over all 48 symmetries.
pub fn canonical_key(labels: &[u8; NUM_CELLS], mirror: &[u8; 8]) -> CanonicalKey {
    CanonicalKey(symmetries().iter().map(|s| image_key(labels, s, mirror)).min().expect("48 symmetries"))
}

/// Canonical key for assemblies of interchangeable pieces. Labels in
/// `interchangeable` name pieces of one shape; after each symmetry they are
/// renumbered by first appearance in cell order, so two labelings of the same
/// partition get the same key. No chirality swap is applied.
pub fn canonical_partition_key(labels: &[u8; NUM_CELLS], interchangeable: std::ops::RangeInclusive<u8>) -> CanonicalKey {
    let identity = [0, 1, 2, 3, 4, 5, 6, 7];
    let lo = *interchangeable.start();
    symmetries()
        .iter()
        .map(|s| {
            let mut moved = CanonicalKey(image_key(labels, s, &identity)).labels();
            let mut rename = [0u8; 8];
            let mut next = lo;
            for l in moved.iter_mut() {
                if interchangeable.contains(l) {
                    if rename[*l as usize] == 0 {
                        rename[*l as usize] = next;
                        next += 1;
                    }
                    *l = rename[*l as usize];
                }
            }
            pack(&moved)
        })
        .min()
        .expect("48 symmetries")
}

/// Labeling of `labels` moved by `sym` (chiral labels swapped when improper).
pub fn transform_labels(labels: &[u8; NUM_CELLS], sym: &Symmetry, mirror: &[u8; 8]) -> [u8; NUM_CELLS] {
    CanonicalKey(image_key(labels, sym, mirror)).labels()
}

/// Representative of a state's symmetry class: the lexicographically minimal
/// cell-to-piece labeling, empty cells labeled 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalSolution {
    key: CanonicalKey,
}

impl CanonicalSolution {
    pub fn from_key(key: CanonicalKey) -> CanonicalSolution {
        CanonicalSolution { key }
    }

    pub fn key(&self) -> CanonicalKey {
        self.key
    }

    pub fn labels(&self) -> [u8; NUM_CELLS] {
        self.key.labels()
    }

    /// Rebuilds a concrete state from the labeling, placing pieces in id order.
    pub fn to_state(&self, catalog: &Catalog) -> Result<PuzzleState> {
        state_from_labels(&self.labels(), catalog)
    }
}

impl fmt::Display for CanonicalSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in self.labels() {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for CanonicalSolution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.len() != NUM_CELLS {
            return Err(Error::parse(1, format!("expected {NUM_CELLS} characters, got {}", s.len())));
        }
        let mut labels = [0u8; NUM_CELLS];
        for (i, ch) in s.chars().enumerate() {
            labels[i] = match ch.to_digit(10) {
                Some(d) if d <= 7 => d as u8,
                _ => return Err(Error::parse(1, format!("bad label {ch:?}"))),
            };
        }
        Ok(CanonicalSolution { key: pack(&labels) })
    }
}

pub fn state_from_labels(labels: &[u8; NUM_CELLS], catalog: &Catalog) -> Result<PuzzleState> {
    let mut state = PuzzleState::empty();
    for id in PieceId::all() {
        let cells: CellSet = (0..NUM_CELLS)
            .filter(|&i| labels[i] == id.get())
            .map(crate::geometry::Cell::from_index)
            .collect();
        if cells.is_empty() {
            continue;
        }
        let pid = catalog
            .find(id, cells)
            .ok_or_else(|| Error::InvalidArgument(format!("cells labeled {id} are not a placement of that piece")))?;
        state = state.apply(catalog.placement(pid))?;
    }
    Ok(state)
}

pub fn canonicalize_with(state: &PuzzleState, catalog: &Catalog) -> CanonicalSolution {
    CanonicalSolution { key: canonical_key(&state.labels(), catalog.mirror_labels()) }
}

/// Canonical form of a Soma state.
pub fn canonicalize(state: &PuzzleState) -> CanonicalSolution {
    canonicalize_with(state, Catalog::soma())
}

/// Image of a state under one of the 48 symmetries.
pub fn transform_state(state: &PuzzleState, sym: &Symmetry, catalog: &Catalog) -> Result<PuzzleState> {
    state_from_labels(&transform_labels(&state.labels(), sym, catalog.mirror_labels()), catalog)
}

/// Writes one 27-character labeling per line.
pub fn write_solutions<W: std::io::Write>(mut w: W, solutions: &[CanonicalSolution]) -> Result<()> {
    for s in solutions {
        writeln!(w, "{s}")?;
    }
    Ok(())
}

pub fn read_solutions(text: &str) -> Result<Vec<CanonicalSolution>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|(i, l)| {
            l.parse().map_err(|e: Error| match e {
                Error::Parse { msg, .. } => Error::parse(i + 1, msg),
                other => other,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pack_preserves_lexicographic_order() {
        let mut a = [0u8; NUM_CELLS];
        let mut b = [0u8; NUM_CELLS];
        a[0] = 1;
        b[1] = 7;
        assert!(pack(&b) < pack(&a));
        assert_eq!(pack(&a).labels(), a);
    }

    #[test]
    fn empty_state_key_is_zero() {
        assert_eq!(canonicalize(&PuzzleState::empty()).key(), CanonicalKey(0));
    }

    #[test]
    fn text_round_trip() {
        let s: CanonicalSolution = "111222333444555666777000000".parse().unwrap();
        assert_eq!(s.to_string(), "111222333444555666777000000");
        assert!("12".parse::<CanonicalSolution>().is_err());
        assert!("11122233344455566677700000x".parse::<CanonicalSolution>().is_err());
    }
}
