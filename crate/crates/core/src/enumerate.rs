//! Exhaustive solution enumeration.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canon::{canonical_key, CanonicalKey, CanonicalSolution};
use crate::geometry::{CellSet, NUM_CELLS};
use crate::piece::PieceSet;
use crate::placement::{Catalog, PlacementId};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Enumeration {
    /// Solutions counted as distinct labeled assemblies (before symmetry reduction).
    pub raw_count: u64,
    /// Canonical solutions, sorted by canonical key.
    pub solutions: Vec<CanonicalSolution>,
    /// Raw solutions falling into each canonical class, aligned with `solutions`.
    pub orbit_sizes: Vec<u64>,
}

/// Every complete assembly of the Soma pieces, reduced modulo the 48 cube symmetries.
pub fn enumerate_all_solutions() -> Enumeration {
    enumerate_with(Catalog::soma())
}

/// Exhaustive DFS that always fills the lowest-index empty cell. The root
/// branches are explored in parallel and merged by canonical key, so the
/// result does not depend on scheduling.
pub fn enumerate_with(catalog: &Catalog) -> Enumeration {
    let all_pieces = catalog.pieces().iter().fold(PieceSet::EMPTY, |s, p| s.with(p.id));
    let first = CellSet::EMPTY.complement().first().expect("box is nonempty");
    let roots: Vec<PlacementId> = catalog.covering(first).to_vec();
    let merged = roots
        .par_iter()
        .map(|&root| {
            let p = catalog.placement(root);
            let mut labels = [0u8; NUM_CELLS];
            paint(&mut labels, p.cells, p.piece.get());
            let mut found = BTreeMap::new();
            let mut raw = 0u64;
            fill(catalog, all_pieces, p.cells, PieceSet::EMPTY.with(p.piece), &mut labels, &mut |labels| {
                raw += 1;
                *found.entry(canonical_key(labels, catalog.mirror_labels())).or_insert(0u64) += 1;
            });
            (raw, found)
        })
        .reduce(
            || (0, BTreeMap::new()),
            |(ra, mut a), (rb, b)| {
                for (k, v) in b {
                    *a.entry(k).or_insert(0) += v;
                }
                (ra + rb, a)
            },
        );
    let (raw_count, classes): (u64, BTreeMap<CanonicalKey, u64>) = merged;
    let (solutions, orbit_sizes) = classes.into_iter().map(|(k, n)| (CanonicalSolution::from_key(k), n)).unzip();
    Enumeration { raw_count, solutions, orbit_sizes }
}

fn paint(labels: &mut [u8; NUM_CELLS], cells: CellSet, label: u8) {
    for c in cells.iter() {
        labels[c.index()] = label;
    }
}

fn fill(
    catalog: &Catalog,
    all: PieceSet,
    occupied: CellSet,
    used: PieceSet,
    labels: &mut [u8; NUM_CELLS],
    on_solution: &mut dyn FnMut(&[u8; NUM_CELLS]),
) {
    let Some(cell) = occupied.complement().first() else {
        if used == all {
            on_solution(labels);
        }
        return;
    };
    for &id in catalog.covering(cell) {
        let p = catalog.placement(id);
        if used.contains(p.piece) || !p.cells.is_disjoint(occupied) {
            continue;
        }
        paint(labels, p.cells, p.piece.get());
        fill(catalog, all, occupied.union(p.cells), used.with(p.piece), labels, on_solution);
        paint(labels, p.cells, 0);
    }
}
