use std::collections::BTreeSet;

use soma::canon::{
    canonical_key, canonicalize, pack, read_solutions, state_from_labels, transform_labels, transform_state, write_solutions,
};
use soma::geometry::{symmetries, NUM_CELLS};
use soma::state::is_valid_solution;
use soma::{enumerate_all_solutions, Catalog};

#[test]
fn counts_and_orbits() {
    let e = enumerate_all_solutions();
    assert_eq!(e.raw_count, 11_520);
    assert_eq!(e.solutions.len(), 240);
    assert!(e.orbit_sizes.iter().all(|&n| n == 48));
    assert_eq!(e.orbit_sizes.iter().sum::<u64>(), e.raw_count);
}

#[test]
fn every_canonical_solution_is_a_valid_assembly() {
    let catalog = Catalog::soma();
    for s in enumerate_all_solutions().solutions {
        let state = s.to_state(catalog).unwrap();
        assert!(is_valid_solution(&state));
        assert_eq!(canonicalize(&state), s);
    }
}

#[test]
fn orbit_of_a_solution_has_48_distinct_images() {
    let catalog = Catalog::soma();
    let s = enumerate_all_solutions().solutions[17].to_state(catalog).unwrap();
    let images: BTreeSet<_> = symmetries()
        .iter()
        .map(|g| {
            let t = transform_state(&s, g, catalog).unwrap();
            assert!(is_valid_solution(&t));
            pack(&t.labels())
        })
        .collect();
    assert_eq!(images.len(), 48);
}

#[test]
fn reflection_needs_the_chiral_swap() {
    let catalog = Catalog::soma();
    assert_eq!(catalog.mirror_labels(), &[0, 1, 2, 3, 4, 6, 5, 7]);
    let s = enumerate_all_solutions().solutions[0].labels();
    let identity = [0, 1, 2, 3, 4, 5, 6, 7];
    for g in symmetries().iter().filter(|g| !g.is_proper()) {
        assert!(state_from_labels(&transform_labels(&s, g, catalog.mirror_labels()), catalog).is_ok());
        assert!(state_from_labels(&transform_labels(&s, g, &identity), catalog).is_err());
    }
}

#[test]
fn solution_file_round_trip() {
    let e = enumerate_all_solutions();
    let mut buf = Vec::new();
    write_solutions(&mut buf, &e.solutions).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert_eq!(text.lines().count(), 240);
    assert!(text.lines().all(|l| l.len() == NUM_CELLS));
    assert_eq!(read_solutions(&text).unwrap(), e.solutions);
    assert!(read_solutions("1234").is_err());
}

#[test]
fn canonical_key_is_idempotent() {
    let catalog = Catalog::soma();
    for s in enumerate_all_solutions().solutions.iter().take(20) {
        assert_eq!(canonical_key(&s.labels(), catalog.mirror_labels()), s.key());
    }
}
