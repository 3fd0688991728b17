use std::collections::BTreeSet;

use soma::canon::canonicalize;
use soma::sat::*;
use soma::{enumerate_all_solutions, Catalog};

fn pairs(n: usize) -> u64 {
    (n * n.saturating_sub(1) / 2) as u64
}

#[test]
fn clause_count_matches_closed_form() {
    let catalog = Catalog::soma();
    let f = encode();
    assert_eq!(f.num_vars, catalog.len());
    assert_eq!(f.num_vars, 688);
    let pieces: u64 = catalog.pieces().iter().map(|p| pairs(catalog.piece_range(p.id).len())).sum();
    let cells: u64 = soma::CellSet::FULL.iter().map(|c| pairs(catalog.covering(c).len())).sum();
    assert_eq!(f.clauses.len() as u64, 34 + pieces + cells);
    assert_eq!(expected_clause_counts(catalog).total(), f.clauses.len() as u64);
    assert!(f.clauses.len() > 150_000);
}

#[test]
fn clause_widths() {
    let f = encode();
    let wide = f.clauses.iter().filter(|c| c.len() > 2).count();
    assert_eq!(wide, 34);
    assert!(f.clauses.iter().filter(|c| c.len() == 2).all(|c| c[0] < 0 && c[1] < 0));
}

#[test]
fn dimacs_round_trip_and_header() {
    let catalog = Catalog::soma();
    let f = encode();
    let text = emit_dimacs(&f, catalog);
    assert!(text.lines().any(|l| l == "p cnf 688 185252"));
    assert!(text.lines().take_while(|l| l.starts_with('c')).count() >= 688);
    assert_eq!(parse_dimacs(&text).unwrap(), f);
    assert_eq!(emit_dimacs(&f, catalog), text);
}

#[test]
fn dimacs_errors() {
    assert!(parse_dimacs("p cnf 2 1\n1 3 0\n").is_err());
    assert!(parse_dimacs("p cnf 2 2\n1 2 0\n").is_err());
    assert!(parse_dimacs("1 2 0\n").is_err());
    assert!(parse_dimacs("p cnf 2 1\n1 2\n").is_err());
}

#[test]
fn first_model_decodes_to_a_solution() {
    let catalog = Catalog::soma();
    let SatResult::Sat(m) = dpll_solve(&encode()) else { panic!("formula is satisfiable") };
    let state = decode(&m, catalog).unwrap();
    assert!(soma::state::is_valid_solution(&state));
    assert_eq!(Model::of_state(&state, catalog).unwrap(), m);
    let record = model_record(&m, catalog).unwrap();
    assert_eq!(record.placements.len(), 7);
    assert!(record.placements.iter().all(|p| p.name.starts_with('P') && p.anchor.iter().all(|&a| (1..=3).contains(&a))));
}

#[test]
fn enumeration_matches_search() {
    let catalog = Catalog::soma();
    let models = enumerate_models(&encode(), BlockingMode::TrueLiterals, None).unwrap();
    assert_eq!(models.len(), 11_520);
    let distinct: BTreeSet<_> = models.iter().map(|m| m.true_vars()).collect();
    assert_eq!(distinct.len(), 11_520);
    let canon: BTreeSet<_> = models.iter().map(|m| canonicalize(&decode(m, catalog).unwrap())).collect();
    let dfs: BTreeSet<_> = enumerate_all_solutions().solutions.into_iter().collect();
    assert_eq!(canon, dfs);
}

#[test]
fn enumeration_cap_keeps_partial_models() {
    let err = enumerate_models(&encode(), BlockingMode::FullAssignment, Some(5)).unwrap_err();
    assert_eq!(err.partial.len(), 5);
}

#[test]
fn decode_rejects_malformed_models() {
    let catalog = Catalog::soma();
    assert!(decode(&Model { values: vec![false; 10] }, catalog).is_err());
    assert!(decode(&Model { values: vec![false; 688] }, catalog).is_err());
    let mut two_v = vec![false; 688];
    let v = catalog.piece_range(soma::PieceId::new(1).unwrap());
    two_v[v.start] = true;
    two_v[v.start + 1] = true;
    assert!(decode(&Model { values: two_v }, catalog).is_err());
}
