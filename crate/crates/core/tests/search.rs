use std::collections::BTreeSet;

use soma::canon::{canonicalize, pack};
use soma::search::{backtrack_histogram, has_small_void, solve, void_prune, StrategyConfig, VariableOrdering};
use soma::state::MAX_DEPTH;
use soma::{Cell, CellSet, PuzzleState};

fn raw_set(config: &StrategyConfig) -> BTreeSet<u128> {
    solve(config).solutions.iter().map(|s| pack(&s.labels()).0).collect()
}

#[test]
fn every_ordering_finds_all_solutions() {
    for ordering in VariableOrdering::ALL {
        let out = solve(&StrategyConfig::new(ordering).exhaustive());
        assert_eq!(out.solutions.len(), 11_520, "{ordering}");
        assert_eq!(out.stats.solutions_found, 11_520);
        let canon: BTreeSet<_> = out.solutions.iter().map(canonicalize).collect();
        assert_eq!(canon.len(), 240);
    }
}

#[test]
fn pruning_keeps_the_solution_set() {
    for ordering in [VariableOrdering::CellOrdered, VariableOrdering::Mcv, VariableOrdering::LayerOrdered] {
        let plain = StrategyConfig::new(ordering).exhaustive();
        let pruned = plain.clone().pruning(true);
        assert_eq!(raw_set(&plain), raw_set(&pruned), "{ordering}");
        assert!(solve(&pruned).stats.total_nodes < solve(&plain).stats.total_nodes);
    }
}

#[test]
fn node_accounting_is_consistent() {
    let out = solve(&StrategyConfig::new(VariableOrdering::CellOrdered).exhaustive());
    let s = &out.stats;
    assert_eq!(s.nodes_created_per_depth.iter().sum::<u64>(), s.total_nodes);
    assert_eq!(s.nodes_created_per_depth[0], 1);
    assert_eq!(s.nodes_created_per_depth[MAX_DEPTH], 11_520);
    for d in 0..MAX_DEPTH {
        assert_eq!(s.expanded_per_depth[d], s.nodes_created_per_depth[d]);
        let children: u64 = s.out_degree_histogram[d].iter().enumerate().map(|(k, n)| k as u64 * n).sum();
        assert_eq!(children, s.nodes_created_per_depth[d + 1]);
        let dead = s.out_degree_histogram[d].first().copied().unwrap_or(0);
        assert_eq!(dead, s.dead_ends_per_depth[d]);
    }
}

#[test]
fn layer_tree_matches_cell_tree_level_sizes() {
    let cell = solve(&StrategyConfig::new(VariableOrdering::CellOrdered).exhaustive()).stats;
    let layer = solve(&StrategyConfig::new(VariableOrdering::LayerOrdered).exhaustive()).stats;
    assert_eq!(cell.nodes_created_per_depth, layer.nodes_created_per_depth);
}

#[test]
fn seeded_runs_repeat() {
    let config = StrategyConfig::new(VariableOrdering::Randomized).seed(42);
    let a = solve(&config);
    let b = solve(&config);
    assert_eq!(a.solutions, b.solutions);
    assert_eq!(a.stats.nodes_created_per_depth, b.stats.nodes_created_per_depth);
    let c = solve(&config.clone().seed(43));
    assert_ne!(a.stats.nodes_created_per_depth, c.stats.nodes_created_per_depth);
}

#[test]
fn first_solution_is_valid_and_stops() {
    for ordering in VariableOrdering::ALL {
        let out = solve(&StrategyConfig::new(ordering).pruning(true).seed(5));
        assert_eq!(out.solutions.len(), 1);
        assert!(soma::state::is_valid_solution(&out.solutions[0]));
        let h = backtrack_histogram(&out.stats).unwrap();
        assert!((h.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn small_voids() {
    let corner = Cell::new(0, 0, 0).unwrap();
    assert!(has_small_void(CellSet::FULL.difference(CellSet::EMPTY.with(corner))));
    let pair = CellSet::EMPTY.with(corner).with(Cell::new(1, 0, 0).unwrap());
    assert!(has_small_void(CellSet::FULL.difference(pair)));
    let line = pair.with(Cell::new(2, 0, 0).unwrap());
    assert!(!has_small_void(CellSet::FULL.difference(line)));
    assert!(!has_small_void(CellSet::FULL));
    assert!(!void_prune(&PuzzleState::empty()));
}
