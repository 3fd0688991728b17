use soma::metrics::*;
use soma::search::{solve, StrategyConfig, VariableOrdering};
use soma::Error;

#[test]
fn effective_bf_exact_points() {
    assert_eq!(effective_bf(1.0).unwrap(), 0.0);
    assert_eq!(effective_bf(7.0).unwrap(), 1.0);
    assert_eq!(effective_bf(127.0).unwrap(), 2.0);
    assert_eq!(effective_bf(1093.0).unwrap(), 3.0);
    assert!(matches!(effective_bf(0.5), Err(Error::InvalidArgument(_))));
    assert!(effective_bf(f64::NAN).is_err());
}

#[test]
fn effective_bf_inverts_level_sum() {
    for n in [2.0, 10.0, 500.0, 19_251.0, 861_285.0] {
        let b: f64 = effective_bf(n).unwrap();
        let back: f64 = (0..=6).map(|d| b.powi(d)).sum();
        assert!((back - n).abs() / n < 1e-9, "{n}");
    }
}

#[test]
fn weighted_estimator_matches_exhaustive() {
    for depth in 1..=3 {
        let exact = exhaustive_branching(BranchingModel::ConfigurationGraph, depth, None).unwrap();
        let settings = SamplerSettings::new(BranchingModel::ConfigurationGraph, 10_000, 11);
        let s = sample_branching(depth, &settings).unwrap().summary();
        let err = (s.weighted_mean - exact.mean()).abs();
        assert!(err < 3.0 * s.weighted_standard_error, "depth {depth}: {} vs {}", s.weighted_mean, exact.mean());
    }
}

#[test]
fn sampling_is_deterministic_per_seed() {
    let settings = SamplerSettings::new(BranchingModel::RandomPosition, 500, 3);
    let a = sample_branching(4, &settings).unwrap();
    let b = sample_branching(4, &settings).unwrap();
    assert_eq!(a.out_degrees, b.out_degrees);
    assert_eq!(a.out_degrees.len(), 500);
}

#[test]
fn sampling_rejects_bad_depth() {
    let settings = SamplerSettings::new(BranchingModel::ConfigurationGraph, 10, 0);
    assert!(sample_branching(7, &settings).is_err());
}

#[test]
fn restart_cap_is_enforced() {
    let settings = SamplerSettings { max_restarts: 0, ..SamplerSettings::new(BranchingModel::ConfigurationGraph, 200, 0) };
    assert!(matches!(sample_branching(6, &settings), Err(Error::SamplingExhausted { .. })));
}

#[test]
fn profile_ci_brackets_the_mean() {
    let p = branching_profile(&SamplerSettings::new(BranchingModel::RandomPosition, 1_000, 5)).unwrap();
    assert!(p.ci95.0 <= p.overall_mean && p.overall_mean <= p.ci95.1);
    assert_eq!(p.ci_method, CI_METHOD);
    assert_eq!(p.per_depth.len(), 7);
    assert!(p.per_depth[6].variance < p.per_depth[2].variance);
}

#[test]
fn exhaustive_budget_returns_partial() {
    let err = exhaustive_branching(BranchingModel::ConfigurationGraph, 3, Some(100)).unwrap_err();
    assert_eq!(err.budget, 100);
    assert!(err.partial.states < 100);
}

#[test]
fn level_ratio_formula() {
    let levels = [LevelCounts { nonleaf: 3, dead_leaves: 1 }, LevelCounts { nonleaf: 0, dead_leaves: 0 }];
    let b = level_ratio_mean(&levels).unwrap();
    assert_eq!(b.value, 0.75 / 2.0);
    assert_eq!(b.skipped, vec![2]);
    assert!(matches!(level_ratio_mean(&[LevelCounts::default()]), Err(Error::DivisionByZero { depth: 1 })));
}

#[test]
fn ratio_method_on_a_complete_binary_tree() {
    let sizes: Vec<u64> = (0..7).map(|d| 1 << d).collect();
    assert!(ratio_branching(&sizes).unwrap().iter().all(|&r| r == 2.0));
    assert!(ratio_branching(&[1, 0, 0]).is_err());
}

#[test]
fn tree_branching_of_the_cell_tree() {
    let t = tree_branching(&solve(&StrategyConfig::new(VariableOrdering::CellOrdered).exhaustive()).stats).unwrap();
    assert_eq!(t.total_nodes, 861_285);
    assert_eq!(t.ratio[0], 55.0);
    assert!(t.nonterminal.iter().zip(&t.ratio).all(|(n, r)| n >= r));
    assert!(t.level_ratio.value <= 1.0);
    assert_eq!(t.b_star, effective_bf(t.total_nodes as f64).unwrap());
}

#[test]
fn histogram_csv_schema() {
    let mut out = Vec::new();
    write_histogram_csv(&mut out, None, [(1, 5, 2.0), (1, 6, 0.5)]).unwrap();
    assert_eq!(String::from_utf8(out).unwrap(), "depth,out_degree,count\n1,5,2\n1,6,0.500000\n");
}

#[test]
fn matrix_csv_schema() {
    let configs = [StrategyConfig::new(VariableOrdering::Mcv)];
    let m = strategy_matrix(&configs, &[0, 1]).unwrap();
    let mut out = Vec::new();
    write_matrix_csv(&mut out, &m.rows).unwrap();
    let text = String::from_utf8(out).unwrap();
    assert!(text.starts_with("strategy,ordering,pruning,landmarks,seed,N,b_star\n"));
    assert_eq!(text.lines().count(), 3);
}
