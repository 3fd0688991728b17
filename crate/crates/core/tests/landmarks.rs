use soma::landmarks::*;
use soma::search::{solve, StrategyConfig, VariableOrdering};
use soma::Error;

fn cell() -> StrategyConfig {
    StrategyConfig::new(VariableOrdering::CellOrdered)
}

#[test]
fn depth_must_be_in_range() {
    assert!(build_table(0, &cell(), 10, BuildOptions::default()).is_err());
    assert!(build_table(7, &cell(), 10, BuildOptions::default()).is_err());
}

#[test]
fn extension_counts_reproduce_the_solution_count() {
    // every raw depth-2 prefix of the cell tree extends to the solutions below it
    let table = build_table(2, &cell(), usize::MAX, BuildOptions::default()).unwrap();
    let multiplicity = raw_prefix_multiplicities(2).unwrap();
    let total: u64 = multiplicity.iter().map(|(k, m)| m * table.extensions(*k).unwrap()).sum();
    assert_eq!(total, 11_520);
    assert_eq!(table.entries.len(), multiplicity.len());
}

#[test]
fn exhaustive_query_credits_jumped_solutions() {
    let table = build_table(2, &cell(), 100, BuildOptions { deep_anti_landmarks: true }).unwrap();
    let q = table.query_solve(&cell().exhaustive()).unwrap();
    assert_eq!(q.solutions_total, 11_520);
    assert!(q.stats.total_nodes < solve(&cell().exhaustive()).stats.total_nodes);
}

#[test]
fn first_solution_query_is_valid() {
    let table = build_table(3, &cell().pruning(true), 20, BuildOptions::default()).unwrap();
    let q = table.query_solve(&cell().pruning(true)).unwrap();
    assert_eq!(q.solutions.len(), 1);
    assert!(soma::state::is_valid_solution(&q.solutions[0]));
}

#[test]
fn landmarks_are_ranked_by_extensions() {
    let table = build_table(2, &cell(), 30, BuildOptions::default()).unwrap();
    assert_eq!(table.landmarks.len(), 30);
    assert!(table.landmarks.windows(2).all(|w| w[0].extensions >= w[1].extensions));
    assert!(table.landmarks.iter().all(|e| e.extensions >= table.landmark_threshold));
    for a in &table.anti_landmarks {
        assert_eq!(table.extensions(*a), Some(0));
        assert!(table.is_anti_landmark(*a));
    }
}

#[test]
fn zero_landmarks_means_no_preprocessing() {
    let table = build_incremental(2, &cell(), 0, BuildOptions::default()).unwrap();
    assert_eq!(table.preprocessing_nodes, 0);
    assert!(table.landmarks.is_empty());
    let q = table.query_solve(&cell().exhaustive()).unwrap();
    assert_eq!(q.stats.total_nodes, baseline_nodes(&cell()));
}

#[test]
fn empty_table_with_a_positive_limit_is_an_error() {
    let mut table = build_incremental(2, &cell(), 0, BuildOptions::default()).unwrap();
    table.landmark_count_limit = 5;
    assert!(matches!(table.query_solve(&cell()), Err(Error::NoLandmarks)));
}

#[test]
fn table_files_round_trip() {
    let table = build_table(2, &cell().pruning(true), 25, BuildOptions { deep_anti_landmarks: true }).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.lmk");
    table.save(&path).unwrap();
    let back = LandmarkTable::load(&path).unwrap();
    assert_eq!(back.landmarks, table.landmarks);
    assert_eq!(back.anti_landmarks, table.anti_landmarks);
    assert_eq!(back.entries, table.entries);
    let json = LandmarkTable::from_json(&table.to_json().unwrap()).unwrap();
    assert_eq!(json.landmarks, table.landmarks);
    std::fs::write(&path, b"not a table").unwrap();
    assert!(LandmarkTable::load(&path).is_err());
}

#[test]
fn tradeoff_csv_schema() {
    let records = tradeoff_sweep(&[1], &[0, 5], &cell().pruning(true)).unwrap();
    let mut out = Vec::new();
    write_tradeoff_csv(&mut out, &records).unwrap();
    let text = String::from_utf8(out).unwrap();
    assert!(text.starts_with("depth,num_landmarks,preprocessing_nodes,preprocessing_ms,query_nodes,query_ms\n"));
    assert_eq!(text.lines().count(), 3);
}
