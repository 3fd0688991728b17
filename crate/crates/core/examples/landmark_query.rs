use soma::landmarks::{build_table, BuildOptions, LandmarkTable};
use soma::search::{StrategyConfig, VariableOrdering};

fn main() -> soma::Result<()> {
    let base = StrategyConfig::new(VariableOrdering::CellOrdered).pruning(true);
    let table = build_table(2, &base, 50, BuildOptions { deep_anti_landmarks: true })?;
    println!(
        "depth-{} table: {} states, {} landmarks (threshold {}), {} anti-landmarks",
        table.depth,
        table.entries.len(),
        table.landmarks.len(),
        table.landmark_threshold,
        table.anti_landmarks.len()
    );

    let dir = std::env::temp_dir().join("soma-landmark-example");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("table.lmk");
    table.save(&path)?;
    let table = LandmarkTable::load(&path)?;

    let first = table.query_solve(&base.clone().first_solution())?;
    println!("first solution after {} nodes", first.stats.total_nodes);
    let all = table.query_solve(&base.clone().exhaustive())?;
    println!(
        "exhaustive: {} solutions ({} credited by landmark jumps) in {} nodes",
        all.solutions_total, all.stats.credited_solutions, all.stats.total_nodes
    );
    let bound = table.effective_bf_upper_bound(0);
    println!("tree after anti-landmark deletion: {} of {} nodes", bound.total_nodes, bound.unpruned_total_nodes);
    Ok(())
}
