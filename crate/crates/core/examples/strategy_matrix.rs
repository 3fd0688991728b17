use std::sync::Arc;

use soma::landmarks::{build_table, BuildOptions};
use soma::metrics::{strategy_matrix, write_matrix_csv};
use soma::search::{StrategyConfig, VariableOrdering};

fn main() -> soma::Result<()> {
    let seeds: Vec<u64> = (0..10).collect();
    let mut configs = Vec::new();
    for ordering in [VariableOrdering::Randomized, VariableOrdering::CellOrdered, VariableOrdering::Mcv] {
        let base = StrategyConfig::new(ordering).pruning(true);
        let table = Arc::new(build_table(2, &base, 100, BuildOptions { deep_anti_landmarks: true })?);
        configs.push(StrategyConfig::new(ordering));
        configs.push(StrategyConfig::new(ordering).pruning(true));
        configs.push(StrategyConfig::new(ordering).pruning(true).with_landmarks(table));
    }
    let m = strategy_matrix(&configs, &seeds)?;
    for c in &m.cells {
        println!("{:<32} mean N {:>10.1}  b* {}", c.strategy, c.mean_nodes, c.display);
    }
    if std::env::args().any(|a| a == "--csv") {
        write_matrix_csv(std::io::stdout().lock(), &m.rows)?;
    }
    Ok(())
}
