//! Preprocessing cost against query cost as the landmark table grows.

use soma::landmarks::{tradeoff_sweep, write_tradeoff_csv};
use soma::search::{StrategyConfig, VariableOrdering};

fn main() -> soma::Result<()> {
    let base = StrategyConfig::new(VariableOrdering::CellOrdered);
    let records = tradeoff_sweep(&[2, 3], &[0, 10, 100, 1000], &base)?;
    write_tradeoff_csv(std::io::stdout().lock(), &records)?;
    for r in &records {
        println!(
            "depth {} k={:<5} query nodes {:>7} (table-depth anti-landmarks only: {})",
            r.depth, r.num_landmarks, r.query_nodes, r.query_nodes_table_depth_only
        );
    }
    Ok(())
}
