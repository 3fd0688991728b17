//! Where do first-solution searches back up? Backtracks per depth, summed
//! over a batch of seeds, for the randomized and cell-ordered strategies.

use soma::search::{backtrack_histogram, modal_depth, solve, SearchStats, StrategyConfig, VariableOrdering};

fn main() -> soma::Result<()> {
    let seeds = 100;
    for ordering in [VariableOrdering::Randomized, VariableOrdering::CellOrdered, VariableOrdering::Mcv] {
        let mut total = SearchStats::default();
        for seed in 0..seeds {
            total.merge(&solve(&StrategyConfig::new(ordering).seed(seed)).stats);
        }
        let h = backtrack_histogram(&total)?;
        let bars: Vec<String> = h.iter().map(|p| format!("{:5.3}", p)).collect();
        println!("{:<7} modal depth {}  [{}]", ordering.name(), modal_depth(&h), bars.join(" "));
    }
    Ok(())
}
