use soma::canon::canonicalize;
use soma::search::{solve, StrategyConfig, VariableOrdering};

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(7);
    println!("{:<22} {:>10} {:>10}  solution", "strategy", "nodes", "backtracks");
    for ordering in VariableOrdering::ALL {
        for pruning in [false, true] {
            let config = StrategyConfig::new(ordering).pruning(pruning).seed(seed);
            let out = solve(&config);
            let backtracks: u64 = out.stats.backtracks_per_depth.iter().sum();
            let found = out.solutions.first().map(|s| canonicalize(s).to_string()).unwrap_or_default();
            println!("{:<22} {:>10} {:>10}  {found}", config.label(), out.stats.total_nodes, backtracks);
        }
    }

    let all = solve(&StrategyConfig::new(VariableOrdering::Mcv).pruning(true).exhaustive());
    println!("\nmcv+prune exhaustive: {} solutions in {} nodes", all.solutions.len(), all.stats.total_nodes);
}
