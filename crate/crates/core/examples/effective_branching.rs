//! Effective branching factor b* of a node count N, and the branching
//! figures of complete search trees.

use soma::metrics::{effective_bf, tree_branching};
use soma::search::{solve, StrategyConfig, VariableOrdering};

fn main() -> soma::Result<()> {
    for n in [7.0, 127.0, 1093.0, 19_251.0, 861_285.0] {
        println!("N = {n:>9}  b* = {:.4}", effective_bf(n)?);
    }
    println!();
    for (ordering, pruning) in [(VariableOrdering::CellOrdered, false), (VariableOrdering::Mcv, true)] {
        let config = StrategyConfig::new(ordering).pruning(pruning).exhaustive();
        let t = tree_branching(&solve(&config).stats)?;
        let ratio: Vec<String> = t.ratio.iter().map(|r| format!("{r:.2}")).collect();
        println!("{}: N = {}, b* = {:.3}", config.label(), t.total_nodes, t.b_star);
        println!("  children per node by depth: {}", ratio.join(" "));
        println!("  per-depth average {:.3}, nonterminal {:.3}", t.overall.per_depth, t.overall.per_depth_nonterminal);
    }
    Ok(())
}
