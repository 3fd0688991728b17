use soma::metrics::{branching_profile, BranchingModel, SamplerSettings};

fn main() -> soma::Result<()> {
    let samples = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2_000);
    for model in [BranchingModel::RandomPosition, BranchingModel::ConfigurationGraph] {
        let p = branching_profile(&SamplerSettings::new(model, samples, 1))?;
        println!("{} ({samples} walks per depth)", model.name());
        println!("  depth      mean  variance  nonterminal  weighted");
        for s in &p.per_depth {
            println!(
                "  {:>5} {:>9.3} {:>9.3} {:>12.3} {:>9.3}",
                s.depth, s.mean, s.variance, s.nonterminal_mean, s.weighted_mean
            );
        }
        println!("  overall {:.3}, 95% CI [{:.3}, {:.3}] ({})", p.overall_mean, p.ci95.0, p.ci95.1, p.ci_method);
        println!("  node-weighted {:.3}, nonterminal per-depth {:.3}\n", p.overall.node_weighted, p.overall.per_depth_nonterminal);
    }
    Ok(())
}
