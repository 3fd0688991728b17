use std::collections::BTreeSet;

use soma::canon::canonicalize;
use soma::sat::{decode, dpll_solve, encode, enumerate_models, model_record, BlockingMode, SatResult};
use soma::Catalog;

fn main() -> soma::Result<()> {
    let catalog = Catalog::soma();
    let formula = encode();
    if let SatResult::Sat(model) = dpll_solve(&formula) {
        let record = model_record(&model, catalog)?;
        println!("first model: {}", record.canonical);
        for p in &record.placements {
            println!("  x{:<4} {}", p.variable, p.name);
        }
    }
    let cap = std::env::args().nth(1).and_then(|s| s.parse().ok());
    let models = match enumerate_models(&formula, BlockingMode::TrueLiterals, cap) {
        Ok(models) => models,
        Err(partial) => {
            println!("stopped at the cap of {}", partial.budget);
            partial.partial
        }
    };
    let classes: BTreeSet<_> =
        models.iter().map(|m| decode(m, catalog).map(|s| canonicalize(&s))).collect::<soma::Result<_>>()?;
    println!("models {}, symmetry classes {}", models.len(), classes.len());
    Ok(())
}
