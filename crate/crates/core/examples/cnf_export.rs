//! Writes the CNF encoding as DIMACS (to the path given, or a temp file)
//! and reads it back.

use soma::sat::{encode, expected_clause_counts, parse_dimacs, write_dimacs};
use soma::Catalog;

fn main() -> soma::Result<()> {
    let catalog = Catalog::soma();
    let formula = encode();
    let counts = expected_clause_counts(catalog);
    println!("variables {}", formula.num_vars);
    println!(
        "clauses {} = {} + {} (pieces) + {} + {} (cells)",
        formula.clauses.len(),
        counts.piece_at_least_one,
        counts.piece_at_most_one,
        counts.cell_at_least_one,
        counts.cell_at_most_one
    );
    let path = std::env::args()
        .nth(1)
        .map(std::path::PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("soma.cnf"));
    write_dimacs(std::io::BufWriter::new(std::fs::File::create(&path)?), &formula, catalog)?;
    let back = parse_dimacs(&std::fs::read_to_string(&path)?)?;
    println!("wrote {}; round trip equal: {}", path.display(), back == formula);
    Ok(())
}
