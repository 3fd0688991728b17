//! Enumerates every Soma assembly and groups them into symmetry classes.

use soma::canon::write_solutions;
use soma::enumerate_all_solutions;

fn main() -> soma::Result<()> {
    let e = enumerate_all_solutions();
    println!("raw assemblies:      {}", e.raw_count);
    println!("canonical solutions: {}", e.solutions.len());
    let min = e.orbit_sizes.iter().min().copied().unwrap_or(0);
    let max = e.orbit_sizes.iter().max().copied().unwrap_or(0);
    println!("orbit sizes:         {min}..={max}");
    println!("first five:");
    write_solutions(std::io::stdout().lock(), &e.solutions[..5])?;
    Ok(())
}
