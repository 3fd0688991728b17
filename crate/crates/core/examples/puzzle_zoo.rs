//! Branching profiles of the comparison puzzles.

use soma::zoo::*;

fn show(p: &ZooProfile) {
    let fmt = |v: &[f64]| v.iter().map(|m| format!("{m:.2}")).collect::<Vec<_>>().join(" ");
    println!("{} (depth measure {:?})", p.puzzle, p.depth_measure);
    println!("  all states:   {}", fmt(&p.per_depth_mean));
    println!("  with moves:   {}", fmt(&p.per_depth_nonterminal_mean));
}

fn main() -> soma::Result<()> {
    let walks = ProfileMethod::RandomWalk { walks: 2_000, length: 16, seed: 3 };
    show(&zoo_profile(&EightPuzzle::standard(false), walks)?);
    show(&zoo_profile(&EightPuzzle::standard(true), walks)?);
    show(&zoo_profile(&EightPuzzle::torus(EIGHT_REVERSED, true)?, walks)?);
    show(&zoo_profile(&MagicSquare, ProfileMethod::Exhaustive { max_depth: 9 })?);
    show(&zoo_profile(&Slothouber, ProfileMethod::Exhaustive { max_depth: 9 })?);

    let d = EightPuzzle::standard(false).diameter().clone();
    println!("8-puzzle: {} boards, eccentricity {}, farthest {:?}", d.reachable, d.eccentricity, d.farthest);

    let sg = sg_solutions();
    let recount = sg_recount();
    println!("Slothouber-Graatsma: {} packings, {} up to symmetry (recount {})", sg.raw, sg.canonical.len(), recount.canonical.len());
    let squares: std::collections::BTreeSet<_> =
        goal_states(&MagicSquare).iter().map(|s| canonical_square(&s.cells)).collect();
    println!("magic squares up to symmetry: {}", squares.len());
    Ok(())
}
