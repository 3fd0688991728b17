use std::collections::{BTreeMap, BTreeSet};

use soma::search::{solve, StrategyConfig, VariableOrdering};
use soma::zoo::*;

#[test]
fn eight_puzzle_non_backtracking_counts() {
    let p = EightPuzzle::standard(true);
    for blank in 0..9u8 {
        for prev in p.neighbors(blank) {
            let mut s = p.start();
            s.board.swap(s.blank as usize, blank as usize);
            s.blank = blank;
            s.prev_blank = Some(prev);
            let expected = match square_kind(blank) {
                Square::Corner => 1,
                Square::Side => 2,
                Square::Center => 3,
            };
            assert_eq!(p.successors(&s).len(), expected);
        }
    }
}

#[test]
fn walks_never_undo_the_last_move() {
    let p = EightPuzzle::standard(true);
    for seed in 0..500 {
        let blanks: Vec<u8> = random_walk(&p, &p.start(), 50, seed).iter().map(|s| s.blank).collect();
        assert_eq!(blanks.len(), 51);
        assert!(blanks.windows(3).all(|w| w[0] != w[2]));
    }
}

#[test]
fn diameter_is_31_with_two_farthest_boards() {
    let d = EightPuzzle::standard(false).diameter().clone();
    assert_eq!(d.reachable, 181_440);
    assert_eq!(d.eccentricity, 31);
    assert_eq!(d.farthest.len(), 2);
    assert_eq!(d.layer_sizes.iter().sum::<usize>(), 181_440);
}

#[test]
fn torus_branching_is_constant() {
    let p = EightPuzzle::torus(EIGHT_REVERSED, true).unwrap();
    let profile = zoo_profile(&p, ProfileMethod::RandomWalk { walks: 200, length: 30, seed: 2 }).unwrap();
    assert_eq!(profile.per_depth_mean[0], 4.0);
    assert!(profile.per_depth_mean[1..].iter().all(|&m| m == 3.0));
}

#[test]
fn magic_square_solutions() {
    let goals = goal_states(&MagicSquare);
    assert_eq!(goals.len(), 8);
    assert!(goals.iter().all(|s| MagicSquare::is_magic(&s.cells)));
    let classes: BTreeSet<_> = goals.iter().map(|s| canonical_square(&s.cells)).collect();
    assert_eq!(classes.len(), 1);

    // brute force over all 9! grids
    let mut digits = [1u8, 2, 3, 4, 5, 6, 7, 8, 9];
    let mut count = 0;
    permute(&mut digits, 0, &mut |g| count += MagicSquare::is_magic(g) as usize);
    assert_eq!(count, 8);
}

fn permute(a: &mut [u8; 9], k: usize, f: &mut impl FnMut(&[u8; 9])) {
    if k == a.len() {
        f(a);
        return;
    }
    for i in k..a.len() {
        a.swap(k, i);
        permute(a, k + 1, f);
        a.swap(k, i);
    }
}

#[test]
fn magic_square_profile_shape() {
    let p = zoo_profile(&MagicSquare, ProfileMethod::Exhaustive { max_depth: 9 }).unwrap();
    assert_eq!(p.per_depth_mean[0], 9.0);
    assert_eq!(p.goal_states[9], 8);
    assert_eq!(p.per_depth_nonterminal_mean, vec![9.0, 8.0, 7.0, 6.0, 5.0, 1.0, 1.0, 1.0, 1.0]);
}

#[test]
fn slothouber_recount_agrees() {
    let a = sg_solutions();
    let b = sg_recount();
    assert_eq!(a.raw, b.raw);
    assert_eq!(a.canonical, b.canonical);
    assert!(goal_states(&Slothouber).iter().all(|s| s.blocks == 6 && s.units == 3));
}

#[test]
fn partition_key_ignores_block_numbering() {
    let goal = goal_states(&Slothouber)[0];
    let mut relabeled = goal.labels;
    for l in relabeled.iter_mut() {
        if (1..=6).contains(l) {
            *l = 7 - *l;
        }
    }
    assert_eq!(
        soma::canon::canonical_partition_key(&relabeled, 1..=6),
        goal.canonical_key()
    );
}

#[test]
fn generic_soma_matches_native_engine() {
    for pruning in [false, true] {
        let space = SomaSpace::new(VariableOrdering::CellOrdered, pruning).unwrap();
        let generic = zoo_profile(&space, ProfileMethod::Exhaustive { max_depth: 7 }).unwrap();
        let native = solve(&StrategyConfig::new(VariableOrdering::CellOrdered).pruning(pruning).exhaustive()).stats;
        for d in 0..7 {
            let h: BTreeMap<u32, u64> = native.out_degree_histogram[d]
                .iter()
                .enumerate()
                .filter(|(_, &n)| n > 0)
                .map(|(k, &n)| (k as u32, n))
                .collect();
            assert_eq!(h, generic.histograms[d], "depth {d}, pruning {pruning}");
        }
        assert_eq!(generic.goal_states[7], 11_520);
    }
    assert!(SomaSpace::new(VariableOrdering::Randomized, false).is_err());
}

#[test]
fn zoo_csv_has_puzzle_column() {
    let a = zoo_profile(&MagicSquare, ProfileMethod::Exhaustive { max_depth: 3 }).unwrap();
    let b = zoo_profile(&Slothouber, ProfileMethod::Exhaustive { max_depth: 2 }).unwrap();
    let mut out = Vec::new();
    write_zoo_csv(&mut out, &[a, b]).unwrap();
    let text = String::from_utf8(out).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("puzzle")).count(), 1);
    assert!(text.contains("magic-square,0,9,1"));
    assert!(text.contains("slothouber-graatsma,0,4,1"));
}
