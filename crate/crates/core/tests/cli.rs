use std::path::Path;
use std::process::{Command, Output};

fn soma(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_soma"))
        .arg("--out-dir")
        .arg(dir)
        .args(args)
        .env_remove("SOMA_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn nodes(dir: &Path) -> u64 {
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.join("solve_stats.json")).unwrap()).unwrap();
    v["stats"]["total_nodes"].as_u64().unwrap()
}

#[test]
fn effective_bf_prints_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = soma(dir.path(), &["effective-bf", "--nodes", "127"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "2.0");
    assert!(dir.path().join("effective-bf.manifest.json").exists());
}

#[test]
fn exhaustive_solve_reports_240() {
    let dir = tempfile::tempdir().unwrap();
    let o = soma(dir.path(), &["solve", "--ordering", "cell", "--exhaustive"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("canonical 240"));
    let text = std::fs::read_to_string(dir.path().join("solutions.txt")).unwrap();
    assert_eq!(text.lines().count(), 240);
}

#[test]
fn seeded_solve_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = soma(dir.path(), &["--seed", "42", "solve", "--ordering", "random"]);
    let b = soma(dir.path(), &["--seed", "42", "solve", "--ordering", "random"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let first = stdout(&a).lines().next().unwrap().to_string();
    assert_eq!(first.len(), 27);
}

#[test]
fn pruning_never_costs_nodes() {
    let dir = tempfile::tempdir().unwrap();
    assert!(soma(dir.path(), &["solve", "--ordering", "mcv"]).status.success());
    let plain = nodes(dir.path());
    assert!(soma(dir.path(), &["solve", "--ordering", "mcv", "--prune"]).status.success());
    assert!(nodes(dir.path()) <= plain);
}

#[test]
fn encode_cnf_header() {
    let dir = tempfile::tempdir().unwrap();
    let o = soma(dir.path(), &["encode-cnf", "--out", "soma.cnf"]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(dir.path().join("soma.cnf")).unwrap();
    let header = text.lines().find(|l| l.starts_with("p cnf")).unwrap();
    let clauses: u64 = header.split_whitespace().nth(3).unwrap().parse().unwrap();
    assert!(clauses > 150_000);
}

#[test]
fn landmark_build_and_query() {
    let dir = tempfile::tempdir().unwrap();
    assert!(soma(dir.path(), &["landmarks", "build", "--depth", "2", "--limit", "20", "--out", "t.json"]).status.success());
    let table = dir.path().join("t.json");
    let o = soma(dir.path(), &["solve", "--landmarks", table.to_str().unwrap()]);
    assert!(o.status.success());
    let o = soma(dir.path(), &["landmarks", "query", "--table", table.to_str().unwrap(), "--exhaustive"]);
    assert!(stdout(&o).contains("solutions 11520"));
}

#[test]
fn zoo_writes_histograms() {
    let dir = tempfile::tempdir().unwrap();
    let o = soma(dir.path(), &["zoo", "--puzzle", "magic"]);
    assert!(o.status.success());
    let csv = std::fs::read_to_string(dir.path().join("zoo_histogram.csv")).unwrap();
    assert!(csv.starts_with("puzzle,depth,out_degree,count"));
    let manifest = std::fs::read_to_string(dir.path().join("zoo.manifest.json")).unwrap();
    assert!(manifest.contains("zoo_histogram.csv"));
}

#[test]
fn errors_are_json_with_distinct_codes() {
    let dir = tempfile::tempdir().unwrap();
    let usage = soma(dir.path(), &["solve", "--ordering", "sideways"]);
    assert_eq!(usage.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&usage.stderr).unwrap();
    assert_eq!(v["error"], "usage");

    std::fs::write(dir.path().join("bad.lmk"), b"junk").unwrap();
    let bad = dir.path().join("bad.lmk");
    let parse = soma(dir.path(), &["solve", "--landmarks", bad.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_slice(&parse.stderr).unwrap();
    assert_ne!(parse.status.code(), Some(0));
    assert_ne!(parse.status.code(), Some(2));
    assert_eq!(v["exit_code"].as_i64(), parse.status.code().map(i64::from));

    let escape = soma(dir.path(), &["encode-cnf", "--out", "../outside.cnf"]);
    assert_eq!(escape.status.code(), Some(2));
    assert!(!dir.path().parent().unwrap().join("outside.cnf").exists());
}
