use std::fs;
use std::path::{Component, Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use soma::canon::{canonicalize, write_solutions, CanonicalSolution};
use soma::landmarks::{build_table, tradeoff_sweep, write_tradeoff_csv, BuildOptions, LandmarkTable};
use soma::metrics::{branching_profile, effective_bf, write_histogram_csv, BranchingModel, SamplerSettings};
use soma::sat::{decode, encode, enumerate_models, expected_clause_counts, write_dimacs, BlockingMode};
use soma::search::{solve, StrategyConfig, VariableOrdering};
use soma::zoo::{write_zoo_csv, zoo_profile, EightPuzzle, MagicSquare, ProfileMethod, Slothouber, SomaSpace, ZooProfile};
use soma::{enumerate_all_solutions, Catalog, Error, Result};

#[derive(Parser, Debug, Serialize)]
#[command(name = "soma", version, about = "Soma cube search laboratory")]
struct Cli {
    /// Seed for every random choice in the run.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Directory that receives every output file.
    #[arg(long, global = true, env = "SOMA_OUT_DIR", default_value = "soma-out")]
    out_dir: PathBuf,
    /// Worker threads for parallel stages.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Run one search strategy.
    Solve(SolveArgs),
    /// Sample the branching profile.
    SampleBf(SampleArgs),
    /// Effective branching factor of a node count.
    EffectiveBf {
        #[arg(long)]
        nodes: f64,
    },
    /// Write the CNF encoding in DIMACS format.
    EncodeCnf {
        #[arg(long, default_value = "soma.cnf")]
        out: PathBuf,
    },
    /// Build, sweep or query landmark tables.
    #[command(subcommand)]
    Landmarks(LandmarkCommand),
    /// Branching profiles of the comparison puzzles.
    Zoo(ZooArgs),
    /// Enumerate every solution.
    Enumerate {
        /// Also enumerate SAT models and compare.
        #[arg(long)]
        sat: bool,
    },
}

#[derive(Args, Debug, Serialize)]
struct StrategyArgs {
    #[arg(long, default_value = "cell")]
    ordering: VariableOrdering,
    #[arg(long)]
    prune: bool,
}

impl StrategyArgs {
    fn config(&self, seed: u64) -> StrategyConfig {
        StrategyConfig::new(self.ordering).pruning(self.prune).seed(seed)
    }
}

#[derive(Args, Debug, Serialize)]
struct SolveArgs {
    #[command(flatten)]
    strategy: StrategyArgs,
    /// Landmark table produced by `landmarks build`.
    #[arg(long)]
    landmarks: Option<PathBuf>,
    /// Visit the whole tree instead of stopping at the first solution.
    #[arg(long)]
    exhaustive: bool,
}

#[derive(Args, Debug, Serialize)]
struct SampleArgs {
    #[arg(long, default_value = "configuration_graph")]
    model: BranchingModel,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum LandmarkCommand {
    Build {
        #[command(flatten)]
        strategy: StrategyArgs,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[arg(long, default_value_t = 100)]
        limit: usize,
        /// Keep only anti-landmarks at the table depth.
        #[arg(long)]
        shallow: bool,
        /// File name; `.json` selects the JSON form, anything else the binary form.
        #[arg(long, default_value = "landmarks.lmk")]
        out: PathBuf,
    },
    Sweep {
        #[command(flatten)]
        strategy: StrategyArgs,
        #[arg(long, value_delimiter = ',', default_value = "2,3")]
        depths: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "0,10,100,1000")]
        counts: Vec<usize>,
    },
    Query {
        #[arg(long)]
        table: PathBuf,
        #[arg(long)]
        exhaustive: bool,
    },
}

#[derive(Args, Debug, Serialize)]
struct ZooArgs {
    /// eight, eight-nb, torus, magic, sg, soma or all.
    #[arg(long, default_value = "all")]
    puzzle: String,
    #[arg(long, default_value_t = 10_000)]
    walks: usize,
    #[arg(long, default_value_t = 50)]
    length: usize,
}

#[derive(Serialize)]
struct RunManifest<'a> {
    subcommand: &'a str,
    config: &'a Cli,
    seeds: Vec<u64>,
    version: &'static str,
    inputs: Vec<String>,
    outputs: Vec<String>,
    started_unix_ms: u128,
    finished_unix_ms: u128,
}

struct Run {
    out_dir: PathBuf,
    manifest_name: String,
    inputs: Vec<String>,
    outputs: Vec<String>,
}

impl Run {
    /// Resolves a file name inside the output directory.
    fn path(&self, name: &Path) -> Result<PathBuf> {
        let inside = name.components().all(|c| matches!(c, Component::Normal(_) | Component::CurDir));
        if !inside {
            return Err(Error::InvalidArgument(format!(
                "{} must be a relative path inside the output directory",
                name.display()
            )));
        }
        Ok(self.out_dir.join(name))
    }

    fn write(&mut self, name: &str, bytes: &[u8]) -> Result<PathBuf> {
        let path = self.path(Path::new(name))?;
        fs::write(&path, bytes)?;
        self.outputs.push(path.display().to_string());
        Ok(path)
    }

    fn write_json(&mut self, name: &str, mut value: Value) -> Result<PathBuf> {
        if let Value::Object(map) = &mut value {
            map.insert("manifest".into(), Value::String(self.manifest_name.clone()));
        }
        self.write(name, serde_json::to_string_pretty(&value)?.as_bytes())
    }
}

fn now_ms() -> u128 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_millis())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.render().to_string();
            eprintln!("{}", json!({ "error": "usage", "message": msg.trim(), "exit_code": 2 }));
            return ExitCode::from(2);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", json!({ "error": e.kind(), "message": e.to_string(), "exit_code": e.exit_code() }));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn subcommand_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Solve(_) => "solve",
        Command::SampleBf(_) => "sample-bf",
        Command::EffectiveBf { .. } => "effective-bf",
        Command::EncodeCnf { .. } => "encode-cnf",
        Command::Landmarks(LandmarkCommand::Build { .. }) => "landmarks-build",
        Command::Landmarks(LandmarkCommand::Sweep { .. }) => "landmarks-sweep",
        Command::Landmarks(LandmarkCommand::Query { .. }) => "landmarks-query",
        Command::Zoo(_) => "zoo",
        Command::Enumerate { .. } => "enumerate",
    }
}

fn run(cli: &Cli) -> Result<()> {
    if cli.threads == 0 {
        return Err(Error::InvalidArgument("--threads must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build_global()
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    fs::create_dir_all(&cli.out_dir)?;
    let name = subcommand_name(&cli.command);
    let started = now_ms();
    let mut run = Run {
        out_dir: cli.out_dir.clone(),
        manifest_name: format!("{name}.manifest.json"),
        inputs: Vec::new(),
        outputs: Vec::new(),
    };
    dispatch(cli, &mut run)?;
    let manifest = RunManifest {
        subcommand: name,
        config: cli,
        seeds: vec![cli.seed],
        version: env!("CARGO_PKG_VERSION"),
        inputs: run.inputs.clone(),
        outputs: run.outputs.clone(),
        started_unix_ms: started,
        finished_unix_ms: now_ms(),
    };
    let path = run.path(Path::new(&run.manifest_name))?;
    fs::write(path, serde_json::to_string_pretty(&manifest)?)?;
    Ok(())
}

fn dispatch(cli: &Cli, run: &mut Run) -> Result<()> {
    match &cli.command {
        Command::Solve(args) => cmd_solve(cli, args, run),
        Command::SampleBf(args) => {
            let settings = SamplerSettings::new(args.model, args.samples, cli.seed);
            let profile = branching_profile(&settings)?;
            for s in &profile.per_depth {
                println!("depth {} mean {:.4} variance {:.4}", s.depth, s.mean, s.variance);
            }
            println!("overall mean {:.4} ci95 [{:.4}, {:.4}]", profile.overall_mean, profile.ci95.0, profile.ci95.1);
            let mut csv = Vec::new();
            let rows = profile
                .per_depth_samples
                .iter()
                .flat_map(|s| s.histogram().into_iter().map(move |(k, c)| (s.depth, k, c as f64)));
            write_histogram_csv(&mut csv, None, rows)?;
            run.write("branching_histogram.csv", &csv)?;
            let summary = json!({
                "model": args.model.name(),
                "per_depth": profile.per_depth,
                "overall": profile.overall,
                "overall_mean": profile.overall_mean,
                "ci95": profile.ci95,
                "ci_method": profile.ci_method,
                "estimator": profile.estimator,
                "generator": profile.generator,
            });
            run.write_json("branching_profile.json", summary)?;
            Ok(())
        }
        Command::EffectiveBf { nodes } => {
            let b = effective_bf(*nodes)?;
            println!("{b:?}");
            run.write_json("effective_bf.json", json!({ "nodes": nodes, "b_star": b }))?;
            Ok(())
        }
        Command::EncodeCnf { out } => {
            let formula = encode();
            let catalog = Catalog::soma();
            let mut text = Vec::new();
            write_dimacs(&mut text, &formula, catalog)?;
            let path = run.write(&out.to_string_lossy(), &text)?;
            let counts = expected_clause_counts(catalog);
            println!("{}: {} variables, {} clauses", path.display(), formula.num_vars, formula.clauses.len());
            run.write_json(
                "cnf_stats.json",
                json!({ "variables": formula.num_vars, "clauses": formula.clauses.len(), "expected": counts }),
            )?;
            Ok(())
        }
        Command::Landmarks(sub) => cmd_landmarks(cli, sub, run),
        Command::Zoo(args) => cmd_zoo(cli, args, run),
        Command::Enumerate { sat } => {
            let e = enumerate_all_solutions();
            println!("raw solutions {}, canonical {}", e.raw_count, e.solutions.len());
            let mut text = Vec::new();
            write_solutions(&mut text, &e.solutions)?;
            run.write("solutions.txt", &text)?;
            let mut report = json!({ "raw": e.raw_count, "canonical": e.solutions.len() });
            if *sat {
                let models = enumerate_models(&encode(), BlockingMode::TrueLiterals, None)?;
                let mut keys = models
                    .iter()
                    .map(|m| decode(m, Catalog::soma()).map(|s| canonicalize(&s)))
                    .collect::<Result<Vec<CanonicalSolution>>>()?;
                keys.sort();
                keys.dedup();
                let same = keys == e.solutions;
                println!("sat models {}, canonical {}, equal sets {}", models.len(), keys.len(), same);
                report["sat"] = json!({ "models": models.len(), "canonical": keys.len(), "equal": same });
            }
            run.write_json("enumeration.json", report)?;
            Ok(())
        }
    }
}

fn cmd_solve(cli: &Cli, args: &SolveArgs, run: &mut Run) -> Result<()> {
    let mut config = args.strategy.config(cli.seed);
    if args.exhaustive {
        config = config.exhaustive();
    }
    let (solutions, stats) = match &args.landmarks {
        Some(path) => {
            let table = load_table(path)?;
            run.inputs.push(path.display().to_string());
            let config = config.clone().with_landmarks(Arc::new(table.clone()));
            let q = table.query_solve(&config)?;
            (q.solutions, q.stats)
        }
        None => {
            let out = solve(&config);
            (out.solutions, out.stats)
        }
    };
    let mut canonical: Vec<CanonicalSolution> = solutions.iter().map(canonicalize).collect();
    canonical.sort();
    canonical.dedup();
    if args.exhaustive {
        println!("solutions {}, canonical {}", solutions.len(), canonical.len());
        let mut text = Vec::new();
        write_solutions(&mut text, &canonical)?;
        run.write("solutions.txt", &text)?;
    } else if let Some(s) = solutions.first() {
        let labels: String = s.labels().iter().map(|l| char::from(b'0' + l)).collect();
        println!("{labels}");
    } else {
        println!("no solution");
    }
    println!("total nodes {}", stats.total_nodes);
    run.write_json(
        "solve_stats.json",
        json!({ "strategy": config.label(), "stats": stats, "canonical_solutions": canonical.len() }),
    )?;
    Ok(())
}

fn load_table(path: &Path) -> Result<LandmarkTable> {
    if !path.exists() {
        return Err(Error::InvalidArgument(format!("landmark file {} does not exist", path.display())));
    }
    if path.extension().is_some_and(|e| e == "json") {
        LandmarkTable::from_json(&fs::read_to_string(path)?)
    } else {
        LandmarkTable::load(path)
    }
}

fn cmd_landmarks(cli: &Cli, sub: &LandmarkCommand, run: &mut Run) -> Result<()> {
    match sub {
        LandmarkCommand::Build { strategy, depth, limit, shallow, out } => {
            let table = build_table(
                *depth,
                &strategy.config(cli.seed),
                *limit,
                BuildOptions { deep_anti_landmarks: !*shallow },
            )?;
            let path = run.path(out)?;
            if out.extension().is_some_and(|e| e == "json") {
                fs::write(&path, table.to_json()?)?;
            } else {
                table.save(&path)?;
            }
            run.outputs.push(path.display().to_string());
            println!(
                "depth {}: {} states, {} landmarks, {} anti-landmarks, {} preprocessing nodes",
                table.depth,
                table.entries.len(),
                table.landmarks.len(),
                table.anti_landmarks.len(),
                table.preprocessing_nodes
            );
            Ok(())
        }
        LandmarkCommand::Sweep { strategy, depths, counts } => {
            let records = tradeoff_sweep(depths, counts, &strategy.config(cli.seed))?;
            for r in &records {
                println!(
                    "depth {} landmarks {:>5}: preprocessing {:>8} query {:>8}",
                    r.depth, r.num_landmarks, r.preprocessing_nodes, r.query_nodes
                );
            }
            let mut csv = Vec::new();
            write_tradeoff_csv(&mut csv, &records)?;
            run.write("landmark_sweep.csv", &csv)?;
            run.write_json("landmark_sweep.json", json!({ "anti_landmarks": "all depths", "records": records }))?;
            Ok(())
        }
        LandmarkCommand::Query { table, exhaustive } => {
            let t = load_table(table)?;
            run.inputs.push(table.display().to_string());
            let mut config = StrategyConfig::new(t.base.ordering).pruning(t.base.pruning).seed(cli.seed);
            if *exhaustive {
                config = config.exhaustive();
            }
            let q = t.query_solve(&config)?;
            println!("nodes {}, solutions {}", q.stats.total_nodes, q.solutions_total);
            run.write_json("landmark_query.json", json!({ "solutions_total": q.solutions_total, "stats": q.stats }))?;
            Ok(())
        }
    }
}

fn cmd_zoo(cli: &Cli, args: &ZooArgs, run: &mut Run) -> Result<()> {
    let walk = ProfileMethod::RandomWalk { walks: args.walks, length: args.length, seed: cli.seed };
    let mut profiles: Vec<ZooProfile> = Vec::new();
    let wanted = |p: &str| args.puzzle == "all" || args.puzzle == p;
    let known = ["all", "eight", "eight-nb", "torus", "magic", "sg", "soma"];
    if !known.contains(&args.puzzle.as_str()) {
        return Err(Error::InvalidArgument(format!("unknown puzzle {:?}", args.puzzle)));
    }
    if wanted("eight") {
        profiles.push(zoo_profile(&EightPuzzle::standard(false), walk)?);
    }
    if wanted("eight-nb") {
        profiles.push(zoo_profile(&EightPuzzle::standard(true), walk)?);
    }
    if wanted("torus") {
        profiles.push(zoo_profile(&EightPuzzle::torus(soma::zoo::EIGHT_REVERSED, true)?, walk)?);
    }
    if wanted("magic") {
        profiles.push(zoo_profile(&MagicSquare, ProfileMethod::Exhaustive { max_depth: 9 })?);
    }
    if wanted("sg") {
        profiles.push(zoo_profile(&Slothouber, ProfileMethod::Exhaustive { max_depth: 9 })?);
    }
    if wanted("soma") {
        let space = SomaSpace::new(VariableOrdering::CellOrdered, false)?;
        profiles.push(zoo_profile(&space, ProfileMethod::Exhaustive { max_depth: 7 })?);
    }
    for p in &profiles {
        let means: Vec<String> = p.per_depth_mean.iter().map(|m| format!("{m:.3}")).collect();
        println!("{:<20} depth measure {:?}: {}", p.puzzle, p.depth_measure, means.join(" "));
    }
    let mut csv = Vec::new();
    write_zoo_csv(&mut csv, &profiles)?;
    run.write("zoo_histogram.csv", &csv)?;
    run.write_json(
        "zoo_profiles.json",
        json!({
            "convention": "mean out-degree of non-goal states per depth; dead ends included in per_depth_mean, excluded in per_depth_nonterminal_mean",
            "profiles": profiles,
        }),
    )?;
    Ok(())
}
