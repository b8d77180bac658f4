use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use seanav::gridworld::procedural::{self, ProceduralConfig};
use seanav::gridworld::{sample_endpoints, DestinationCircle, EndpointSampler, GeoMap, Georef, MapError, Position};
use seanav::harness::{
    density_map, evaluate, stream, toy_experiment, train, write_metrics_csv, write_pgm, write_toy_csv, HarnessError,
    Stream, ToyConfig, TrainConfig,
};
use seanav::neural::Checkpoint;
use seanav::planner::{lardp, load_or_build, rdp, ApspTables, PlanError, Simplifier, WeightMode};

const EXIT_CONFIG: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;

#[derive(Parser)]
#[command(name = "seanav", version, about = "Vessel path planning and RL navigation workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train an agent and write metrics, checkpoints and the best batch.
    Train(TrainArgs),
    /// Evaluate a checkpoint greedily on a map.
    Eval(EvalArgs),
    /// Plan waypoints between two positions.
    Plan(PlanArgs),
    /// Count planner path visits per cell and render them as a PGM.
    Density(DensityArgs),
    /// Run the wall-map rotation ablation.
    Toy(ToyArgs),
    /// Generate a procedural map.
    Genmap(GenmapArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum PlannerArg {
    Floyd,
    Modified,
}

#[derive(Clone, Copy, ValueEnum)]
enum SimplifyArg {
    Rdp,
    Lardp,
}

#[derive(Args)]
struct MapArgs {
    #[arg(long)]
    map: PathBuf,
    #[arg(long, value_enum, default_value = "floyd")]
    planner: PlannerArg,
    #[arg(long, value_enum, default_value = "lardp")]
    simplify: SimplifyArg,
    #[arg(long, default_value_t = 0.01)]
    max_dist: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct TrainArgs {
    #[command(flatten)]
    common: MapArgs,
    #[arg(long, default_value = "a1")]
    agent: String,
    #[arg(long, default_value_t = 4)]
    batches: usize,
    /// Training plans per batch.
    #[arg(long, default_value_t = 200)]
    plans: usize,
    #[arg(long, default_value_t = 100)]
    test_plans: usize,
    #[arg(long, default_value_t = 30)]
    obstacles: usize,
    #[arg(long, default_value_t = 1)]
    train_every: usize,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    common: MapArgs,
    #[arg(long)]
    checkpoint: PathBuf,
    #[arg(long, default_value_t = 100)]
    plans: usize,
    #[arg(long, default_value_t = 30)]
    obstacles: usize,
}

#[derive(Args)]
struct PlanArgs {
    #[command(flatten)]
    common: MapArgs,
    /// Origin as `lon,lat`; sampled from the seed when omitted.
    #[arg(long, requires = "to")]
    from: Option<String>,
    #[arg(long, requires = "from")]
    to: Option<String>,
    #[arg(long, default_value_t = 0.0025)]
    threshold: f64,
}

#[derive(Args)]
struct DensityArgs {
    #[command(flatten)]
    common: MapArgs,
    /// Endpoint pairs to sample.
    #[arg(long, default_value_t = 1000)]
    plans: usize,
}

#[derive(Args)]
struct ToyArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    epochs: usize,
    #[arg(long, default_value_t = 200)]
    episodes: usize,
    #[arg(long, default_value_t = 100)]
    test_episodes: usize,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct GenmapArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 40)]
    width: usize,
    #[arg(long, default_value_t = 40)]
    height: usize,
    #[arg(long, default_value_t = 0.35)]
    land_fraction: f64,
    #[arg(long, default_value_t = 0.0005)]
    cell_size: f64,
    /// Output map file.
    #[arg(long, default_value = "map.txt")]
    out: PathBuf,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Infeasible(String),
    #[error("{0}")]
    Other(String),
}

impl From<HarnessError> for CliError {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Config(_) | HarnessError::Map(_) => CliError::Config(e.to_string()),
            HarnessError::InfeasibleMap(_) => CliError::Infeasible(e.to_string()),
            HarnessError::Plan(PlanError::Unreachable) => CliError::Infeasible(e.to_string()),
            HarnessError::Plan(PlanError::NotWater { .. }) => CliError::Config(e.to_string()),
            e => CliError::Other(e.to_string()),
        }
    }
}

impl From<PlanError> for CliError {
    fn from(e: PlanError) -> Self {
        HarnessError::from(e).into()
    }
}

impl From<MapError> for CliError {
    fn from(e: MapError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Other(e.to_string())
    }
}

impl MapArgs {
    fn weights(&self) -> WeightMode {
        match self.planner {
            PlannerArg::Floyd => WeightMode::Plain,
            PlannerArg::Modified => WeightMode::modified(),
        }
    }

    fn simplifier(&self) -> Simplifier {
        match self.simplify {
            SimplifyArg::Rdp => Simplifier::Rdp,
            SimplifyArg::Lardp => Simplifier::Lardp,
        }
    }

    /// Loads the map and its planner tables, caching the tables in `out`.
    fn load(&self) -> Result<(GeoMap, ApspTables), CliError> {
        let map = GeoMap::load(&self.map).map_err(|e| CliError::Config(format!("{}: {e}", self.map.display())))?;
        fs::create_dir_all(&self.out)?;
        let tables = load_or_build(&map, self.weights(), Some(&self.out))?;
        Ok((map, tables))
    }

    fn train_config(&self) -> TrainConfig {
        TrainConfig {
            max_dist: self.max_dist,
            seed: self.seed,
            weights: self.weights(),
            simplifier: self.simplifier(),
            ..TrainConfig::default()
        }
    }
}

fn parse_position(s: &str) -> Result<Position, CliError> {
    let bad = || CliError::Config(format!("expected lon,lat, got {s:?}"));
    let (lon, lat) = s.split_once(',').ok_or_else(bad)?;
    Ok(Position::new(lon.trim().parse().map_err(|_| bad())?, lat.trim().parse().map_err(|_| bad())?))
}

fn run_train(args: &TrainArgs) -> Result<(), CliError> {
    let (map, tables) = args.common.load()?;
    let cfg = TrainConfig {
        agent: args.agent.parse()?,
        batches: args.batches,
        train_plans: args.plans,
        test_plans: args.test_plans,
        n_obstacles: args.obstacles,
        train_every: args.train_every,
        ..args.common.train_config()
    };
    let report = train(&cfg, &map, &tables, Some(&args.common.out))?;
    for r in &report.rows {
        println!("batch {} ratd {:.2}", r.batch, r.ratd);
    }
    println!("best batch {}", report.best);
    Ok(())
}

fn run_eval(args: &EvalArgs) -> Result<(), CliError> {
    let (map, tables) = args.common.load()?;
    let ck = Checkpoint::load(&args.checkpoint)
        .map_err(|e| CliError::Config(format!("{}: {e}", args.checkpoint.display())))?;
    let cfg = TrainConfig { test_plans: args.plans, n_obstacles: args.obstacles, ..args.common.train_config() };
    let row = evaluate(&ck, &cfg, &map, &tables)?;
    write_metrics_csv(&[row], &args.common.out.join("metrics.csv"))?;
    println!("ratd {:.2}", row.ratd);
    Ok(())
}

fn run_plan(args: &PlanArgs) -> Result<(), CliError> {
    let (map, tables) = args.common.load()?;
    let (origin, dest) = match (&args.from, &args.to) {
        (Some(f), Some(t)) => (parse_position(f)?, parse_position(t)?),
        _ => {
            let sampler = EndpointSampler { max_dist: args.common.max_dist, ..EndpointSampler::default() };
            let mut rng = stream(args.common.seed, Stream::Endpoints);
            let (o, DestinationCircle { center, .. }) = sample_endpoints(&map, &sampler, &tables.reach(&map), &mut rng)
                .map_err(|e| CliError::Infeasible(e.to_string()))?;
            (o, center)
        }
    };
    let cell =
        |p: &Position| map.locate(p).ok_or_else(|| CliError::Config(format!("({}, {}) is off the map", p.lon, p.lat)));
    let path = tables.shortest_path(&map, cell(&origin)?, cell(&dest)?)?;
    let waypoints = match args.common.simplifier() {
        Simplifier::Rdp => rdp(&path, args.threshold),
        Simplifier::Lardp => lardp(&path, args.threshold, &map),
    };
    let mut csv = String::from("lon,lat\n");
    for p in &waypoints {
        csv.push_str(&format!("{},{}\n", p.lon, p.lat));
    }
    fs::write(args.common.out.join("waypoints.csv"), &csv)?;
    print!("{csv}");
    Ok(())
}

fn run_density(args: &DensityArgs) -> Result<(), CliError> {
    let (map, tables) = args.common.load()?;
    let d = density_map(&map, &tables, args.plans, args.common.max_dist, args.common.seed)?;
    let mut buf = Vec::new();
    write_pgm(&d, &mut buf)?;
    fs::write(args.common.out.join("density.pgm"), buf)?;
    println!("distinct cells {}", d.distinct_cells());
    Ok(())
}

fn run_toy(args: &ToyArgs) -> Result<(), CliError> {
    let cfg = ToyConfig {
        epochs: args.epochs,
        train_episodes: args.episodes,
        test_episodes: args.test_episodes,
        seed: args.seed,
        ..ToyConfig::default()
    };
    let rows = toy_experiment(&cfg)?;
    fs::create_dir_all(&args.out)?;
    fs::write(args.out.join("toy_results.csv"), write_toy_csv(&rows))?;
    Ok(())
}

fn run_genmap(args: &GenmapArgs) -> Result<(), CliError> {
    if args.width == 0 || args.height == 0 || !(0.0..1.0).contains(&args.land_fraction) {
        return Err(CliError::Config("width and height must be positive, land fraction in [0, 1)".into()));
    }
    if !(args.cell_size.is_finite() && args.cell_size > 0.0) {
        return Err(CliError::Config(format!("cell size must be positive, got {}", args.cell_size)));
    }
    let cfg = ProceduralConfig {
        width: args.width,
        height: args.height,
        land_fraction: args.land_fraction,
        georef: Georef { cell_size: args.cell_size, ..Georef::default() },
        ..ProceduralConfig::default()
    };
    let map = procedural::generate(&cfg, &mut stream(args.seed, Stream::MapGen));
    if map.water_indices().len() < 2 {
        return Err(CliError::Infeasible("generated map has fewer than two water cells".into()));
    }
    if let Some(dir) = args.out.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    map.save(Path::new(&args.out))?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Train(a) => run_train(a),
        Command::Eval(a) => run_eval(a),
        Command::Plan(a) => run_plan(a),
        Command::Density(a) => run_density(a),
        Command::Toy(a) => run_toy(a),
        Command::Genmap(a) => run_genmap(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                CliError::Config(_) => EXIT_CONFIG,
                CliError::Infeasible(_) => EXIT_INFEASIBLE,
                CliError::Other(_) => 1,
            })
        }
    }
}
