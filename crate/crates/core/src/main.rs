use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use netlearn::engine::Execution;
use netlearn::experiment::{
    analyze_summary, network_file, parse_config, read_summary_csv, replicate, run_plan, Figure,
    ReplicateOptions, RunOptions,
};
use netlearn::graph::{
    diameter, save_edge_list, Direction, Graph, Metric, NetworkKind, NetworkSpec, RewireBudget,
};
use netlearn::seed::{derive, TAG_GRAPH};
use netlearn::Result;

#[derive(Parser)]
#[command(
    name = "netlearn",
    version,
    about = "Social learning strategies on networks over NK landscapes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a network and write it as an edge list
    GenNet(GenNetArgs),
    /// Run an experiment plan
    Run(RunArgs),
    /// Replicate one figure and check its expected orderings
    Replicate(ReplicateArgs),
    /// Print correlations and ordering checks for a summary CSV
    Analyze(AnalyzeArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
enum BaseKind {
    Complete,
    Lattice,
    RandomRegular,
}

#[derive(Args)]
struct GenNetArgs {
    /// Metric to extremize by rewiring
    #[arg(long, value_parser = parse_via::<Metric>, requires = "dir", conflicts_with_all = ["kind", "all"])]
    metric: Option<Metric>,
    /// Optimization direction for --metric
    #[arg(long, value_parser = parse_via::<Direction>)]
    dir: Option<Direction>,
    /// Unrewired topology
    #[arg(long, value_enum, conflicts_with = "all")]
    kind: Option<BaseKind>,
    /// Generate the ten standard topologies into --out-dir
    #[arg(long, requires = "out_dir")]
    all: bool,
    #[arg(long, default_value_t = 100)]
    n: usize,
    #[arg(long, default_value_t = 19)]
    d: usize,
    /// Swap proposals per restart
    #[arg(long, default_value_t = 50_000)]
    iters: usize,
    #[arg(long, default_value_t = 10)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output edge-list file
    #[arg(long, required_unless_present = "all")]
    out: Option<PathBuf>,
    /// Output directory for --all
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Override the plan seed
    #[arg(long)]
    seed: Option<u64>,
    /// Override the plan repetition count
    #[arg(long)]
    reps: Option<usize>,
    /// Skip the per-repetition series files
    #[arg(long)]
    skip_series: bool,
    /// Run repetitions on one thread
    #[arg(long)]
    sequential: bool,
}

#[derive(Args)]
struct ReplicateArgs {
    #[arg(long, value_parser = parse_via::<Figure>)]
    figure: Figure,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = netlearn::experiment::DEFAULT_REPETITIONS)]
    reps: usize,
    /// Directory of precomputed edge lists (default: <out>/networks)
    #[arg(long)]
    networks: Option<PathBuf>,
    /// Generate rewired networks whose edge lists are missing
    #[arg(long)]
    generate_missing: bool,
    /// Swap proposals per restart when generating
    #[arg(long, default_value_t = 50_000)]
    iters: usize,
    /// Restarts when generating
    #[arg(long, default_value_t = 10)]
    restarts: usize,
    /// Skip the per-repetition series files
    #[arg(long)]
    skip_series: bool,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long)]
    summary: PathBuf,
}

fn parse_via<T: std::str::FromStr<Err = netlearn::Error>>(s: &str) -> Result<T, String> {
    s.parse().map_err(|e: netlearn::Error| e.to_string())
}

fn progress(line: &str) {
    eprintln!("{line}");
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: impl std::fmt::Display) {
    let _ = write!(std::io::stdout().lock(), "{text}");
}

fn describe(name: &str, g: &Graph) -> Result<String> {
    Ok(format!(
        "{name}: {} nodes, {} edges, diameter {}",
        g.n_nodes(),
        g.n_edges(),
        diameter(g)?
    ))
}

fn gen_net(args: GenNetArgs) -> Result<()> {
    let budget = RewireBudget {
        iterations: args.iters,
        restarts: args.restarts,
    };
    if args.all {
        let dir = args.out_dir.expect("required by clap");
        for (index, spec) in NetworkSpec::standard_ten(args.n, args.d).iter().enumerate() {
            let g = spec.build(budget, derive(args.seed, &[TAG_GRAPH, index as u64]))?;
            let path = network_file(&dir, spec);
            save_edge_list(&g, &spec.name(), &path)?;
            emit(format_args!(
                "{} -> {}\n",
                describe(&spec.name(), &g)?,
                path.display()
            ));
        }
        return Ok(());
    }
    let kind = match (args.metric, args.dir, args.kind) {
        (Some(metric), Some(direction), _) => NetworkKind::Rewired { metric, direction },
        (None, _, Some(BaseKind::Complete)) => NetworkKind::Complete,
        (None, _, Some(BaseKind::Lattice)) => NetworkKind::Lattice,
        (None, _, Some(BaseKind::RandomRegular)) => NetworkKind::RandomRegular,
        _ => {
            return Err(netlearn::Error::Parameter(
                "give --metric with --dir, --kind, or --all".into(),
            ))
        }
    };
    let degree = if kind == NetworkKind::Complete {
        args.n.saturating_sub(1)
    } else {
        args.d
    };
    let spec = NetworkSpec::new(kind, args.n, degree);
    let g = spec.build(budget, args.seed)?;
    let path = args.out.expect("required by clap");
    save_edge_list(&g, &spec.name(), &path)?;
    emit(format_args!(
        "{} -> {}\n",
        describe(&spec.name(), &g)?,
        path.display()
    ));
    Ok(())
}

fn run(args: RunArgs) -> Result<()> {
    let plan = parse_config(&args.config)?.with_overrides(args.reps, args.seed)?;
    let options = RunOptions {
        write_series: !args.skip_series,
        execution: if args.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        },
    };
    let outcome = run_plan(&plan, Some(&args.out), options, progress)?;
    emit(format_args!(
        "{} cells written to {}\n",
        outcome.cells.len(),
        args.out.display()
    ));
    Ok(())
}

fn replicate_cmd(args: ReplicateArgs) -> Result<()> {
    let opts = ReplicateOptions {
        out_dir: args.out,
        seed: args.seed,
        repetitions: args.reps,
        networks_dir: args.networks,
        generate_missing: args.generate_missing,
        rewire: RewireBudget {
            iterations: args.iters,
            restarts: args.restarts,
        },
        write_series: !args.skip_series,
    };
    let (report, _) = replicate(args.figure, &opts, progress)?;
    emit(report);
    Ok(())
}

fn analyze(args: AnalyzeArgs) -> Result<()> {
    let rows = read_summary_csv(&args.summary)?;
    emit(analyze_summary(&rows)?);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::GenNet(a) => gen_net(a),
        Command::Run(a) => run(a),
        Command::Replicate(a) => replicate_cmd(a),
        Command::Analyze(a) => analyze(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
