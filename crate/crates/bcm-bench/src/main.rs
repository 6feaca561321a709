//! `bcm-bench`: benchmark harness CLI for the balancing circuit model.
//!
//! Exit codes: 0 on success, 2 on configuration errors, 3 on runtime errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use bcm_bench::binpack_bench::{render_binpack_csv, run_binpack_bench};
use bcm_bench::config::{parse_algorithms, parse_iterations, parse_mobility};
use bcm_bench::tables::bounds_table;
use bcm_bench::timing::run_timing;
use bcm_bench::{io, ConfigError, ExperimentConfig, RunError};
use bcm_core::bounds::BoundInputs;

#[derive(Parser)]
#[command(
    name = "bcm-bench",
    about = "Benchmarks for dynamic balancing of indivisible real-valued loads",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a seeded experiment sweep over the (n, loads-per-node, algorithm,
    /// mobility) grid and write per-run and aggregate CSVs.
    Sweep(SweepArgs),
    /// Balls-into-bins microbenchmark: both algorithms on identical uniform
    /// [0,1] samples.
    Binpack(BinpackArgs),
    /// Wall-clock timing of the two placement algorithms on the two-bin
    /// problem.
    Timing(TimingArgs),
    /// Print the closed-form bound table for one instance.
    Bounds(BoundsArgs),
}

#[derive(Args)]
struct SweepArgs {
    /// Key-value config file; command-line flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Node counts, comma separated.
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    /// Loads per node, comma separated.
    #[arg(long, value_delimiter = ',')]
    loads_per_node: Option<Vec<usize>>,
    /// Algorithms: greedy, sorted_greedy.
    #[arg(long)]
    alg: Option<String>,
    /// Mobility models: full, partial.
    #[arg(long)]
    mobility: Option<String>,
    /// DLB iterations per run: a number or `auto`.
    #[arg(long)]
    iters: Option<String>,
    /// Repetitions per cell.
    #[arg(long)]
    reps: Option<usize>,
    /// Master seed; all child seeds derive from it.
    #[arg(long)]
    seed: Option<u64>,
    /// Per-run results CSV path (aggregates land next to it with an `_agg`
    /// suffix).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Track the continuous reference process and record deviations.
    #[arg(long)]
    track_continuous: bool,
    /// Lower bound of the uniform weight distribution.
    #[arg(long)]
    weight_lo: Option<f64>,
    /// Upper bound of the uniform weight distribution.
    #[arg(long)]
    weight_hi: Option<f64>,
    /// Extra random edges beyond first connectivity.
    #[arg(long)]
    extra_edges: Option<usize>,
    /// Directory for per-run round-trace CSVs.
    #[arg(long)]
    trace_dir: Option<PathBuf>,
    /// Directory for generated graphs in edge-list format.
    #[arg(long)]
    graph_dir: Option<PathBuf>,
}

#[derive(Args)]
struct BinpackArgs {
    /// Ball counts, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "32,64,128,256,512,1024")]
    m: Vec<usize>,
    /// Bin counts, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "2,8")]
    bins: Vec<usize>,
    #[arg(long, default_value_t = 1000)]
    reps: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Results CSV path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TimingArgs {
    /// Ball count of the two-bin problem.
    #[arg(long, default_value_t = 8192)]
    m: usize,
    #[arg(long, default_value_t = 100)]
    reps: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args)]
struct BoundsArgs {
    /// Initial discrepancy K.
    #[arg(long = "initial-disc")]
    initial_disc: f64,
    /// Node count.
    #[arg(long)]
    n: usize,
    /// Target discrepancy.
    #[arg(long)]
    eps: f64,
    /// Matchings per round.
    #[arg(long)]
    d: usize,
    /// Subdominant eigenvalue magnitude of the round matrix.
    #[arg(long)]
    lambda: f64,
    /// Tail parameter of the deviation bound.
    #[arg(long, default_value_t = 3.0)]
    delta: f64,
    /// Ball count for the minimum-weight probability.
    #[arg(long, default_value_t = 10)]
    m: usize,
    /// Heaviest load weight.
    #[arg(long, default_value_t = 1.0)]
    l1: f64,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Config(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(CliError::Run(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}

enum CliError {
    Config(ConfigError),
    Run(RunError),
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

impl From<RunError> for CliError {
    fn from(e: RunError) -> Self {
        CliError::Run(e)
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Sweep(args) => {
            let config = sweep_config(args)?;
            let output = bcm_bench::run_sweep(&config).map_err(CliError::Run)?;
            println!(
                "wrote {} run rows to {} and aggregates to {}",
                output.runs_csv.lines().count() - 1,
                output.runs_path.display(),
                output.agg_path.display()
            );
            Ok(())
        }
        Command::Binpack(args) => {
            let cells =
                run_binpack_bench(&args.m, &args.bins, args.reps, args.seed).map_err(runtime)?;
            let csv = render_binpack_csv(&cells, args.seed);
            match args.out {
                Some(path) => {
                    io::write_text(&path, &csv).map_err(CliError::Run)?;
                    println!("wrote {} cells to {}", cells.len(), path.display());
                }
                None => print!("{csv}"),
            }
            Ok(())
        }
        Command::Timing(args) => {
            let report = run_timing(args.m, args.reps, args.seed).map_err(runtime)?;
            print!("{report}");
            Ok(())
        }
        Command::Bounds(args) => {
            let inputs = BoundInputs {
                initial_discrepancy: args.initial_disc,
                nodes: args.n,
                epsilon: args.eps,
                matchings_per_round: args.d,
                lambda: args.lambda,
                delta: args.delta,
                balls: args.m,
            };
            // Bad bound inputs are a configuration problem, not a runtime
            // failure.
            let table = bounds_table(&inputs, args.l1)
                .map_err(|e| CliError::Config(ConfigError::Invalid(e.to_string())))?;
            print!("{table}");
            Ok(())
        }
    }
}

fn runtime(e: RunError) -> CliError {
    match e {
        RunError::Core(bcm_core::Error::InvalidParameter(msg)) => {
            CliError::Config(ConfigError::Invalid(msg.to_string()))
        }
        other => CliError::Run(other),
    }
}

fn sweep_config(args: SweepArgs) -> Result<ExperimentConfig, CliError> {
    let mut config = match &args.config {
        Some(path) => ExperimentConfig::from_file(path)?,
        None => ExperimentConfig::default(),
    };
    let invalid = |m: String| CliError::Config(ConfigError::Invalid(m));
    if let Some(n) = args.n {
        config.n_list = n;
    }
    if let Some(loads) = args.loads_per_node {
        config.loads_per_node = loads;
    }
    if let Some(alg) = args.alg {
        config.algorithms = parse_algorithms(&alg).map_err(invalid)?;
    }
    if let Some(mobility) = args.mobility {
        config.mobility = parse_mobility(&mobility).map_err(invalid)?;
    }
    if let Some(iters) = args.iters {
        config.iterations = parse_iterations(&iters).map_err(invalid)?;
    }
    if let Some(reps) = args.reps {
        config.reps = reps;
    }
    if let Some(seed) = args.seed {
        config.master_seed = seed;
    }
    if let Some(out) = args.out {
        config.out = out;
    }
    if args.track_continuous {
        config.track_continuous = true;
    }
    if let Some(lo) = args.weight_lo {
        config.weight_lo = lo;
    }
    if let Some(hi) = args.weight_hi {
        config.weight_hi = hi;
    }
    if let Some(extra) = args.extra_edges {
        config.extra_edges = extra;
    }
    if args.trace_dir.is_some() {
        config.trace_dir = args.trace_dir;
    }
    if args.graph_dir.is_some() {
        config.graph_dir = args.graph_dir;
    }
    config.validate()?;
    Ok(config)
}
