//! Seeded experiment sweeps over the `(n, loads-per-node, algorithm,
//! mobility)` grid.
//!
//! Within one `(n, L, rep)` cell every algorithm and mobility model receives
//! the identical graph and initial load distribution, and both algorithms
//! see the identical mobility sets; only the seeds derived from the master
//! seed introduce randomness.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use bcm_core::metrics::{self, MetricsRecord, RunMeta};
use bcm_core::network::{
    color_edges, generate_connected_graph_with_extra, MatchingSchedule, NetworkGraph,
};
use bcm_core::protocol::{run_dlb, NetworkState, RunOptions, RunTrace};
use bcm_core::{Algorithm, Mobility};

use crate::config::ExperimentConfig;
use crate::io;
use crate::seeds::{self, stream};
use crate::RunError;

/// Seeds of one run, split from the master seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunSeeds {
    pub graph: u64,
    pub loads: u64,
    pub mobility: u64,
}

/// Child seeds for cell `(n, loads_per_node)`, repetition `rep`.
pub fn seeds_for(master: u64, n: usize, loads_per_node: usize, rep: usize) -> RunSeeds {
    let path = |tag: u64| [tag, n as u64, loads_per_node as u64, rep as u64];
    RunSeeds {
        graph: seeds::child_seed(master, &path(stream::GRAPH)),
        loads: seeds::child_seed(master, &path(stream::LOADS)),
        mobility: seeds::child_seed(master, &path(stream::MOBILITY)),
    }
}

/// A generated experiment instance: topology, schedule, and the initial
/// state (mobility already applied).
#[derive(Debug, Clone)]
pub struct Instance {
    pub graph: NetworkGraph,
    pub schedule: MatchingSchedule,
    pub initial: NetworkState,
}

/// Builds the instance for one run: random connected graph, greedy edge
/// coloring, `loads_per_node` uniform loads on every node, and (for partial
/// mobility) the pinned-load assignment.
pub fn build_instance(
    n: usize,
    loads_per_node: usize,
    weight_lo: f64,
    weight_hi: f64,
    extra_edges: usize,
    mobility: Mobility,
    run_seeds: RunSeeds,
) -> Result<Instance, RunError> {
    use rand::{Rng, SeedableRng};
    let graph = generate_connected_graph_with_extra(n, run_seeds.graph, extra_edges)?;
    let schedule = color_edges(&graph);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(run_seeds.loads);
    let mut loads = Vec::with_capacity(n * loads_per_node);
    for node in 0..n {
        for _ in 0..loads_per_node {
            loads.push((rng.gen_range(weight_lo..weight_hi), node));
        }
    }
    let mut initial = NetworkState::new(n, &loads)?;
    if mobility == Mobility::Partial {
        initial.assign_mobility(run_seeds.mobility);
    }
    Ok(Instance {
        graph,
        schedule,
        initial,
    })
}

/// Context identifying one run within a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunContext {
    pub n: usize,
    pub loads_per_node: usize,
    pub algorithm: Algorithm,
    pub mobility: Mobility,
    pub rep: usize,
    pub seeds: RunSeeds,
}

/// One executed run: its identifying context, full trace, and metrics.
#[derive(Debug, Clone)]
pub struct SweepRun {
    pub context: RunContext,
    pub trace: RunTrace,
    pub record: MetricsRecord,
}

/// All runs of a sweep plus the rendered CSVs.
#[derive(Debug, Clone)]
pub struct SweepData {
    pub runs: Vec<SweepRun>,
    pub runs_csv: String,
    pub agg_csv: String,
}

/// The rendered CSV outputs of [`run_sweep`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepOutput {
    pub runs_csv: String,
    pub agg_csv: String,
    pub runs_path: PathBuf,
    pub agg_path: PathBuf,
}

pub const RUNS_CSV_HEADER: &str = "n,L,ratio_L_n,algorithm,mobility,rep,graph_seed,load_seed,\
                                   mobility_seed,rounds_run,initial_disc,final_disc,disc_ratio,\
                                   total_moves,alpha_edge,s_merit,rng";

pub const AGG_CSV_HEADER: &str = "n,L,ratio_L_n,algorithm,mobility,mean_final_disc,\
                                  std_final_disc,mean_disc_ratio,mean_total_moves,\
                                  mean_alpha_edge,mean_S,reps,master_seed";

/// Executes the full sweep described by `config` and returns every run with
/// its trace. Runs are ordered deterministically: `n`, then loads-per-node,
/// then algorithm, then mobility (in configured list order), then rep.
pub fn run_sweep_collect(config: &ExperimentConfig) -> Result<SweepData, RunError> {
    let mut runs = Vec::new();
    let iterations = config.iterations.to_iterations();
    let options = RunOptions {
        track_continuous: config.track_continuous,
        // Sweep-scale runs only need the per-round aggregates.
        record_matching_errors: false,
        random_first_ball: None,
    };
    for &n in &config.n_list {
        for &loads_per_node in &config.loads_per_node {
            for &algorithm in &config.algorithms {
                for &mobility in &config.mobility {
                    for rep in 0..config.reps {
                        let run_seeds = seeds_for(config.master_seed, n, loads_per_node, rep);
                        let instance = build_instance(
                            n,
                            loads_per_node,
                            config.weight_lo,
                            config.weight_hi,
                            config.extra_edges,
                            mobility,
                            run_seeds,
                        )?;
                        let mut state = instance.initial.clone();
                        let trace = run_dlb(
                            &mut state,
                            &instance.schedule,
                            algorithm,
                            iterations,
                            &options,
                        )?;
                        let meta = RunMeta {
                            nodes: n,
                            loads: n * loads_per_node,
                            algorithm,
                            mobility,
                            iterations,
                            graph_seed: run_seeds.graph,
                            load_seed: run_seeds.loads,
                            mobility_seed: run_seeds.mobility,
                        };
                        let record = MetricsRecord::from_trace(&trace, meta, 1.0);
                        runs.push(SweepRun {
                            context: RunContext {
                                n,
                                loads_per_node,
                                algorithm,
                                mobility,
                                rep,
                                seeds: run_seeds,
                            },
                            trace,
                            record,
                        });
                    }
                }
            }
        }
    }
    let runs_csv = render_runs_csv(&runs);
    let agg_csv = render_agg_csv(config, &runs)?;
    Ok(SweepData {
        runs,
        runs_csv,
        agg_csv,
    })
}

/// Runs the sweep and writes the per-run and aggregate CSVs. The aggregate
/// file path is the run file path with `_agg` inserted before the extension.
pub fn run_sweep(config: &ExperimentConfig) -> Result<SweepOutput, RunError> {
    let data = run_sweep_collect(config)?;
    let runs_path = config.out.clone();
    let agg_path = agg_path_for(&config.out);
    io::write_text(&runs_path, &data.runs_csv)?;
    io::write_text(&agg_path, &data.agg_csv)?;
    if let Some(trace_dir) = &config.trace_dir {
        std::fs::create_dir_all(trace_dir)?;
        for run in &data.runs {
            let c = run.context;
            let name = format!(
                "trace_n{}_L{}_{}_{}_rep{}.csv",
                c.n,
                c.n * c.loads_per_node,
                c.algorithm.name(),
                c.mobility.name(),
                c.rep
            );
            io::write_text(&trace_dir.join(name), &io::trace_csv(&run.trace))?;
        }
    }
    if let Some(graph_dir) = &config.graph_dir {
        std::fs::create_dir_all(graph_dir)?;
        for &n in &config.n_list {
            for &loads_per_node in &config.loads_per_node {
                for rep in 0..config.reps {
                    let run_seeds = seeds_for(config.master_seed, n, loads_per_node, rep);
                    let graph = generate_connected_graph_with_extra(
                        n,
                        run_seeds.graph,
                        config.extra_edges,
                    )?;
                    let name = format!("graph_n{n}_L{}_rep{rep}.txt", n * loads_per_node);
                    io::write_text(&graph_dir.join(name), &graph.to_edge_list())?;
                }
            }
        }
    }
    Ok(SweepOutput {
        runs_csv: data.runs_csv,
        agg_csv: data.agg_csv,
        runs_path,
        agg_path,
    })
}

pub fn agg_path_for(out: &Path) -> PathBuf {
    let stem = out
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("results");
    let name = match out.extension().and_then(|e| e.to_str()) {
        Some(ext) => format!("{stem}_agg.{ext}"),
        None => format!("{stem}_agg"),
    };
    out.with_file_name(name)
}

fn render_runs_csv(runs: &[SweepRun]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", RUNS_CSV_HEADER);
    for run in runs {
        let c = run.context;
        let r = run.record;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            c.n,
            c.n * c.loads_per_node,
            c.loads_per_node,
            c.algorithm.name(),
            c.mobility.name(),
            c.rep,
            c.seeds.graph,
            c.seeds.loads,
            c.seeds.mobility,
            r.rounds_run,
            r.initial_disc,
            r.final_disc,
            r.disc_ratio,
            r.total_moves,
            r.avg_moves_per_edge,
            r.merit,
            seeds::RNG_DESCRIPTOR,
        );
    }
    out
}

fn render_agg_csv(config: &ExperimentConfig, runs: &[SweepRun]) -> Result<String, RunError> {
    let mut out = String::new();
    let _ = writeln!(out, "{}", AGG_CSV_HEADER);
    for &n in &config.n_list {
        for &loads_per_node in &config.loads_per_node {
            for &algorithm in &config.algorithms {
                for &mobility in &config.mobility {
                    let records: Vec<MetricsRecord> = runs
                        .iter()
                        .filter(|r| {
                            r.context.n == n
                                && r.context.loads_per_node == loads_per_node
                                && r.context.algorithm == algorithm
                                && r.context.mobility == mobility
                        })
                        .map(|r| r.record)
                        .collect();
                    let summary = metrics::aggregate(&records)?;
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{},{},{},{},{},{},{},{},{}",
                        n,
                        n * loads_per_node,
                        loads_per_node,
                        algorithm.name(),
                        mobility.name(),
                        summary.mean_final_disc,
                        summary.std_final_disc,
                        summary.mean_disc_ratio,
                        summary.mean_total_moves,
                        summary.mean_alpha_edge,
                        summary.mean_merit,
                        summary.reps,
                        config.master_seed,
                    );
                }
            }
        }
    }
    Ok(out)
}
