//! Run metrics: discrepancy ratios, movement counts, and the figure of
//! merit `S = p * disc_ratio / alpha` with its algorithm-relative form.

use alloc::vec::Vec;

use crate::binpack::Algorithm;
use crate::protocol::{Iterations, Mobility, RunTrace};
use crate::{Error, Result};

/// Cap applied to infinite or huge discrepancy ratios during arithmetic
/// aggregation (a run can reach exactly zero final discrepancy only through
/// exact weight ties).
pub const DEFAULT_RATIO_CAP: f64 = 1e9;

/// Identifying metadata of one run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunMeta {
    pub nodes: usize,
    pub loads: usize,
    pub algorithm: Algorithm,
    pub mobility: Mobility,
    pub iterations: Iterations,
    pub graph_seed: u64,
    pub load_seed: u64,
    pub mobility_seed: u64,
}

/// Metrics of a single DLB run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricsRecord {
    pub initial_disc: f64,
    pub final_disc: f64,
    /// `initial_disc / final_disc`; `+inf` sentinel when the final
    /// discrepancy is exactly zero.
    pub disc_ratio: f64,
    pub total_moves: u64,
    pub edge_balancings: u64,
    /// `total_moves / edge_balancings`.
    pub avg_moves_per_edge: f64,
    /// Figure of merit at weight `p`; `NaN` when no load ever moved.
    pub merit: f64,
    pub p: f64,
    pub rounds_run: usize,
    pub meta: RunMeta,
}

impl MetricsRecord {
    pub fn from_trace(trace: &RunTrace, meta: RunMeta, p: f64) -> Self {
        let initial_disc = trace.initial_discrepancy;
        let final_disc = trace.final_discrepancy();
        let disc_ratio = if final_disc == 0.0 {
            f64::INFINITY
        } else {
            initial_disc / final_disc
        };
        let avg_moves_per_edge = if trace.edge_balancings == 0 {
            0.0
        } else {
            trace.total_moves as f64 / trace.edge_balancings as f64
        };
        let merit = figure_of_merit(disc_ratio, trace.total_moves as f64, p).unwrap_or(f64::NAN);
        MetricsRecord {
            initial_disc,
            final_disc,
            disc_ratio,
            total_moves: trace.total_moves,
            edge_balancings: trace.edge_balancings,
            avg_moves_per_edge,
            merit,
            p,
            rounds_run: trace.rounds_run(),
            meta,
        }
    }
}

/// `S = p * disc_ratio / alpha`, where `alpha` is the total number of load
/// movements. Zero movements leave the merit undefined.
pub fn figure_of_merit(disc_ratio: f64, alpha: f64, p: f64) -> Result<f64> {
    if !(p > 0.0) {
        return Err(Error::InvalidParameter("merit weight p must be positive"));
    }
    if !(alpha > 0.0) {
        return Err(Error::UndefinedMerit);
    }
    Ok(p * disc_ratio / alpha)
}

/// `S_rel = S_sorted / S_greedy` for two runs of the same instance. The
/// weight `p` cancels exactly, so this is computed from the ratios and move
/// counts alone and is independent of the `p` stored in either record.
pub fn relative_merit(sorted: &MetricsRecord, greedy: &MetricsRecord) -> Result<f64> {
    if sorted.meta.algorithm != Algorithm::SortedGreedy
        || greedy.meta.algorithm != Algorithm::Greedy
    {
        return Err(Error::InvalidParameter(
            "records must come from SortedGreedy and Greedy",
        ));
    }
    let same_instance = sorted.meta.nodes == greedy.meta.nodes
        && sorted.meta.loads == greedy.meta.loads
        && sorted.meta.mobility == greedy.meta.mobility
        && sorted.meta.iterations == greedy.meta.iterations
        && sorted.meta.graph_seed == greedy.meta.graph_seed
        && sorted.meta.load_seed == greedy.meta.load_seed
        && sorted.meta.mobility_seed == greedy.meta.mobility_seed;
    if !same_instance {
        return Err(Error::InvalidParameter(
            "records come from different instances",
        ));
    }
    if sorted.total_moves == 0 || greedy.total_moves == 0 {
        return Err(Error::UndefinedMerit);
    }
    let sorted_merit = sorted.disc_ratio / sorted.total_moves as f64;
    let greedy_merit = greedy.disc_ratio / greedy.total_moves as f64;
    if !(greedy_merit > 0.0) || !greedy_merit.is_finite() {
        return Err(Error::UndefinedMerit);
    }
    Ok(sorted_merit / greedy_merit)
}

/// Per-field sample mean and standard deviation over homogeneous records.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricsSummary {
    pub reps: usize,
    pub mean_initial_disc: f64,
    pub std_initial_disc: f64,
    pub mean_final_disc: f64,
    pub std_final_disc: f64,
    pub mean_disc_ratio: f64,
    pub std_disc_ratio: f64,
    pub mean_total_moves: f64,
    pub std_total_moves: f64,
    pub mean_alpha_edge: f64,
    pub std_alpha_edge: f64,
    pub mean_merit: f64,
    pub std_merit: f64,
}

/// [`aggregate_with_cap`] at [`DEFAULT_RATIO_CAP`].
pub fn aggregate(records: &[MetricsRecord]) -> Result<MetricsSummary> {
    aggregate_with_cap(records, DEFAULT_RATIO_CAP)
}

/// Aggregates records that share `(nodes, loads, algorithm, mobility,
/// iterations)`; seeds may differ. Sample standard deviations use the `n-1`
/// denominator (zero for a single record). Discrepancy ratios and merits are
/// clamped to `ratio_cap` before averaging.
pub fn aggregate_with_cap(records: &[MetricsRecord], ratio_cap: f64) -> Result<MetricsSummary> {
    let first = records
        .first()
        .ok_or(Error::InvalidParameter("no records to aggregate"))?;
    for r in records {
        let homogeneous = r.meta.nodes == first.meta.nodes
            && r.meta.loads == first.meta.loads
            && r.meta.algorithm == first.meta.algorithm
            && r.meta.mobility == first.meta.mobility
            && r.meta.iterations == first.meta.iterations;
        if !homogeneous {
            return Err(Error::InvalidParameter("records have mixed metadata"));
        }
    }
    let capped = |x: f64| if x.is_nan() { x } else { x.min(ratio_cap) };
    let stats = |extract: &dyn Fn(&MetricsRecord) -> f64| {
        let values: Vec<f64> = records.iter().map(extract).collect();
        mean_std(&values)
    };
    let (mean_initial_disc, std_initial_disc) = stats(&|r| r.initial_disc);
    let (mean_final_disc, std_final_disc) = stats(&|r| r.final_disc);
    let (mean_disc_ratio, std_disc_ratio) = stats(&|r| capped(r.disc_ratio));
    let (mean_total_moves, std_total_moves) = stats(&|r| r.total_moves as f64);
    let (mean_alpha_edge, std_alpha_edge) = stats(&|r| r.avg_moves_per_edge);
    let (mean_merit, std_merit) = stats(&|r| capped(r.merit));
    Ok(MetricsSummary {
        reps: records.len(),
        mean_initial_disc,
        std_initial_disc,
        mean_final_disc,
        std_final_disc,
        mean_disc_ratio,
        std_disc_ratio,
        mean_total_moves,
        std_total_moves,
        mean_alpha_edge,
        std_alpha_edge,
        mean_merit,
        std_merit,
    })
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, crate::math::sqrt(var))
}
