//! File formats: run-trace CSV and graph edge-list files.

use std::fmt::Write as _;
use std::path::Path;

use bcm_core::network::NetworkGraph;
use bcm_core::protocol::RunTrace;

use crate::RunError;

pub const TRACE_CSV_HEADER: &str =
    "round,discrepancy,moves_this_round,max_abs_edge_error,deviation_from_continuous";

/// Per-round trace CSV. The deviation column is empty when continuous
/// tracking was disabled.
pub fn trace_csv(trace: &RunTrace) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", TRACE_CSV_HEADER);
    for record in &trace.rounds {
        let deviation = match record.deviation {
            Some(d) => d.to_string(),
            None => String::new(),
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            record.round, record.discrepancy, record.moves, record.max_abs_error, deviation
        );
    }
    out
}

pub fn write_text(path: &Path, text: &str) -> Result<(), RunError> {
    std::fs::write(path, text)?;
    Ok(())
}

/// Writes a graph in the plain-text edge-list format (`n` header line, one
/// `u v` pair per line).
pub fn write_graph(path: &Path, graph: &NetworkGraph) -> Result<(), RunError> {
    write_text(path, &graph.to_edge_list())
}

pub fn read_graph(path: &Path) -> Result<NetworkGraph, RunError> {
    let text = std::fs::read_to_string(path)?;
    Ok(NetworkGraph::from_edge_list(&text)?)
}

/// Serializes a balls-into-bins instance as a plain-text weight list, one
/// weight per line, for cross-checks against external solvers.
pub fn weights_to_text(weights: &[f64]) -> String {
    let mut out = String::new();
    for w in weights {
        let _ = writeln!(out, "{w}");
    }
    out
}

pub fn weights_from_text(text: &str) -> Result<Vec<f64>, RunError> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|l| {
            l.parse::<f64>().map_err(|_| {
                RunError::Core(bcm_core::Error::InvalidParameter(
                    "weight list line is not a number",
                ))
            })
        })
        .collect()
}
