//! Benchmark harness for the balancing circuit model: experiment
//! configuration, seeded sweeps, balls-into-bins microbenchmarks, timing
//! measurements, bound tables, and CSV emission.
//!
//! Everything an experiment produces is a pure function of its configuration
//! and master seed: child seeds for graphs, load weights, and mobility sets
//! are split deterministically (see [`seeds`]), and result CSVs are
//! byte-identical across reruns.

pub mod binpack_bench;
pub mod config;
pub mod io;
pub mod seeds;
pub mod sweep;
pub mod tables;
pub mod timing;

pub use config::{ConfigError, ExperimentConfig, IterationPolicy};
pub use sweep::{run_sweep, SweepOutput};

/// Errors raised while executing an experiment (as opposed to configuring
/// it); mapped to exit code 3 by the CLI.
#[derive(Debug)]
pub enum RunError {
    Io(std::io::Error),
    Core(bcm_core::Error),
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Io(e) => write!(f, "i/o error: {e}"),
            RunError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for RunError {}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Io(e)
    }
}

impl From<bcm_core::Error> for RunError {
    fn from(e: bcm_core::Error) -> Self {
        RunError::Core(e)
    }
}
