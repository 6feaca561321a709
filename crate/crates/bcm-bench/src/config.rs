//! Experiment configuration: plain-text key-value files plus command-line
//! overrides.

use std::fmt;
use std::path::PathBuf;

use bcm_core::protocol::Iterations;
use bcm_core::{Algorithm, Mobility};

/// Converge threshold of the automatic iteration policy.
pub const AUTO_MIN_IMPROVEMENT: f64 = 1e-9;
/// Round cap of the automatic iteration policy.
pub const AUTO_MAX_ROUNDS: usize = 100;

/// How many DLB rounds a sweep runs per experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IterationPolicy {
    /// Run until the per-round discrepancy improvement falls below
    /// [`AUTO_MIN_IMPROVEMENT`] or [`AUTO_MAX_ROUNDS`] is reached.
    Auto,
    Fixed(usize),
}

impl IterationPolicy {
    pub fn to_iterations(self) -> Iterations {
        match self {
            IterationPolicy::Auto => Iterations::Converge {
                min_improvement: AUTO_MIN_IMPROVEMENT,
                max_rounds: AUTO_MAX_ROUNDS,
            },
            IterationPolicy::Fixed(k) => Iterations::Fixed(k),
        }
    }
}

impl fmt::Display for IterationPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IterationPolicy::Auto => write!(f, "auto"),
            IterationPolicy::Fixed(k) => write!(f, "{k}"),
        }
    }
}

/// Full description of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub n_list: Vec<usize>,
    pub loads_per_node: Vec<usize>,
    pub weight_lo: f64,
    pub weight_hi: f64,
    pub algorithms: Vec<Algorithm>,
    pub mobility: Vec<Mobility>,
    pub iterations: IterationPolicy,
    pub reps: usize,
    pub master_seed: u64,
    pub track_continuous: bool,
    /// Extra random edges beyond first connectivity.
    pub extra_edges: usize,
    /// Per-run results CSV path; the aggregate CSV lands next to it with an
    /// `_agg` suffix.
    pub out: PathBuf,
    /// When set, per-run round traces are written here as CSV.
    pub trace_dir: Option<PathBuf>,
    /// When set, generated graphs are written here as edge-list files.
    pub graph_dir: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            n_list: vec![16, 32, 64, 128],
            loads_per_node: vec![10, 50, 100],
            weight_lo: 0.0,
            weight_hi: 100.0,
            algorithms: vec![Algorithm::SortedGreedy, Algorithm::Greedy],
            mobility: vec![Mobility::Full, Mobility::Partial],
            iterations: IterationPolicy::Auto,
            reps: 50,
            master_seed: 1,
            track_continuous: false,
            extra_edges: 0,
            out: PathBuf::from("results.csv"),
            trace_dir: None,
            graph_dir: None,
        }
    }
}

/// Configuration errors; mapped to exit code 2 by the CLI.
#[derive(Debug)]
pub enum ConfigError {
    Io(std::io::Error),
    Parse { line: usize, message: String },
    Invalid(String),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Io(e) => write!(f, "cannot read config file: {e}"),
            ConfigError::Parse { line, message } => {
                write!(f, "config line {line}: {message}")
            }
            ConfigError::Invalid(message) => write!(f, "invalid config: {message}"),
        }
    }
}

impl std::error::Error for ConfigError {}

impl ExperimentConfig {
    /// Reads `key = value` lines (`#` starts a comment) on top of the
    /// defaults.
    pub fn from_file(path: &std::path::Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(ConfigError::Io)?;
        let mut config = ExperimentConfig::default();
        config.apply_text(&text)?;
        Ok(config)
    }

    pub fn apply_text(&mut self, text: &str) -> Result<(), ConfigError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Parse {
                line: i + 1,
                message: format!("expected `key = value`, got `{line}`"),
            })?;
            self.apply_kv(key.trim(), value.trim())
                .map_err(|message| ConfigError::Parse {
                    line: i + 1,
                    message,
                })?;
        }
        Ok(())
    }

    /// Applies a single `key = value` setting.
    pub fn apply_kv(&mut self, key: &str, value: &str) -> Result<(), String> {
        match key {
            "n" => self.n_list = parse_list(value)?,
            "loads_per_node" => self.loads_per_node = parse_list(value)?,
            "weight_lo" => self.weight_lo = parse_scalar(value)?,
            "weight_hi" => self.weight_hi = parse_scalar(value)?,
            "alg" => self.algorithms = parse_algorithms(value)?,
            "mobility" => self.mobility = parse_mobility(value)?,
            "iters" => self.iterations = parse_iterations(value)?,
            "reps" => self.reps = parse_scalar(value)?,
            "seed" => self.master_seed = parse_scalar(value)?,
            "track_continuous" => self.track_continuous = parse_bool(value)?,
            "extra_edges" => self.extra_edges = parse_scalar(value)?,
            "out" => self.out = PathBuf::from(value),
            "trace_dir" => self.trace_dir = Some(PathBuf::from(value)),
            "graph_dir" => self.graph_dir = Some(PathBuf::from(value)),
            other => return Err(format!("unknown key `{other}`")),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let fail = |m: &str| Err(ConfigError::Invalid(m.to_string()));
        if self.n_list.is_empty() {
            return fail("node count list is empty");
        }
        if self.n_list.iter().any(|&n| n < 2) {
            return fail("node counts must be at least 2");
        }
        if self.loads_per_node.is_empty() {
            return fail("loads-per-node list is empty");
        }
        if self.loads_per_node.iter().any(|&l| l == 0) {
            return fail("loads per node must be at least 1");
        }
        if self.algorithms.is_empty() {
            return fail("algorithm list is empty");
        }
        if self.mobility.is_empty() {
            return fail("mobility list is empty");
        }
        if !(self.weight_lo >= 0.0) || !(self.weight_hi > self.weight_lo) {
            return fail("weight distribution requires 0 <= lo < hi");
        }
        if self.reps == 0 {
            return fail("repetitions must be at least 1");
        }
        if let IterationPolicy::Fixed(0) = self.iterations {
            return fail("iteration count must be at least 1");
        }
        Ok(())
    }
}

fn parse_list<T: std::str::FromStr>(value: &str) -> Result<Vec<T>, String> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| format!("cannot parse `{s}`")))
        .collect()
}

fn parse_scalar<T: std::str::FromStr>(value: &str) -> Result<T, String> {
    value
        .trim()
        .parse()
        .map_err(|_| format!("cannot parse `{value}`"))
}

fn parse_bool(value: &str) -> Result<bool, String> {
    match value.trim() {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        other => Err(format!("cannot parse `{other}` as a boolean")),
    }
}

pub fn parse_algorithms(value: &str) -> Result<Vec<Algorithm>, String> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| match s {
            "greedy" => Ok(Algorithm::Greedy),
            "sorted_greedy" | "sorted-greedy" => Ok(Algorithm::SortedGreedy),
            other => Err(format!(
                "unknown algorithm `{other}` (greedy, sorted_greedy)"
            )),
        })
        .collect()
}

pub fn parse_mobility(value: &str) -> Result<Vec<Mobility>, String> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| match s {
            "full" => Ok(Mobility::Full),
            "partial" => Ok(Mobility::Partial),
            other => Err(format!("unknown mobility `{other}` (full, partial)")),
        })
        .collect()
}

pub fn parse_iterations(value: &str) -> Result<IterationPolicy, String> {
    if value.trim() == "auto" {
        return Ok(IterationPolicy::Auto);
    }
    let k: usize = value
        .trim()
        .parse()
        .map_err(|_| format!("cannot parse `{value}` as iterations"))?;
    Ok(IterationPolicy::Fixed(k))
}
