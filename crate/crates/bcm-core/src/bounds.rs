//! Closed-form bound calculators for the balancing circuit model.
//!
//! All logarithms are natural. The deviation and discrepancy bounds are
//! stated for unit loads; for real-valued loads they scale by the largest
//! single load weight in the network.

use crate::math;
use crate::{Error, Result};

/// Inputs shared by the bound calculators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundInputs {
    /// Discrepancy of the initial load assignment.
    pub initial_discrepancy: f64,
    /// Node count.
    pub nodes: usize,
    /// Target discrepancy.
    pub epsilon: f64,
    /// Matchings per round.
    pub matchings_per_round: usize,
    /// Subdominant eigenvalue magnitude of the round matrix, in `[0, 1)`.
    pub lambda: f64,
    /// Tail parameter of the deviation bound, `>= 1`.
    pub delta: f64,
    /// Ball count for the minimum-weight probability.
    pub balls: usize,
}

impl BoundInputs {
    pub fn validate(&self) -> Result<()> {
        if !(self.initial_discrepancy > 0.0) {
            return Err(Error::InvalidParameter(
                "initial discrepancy must be positive",
            ));
        }
        if self.nodes < 2 {
            return Err(Error::InvalidParameter("node count must be at least 2"));
        }
        if !(self.epsilon > 0.0) {
            return Err(Error::InvalidParameter(
                "target discrepancy must be positive",
            ));
        }
        if self.matchings_per_round == 0 {
            return Err(Error::InvalidParameter(
                "matchings per round must be at least 1",
            ));
        }
        if !(self.lambda >= 0.0) || self.lambda >= 1.0 {
            return Err(Error::NonErgodic {
                lambda: self.lambda,
            });
        }
        if !(self.delta >= 1.0) {
            return Err(Error::InvalidParameter("tail parameter must be at least 1"));
        }
        if self.balls == 0 {
            return Err(Error::InvalidParameter("ball count must be at least 1"));
        }
        Ok(())
    }
}

/// Rounds for the continuous process to reach discrepancy `epsilon` from an
/// initial discrepancy `initial` on `nodes` nodes:
/// `(4 d / (1 - lambda)) * ln(initial * nodes / epsilon)`.
pub fn continuous_round_bound(
    initial: f64,
    nodes: usize,
    epsilon: f64,
    matchings_per_round: usize,
    lambda: f64,
) -> Result<f64> {
    if !(lambda >= 0.0) || lambda >= 1.0 {
        return Err(Error::NonErgodic { lambda });
    }
    if !(initial > 0.0) || !(epsilon > 0.0) {
        return Err(Error::InvalidParameter("discrepancies must be positive"));
    }
    if nodes < 2 {
        return Err(Error::InvalidParameter("node count must be at least 2"));
    }
    if matchings_per_round == 0 {
        return Err(Error::InvalidParameter(
            "matchings per round must be at least 1",
        ));
    }
    let d = matchings_per_round as f64;
    Ok(4.0 * d / (1.0 - lambda) * math::ln(initial * nodes as f64 / epsilon))
}

/// Discrepancy reachable with indivisible loads: `sqrt(12 ln n) + 1`.
pub fn discrete_discrepancy_bound(nodes: usize) -> Result<f64> {
    if nodes == 0 {
        return Err(Error::InvalidParameter("node count must be at least 1"));
    }
    Ok(math::sqrt(12.0 * math::ln(nodes as f64)) + 1.0)
}

/// Deviation tail between the discrete and continuous processes: the
/// per-node maximum deviation exceeds `sqrt(4 delta ln n)` (in units of the
/// largest load weight) with probability at most `2 n^(1 - delta)`.
pub fn deviation_tail_bound(nodes: usize, delta: f64) -> Result<(f64, f64)> {
    if nodes < 2 {
        return Err(Error::InvalidParameter("node count must be at least 2"));
    }
    if !(delta >= 1.0) {
        return Err(Error::InvalidParameter("tail parameter must be at least 1"));
    }
    let n = nodes as f64;
    let threshold = math::sqrt(4.0 * delta * math::ln(n));
    let probability = 2.0 * math::powf(n, 1.0 - delta);
    Ok((threshold, probability))
}

/// Probability that extending a uniform `[0, 1]` sample of size `m` by one
/// more draw leaves the minimum unchanged: `m / (m + 1)`.
pub fn min_weight_prob(samples: usize) -> Result<f64> {
    if samples == 0 {
        return Err(Error::InvalidParameter("sample size must be at least 1"));
    }
    let m = samples as f64;
    Ok(m / (m + 1.0))
}

/// Largest possible single-matching balancing error of `SortedGreedy` under
/// full mobility: half the heaviest load weight.
pub fn dmax_bound(heaviest_load: f64) -> Result<f64> {
    if !(heaviest_load >= 0.0) || !heaviest_load.is_finite() {
        return Err(Error::InvalidParameter(
            "heaviest load weight must be non-negative",
        ));
    }
    Ok(heaviest_load / 2.0)
}
