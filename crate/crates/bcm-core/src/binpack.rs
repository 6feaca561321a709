//! Offline weighted balls-into-bins placement.
//!
//! `Greedy` places each ball into the currently lightest bin; `SortedGreedy`
//! first sorts the balls by descending weight. Both record a discrepancy
//! trace (max minus min bin total after every placement) used to verify the
//! per-step bound `|G_{i+1} - G_i| <= W_{i+1}` and the lower bound on the
//! final discrepancy. An exhaustive optimal-partition oracle is provided for
//! cross-checking small instances.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::{Error, Result};

/// Placement algorithm selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Greedy,
    SortedGreedy,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Greedy => "greedy",
            Algorithm::SortedGreedy => "sorted_greedy",
        }
    }
}

/// An indivisible work packet with a constant, non-negative real weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ball {
    pub id: usize,
    pub weight: f64,
}

/// A bin holding an immobile base weight plus placed balls.
#[derive(Debug, Clone, PartialEq)]
pub struct BinState {
    base: f64,
    contents: Vec<usize>,
    total: f64,
}

impl BinState {
    pub fn new() -> Self {
        Self::with_base(0.0)
    }

    pub fn with_base(base: f64) -> Self {
        BinState {
            base,
            contents: Vec::new(),
            total: base,
        }
    }

    pub fn base(&self) -> f64 {
        self.base
    }

    /// Base weight plus the weights of all placed balls.
    pub fn total(&self) -> f64 {
        self.total
    }

    /// Ids of placed balls, in placement order.
    pub fn contents(&self) -> &[usize] {
        &self.contents
    }

    fn push(&mut self, ball: &Ball) {
        self.contents.push(ball.id);
        self.total += ball.weight;
    }
}

impl Default for BinState {
    fn default() -> Self {
        Self::new()
    }
}

/// Per-step discrepancies `G_1..G_m` and placed weights `W_1..W_m`, plus the
/// discrepancy of the initial bin state (`G_0`, nonzero when bases differ).
#[derive(Debug, Clone, PartialEq)]
pub struct DiscrepancyTrace {
    pub initial: f64,
    pub discrepancies: Vec<f64>,
    pub weights: Vec<f64>,
}

impl DiscrepancyTrace {
    pub fn len(&self) -> usize {
        self.discrepancies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.discrepancies.is_empty()
    }

    pub fn final_discrepancy(&self) -> f64 {
        self.discrepancies.last().copied().unwrap_or(self.initial)
    }
}

/// A step at which the discrepancy jumped by more than the placed weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaGViolation {
    /// 1-based index of the placed ball.
    pub step: usize,
    /// Observed `|G_i - G_{i-1}|`.
    pub observed: f64,
    /// The bound `W_i`.
    pub bound: f64,
}

/// Places balls in the given order: the first ball goes to bin 0 when every
/// bin total starts at zero, every other ball goes to the bin with the
/// smallest current total (ties broken by lowest index).
///
/// When any bin starts with nonzero weight the first-ball special case is
/// suppressed and the lightest-bin rule applies from the start.
pub fn greedy_place(
    balls: &[Ball],
    bins: &[BinState],
) -> Result<(Vec<BinState>, DiscrepancyTrace)> {
    place_in_order(balls, bins, 0)
}

/// [`greedy_place`] with the first ball (zero-base case only) sent to a
/// uniformly random bin instead of bin 0.
pub fn greedy_place_with_rng<R: Rng + ?Sized>(
    balls: &[Ball],
    bins: &[BinState],
    rng: &mut R,
) -> Result<(Vec<BinState>, DiscrepancyTrace)> {
    if bins.is_empty() {
        return Err(Error::InvalidParameter("placement needs at least one bin"));
    }
    let first = rng.gen_range(0..bins.len());
    place_in_order(balls, bins, first)
}

/// Sorts balls by weight descending (stable, so equal weights keep input
/// order) and delegates to [`greedy_place`].
pub fn sorted_greedy_place(
    balls: &[Ball],
    bins: &[BinState],
) -> Result<(Vec<BinState>, DiscrepancyTrace)> {
    place_in_order(&sort_descending(balls), bins, 0)
}

/// [`sorted_greedy_place`] with a uniformly random first bin.
pub fn sorted_greedy_place_with_rng<R: Rng + ?Sized>(
    balls: &[Ball],
    bins: &[BinState],
    rng: &mut R,
) -> Result<(Vec<BinState>, DiscrepancyTrace)> {
    if bins.is_empty() {
        return Err(Error::InvalidParameter("placement needs at least one bin"));
    }
    let first = rng.gen_range(0..bins.len());
    place_in_order(&sort_descending(balls), bins, first)
}

/// Dispatches to [`greedy_place`] or [`sorted_greedy_place`].
pub fn place(
    algorithm: Algorithm,
    balls: &[Ball],
    bins: &[BinState],
) -> Result<(Vec<BinState>, DiscrepancyTrace)> {
    match algorithm {
        Algorithm::Greedy => greedy_place(balls, bins),
        Algorithm::SortedGreedy => sorted_greedy_place(balls, bins),
    }
}

/// Dispatches to the `_with_rng` variants.
pub fn place_with_rng<R: Rng + ?Sized>(
    algorithm: Algorithm,
    balls: &[Ball],
    bins: &[BinState],
    rng: &mut R,
) -> Result<(Vec<BinState>, DiscrepancyTrace)> {
    match algorithm {
        Algorithm::Greedy => greedy_place_with_rng(balls, bins, rng),
        Algorithm::SortedGreedy => sorted_greedy_place_with_rng(balls, bins, rng),
    }
}

fn sort_descending(balls: &[Ball]) -> Vec<Ball> {
    let mut sorted = balls.to_vec();
    sorted.sort_by(|a, b| b.weight.total_cmp(&a.weight));
    sorted
}

fn place_in_order(
    order: &[Ball],
    bins: &[BinState],
    first_bin: usize,
) -> Result<(Vec<BinState>, DiscrepancyTrace)> {
    if bins.is_empty() {
        return Err(Error::InvalidParameter("placement needs at least one bin"));
    }
    for ball in order {
        if !ball.weight.is_finite() || ball.weight < 0.0 {
            return Err(Error::InvalidParameter(
                "ball weights must be finite and non-negative",
            ));
        }
    }
    let mut bins = bins.to_vec();
    let zero_start = bins.iter().all(|b| b.total == 0.0);
    let initial = spread(&bins);
    let mut trace = DiscrepancyTrace {
        initial,
        discrepancies: Vec::with_capacity(order.len()),
        weights: Vec::with_capacity(order.len()),
    };
    for (i, ball) in order.iter().enumerate() {
        let target = if i == 0 && zero_start {
            first_bin
        } else {
            lightest(&bins)
        };
        bins[target].push(ball);
        trace.discrepancies.push(spread(&bins));
        trace.weights.push(ball.weight);
    }
    Ok((bins, trace))
}

fn lightest(bins: &[BinState]) -> usize {
    let mut best = 0;
    for (i, bin) in bins.iter().enumerate().skip(1) {
        if bin.total < bins[best].total {
            best = i;
        }
    }
    best
}

fn spread(bins: &[BinState]) -> f64 {
    let mut max = f64::NEG_INFINITY;
    let mut min = f64::INFINITY;
    for bin in bins {
        max = max.max(bin.total);
        min = min.min(bin.total);
    }
    max - min
}

/// Discrepancy of a bin configuration: max total minus min total.
pub fn discrepancy(bins: &[BinState]) -> Result<f64> {
    if bins.is_empty() {
        return Err(Error::InvalidParameter(
            "discrepancy needs at least one bin",
        ));
    }
    Ok(spread(bins))
}

const ENUMERATION_BUDGET: u128 = 1 << 24;

/// Minimum achievable discrepancy over all assignments of `weights` to `k`
/// empty bins, by exhaustive enumeration.
pub fn brute_force_optimal(weights: &[f64], k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidParameter(
            "optimal partition needs at least one bin",
        ));
    }
    brute_force_optimal_with_bases(weights, &vec![0.0; k])
}

/// [`brute_force_optimal`] over bins carrying fixed base weights.
pub fn brute_force_optimal_with_bases(weights: &[f64], bases: &[f64]) -> Result<f64> {
    let k = bases.len();
    if k == 0 {
        return Err(Error::InvalidParameter(
            "optimal partition needs at least one bin",
        ));
    }
    for w in weights {
        if !w.is_finite() || *w < 0.0 {
            return Err(Error::InvalidParameter(
                "ball weights must be finite and non-negative",
            ));
        }
    }
    let assignments = (k as u128)
        .checked_pow(weights.len() as u32)
        .ok_or(Error::SizeLimit("too many assignments to enumerate"))?;
    if assignments > ENUMERATION_BUDGET {
        return Err(Error::SizeLimit("too many assignments to enumerate"));
    }
    let mut totals = bases.to_vec();
    let mut best = f64::INFINITY;
    // All bases equal => bins are interchangeable, so pin the first ball.
    let symmetric = bases.iter().all(|&b| b == bases[0]);
    if symmetric && !weights.is_empty() {
        totals[0] += weights[0];
        enumerate(&weights[1..], &mut totals, &mut best);
    } else {
        enumerate(weights, &mut totals, &mut best);
    }
    Ok(best)
}

fn enumerate(rest: &[f64], totals: &mut [f64], best: &mut f64) {
    match rest.split_first() {
        None => {
            let mut max = f64::NEG_INFINITY;
            let mut min = f64::INFINITY;
            for &t in totals.iter() {
                max = max.max(t);
                min = min.min(t);
            }
            *best = best.min(max - min);
        }
        Some((&w, tail)) => {
            for i in 0..totals.len() {
                totals[i] += w;
                enumerate(tail, totals, best);
                totals[i] -= w;
            }
        }
    }
}

/// Relative tolerance for the per-step discrepancy-jump check.
pub const DELTA_G_TOL: f64 = 1e-9;

/// Checks `|G_i - G_{i-1}| <= W_i` for every placement step of a trace
/// (including the step from the initial bin state to `G_1`). Returns the
/// violations; a trace produced by a lightest-bin placement has none.
pub fn verify_delta_g(trace: &DiscrepancyTrace) -> Vec<DeltaGViolation> {
    let mut violations = Vec::new();
    let mut prev = trace.initial;
    for (i, (&g, &w)) in trace.discrepancies.iter().zip(&trace.weights).enumerate() {
        let observed = (g - prev).abs();
        let tol = DELTA_G_TOL * (1.0 + prev.abs() + w.abs());
        if observed > w + tol {
            violations.push(DeltaGViolation {
                step: i + 1,
                observed,
                bound: w,
            });
        }
        prev = g;
    }
    violations
}

/// Lower bound on the final discrepancy of any lightest-bin placement:
/// `max(0, W_1 - sum_{i>=2} W_i)` for weights sorted in descending order.
pub fn gm_lower_bound(sorted_weights: &[f64]) -> f64 {
    debug_assert!(
        sorted_weights.windows(2).all(|w| w[0] >= w[1]),
        "weights must be sorted in descending order"
    );
    match sorted_weights.split_first() {
        None => 0.0,
        Some((&first, rest)) => {
            let tail: f64 = rest.iter().sum();
            (first - tail).max(0.0)
        }
    }
}
